#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gf2/op_count.hpp"

// Dense matrices over GF(2), packed 64 columns per word, row major.
// Conventions used throughout the library:
//   * within a word, column c lives at bit (c & 63), i.e. LSB first;
//   * bits of the last word of a row beyond ncols-1 (the padding) are zero
//     after every public operation;
//   * views describe a rectangular window of another matrix; their column
//     origin may sit anywhere inside a word, and all primitives mask both
//     edges so bits outside the window are never disturbed.

namespace gf2 {

using word = std::uint64_t;
inline constexpr std::size_t word_bits = 64;

namespace detail {

inline word low_mask(std::size_t k) noexcept {
    return k >= word_bits ? ~word(0) : ((word(1) << k) - word(1));
}

// Up to 64 bits starting at bit position lo, LSB first. The caller guarantees
// the row owns bits [lo, lo+count).
inline word read_window(const word* row, std::size_t lo, std::size_t count) noexcept {
    const std::size_t w = lo >> 6, b = lo & 63;
    word v = row[w] >> b;
    if (b != 0 && b + count > word_bits) v |= row[w + 1] << (word_bits - b);
    return v & low_mask(count);
}

// dst bits [lo, hi) ^= src bits [lo, hi); same bit positions in both rows.
inline void xor_range(word* dst, const word* src, std::size_t lo, std::size_t hi) noexcept {
    if (lo >= hi) return;
    ops::count_row_xor();
    const std::size_t w0 = lo >> 6, w1 = (hi - 1) >> 6;
    const word first = ~low_mask(lo & 63);
    const word last = low_mask(((hi - 1) & 63) + 1);
    if (w0 == w1) {
        dst[w0] ^= src[w0] & first & last;
        return;
    }
    dst[w0] ^= src[w0] & first;
    for (std::size_t w = w0 + 1; w < w1; ++w) dst[w] ^= src[w];
    dst[w1] ^= src[w1] & last;
}

// dst bits [dlo, dlo+len) ^= src bits [slo, slo+len); offsets may differ.
inline void xor_range_shifted(word* dst, std::size_t dlo, const word* src, std::size_t slo,
                              std::size_t len) noexcept {
    if (len == 0) return;
    ops::count_row_xor();
    if (((dlo ^ slo) & 63) == 0) {
        const std::ptrdiff_t dw = std::ptrdiff_t(dlo >> 6) - std::ptrdiff_t(slo >> 6);
        const std::size_t lo = slo, hi = slo + len;
        const std::size_t w0 = lo >> 6, w1 = (hi - 1) >> 6;
        const word first = ~low_mask(lo & 63);
        const word last = low_mask(((hi - 1) & 63) + 1);
        if (w0 == w1) {
            dst[w0 + dw] ^= src[w0] & first & last;
            return;
        }
        dst[w0 + dw] ^= src[w0] & first;
        for (std::size_t w = w0 + 1; w < w1; ++w) dst[w + dw] ^= src[w];
        dst[w1 + dw] ^= src[w1] & last;
        return;
    }
    std::size_t done = 0;
    while (done < len) {
        const std::size_t dpos = dlo + done;
        const std::size_t db = dpos & 63;
        const std::size_t n = std::min<std::size_t>(word_bits - db, len - done);
        const word bits = read_window(src, slo + done, n);
        dst[dpos >> 6] ^= bits << db;
        done += n;
    }
}

// dst bits [dlo, dlo+len) = src bits [slo, slo+len).
inline void copy_range(word* dst, std::size_t dlo, const word* src, std::size_t slo,
                       std::size_t len) noexcept {
    std::size_t done = 0;
    while (done < len) {
        const std::size_t dpos = dlo + done;
        const std::size_t db = dpos & 63;
        const std::size_t n = std::min<std::size_t>(word_bits - db, len - done);
        const word bits = read_window(src, slo + done, n);
        const word mask = low_mask(n) << db;
        word& d = dst[dpos >> 6];
        d = (d & ~mask) | (bits << db);
        done += n;
    }
}

// Swap bits [lo, hi) between two rows (same positions both sides).
inline void swap_range(word* a, word* b, std::size_t lo, std::size_t hi) noexcept {
    if (lo >= hi) return;
    const std::size_t w0 = lo >> 6, w1 = (hi - 1) >> 6;
    const word first = ~low_mask(lo & 63);
    const word last = low_mask(((hi - 1) & 63) + 1);
    auto masked_swap = [](word& x, word& y, word m) {
        const word t = (x ^ y) & m;
        x ^= t;
        y ^= t;
    };
    if (w0 == w1) {
        masked_swap(a[w0], b[w0], first & last);
        return;
    }
    masked_swap(a[w0], b[w0], first);
    for (std::size_t w = w0 + 1; w < w1; ++w) std::swap(a[w], b[w]);
    masked_swap(a[w1], b[w1], last);
}

inline void zero_range(word* dst, std::size_t lo, std::size_t hi) noexcept {
    if (lo >= hi) return;
    const std::size_t w0 = lo >> 6, w1 = (hi - 1) >> 6;
    const word first = ~low_mask(lo & 63);
    const word last = low_mask(((hi - 1) & 63) + 1);
    if (w0 == w1) {
        dst[w0] &= ~(first & last);
        return;
    }
    dst[w0] &= ~first;
    for (std::size_t w = w0 + 1; w < w1; ++w) dst[w] = 0;
    dst[w1] &= ~last;
}

inline std::size_t popcount_range(const word* row, std::size_t lo, std::size_t hi) noexcept {
    std::size_t n = 0;
    std::size_t done = lo;
    while (done < hi) {
        const std::size_t b = done & 63;
        const std::size_t take = std::min<std::size_t>(word_bits - b, hi - done);
        n += std::size_t(__builtin_popcountll(read_window(row, done, take)));
        done += take;
    }
    return n;
}

inline word bit_reverse(word v, unsigned k) noexcept {
    word r = 0;
    for (unsigned i = 0; i < k; ++i) r |= ((v >> i) & 1) << (k - 1 - i);
    return r;
}

} // namespace detail

class BitMatrix;

class ConstMatrixView {
  public:
    ConstMatrixView() = default;
    ConstMatrixView(const word* data, std::size_t stride, std::size_t col_off, std::size_t rows,
                    std::size_t cols) noexcept
        : data_(data), stride_(stride), col_off_(col_off), nrows_(rows), ncols_(cols) {}

    std::size_t nrows() const noexcept { return nrows_; }
    std::size_t ncols() const noexcept { return ncols_; }
    std::size_t col_offset() const noexcept { return col_off_; }
    std::size_t stride() const noexcept { return stride_; }
    const word* row_words(std::size_t i) const noexcept { return data_ + i * stride_; }

    bool get(std::size_t i, std::size_t j) const noexcept {
        assert(i < nrows_ && j < ncols_);
        const std::size_t p = col_off_ + j;
        return (row_words(i)[p >> 6] >> (p & 63)) & 1;
    }

    // MSB-first window: bit t of the result (counting from the most
    // significant of the k) is column c+t, so a row fragment [0 1 1] reads
    // as 3. This is the ordering table lookups are keyed by.
    word read_bits(std::size_t i, std::size_t c, unsigned k) const {
        check_window(i, c, k);
        return detail::bit_reverse(detail::read_window(row_words(i), col_off_ + c, k), k);
    }

    // Same window, LSB first (bit t is column c+t); the raw packed layout.
    word read_bits_lsb(std::size_t i, std::size_t c, unsigned k) const {
        check_window(i, c, k);
        return detail::read_window(row_words(i), col_off_ + c, k);
    }

    ConstMatrixView sub(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
        check_sub(r0, c0, rows, cols);
        return {data_ + r0 * stride_, stride_, col_off_ + c0, rows, cols};
    }

    std::size_t popcount() const noexcept {
        std::size_t n = 0;
        for (std::size_t i = 0; i < nrows_; ++i)
            n += detail::popcount_range(row_words(i), col_off_, col_off_ + ncols_);
        return n;
    }

    std::size_t popcount_row(std::size_t i) const noexcept {
        assert(i < nrows_);
        return detail::popcount_range(row_words(i), col_off_, col_off_ + ncols_);
    }

  protected:
    void check_window(std::size_t i, std::size_t c, unsigned k) const {
        if (i >= nrows_ || k > word_bits || c > ncols_ || k > ncols_ - c)
            throw std::out_of_range("bit window outside matrix view");
    }
    void check_sub(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
        if (r0 > nrows_ || rows > nrows_ - r0 || c0 > ncols_ || cols > ncols_ - c0)
            throw std::out_of_range("subview outside matrix view");
    }

    const word* data_ = nullptr;
    std::size_t stride_ = 0;
    std::size_t col_off_ = 0;
    std::size_t nrows_ = 0;
    std::size_t ncols_ = 0;
};

inline bool equal(ConstMatrixView a, ConstMatrixView b) noexcept {
    if (a.nrows() != b.nrows() || a.ncols() != b.ncols()) return false;
    for (std::size_t i = 0; i < a.nrows(); ++i) {
        std::size_t done = 0;
        while (done < a.ncols()) {
            const std::size_t take = std::min<std::size_t>(word_bits, a.ncols() - done);
            if (detail::read_window(a.row_words(i), a.col_offset() + done, take) !=
                detail::read_window(b.row_words(i), b.col_offset() + done, take))
                return false;
            done += take;
        }
    }
    return true;
}

class MatrixView : public ConstMatrixView {
  public:
    MatrixView() = default;
    MatrixView(word* data, std::size_t stride, std::size_t col_off, std::size_t rows,
               std::size_t cols) noexcept
        : ConstMatrixView(data, stride, col_off, rows, cols) {}

    word* row_words(std::size_t i) const noexcept {
        return const_cast<word*>(data_) + i * stride_;
    }

    void set(std::size_t i, std::size_t j, bool v) const noexcept {
        assert(i < nrows_ && j < ncols_);
        const std::size_t p = col_off_ + j;
        word& w = row_words(i)[p >> 6];
        if (v)
            w |= word(1) << (p & 63);
        else
            w &= ~(word(1) << (p & 63));
    }

    MatrixView sub(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
        check_sub(r0, c0, rows, cols);
        return {const_cast<word*>(data_) + r0 * stride_, stride_, col_off_ + c0, rows, cols};
    }

    // dst row ^= src row, columns [from_col, ncols). The two rows must be
    // distinct; the bits left of from_col (stored multipliers) are preserved.
    void row_add_from(std::size_t dst, std::size_t src, std::size_t from_col) const {
        if (dst >= nrows_ || src >= nrows_ || from_col > ncols_)
            throw std::out_of_range("row_add_from outside view");
        if (dst == src) throw std::invalid_argument("row_add_from: dst == src");
        detail::xor_range(row_words(dst), row_words(src), col_off_ + from_col,
                          col_off_ + ncols_);
    }

    void swap_rows(std::size_t i, std::size_t j) const {
        if (i >= nrows_ || j >= nrows_) throw std::out_of_range("swap_rows outside view");
        if (i == j) return;
        detail::swap_range(row_words(i), row_words(j), col_off_, col_off_ + ncols_);
    }

    // Swap the [c_lo, c_hi) fragments of two rows; used when a permutation
    // found on one column block is replayed on the flanking blocks.
    void swap_rows_range(std::size_t i, std::size_t j, std::size_t c_lo, std::size_t c_hi) const {
        if (i >= nrows_ || j >= nrows_ || c_lo > c_hi || c_hi > ncols_)
            throw std::out_of_range("swap_rows_range outside view");
        if (i == j || c_lo == c_hi) return;
        detail::swap_range(row_words(i), row_words(j), col_off_ + c_lo, col_off_ + c_hi);
    }

    void swap_cols(std::size_t a, std::size_t b) const { swap_cols_from_row(a, b, 0); }

    // Swap columns a and b for rows [r0, nrows). Per row this is the
    // three-XOR masked-shift exchange: no per-row branch on the bit values,
    // and the two positions may sit in the same or different words, in
    // either order.
    void swap_cols_from_row(std::size_t a, std::size_t b, std::size_t r0) const {
        if (a >= ncols_ || b >= ncols_ || r0 > nrows_)
            throw std::out_of_range("swap_cols outside view");
        const std::size_t pa = col_off_ + a, pb = col_off_ + b;
        if (pa == pb) return;
        const std::size_t wa = pa >> 6, ba = pa & 63;
        const std::size_t wb = pb >> 6, bb = pb & 63;
        const word am = word(1) << ba, bm = word(1) << bb;
        const int d = int(ba) - int(bb);
        auto shl = [](word x, int s) { return s >= 0 ? x << s : x >> -s; };
        for (std::size_t i = r0; i < nrows_; ++i) {
            word* r = row_words(i);
            r[wa] ^= shl(r[wb] & bm, d);
            r[wb] ^= shl(r[wa] & am, -d);
            r[wa] ^= shl(r[wb] & bm, d);
        }
    }

    void clear() const noexcept {
        for (std::size_t i = 0; i < nrows_; ++i)
            detail::zero_range(row_words(i), col_off_, col_off_ + ncols_);
    }

    void copy_from(ConstMatrixView src) const {
        if (src.nrows() != nrows_ || src.ncols() != ncols_)
            throw std::invalid_argument("copy_from: shape mismatch");
        for (std::size_t i = 0; i < nrows_; ++i)
            detail::copy_range(row_words(i), col_off_, src.row_words(i), src.col_offset(),
                               ncols_);
    }

    void xor_from(ConstMatrixView src) const {
        if (src.nrows() != nrows_ || src.ncols() != ncols_)
            throw std::invalid_argument("xor_from: shape mismatch");
        for (std::size_t i = 0; i < nrows_; ++i)
            detail::xor_range_shifted(row_words(i), col_off_, src.row_words(i), src.col_offset(),
                                      ncols_);
    }
};

class BitMatrix {
  public:
    BitMatrix() = default;

    BitMatrix(std::size_t rows, std::size_t cols) : nrows_(rows), ncols_(cols) {
        stride_ = (cols + word_bits - 1) / word_bits;
        if (stride_ != 0 && rows > std::numeric_limits<std::size_t>::max() / stride_ / 16)
            throw std::length_error("BitMatrix: dimensions overflow addressable storage");
        data_.assign(rows * stride_, 0);
    }

    static BitMatrix identity(std::size_t n) {
        BitMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i) a.set(i, i, true);
        return a;
    }

    std::size_t nrows() const noexcept { return nrows_; }
    std::size_t ncols() const noexcept { return ncols_; }
    std::size_t stride() const noexcept { return stride_; }

    word* row_words(std::size_t i) noexcept { return data_.data() + i * stride_; }
    const word* row_words(std::size_t i) const noexcept { return data_.data() + i * stride_; }

    bool get(std::size_t i, std::size_t j) const noexcept { return cview().get(i, j); }
    void set(std::size_t i, std::size_t j, bool v) noexcept { view().set(i, j, v); }

    MatrixView view() noexcept { return {data_.data(), stride_, 0, nrows_, ncols_}; }
    ConstMatrixView cview() const noexcept { return {data_.data(), stride_, 0, nrows_, ncols_}; }
    operator MatrixView() noexcept { return view(); }
    operator ConstMatrixView() const noexcept { return cview(); }

    word read_bits(std::size_t i, std::size_t c, unsigned k) const { return cview().read_bits(i, c, k); }

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) noexcept {
        return a.nrows_ == b.nrows_ && a.ncols_ == b.ncols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const BitMatrix& a, const BitMatrix& b) noexcept { return !(a == b); }

    // Debug scrubber: all bits beyond ncols-1 in each row's last word stay zero.
    bool padding_clean() const noexcept {
        const std::size_t used = ncols_ & 63;
        if (stride_ == 0 || used == 0) return true;
        const word bad = ~detail::low_mask(used);
        for (std::size_t i = 0; i < nrows_; ++i)
            if (row_words(i)[stride_ - 1] & bad) return false;
        return true;
    }

  private:
    std::size_t nrows_ = 0, ncols_ = 0, stride_ = 0;
    std::vector<word> data_;
};

inline BitMatrix copy_of(ConstMatrixView src) {
    BitMatrix out(src.nrows(), src.ncols());
    out.view().copy_from(src);
    return out;
}

inline std::string to_string(ConstMatrixView a) {
    std::string s;
    s.reserve(a.nrows() * (a.ncols() + 1));
    for (std::size_t i = 0; i < a.nrows(); ++i) {
        for (std::size_t j = 0; j < a.ncols(); ++j) s += a.get(i, j) ? '1' : '0';
        s += '\n';
    }
    return s;
}

// LAPACK-style row transpositions: entry i names the row swapped with row i.
// apply() replays the swaps in recording order (what elimination physically
// did to the rows); apply_inverse() replays them backwards, which is the
// application that takes L*E back to the original row order.
struct RowPermutation {
    std::vector<std::size_t> swaps;

    std::size_t size() const noexcept { return swaps.size(); }

    void validate(std::size_t nrows) const {
        for (std::size_t i = 0; i < swaps.size(); ++i)
            if (swaps[i] < i || swaps[i] >= nrows)
                throw std::invalid_argument("RowPermutation: entry out of range");
    }

    void apply(MatrixView a) const {
        validate(a.nrows());
        for (std::size_t i = 0; i < swaps.size(); ++i)
            if (swaps[i] != i) a.swap_rows(i, swaps[i]);
    }

    void apply_inverse(MatrixView a) const {
        validate(a.nrows());
        for (std::size_t i = swaps.size(); i-- > 0;)
            if (swaps[i] != i) a.swap_rows(i, swaps[i]);
    }
};

namespace detail {

// Uniform draw from [0, n) by masked rejection; stable across platforms for
// a fixed mt19937_64 seed, unlike uniform_int_distribution.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    assert(n > 0);
    if (n == 1) return 0;
    const int bits = 64 - __builtin_clzll(n - 1);
    const std::uint64_t mask = bits >= 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << bits) - 1);
    std::uint64_t v;
    do {
        v = rng() & mask;
    } while (v >= n);
    return v;
}

} // namespace detail

// Independent Bernoulli(density) bits, row-major generation order.
inline void fill_random(MatrixView a, double density, std::uint64_t seed) {
    if (density < 0.0 || density > 1.0) throw std::invalid_argument("density outside [0,1]");
    std::mt19937_64 rng(seed);
    if (density == 0.0) {
        a.clear();
        return;
    }
    const std::size_t width = (a.ncols() + word_bits - 1) / word_bits;
    std::vector<word> buf(width);
    for (std::size_t i = 0; i < a.nrows(); ++i) {
        for (std::size_t w = 0; w < width; ++w) {
            if (density == 1.0)
                buf[w] = ~word(0);
            else if (density == 0.5)
                buf[w] = rng();
            else {
                word v = 0;
                for (unsigned b = 0; b < word_bits; ++b) {
                    const double u = double(rng() >> 11) * 0x1.0p-53;
                    v |= word(u < density) << b;
                }
                buf[w] = v;
            }
        }
        if (a.ncols() & 63) buf[width - 1] &= detail::low_mask(a.ncols() & 63);
        detail::copy_range(a.row_words(i), a.col_offset(), buf.data(), 0, a.ncols());
    }
}

// Exactly nnz distinct ones per row.
inline void fill_random_rows(MatrixView a, std::size_t nnz, std::uint64_t seed) {
    if (nnz > a.ncols()) throw std::invalid_argument("nnz exceeds column count");
    std::mt19937_64 rng(seed);
    const std::size_t n = a.ncols();
    const std::size_t width = (n + word_bits - 1) / word_bits;
    std::vector<word> buf(width);
    std::vector<std::uint32_t> pool;
    for (std::size_t i = 0; i < a.nrows(); ++i) {
        std::fill(buf.begin(), buf.end(), word(0));
        if (nnz * 2 > n) {
            pool.resize(n);
            for (std::size_t j = 0; j < n; ++j) pool[j] = std::uint32_t(j);
            for (std::size_t j = 0; j < nnz; ++j) {
                const std::size_t pick = j + std::size_t(detail::bounded(rng, n - j));
                std::swap(pool[j], pool[pick]);
                buf[pool[j] >> 6] |= word(1) << (pool[j] & 63);
            }
        } else {
            std::size_t placed = 0;
            while (placed < nnz) {
                const std::size_t p = std::size_t(detail::bounded(rng, n));
                word& w = buf[p >> 6];
                const word bit = word(1) << (p & 63);
                if (!(w & bit)) {
                    w |= bit;
                    ++placed;
                }
            }
        }
        detail::copy_range(a.row_words(i), a.col_offset(), buf.data(), 0, n);
    }
}

} // namespace gf2
