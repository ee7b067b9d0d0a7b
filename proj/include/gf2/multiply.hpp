#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gf2/bit_matrix.hpp"
#include "gf2/gray_code.hpp"

// Matrix multiplication over GF(2).
//
// Three layers, slowest to fastest:
//   * addmul_naive      -- row additions driven by the set bits of A; the
//                          cubic baseline everything else is measured against;
//   * addmul_m4rm       -- processes k rows of B at a time through a Gray
//                          code combination table, one table row addition per
//                          k columns of A;
//   * mul_strassen      -- Strassen-Winograd recursion (7 products, 15 block
//                          additions) on top of the table kernel.
//
// All entry points require C to alias neither A nor B. Views of a shared
// parent are fine as long as their word ranges do not overlap.

namespace gf2 {

struct MulConfig {
    unsigned m4rm_k = 0;          // 0 = pick from the dimensions
    unsigned table_count = 1;     // Gray tables per slab (1, 2, 4 or 8)
    std::size_t strassen_cutoff = 2048; // below this, fall through to the table kernel
};

inline void check_mul_shapes(ConstMatrixView c, ConstMatrixView a, ConstMatrixView b) {
    if (a.ncols() != b.nrows() || c.nrows() != a.nrows() || c.ncols() != b.ncols())
        throw std::invalid_argument("multiply: dimension mismatch");
}

// C += A*B, one row addition per set bit of A.
inline void addmul_naive(MatrixView c, ConstMatrixView a, ConstMatrixView b) {
    check_mul_shapes(c, a, b);
    const std::size_t l = a.ncols();
    for (std::size_t i = 0; i < a.nrows(); ++i) {
        for (std::size_t base = 0; base < l; base += word_bits) {
            const std::size_t take = std::min<std::size_t>(word_bits, l - base);
            word bits = detail::read_window(a.row_words(i), a.col_offset() + base, take);
            while (bits) {
                const unsigned j = unsigned(std::countr_zero(bits));
                bits &= bits - 1;
                detail::xor_range_shifted(c.row_words(i), c.col_offset(), b.row_words(base + j),
                                          b.col_offset(), c.ncols());
            }
        }
    }
}

inline void mul_naive(MatrixView c, ConstMatrixView a, ConstMatrixView b) {
    check_mul_shapes(c, a, b);
    c.clear();
    addmul_naive(c, a, b);
}

inline BitMatrix mul_naive(ConstMatrixView a, ConstMatrixView b) {
    BitMatrix c(a.nrows(), b.ncols());
    mul_naive(c.view(), a, b);
    return c;
}

namespace detail {

inline unsigned pick_m4rm_k(ConstMatrixView a, ConstMatrixView b, const MulConfig& cfg) {
    unsigned k = cfg.m4rm_k != 0
                     ? cfg.m4rm_k
                     : pick_table_bits(std::max(a.nrows(), b.nrows()), 0.75);
    k = std::min<unsigned>(k, 16);
    if (b.nrows() > 0) k = std::min<unsigned>(k, unsigned(std::min<std::size_t>(b.nrows(), 16)));
    // keep the tables well inside cache-adjacent memory
    const std::size_t row_bytes = 8 * ((b.ncols() + 63) / 64 + 1);
    while (k > 1 && (std::size_t(1) << k) * row_bytes > (std::size_t(32) << 20)) --k;
    return std::max(1u, k);
}

inline bool m4rm_aligned(ConstMatrixView c, ConstMatrixView b) noexcept {
    return (c.col_offset() & 63) == (b.col_offset() & 63);
}

} // namespace detail

// C += A*B with Gray-code tables over slabs of k rows of B.
inline void addmul_m4rm(MatrixView c, ConstMatrixView a, ConstMatrixView b,
                        const MulConfig& cfg = {}) {
    check_mul_shapes(c, a, b);
    const std::size_t m = a.nrows(), l = a.ncols();
    if (m == 0 || l == 0 || c.ncols() == 0) return;

    if (!detail::m4rm_aligned(c, b)) {
        // realign through copies; the kernel requires B and C to place their
        // columns at the same bit offset within a word
        BitMatrix bt = copy_of(b);
        BitMatrix ct = copy_of(c);
        addmul_m4rm(ct.view(), a, bt.cview(), cfg);
        c.copy_from(ct.cview());
        return;
    }

    const unsigned k = detail::pick_m4rm_k(a, b, cfg);
    std::vector<GrayTables> tables;
    for (std::size_t s = 0; s < l;) {
        const unsigned kk = unsigned(std::min<std::size_t>(k, l - s));
        const auto chunks = split_tables(kk, std::max(1u, cfg.table_count));
        tables.clear();
        for (const auto& [off, size] : chunks)
            tables.push_back(make_table(b, s + off, size, 0, 0, false));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t p = 0; p < chunks.size(); ++p) {
                const auto [off, size] = chunks[p];
                const word u = a.read_bits_lsb(i, s + off, size);
                tables[p].add_row(c, i, 0, tables[p].coeff_index_lsb[std::size_t(u)]);
            }
        }
        s += kk;
    }
}

inline void mul_m4rm(MatrixView c, ConstMatrixView a, ConstMatrixView b,
                     const MulConfig& cfg = {}) {
    check_mul_shapes(c, a, b);
    c.clear();
    addmul_m4rm(c, a, b, cfg);
}

namespace detail {

inline void strassen_rec(MatrixView c, ConstMatrixView a, ConstMatrixView b,
                         const MulConfig& cfg);

inline BitMatrix strassen_product(ConstMatrixView a, ConstMatrixView b, const MulConfig& cfg) {
    BitMatrix c(a.nrows(), b.ncols());
    strassen_rec(c.view(), a, b, cfg);
    return c;
}

inline BitMatrix xor_of(ConstMatrixView x, ConstMatrixView y) {
    BitMatrix out = copy_of(x);
    out.view().xor_from(y);
    return out;
}

// C = A*B. C is overwritten, not accumulated into.
inline void strassen_rec(MatrixView c, ConstMatrixView a, ConstMatrixView b,
                         const MulConfig& cfg) {
    const std::size_t m = a.nrows(), l = a.ncols(), n = b.ncols();
    const std::size_t cutoff = std::max<std::size_t>(64, cfg.strassen_cutoff);
    if (std::min({m, l, n}) <= cutoff) {
        mul_m4rm(c, a, b, cfg);
        return;
    }

    const std::size_t mm = m & ~std::size_t(1);
    const std::size_t ll = l & ~std::size_t(1);
    const std::size_t nn = n & ~std::size_t(1);
    const std::size_t h = mm / 2, w = ll / 2, v = nn / 2;

    BitMatrix a00 = copy_of(a.sub(0, 0, h, w));
    BitMatrix a01 = copy_of(a.sub(0, w, h, w));
    BitMatrix a10 = copy_of(a.sub(h, 0, h, w));
    BitMatrix a11 = copy_of(a.sub(h, w, h, w));
    BitMatrix b00 = copy_of(b.sub(0, 0, w, v));
    BitMatrix b01 = copy_of(b.sub(0, v, w, v));
    BitMatrix b10 = copy_of(b.sub(w, 0, w, v));
    BitMatrix b11 = copy_of(b.sub(w, v, w, v));

    BitMatrix s1 = xor_of(a10, a11);
    BitMatrix s2 = xor_of(s1, a00);
    BitMatrix s3 = xor_of(a00, a10);
    BitMatrix s4 = xor_of(a01, s2);
    BitMatrix t1 = xor_of(b01, b00);
    BitMatrix t2 = xor_of(b11, t1);
    BitMatrix t3 = xor_of(b11, b01);
    BitMatrix t4 = xor_of(t2, b10);

    BitMatrix p1 = strassen_product(a00, b00, cfg);
    BitMatrix p2 = strassen_product(a01, b10, cfg);
    BitMatrix p3 = strassen_product(s4, b11, cfg);
    BitMatrix p4 = strassen_product(a11, t4, cfg);
    BitMatrix p5 = strassen_product(s1, t1, cfg);
    BitMatrix p6 = strassen_product(s2, t2, cfg);
    BitMatrix p7 = strassen_product(s3, t3, cfg);

    BitMatrix u2 = xor_of(p1, p6);
    BitMatrix u3 = xor_of(u2, p7);
    BitMatrix u4 = xor_of(u2, p5);

    MatrixView c00 = c.sub(0, 0, h, v), c01 = c.sub(0, v, h, v);
    MatrixView c10 = c.sub(h, 0, h, v), c11 = c.sub(h, v, h, v);
    c00.copy_from(p1.cview());
    c00.xor_from(p2.cview());
    c01.copy_from(u4.cview());
    c01.xor_from(p3.cview());
    c10.copy_from(u3.cview());
    c10.xor_from(p4.cview());
    c11.copy_from(u3.cview());
    c11.xor_from(p5.cview());

    // fringes of odd dimensions
    if (ll != l) {
        // rank-one contribution of A's last column and B's last row
        for (std::size_t i = 0; i < mm; ++i)
            if (a.get(i, ll))
                detail::xor_range_shifted(c.row_words(i), c.col_offset(), b.row_words(ll),
                                          b.col_offset(), nn);
    }
    if (mm != m) {
        // last row of C, full width, straight from the definition
        const std::size_t i = m - 1;
        detail::zero_range(c.row_words(i), c.col_offset(), c.col_offset() + n);
        for (std::size_t j = 0; j < l; ++j)
            if (a.get(i, j))
                detail::xor_range_shifted(c.row_words(i), c.col_offset(), b.row_words(j),
                                          b.col_offset(), n);
    }
    if (nn != n) {
        // last column of C for the rows not covered above
        std::vector<word> col((l + 63) / 64, 0);
        for (std::size_t j = 0; j < l; ++j)
            if (b.get(j, n - 1)) col[j >> 6] |= word(1) << (j & 63);
        for (std::size_t i = 0; i < mm; ++i) {
            unsigned parity = 0;
            for (std::size_t base = 0; base < l; base += word_bits) {
                const std::size_t take = std::min<std::size_t>(word_bits, l - base);
                parity ^= unsigned(__builtin_popcountll(
                    detail::read_window(a.row_words(i), a.col_offset() + base, take) &
                    col[base >> 6]));
            }
            c.set(i, n - 1, parity & 1);
        }
    }
}

} // namespace detail

inline void mul_strassen(MatrixView c, ConstMatrixView a, ConstMatrixView b,
                         const MulConfig& cfg = {}) {
    check_mul_shapes(c, a, b);
    detail::strassen_rec(c, a, b, cfg);
}

inline BitMatrix mul_strassen(ConstMatrixView a, ConstMatrixView b, const MulConfig& cfg = {}) {
    BitMatrix c(a.nrows(), b.ncols());
    mul_strassen(c.view(), a, b, cfg);
    return c;
}

// C += A*B through whichever kernel the dimensions warrant.
inline void addmul(MatrixView c, ConstMatrixView a, ConstMatrixView b,
                   const MulConfig& cfg = {}) {
    check_mul_shapes(c, a, b);
    const std::size_t cutoff = std::max<std::size_t>(64, cfg.strassen_cutoff);
    if (std::min({a.nrows(), a.ncols(), b.ncols()}) <= cutoff) {
        addmul_m4rm(c, a, b, cfg);
        return;
    }
    BitMatrix p = mul_strassen(a, b, cfg);
    c.xor_from(p.cview());
}

inline BitMatrix mul(ConstMatrixView a, ConstMatrixView b, const MulConfig& cfg = {}) {
    BitMatrix c(a.nrows(), b.ncols());
    const std::size_t cutoff = std::max<std::size_t>(64, cfg.strassen_cutoff);
    if (std::min({a.nrows(), a.ncols(), b.ncols()}) <= cutoff)
        mul_m4rm(c.view(), a, b, cfg);
    else
        detail::strassen_rec(c.view(), a, b, cfg);
    return c;
}

namespace detail {

inline std::size_t split_rounded(std::size_t r) noexcept {
    const std::size_t h = ((r / 2 + 63) / 64) * 64;
    return std::min(h, r - 1);
}

} // namespace detail

// B <- L^-1 * B where L is the unit lower triangle stored in the square view
// `l` (only bits strictly below the diagonal are read; the diagonal is
// implicit and anything above it -- e.g. a space-shared echelon factor -- is
// ignored).
inline void trsm_lower_left_unit(ConstMatrixView l, MatrixView b, const MulConfig& cfg = {}) {
    const std::size_t r = l.nrows();
    if (l.ncols() != r || b.nrows() != r)
        throw std::invalid_argument("trsm: dimension mismatch");
    if (r <= 1) return;
    if (r <= word_bits) {
        for (std::size_t i = 1; i < r; ++i) {
            word bits = detail::read_window(l.row_words(i), l.col_offset(), i);
            while (bits) {
                const unsigned j = unsigned(std::countr_zero(bits));
                bits &= bits - 1;
                b.row_add_from(i, j, 0);
            }
        }
        return;
    }
    const std::size_t h = detail::split_rounded(r);
    trsm_lower_left_unit(l.sub(0, 0, h, h), b.sub(0, 0, h, b.ncols()), cfg);
    addmul(b.sub(h, 0, r - h, b.ncols()), l.sub(h, 0, r - h, h),
           b.sub(0, 0, h, b.ncols()), cfg);
    trsm_lower_left_unit(l.sub(h, h, r - h, r - h), b.sub(h, 0, r - h, b.ncols()), cfg);
}

// B <- U^-1 * B for the unit upper triangle of `u` (bits strictly above the
// diagonal are read, the rest ignored).
inline void trsm_upper_left_unit(ConstMatrixView u, MatrixView b, const MulConfig& cfg = {}) {
    const std::size_t r = u.nrows();
    if (u.ncols() != r || b.nrows() != r)
        throw std::invalid_argument("trsm: dimension mismatch");
    if (r <= 1) return;
    if (r <= word_bits) {
        for (std::size_t i = r - 1; i-- > 0;) {
            word bits = detail::read_window(u.row_words(i), u.col_offset() + i + 1, r - i - 1);
            while (bits) {
                const unsigned j = unsigned(std::countr_zero(bits));
                bits &= bits - 1;
                b.row_add_from(i, i + 1 + j, 0);
            }
        }
        return;
    }
    const std::size_t h = detail::split_rounded(r);
    trsm_upper_left_unit(u.sub(h, h, r - h, r - h), b.sub(h, 0, r - h, b.ncols()), cfg);
    addmul(b.sub(0, 0, h, b.ncols()), u.sub(0, h, h, r - h),
           b.sub(h, 0, r - h, b.ncols()), cfg);
    trsm_upper_left_unit(u.sub(0, 0, h, h), b.sub(0, 0, h, b.ncols()), cfg);
}

} // namespace gf2
