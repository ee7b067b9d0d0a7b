#pragma once

#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gf2/bit_matrix.hpp"

// Gray-code combination tables: all 2^k linear combinations of k source
// rows, built with one row addition per new entry by walking the reflected
// binary code. A combination is identified by its coefficient id
//
//   u = sum coeff_j * 2^(k-1-j)   (coefficient of source row j at bit k-1-j)
//
// which matches reading k matrix bits left to right as a big-endian number.
// Table row t holds the combination with id gray_code(t), so the row for id
// u is gray_inverse(u).

namespace gf2 {

inline std::uint64_t gray_code(std::uint64_t t) noexcept { return t ^ (t >> 1); }

inline std::uint64_t gray_inverse(std::uint64_t g) noexcept {
    g ^= g >> 1;
    g ^= g >> 2;
    g ^= g >> 4;
    g ^= g >> 8;
    g ^= g >> 16;
    g ^= g >> 32;
    return g;
}

// Between steps t-1 and t exactly one coefficient flips: bit ctz(t) of the
// id, i.e. source row k-1-ctz(t).
inline unsigned gray_flip_bit(std::uint64_t step) noexcept {
    assert(step > 0);
    return unsigned(std::countr_zero(step));
}

// A table of the 2^k combinations of k rows over the column span
// [span_col, src.ncols()). Rows of `t` are stored word-aligned against the
// source rows: bit `lead_bits` of a table row lines up with span_col, bits
// before it and after the span are zero, so a table row can be XORed into
// any target row word by word without masking, provided the target places
// the span at the same bit offset within a word.
struct GrayTables {
    unsigned k = 0;
    std::size_t lead_bits = 0;
    std::size_t span_bits = 0;
    BitMatrix t;
    // combination id (k bits MSB first) -> table row; filled when the source
    // rows restricted to the index columns are linearly independent.
    std::vector<std::uint32_t> index_msb;
    // same keyed by the raw LSB-first window, saving a bit reversal per lookup
    std::vector<std::uint32_t> index_lsb;
    // coefficient bits read LSB first -> table row; pure Gray-code arithmetic,
    // valid for any source rows.
    std::vector<std::uint32_t> coeff_index_lsb;

    bool has_index() const noexcept { return !index_msb.empty(); }

    // a.row(i) ^= combination row tr over target columns [from_col, a right
    // edge). span_col names where the table's span starts within `a`; the
    // alignment precondition is asserted.
    void add_row(MatrixView a, std::size_t i, std::size_t span_col, std::size_t from_col,
                 std::size_t tr) const {
        if (tr == 0) return; // zero combination
        assert(from_col >= span_col);
        assert(a.ncols() - span_col == span_bits);
        const std::size_t abs0 = a.col_offset() + span_col;
        assert((abs0 & 63) == lead_bits);
        detail::xor_range(a.row_words(i) + (abs0 >> 6), t.row_words(tr),
                          lead_bits + (from_col - span_col), lead_bits + span_bits);
    }

    void add_row(MatrixView a, std::size_t i, std::size_t span_col, std::size_t tr) const {
        add_row(a, i, span_col, span_col, tr);
    }
};

// Builds the table from rows [r0, r0+k) of src. When with_index is set, the
// k columns starting at index_col are read back from each finished table row
// to key lookups by matrix bits; this requires those columns of the source
// rows to be independent (detected, not assumed).
inline GrayTables make_table(ConstMatrixView src, std::size_t r0, unsigned k,
                             std::size_t span_col, std::size_t index_col, bool with_index) {
    if (k == 0 || k > 20) throw std::invalid_argument("make_table: k outside [1,20]");
    if (r0 + k > src.nrows() || span_col >= src.ncols())
        throw std::out_of_range("make_table: source rows or span outside matrix");
    if (with_index && (index_col < span_col || index_col + k > src.ncols()))
        throw std::out_of_range("make_table: index columns outside span");

    const std::size_t abs0 = src.col_offset() + span_col;
    const std::size_t rows = std::size_t(1) << k;

    GrayTables g;
    g.k = k;
    g.lead_bits = abs0 & 63;
    g.span_bits = src.ncols() - span_col;
    g.t = BitMatrix(rows, g.lead_bits + g.span_bits);

    for (std::size_t step = 1; step < rows; ++step) {
        const std::size_t j = r0 + (k - 1 - gray_flip_bit(step));
        word* dst = g.t.row_words(step);
        const word* prev = g.t.row_words(step - 1);
        for (std::size_t w = 0; w < g.t.stride(); ++w) dst[w] = prev[w];
        detail::xor_range(dst, src.row_words(j) + (abs0 >> 6), g.lead_bits,
                          g.lead_bits + g.span_bits);
    }

    g.coeff_index_lsb.assign(rows, 0);
    for (std::size_t u = 0; u < rows; ++u)
        g.coeff_index_lsb[u] = std::uint32_t(gray_inverse(detail::bit_reverse(u, k)));

    if (with_index) {
        g.index_msb.assign(rows, 0);
        g.index_lsb.assign(rows, 0);
        std::vector<char> seen(rows, 0);
        const std::size_t idx = g.lead_bits + (index_col - span_col);
        for (std::size_t tr = 0; tr < rows; ++tr) {
            const word raw = detail::read_window(g.t.row_words(tr), idx, k);
            const word v = detail::bit_reverse(raw, k);
            if (seen[std::size_t(v)])
                throw std::invalid_argument("make_table: index columns are dependent");
            seen[std::size_t(v)] = 1;
            g.index_msb[std::size_t(v)] = std::uint32_t(tr);
            g.index_lsb[std::size_t(raw)] = std::uint32_t(tr);
        }
    }
    return g;
}

// XOR each table row's own coefficient vector into the k bits starting at
// span column col_in_span (coefficient of source row j lands j bits in).
// After this, adding the row keyed on matrix bits v rewrites those bits to
// the coefficients that eliminate v instead of clearing them.
inline void add_coefficient_bits(GrayTables& g, std::size_t col_in_span) {
    const std::size_t pos = g.lead_bits + col_in_span;
    if (col_in_span + g.k > g.span_bits)
        throw std::out_of_range("coefficient bits outside table span");
    const std::size_t rows = std::size_t(1) << g.k;
    for (std::size_t tr = 1; tr < rows; ++tr) {
        const word v = detail::bit_reverse(gray_code(tr), g.k); // LSB-first coefficients
        word* row = g.t.row_words(tr);
        const std::size_t w = pos >> 6, b = pos & 63;
        row[w] ^= v << b;
        if (b != 0 && b + g.k > word_bits) row[w + 1] ^= v >> (word_bits - b);
    }
}

// Near-equal split of k source rows into `parts` chunks (first chunks take
// the remainder). Returns (offset, size) pairs.
inline std::vector<std::pair<unsigned, unsigned>> split_tables(unsigned k, unsigned parts) {
    if (parts == 0) throw std::invalid_argument("split_tables: zero parts");
    if (parts > k) parts = k;
    std::vector<std::pair<unsigned, unsigned>> out;
    out.reserve(parts);
    unsigned off = 0;
    for (unsigned p = 0; p < parts; ++p) {
        const unsigned size = k / parts + (p < k % parts ? 1 : 0);
        out.emplace_back(off, size);
        off += size;
    }
    return out;
}

// Table width heuristic: scale * log2(n) bits, clamped to [1, 16].
inline unsigned pick_table_bits(std::size_t n, double scale) {
    if (n < 2) return 1;
    const double raw = scale * std::log2(double(n));
    if (raw < 1.0) return 1;
    if (raw > 16.0) return 16;
    return unsigned(raw);
}

} // namespace gf2
