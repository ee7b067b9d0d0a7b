#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "gf2/bit_matrix.hpp"
#include "gf2/gray_code.hpp"
#include "gf2/ple.hpp"

// Table-driven Gaussian elimination ("Method of the Four Russians"
// inversion): eliminate k columns at a time by putting a small window into
// echelon form with plain elimination, then clearing those k columns in
// every other row with a single addition from a table of all 2^k pivot-row
// combinations.

namespace gf2 {

// Elimination on the window starting at (r, c), at most k columns wide,
// searching for pivots down to r_end. Pivot rows come to rest at r, r+1, ...
// contiguously. Returns the number of pivots found; stops at the first
// column without one. When `full` is set the window is reduced (identity on
// the pivot columns), otherwise only cleared below (unit upper triangle).
inline std::size_t gauss_submatrix(MatrixView a, std::size_t r, std::size_t c, unsigned k,
                                   std::size_t r_end, bool full = true) {
    std::size_t r_start = r;
    for (std::size_t j = c; j < c + k; ++j) {
        bool found = false;
        for (std::size_t i = r_start; i < r_end; ++i) {
            // bring the candidate up to date on the columns already done
            for (std::size_t l = 0; l < j - c; ++l)
                if (a.get(i, c + l)) a.row_add_from(i, r + l, c + l);
            if (a.get(i, j)) {
                if (i != r_start) a.swap_rows(r_start, i);
                if (full)
                    for (std::size_t l = r; l < r_start; ++l)
                        if (a.get(l, j)) a.row_add_from(l, r_start, j);
                ++r_start;
                found = true;
                break;
            }
        }
        if (!found) return j - c;
    }
    return k;
}

// Row echelon form (reduced if `full`) of the whole matrix; returns the rank.
inline std::size_t m4ri_echelonize(MatrixView a, unsigned k = 0, bool full = true,
                                   unsigned table_count = 1) {
    const std::size_t m = a.nrows(), n = a.ncols();
    if (m == 0 || n == 0) return 0;
    if (k == 0) k = pick_table_bits(std::max(m, n), 0.75);
    k = std::min<unsigned>(std::max(1u, k), 16);

    std::vector<GrayTables> tabs;
    std::size_t r = 0, c = 0;
    while (c < n && r < m) {
        const unsigned kk = unsigned(std::min<std::size_t>(k, n - c));
        const std::size_t kb = gauss_submatrix(a, r, c, kk, m, full);
        if (kb > 0) {
            const auto chunks = split_tables(unsigned(kb), std::max(1u, table_count));
            tabs.clear();
            for (const auto& [off, size] : chunks)
                tabs.push_back(make_table(a, r + off, size, c, c + off, true));
            auto sweep = [&](std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i)
                    for (std::size_t p = 0; p < chunks.size(); ++p) {
                        const auto [off, size] = chunks[p];
                        const word u = a.read_bits_lsb(i, c + off, size);
                        tabs[p].add_row(a, i, c, tabs[p].index_lsb[std::size_t(u)]);
                    }
            };
            if (full) sweep(0, r);
            sweep(r + kb, m);
        }
        r += kb;
        c += kb;
        if (kb != kk) c += 1; // the next column has no pivot below r; skip it
    }
    return r;
}

// Strategy selector shared by the command line tool and the tests.
enum class EchelonStrategy { naive, m4ri, ple_iterative, ple_recursive };

inline std::size_t echelonize(MatrixView a, EchelonStrategy strategy, bool full = true,
                              const PleConfig& cfg = {}) {
    switch (strategy) {
    case EchelonStrategy::naive:
        return naive_echelonize(a, full);
    case EchelonStrategy::m4ri:
        return m4ri_echelonize(a, cfg.k, full, std::max(1u, cfg.table_count));
    case EchelonStrategy::ple_iterative: {
        PleOutcome out = block_iterative_ple(a, cfg);
        rref_from_ple(a, out, full, cfg.mul);
        return out.rank;
    }
    case EchelonStrategy::ple_recursive: {
        PleOutcome out = recursive_ple(a, cfg);
        rref_from_ple(a, out, full, cfg.mul);
        return out.rank;
    }
    }
    return 0;
}

} // namespace gf2
