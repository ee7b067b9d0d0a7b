#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gf2/bit_matrix.hpp"
#include "gf2/gray_code.hpp"
#include "gf2/multiply.hpp"

// PLE decomposition: A = P*L*E with P a row permutation, L unit lower
// triangular and E in row echelon form. The factors are stored in place:
// after a call, column j < rank holds the multipliers of pivot j below row j
// (L, compressed to the left), and the echelon factor sits above. Q records
// the pivot column of each pivot row; col_swaps records every column swap
// performed by the compression steps so that E can be recovered by replaying
// them backwards.
//
// Three drivers:
//   * partial_ple        -- one lazy elimination pass; may stop early, having
//                           decomposed only the first `processed` rows;
//   * block_iterative_ple-- stripes of ~log n columns, one table-driven row
//                           addition per row per stripe;
//   * recursive_ple      -- halves the column span and reduces the cross
//                           update to matrix multiplication.

namespace gf2 {

struct PleConfig {
    unsigned k = 0;              // stripe width for the iterative driver; 0 = pick
    double k_scale = 0.75;       // bits per log2(n) when picking
    unsigned table_count = 4;    // Gray tables per stripe
    std::size_t base_bytes = std::size_t(256) << 10; // recurse until this fits
    std::size_t base_ncols = 64;
    unsigned base_k = 0;         // stripe width inside the recursion base; 1 = cubic base
    MulConfig mul;
};

struct ColSwap {
    std::size_t a, b, from_row;
};

struct PleOutcome {
    std::size_t rank = 0;
    std::size_t processed = 0; // rows actually decomposed (= nrows for full drivers)
    RowPermutation p;          // one transposition per pivot
    std::vector<std::size_t> q; // pivot columns, strictly increasing
    std::vector<ColSwap> col_swaps; // compression swaps in application order
};

// Lazy partial elimination. Row updates are deferred until the pivot search
// actually reads a row: s[l] is a watermark meaning rows up to s[l] carry
// pivot l's contribution on their trailing columns. The array stays
// non-increasing, so one ordered scan locates the pivots a row still needs.
inline PleOutcome partial_ple(MatrixView a) {
    const std::size_t m = a.nrows(), n = a.ncols();
    PleOutcome out;
    std::vector<std::size_t>& q = out.q;
    std::vector<std::size_t> s; // watermark per pivot, non-increasing
    std::size_t r = 0, c = 0;

    while (r < m && c < n) {
        bool found = false;
        std::size_t pi = 0, pj = 0;
        for (std::size_t j = c; j < n && !found; ++j) {
            for (std::size_t i = r; i < m; ++i) {
                if (r > 0 && i > s[r - 1]) {
                    // first pivot whose watermark lies below row i
                    std::size_t lo = 0, hi = r;
                    while (lo < hi) {
                        const std::size_t mid = (lo + hi) / 2;
                        if (s[mid] >= i)
                            lo = mid + 1;
                        else
                            hi = mid;
                    }
                    // each addition starts right after its own pivot column:
                    // when several pivots are applied in one pass, the later
                    // coefficients are only valid once the earlier pivot rows
                    // have been added to the columns between the pivots
                    for (std::size_t l = lo; l < r; ++l) {
                        if (a.get(i, q[l])) a.row_add_from(i, l, q[l] + 1);
                        s[l] = i;
                    }
                }
                if (a.get(i, j)) {
                    found = true;
                    pi = i;
                    pj = j;
                    break;
                }
            }
        }
        if (!found) break;
        out.p.swaps.push_back(pi);
        q.push_back(pj);
        if (pi != r) a.swap_rows(r, pi);
        // rows r..pi were all read at column pj and carry a zero coefficient
        // for this pivot, so the new watermark may start at pi
        s.push_back(pi);
        r += 1;
        c = pj + 1;
    }

    out.rank = r;
    if (r == 0) {
        out.processed = 0;
        return out;
    }

    // catch-up: rows inside the processed region that are still missing some
    // pivots. Each addition starts one past the pivot column so the
    // multiplier just tested stays in place.
    const std::size_t smax = s[0];
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = std::max(s[j] + 1, r); i <= smax; ++i)
            if (a.get(i, q[j])) a.row_add_from(i, j, q[j] + 1);

    // compress L against the left edge
    for (std::size_t j = 0; j < r; ++j)
        if (q[j] != j) {
            a.swap_cols_from_row(j, q[j], j);
            out.col_swaps.push_back({j, q[j], j});
        }

    out.processed = std::max(r, smax + 1);
    return out;
}

namespace detail {

// The stripe's echelon rows, copied into storage whose word alignment matches
// the parent view. The compression swaps apply from the pivot row down, so in
// place the pivot rows do not share one column layout; the copies are
// reassembled in the layout the rows below them see: pivot bit l at stripe
// position l, zeros across the rest of the stripe, the tail verbatim.
//
// `with_pivots` is set when untouched rows below will be rewritten through
// the table index. That can only happen when every failed stripe column
// failed before the first pivot (a later failed scan catches every row up),
// so the pivots sit in the last rb consecutive stripe columns and pivot row
// j still holds its bit for pivot l > j at the untouched position g + l.
inline BitMatrix cleaned_pivot_rows(ConstMatrixView a, std::size_t r, std::size_t c,
                                    std::size_t rb, std::size_t kk, bool with_pivots) {
    const std::size_t abs0 = a.col_offset() + c;
    const std::size_t lead = abs0 & 63;
    const std::size_t span = a.ncols() - c;
    const std::size_t g = kk - rb;
    BitMatrix sc(rb, lead + span);
    for (std::size_t j = 0; j < rb; ++j) {
        word* dst = sc.row_words(j);
        copy_range(dst, lead + kk, a.row_words(r + j) + (abs0 >> 6), lead + kk, span - kk);
        if (!with_pivots) continue;
        dst[(lead + j) >> 6] |= word(1) << ((lead + j) & 63);
        for (std::size_t l = j + 1; l < rb; ++l)
            if (a.get(r + j, c + g + l))
                dst[(lead + l) >> 6] |= word(1) << ((lead + l) & 63);
    }
    return sc;
}

} // namespace detail

inline PleOutcome block_iterative_ple(MatrixView a, const PleConfig& cfg = {}) {
    const std::size_t m = a.nrows(), n = a.ncols();
    unsigned k = cfg.k != 0 ? cfg.k : pick_table_bits(std::max(m, n), cfg.k_scale);
    k = std::min<unsigned>(std::max(1u, k), 16);

    PleOutcome out;
    std::size_t r = 0, c = 0;
    std::vector<GrayTables> tabs;
    while (r < m && c < n) {
        const unsigned kk = unsigned(std::min<std::size_t>(k, n - c));
        PleOutcome st = partial_ple(a.sub(r, c, m - r, kk));
        const std::size_t rb = st.rank, sb = st.processed;

        for (std::size_t l = 0; l < rb; ++l) {
            out.p.swaps.push_back(r + st.p.swaps[l]);
            out.q.push_back(c + st.q[l]);
        }
        for (const ColSwap& cs : st.col_swaps)
            out.col_swaps.push_back({c + cs.a, c + cs.b, r + cs.from_row});

        // replay the stripe's row swaps on the flanking column blocks
        if (c > 0) st.p.apply(a.sub(r, 0, m - r, c));
        if (c + kk < n) st.p.apply(a.sub(r, c + kk, m - r, n - c - kk));

        if (rb > 0) {
            const std::size_t tail = n - c - kk;
            if (tail > 0)
                trsm_lower_left_unit(a.sub(r, c, rb, rb), a.sub(r, c + kk, rb, tail), cfg.mul);

            const bool have_updated = sb > rb;   // rows already carrying multipliers
            const bool have_below = r + sb < m;  // rows the stripe pass never touched
            if ((have_updated && tail > 0) || have_below) {
                BitMatrix sc = detail::cleaned_pivot_rows(a, r, c, rb, kk, have_below);
                ConstMatrixView scv(sc.row_words(0), sc.stride(),
                                    (a.col_offset() + c) & 63, rb, n - c);
                const auto chunks = split_tables(unsigned(rb), std::max(1u, cfg.table_count));
                tabs.clear();
                for (const auto& [off, size] : chunks) {
                    GrayTables g = make_table(scv, off, size, 0, off, have_below);
                    if (have_below) add_coefficient_bits(g, off);
                    tabs.push_back(std::move(g));
                }
                if (have_updated && tail > 0) {
                    // multipliers are in place; add the matching combination
                    // of echelon tails
                    for (std::size_t i = r + rb; i < r + sb; ++i)
                        for (std::size_t p = 0; p < chunks.size(); ++p) {
                            const auto [off, size] = chunks[p];
                            const word u = a.read_bits_lsb(i, c + off, size);
                            tabs[p].add_row(a, i, c, c + kk,
                                            tabs[p].coeff_index_lsb[std::size_t(u)]);
                        }
                }
                if (have_below) {
                    // untouched rows: one full-width addition rewrites the
                    // stripe bits to multipliers and updates the tail. Chunk
                    // indices are read after the previous chunk's addition.
                    for (std::size_t i = r + sb; i < m; ++i)
                        for (std::size_t p = 0; p < chunks.size(); ++p) {
                            const auto [off, size] = chunks[p];
                            const word u = a.read_bits_lsb(i, c + off, size);
                            tabs[p].add_row(a, i, c, tabs[p].index_lsb[std::size_t(u)]);
                        }
                }
            }

            for (std::size_t t = 0; t < rb; ++t)
                if (r + t != c + t) {
                    a.swap_cols_from_row(r + t, c + t, r + t);
                    out.col_swaps.push_back({r + t, c + t, r + t});
                }
        }
        r += rb;
        c += kk;
    }
    out.rank = r;
    out.processed = m;
    return out;
}

inline PleOutcome recursive_ple(MatrixView a, const PleConfig& cfg = {}) {
    const std::size_t m = a.nrows(), n = a.ncols();
    if (n <= cfg.base_ncols || m * ((n + 7) / 8) <= cfg.base_bytes) {
        PleConfig base = cfg;
        base.k = cfg.base_k;
        return block_iterative_ple(a, base);
    }

    // split on a word boundary so the right half starts at a fresh word
    const std::size_t np = std::min(((n / 2 + 63) / 64) * 64, n - 1);

    PleOutcome out = recursive_ple(a.sub(0, 0, m, np), cfg);
    const std::size_t r1 = out.rank;

    out.p.apply(a.sub(0, np, m, n - np));
    if (r1 > 0) {
        trsm_lower_left_unit(a.sub(0, 0, r1, r1), a.sub(0, np, r1, n - np), cfg.mul);
        if (m > r1)
            addmul(a.sub(r1, np, m - r1, n - np), a.sub(r1, 0, m - r1, r1),
                   a.sub(0, np, r1, n - np), cfg.mul);
    }

    std::size_t r2 = 0;
    if (m > r1) {
        PleOutcome right = recursive_ple(a.sub(r1, np, m - r1, n - np), cfg);
        r2 = right.rank;
        right.p.apply(a.sub(r1, 0, m - r1, np));
        for (std::size_t i = 0; i < r2; ++i) {
            out.p.swaps.push_back(r1 + right.p.swaps[i]);
            out.q.push_back(np + right.q[i]);
        }
        for (const ColSwap& cs : right.col_swaps)
            out.col_swaps.push_back({np + cs.a, np + cs.b, r1 + cs.from_row});
        for (std::size_t t = 0; t < r2; ++t)
            if (r1 + t != np + t) {
                a.swap_cols_from_row(r1 + t, np + t, r1 + t);
                out.col_swaps.push_back({r1 + t, np + t, r1 + t});
            }
    }

    out.rank = r1 + r2;
    out.processed = m;
    return out;
}

// Replays the recorded compression swaps backwards, moving every column back
// to its original position.
inline void undo_column_swaps(MatrixView a, const std::vector<ColSwap>& swaps) {
    for (std::size_t i = swaps.size(); i-- > 0;)
        a.swap_cols_from_row(swaps[i].a, swaps[i].b, swaps[i].from_row);
}

namespace detail {

inline void check_pivots(const PleOutcome& out, std::size_t ncols) {
    std::size_t prev = 0;
    for (std::size_t j = 0; j < out.q.size(); ++j) {
        if (out.q[j] >= ncols || (j > 0 && out.q[j] <= prev))
            throw std::invalid_argument("pivot columns are not strictly increasing");
        prev = out.q[j];
    }
    if (out.q.size() != out.rank) throw std::invalid_argument("rank disagrees with pivot list");
}

inline void zero_below_pivots(MatrixView a, const PleOutcome& out) {
    for (std::size_t j = 0; j < out.rank; ++j)
        for (std::size_t i = j + 1; i < a.nrows(); ++i) a.set(i, out.q[j], false);
}

} // namespace detail

// Turns the in-place PLE result back into a row echelon form of the original
// matrix (reduced if `full`). rank rows on top, zero rows below.
inline void rref_from_ple(MatrixView a, const PleOutcome& out, bool full = true,
                          const MulConfig& mul = {}) {
    detail::check_pivots(out, a.ncols());
    undo_column_swaps(a, out.col_swaps);
    detail::zero_below_pivots(a, out);
    const std::size_t r = out.rank;
    if (!full || r == 0) return;
    BitMatrix u(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) u.set(i, j, a.get(i, out.q[j]));
    trsm_upper_left_unit(u.cview(), a.sub(0, 0, r, a.ncols()), mul);
}

// The unit lower triangular factor, one row per processed row.
inline BitMatrix extract_l(ConstMatrixView a, const PleOutcome& out) {
    BitMatrix l(out.processed, out.rank);
    for (std::size_t i = 0; i < out.processed; ++i) {
        const std::size_t cap = std::min(i, out.rank);
        for (std::size_t j = 0; j < cap; ++j) l.set(i, j, a.get(i, j));
        if (i < out.rank) l.set(i, i, true);
    }
    return l;
}

// The echelon factor, recovered by undoing the compression swaps on a copy.
inline BitMatrix extract_e(ConstMatrixView a, const PleOutcome& out) {
    BitMatrix work = copy_of(a);
    undo_column_swaps(work.view(), out.col_swaps);
    detail::zero_below_pivots(work.view(), out);
    BitMatrix e(out.rank, a.ncols());
    for (std::size_t i = 0; i < out.rank; ++i)
        detail::copy_range(e.row_words(i), 0, work.row_words(i), 0, a.ncols());
    return e;
}

// P * (L * E): reproduces the first `processed` rows of the original matrix.
inline BitMatrix ple_reconstruct(const PleOutcome& out, ConstMatrixView l, ConstMatrixView e) {
    BitMatrix prod = mul_naive(l, e);
    out.p.apply_inverse(prod.view());
    return prod;
}

// Straightforward word-at-a-time Gauss-Jordan; the reference the fast paths
// are checked against at runtime.
inline std::size_t naive_echelonize(MatrixView a, bool full = true) {
    const std::size_t m = a.nrows(), n = a.ncols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && !a.get(p, c)) ++p;
        if (p == m) continue;
        if (p != r) a.swap_rows(r, p);
        if (full) {
            for (std::size_t i = 0; i < m; ++i)
                if (i != r && a.get(i, c)) a.row_add_from(i, r, c);
        } else {
            for (std::size_t i = r + 1; i < m; ++i)
                if (a.get(i, c)) a.row_add_from(i, r, c);
        }
        ++r;
    }
    return r;
}

} // namespace gf2
