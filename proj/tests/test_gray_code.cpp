#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "gf2/gray_code.hpp"
#include "gf2/op_count.hpp"
#include "oracles.hpp"

using namespace gf2;

namespace {

BitMatrix parse_rows(const std::vector<std::string>& rows) {
    BitMatrix a(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            if (rows[i][j] == '1') a.set(i, j, true);
    return a;
}

// the combination a table row is supposed to hold, as an explicit XOR
BitMatrix combo(ConstMatrixView src, std::size_t r0, unsigned k, std::size_t span_col,
                word coeff_msb) {
    BitMatrix acc(1, src.ncols() - span_col);
    for (unsigned j = 0; j < k; ++j)
        if ((coeff_msb >> (k - 1 - j)) & 1)
            for (std::size_t c = span_col; c < src.ncols(); ++c)
                if (src.get(r0 + j, c)) acc.set(0, c - span_col, !acc.get(0, c - span_col));
    return acc;
}

bool table_row_equals(const GrayTables& g, std::size_t tr, ConstMatrixView want) {
    for (std::size_t c = 0; c < g.span_bits; ++c) {
        const std::size_t pos = g.lead_bits + c;
        const bool bit = (g.t.row_words(tr)[pos >> 6] >> (pos & 63)) & 1;
        if (bit != want.get(0, c)) return false;
    }
    return true;
}

TEST(GrayCode, SequenceBasics) {
    EXPECT_EQ(gray_code(0), 0u);
    EXPECT_EQ(gray_code(1), 1u);
    EXPECT_EQ(gray_code(2), 3u);
    EXPECT_EQ(gray_flip_bit(1), 0u);
    EXPECT_EQ(gray_flip_bit(2), 1u);
    for (std::uint64_t t = 0; t < 256; ++t) EXPECT_EQ(gray_inverse(gray_code(t)), t);
}

TEST(GrayCode, EachStepFlipsOneBitAndVisitsAll) {
    const unsigned k = 6;
    std::set<std::uint64_t> seen;
    seen.insert(gray_code(0));
    for (std::uint64_t step = 1; step < (1u << k); ++step) {
        const std::uint64_t diff = gray_code(step) ^ gray_code(step - 1);
        EXPECT_EQ(diff, std::uint64_t(1) << gray_flip_bit(step));
        seen.insert(gray_code(step));
    }
    EXPECT_EQ(seen.size(), std::size_t(1) << k);
}

TEST(MakeTable, SingleRow) {
    BitMatrix src(1, 40);
    fill_random(src.view(), 0.5, 9);
    GrayTables g = make_table(src.cview(), 0, 1, 0, 0, false);
    BitMatrix zero(1, 40);
    EXPECT_TRUE(table_row_equals(g, 0, zero.cview()));
    EXPECT_TRUE(table_row_equals(g, 1, src.cview()));
    EXPECT_EQ(g.coeff_index_lsb[0], 0u);
    EXPECT_EQ(g.coeff_index_lsb[1], 1u);
}

TEST(MakeTable, AllCombinationsByBruteForce) {
    BitMatrix src(4, 70);
    fill_random(src.view(), 0.5, 33);
    GrayTables g = make_table(src.cview(), 0, 4, 0, 0, false);
    for (word v = 0; v < 16; ++v) {
        BitMatrix want = combo(src.cview(), 0, 4, 0, v);
        const std::size_t tr = g.coeff_index_lsb[detail::bit_reverse(v, 4)];
        EXPECT_TRUE(table_row_equals(g, tr, want.cview())) << "v=" << v;
    }
}

TEST(MakeTable, GrayNeighborsDifferByOneSourceRow) {
    BitMatrix src(5, 33);
    fill_random(src.view(), 0.5, 77);
    GrayTables g = make_table(src.cview(), 0, 5, 0, 0, false);
    for (std::size_t tr = 1; tr < 32; ++tr) {
        BitMatrix diff(1, 33);
        for (std::size_t c = 0; c < 33; ++c) {
            const std::size_t pos = g.lead_bits + c;
            const bool a = (g.t.row_words(tr)[pos >> 6] >> (pos & 63)) & 1;
            const bool b = (g.t.row_words(tr - 1)[pos >> 6] >> (pos & 63)) & 1;
            diff.set(0, c, a != b);
        }
        bool matched = false;
        for (std::size_t r = 0; r < 5; ++r)
            matched |= equal(diff.cview(), src.cview().sub(r, 0, 1, 33));
        EXPECT_TRUE(matched) << "step " << tr;
    }
}

TEST(MakeTable, ExactlyTwoToTheKMinusOneAdditions) {
    for (unsigned k = 1; k <= 8; ++k) {
        BitMatrix src(k, 100);
        fill_random(src.view(), 0.5, 100 + k);
        ops::reset_row_additions();
        GrayTables g = make_table(src.cview(), 0, k, 0, 0, false);
        EXPECT_EQ(ops::row_additions(), (std::uint64_t(1) << k) - 1) << "k=" << k;
        (void)g;
    }
}

TEST(MakeTable, IndexLookupOnFullRankBlock) {
    // for a block with independent index columns, T[L[v]] carries v in those
    // columns, for every v
    for (unsigned k = 1; k <= 8; ++k) {
        BitMatrix src(k, 40);
        fill_random(src.view(), 0.5, 500 + k);
        for (unsigned j = 0; j < k; ++j) {
            for (unsigned c = 0; c < k; ++c) src.set(j, c, c == j); // force identity index
        }
        GrayTables g = make_table(src.cview(), 0, k, 0, 0, true);
        for (word v = 0; v < (word(1) << k); ++v) {
            const std::size_t tr = g.index_msb[v];
            word got = 0;
            for (unsigned c = 0; c < k; ++c) {
                const std::size_t pos = g.lead_bits + c;
                got |= word((g.t.row_words(tr)[pos >> 6] >> (pos & 63)) & 1) << (k - 1 - c);
            }
            EXPECT_EQ(got, v);
        }
    }
}

TEST(MakeTable, DependentIndexColumnsThrow) {
    BitMatrix src(2, 10);
    src.set(0, 0, true);
    src.set(1, 0, true); // index columns 0..1 have rank 1
    EXPECT_THROW(make_table(src.cview(), 0, 2, 0, 0, true), std::invalid_argument);
    EXPECT_NO_THROW(make_table(src.cview(), 0, 2, 0, 0, false));
}

TEST(MakeTable, RejectsBadK) {
    BitMatrix src(4, 10);
    EXPECT_THROW(make_table(src.cview(), 0, 0, 0, 0, false), std::invalid_argument);
    EXPECT_THROW(make_table(src.cview(), 0, 21, 0, 0, false), std::invalid_argument);
}

// a full 8-row table over three pivot rows, checked entry by entry
TEST(MakeTable, EightRowTableFixture) {
    BitMatrix src = parse_rows({
        "10010111",
        "01011110",
        "00100111",
    });
    const char* want[8] = {
        "00000000",
        "00100111",
        "01011110",
        "01111001",
        "10010111",
        "10110000",
        "11001001",
        "11101110",
    };
    GrayTables g = make_table(src.cview(), 0, 3, 0, 0, true);
    for (word v = 0; v < 8; ++v) {
        BitMatrix row(1, 8);
        for (std::size_t c = 0; c < 8; ++c)
            if (want[v][c] == '1') row.set(0, c, true);
        EXPECT_TRUE(table_row_equals(g, g.index_msb[v], row.cview())) << "table row " << v;
    }
}

// the worked multiplier-table example: a table row that clears [1 0 1] using
// source row 0 alone must, after postprocessing, leave [1 0 0] behind
TEST(AddCoefficientBits, WorkedExample) {
    BitMatrix src = parse_rows({
        "10110010",
        "01101100",
        "00111010",
    });
    GrayTables g = make_table(src.cview(), 0, 3, 0, 0, true);
    add_coefficient_bits(g, 0);

    const std::size_t tr = g.index_msb[5]; // rows beginning [1 0 1]
    BitMatrix expect(1, 8);
    // row 0 with its own index bits [1 0 1] xor coefficient [1 0 0]
    for (std::size_t c = 0; c < 8; ++c) expect.set(0, c, src.get(0, c));
    expect.set(0, 0, false);
    EXPECT_TRUE(table_row_equals(g, tr, expect.cview()));

    BitMatrix a = parse_rows({"10100111"});
    g.add_row(a.view(), 0, 0, tr);
    EXPECT_TRUE(a.get(0, 0));
    EXPECT_FALSE(a.get(0, 1));
    EXPECT_FALSE(a.get(0, 2)); // multiplier bits [1 0 0]
    for (std::size_t c = 3; c < 8; ++c)
        EXPECT_EQ(a.get(0, c), src.get(0, c) != (c >= 3 && "10100111"[c] == '1'));
}

TEST(AddRow, SkipsZeroCombination) {
    BitMatrix src(3, 20);
    fill_random(src.view(), 0.5, 4);
    GrayTables g = make_table(src.cview(), 0, 3, 0, 0, false);
    BitMatrix a(1, 20);
    fill_random(a.view(), 0.5, 5);
    BitMatrix before = a;
    ops::reset_row_additions();
    g.add_row(a.view(), 0, 0, 0);
    EXPECT_EQ(a, before);
    EXPECT_EQ(ops::row_additions(), 0u);
}

TEST(AddRow, FromColumnRestrictsTheXor) {
    BitMatrix src(2, 50);
    fill_random(src.view(), 0.6, 6);
    GrayTables g = make_table(src.cview(), 0, 2, 0, 0, false);
    BitMatrix a(1, 50);
    fill_random(a.view(), 0.5, 7);
    BitMatrix want = a;
    g.add_row(a.view(), 0, 0, 10, g.coeff_index_lsb[3]);
    for (std::size_t c = 10; c < 50; ++c)
        want.set(0, c, want.get(0, c) != (src.get(0, c) != src.get(1, c)));
    EXPECT_EQ(a, want);
}

TEST(SplitTables, ChunkShapes) {
    auto one = split_tables(8, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0], std::make_pair(0u, 8u));

    auto four = split_tables(8, 4);
    ASSERT_EQ(four.size(), 4u);
    for (unsigned p = 0; p < 4; ++p) EXPECT_EQ(four[p], std::make_pair(2u * p, 2u));

    auto uneven = split_tables(7, 2);
    ASSERT_EQ(uneven.size(), 2u);
    EXPECT_EQ(uneven[0], std::make_pair(0u, 4u));
    EXPECT_EQ(uneven[1], std::make_pair(4u, 3u));

    auto clamped = split_tables(3, 8); // more parts than bits
    ASSERT_EQ(clamped.size(), 3u);
    EXPECT_THROW(split_tables(4, 0), std::invalid_argument);
}

// chunked lookups must land on the same result as one big table
TEST(SplitTables, MultiTableEliminationMatchesSingle) {
    const unsigned k = 6;
    BitMatrix a(32, 64);
    fill_random(a.view(), 0.5, 90);
    for (unsigned j = 0; j < k; ++j)
        for (unsigned c = 0; c < k; ++c) a.set(j, c, c == j); // unit pivot block

    BitMatrix single = a, multi = a;
    {
        GrayTables g = make_table(single.cview(), 0, k, 0, 0, true);
        for (std::size_t i = k; i < 32; ++i) {
            const word v = single.view().read_bits_lsb(i, 0, k);
            g.add_row(single.view(), i, 0, g.index_lsb[std::size_t(v)]);
        }
    }
    {
        std::vector<GrayTables> tabs;
        const auto chunks = split_tables(k, 2);
        for (const auto& [off, size] : chunks)
            tabs.push_back(make_table(multi.cview(), off, size, 0, off, true));
        for (std::size_t i = k; i < 32; ++i)
            for (std::size_t p = 0; p < chunks.size(); ++p) {
                const auto [off, size] = chunks[p];
                const word v = multi.view().read_bits_lsb(i, off, size);
                tabs[p].add_row(multi.view(), i, 0, tabs[p].index_lsb[std::size_t(v)]);
            }
    }
    EXPECT_EQ(single, multi);
    for (std::size_t i = k; i < 32; ++i)
        for (unsigned c = 0; c < k; ++c) EXPECT_FALSE(single.get(i, c));
}

TEST(PickTableBits, HeuristicBounds) {
    EXPECT_EQ(pick_table_bits(1, 0.75), 1u);
    EXPECT_EQ(pick_table_bits(2, 0.75), 1u);
    EXPECT_GE(pick_table_bits(4096, 0.75), 8u);
    EXPECT_LE(pick_table_bits(std::size_t(1) << 40, 0.75), 16u);
}

// a second elimination pass over already-cleared rows must change nothing
TEST(Elimination, IdempotentOnClearedRows) {
    const unsigned k = 4;
    BitMatrix a(20, 40);
    fill_random(a.view(), 0.5, 55);
    for (unsigned j = 0; j < k; ++j)
        for (unsigned c = 0; c < k; ++c) a.set(j, c, c == j);
    GrayTables g = make_table(a.cview(), 0, k, 0, 0, true);
    for (std::size_t i = k; i < 20; ++i) {
        const word v = a.view().read_bits_lsb(i, 0, k);
        g.add_row(a.view(), i, 0, g.index_lsb[std::size_t(v)]);
    }
    BitMatrix once = a;
    for (std::size_t i = k; i < 20; ++i) {
        const word v = a.view().read_bits_lsb(i, 0, k);
        g.add_row(a.view(), i, 0, g.index_lsb[std::size_t(v)]);
    }
    EXPECT_EQ(a, once);
}

} // namespace
