#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gf2/multiply.hpp"
#include "oracles.hpp"

using namespace gf2;

namespace {

BitMatrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                        double density = 0.5) {
    BitMatrix a(m, n);
    fill_random(a.view(), density, seed);
    return a;
}

TEST(MulNaive, IdentityAndZero) {
    BitMatrix b = random_matrix(9, 31, 1);
    BitMatrix c = mul_naive(BitMatrix::identity(9).cview(), b.cview());
    EXPECT_EQ(c, b);

    BitMatrix z(5, 9);
    BitMatrix zc = mul_naive(z.cview(), b.cview());
    EXPECT_EQ(zc.cview().popcount(), 0u);
}

TEST(MulNaive, ExhaustiveThreeByThree) {
    BitMatrix b = random_matrix(3, 3, 99);
    oracle::BoolMat ob = oracle::from_view(b.cview());
    for (unsigned bits = 0; bits < 512; ++bits) {
        BitMatrix a(3, 3);
        for (unsigned t = 0; t < 9; ++t)
            if ((bits >> t) & 1) a.set(t / 3, t % 3, true);
        BitMatrix c = mul_naive(a.cview(), b.cview());
        oracle::BoolMat want = oracle::multiply(oracle::from_view(a.cview()), ob);
        ASSERT_TRUE(oracle::equal(want, c.cview())) << "A bits " << bits;
    }
}

TEST(MulNaive, MatchesEntryOracleOnOddShapes) {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t m = 1 + rng() % 40, l = 1 + rng() % 40, n = 1 + rng() % 40;
        BitMatrix a = random_matrix(m, l, rng());
        BitMatrix b = random_matrix(l, n, rng());
        BitMatrix c = mul_naive(a.cview(), b.cview());
        oracle::BoolMat want =
            oracle::multiply(oracle::from_view(a.cview()), oracle::from_view(b.cview()));
        ASSERT_TRUE(oracle::equal(want, c.cview()));
    }
}

TEST(MulNaive, DimensionMismatchThrows) {
    BitMatrix a(3, 4), b(5, 2), c(3, 2);
    EXPECT_THROW(mul_naive(c.view(), a.cview(), b.cview()), std::invalid_argument);
}

TEST(M4rm, IdentityLeavesB) {
    BitMatrix b = random_matrix(17, 90, 2);
    for (unsigned k : {1u, 2u, 5u}) {
        MulConfig cfg;
        cfg.m4rm_k = k;
        BitMatrix c(17, 90);
        mul_m4rm(c.view(), BitMatrix::identity(17).cview(), b.cview(), cfg);
        EXPECT_EQ(c, b) << "k=" << k;
    }
}

TEST(M4rm, KOneEqualsNaive) {
    BitMatrix a = random_matrix(33, 65, 3);
    BitMatrix b = random_matrix(65, 40, 4);
    MulConfig cfg;
    cfg.m4rm_k = 1;
    BitMatrix c(33, 40);
    mul_m4rm(c.view(), a.cview(), b.cview(), cfg);
    EXPECT_EQ(c, mul_naive(a.cview(), b.cview()));
}

TEST(M4rm, KAndTableGrid) {
    BitMatrix a = random_matrix(96, 96, 5);
    BitMatrix b = random_matrix(96, 96, 6);
    BitMatrix want = mul_naive(a.cview(), b.cview());
    for (unsigned k : {2u, 4u, 8u})
        for (unsigned t : {1u, 4u}) {
            MulConfig cfg;
            cfg.m4rm_k = k;
            cfg.table_count = t;
            BitMatrix c(96, 96);
            mul_m4rm(c.view(), a.cview(), b.cview(), cfg);
            EXPECT_EQ(c, want) << "k=" << k << " t=" << t;
        }
}

TEST(M4rm, AccumulatesIntoC) {
    BitMatrix a = random_matrix(20, 30, 8);
    BitMatrix b = random_matrix(30, 50, 9);
    BitMatrix c = random_matrix(20, 50, 10);
    BitMatrix want = c;
    want.view().xor_from(mul_naive(a.cview(), b.cview()).cview());
    addmul_m4rm(c.view(), a.cview(), b.cview(), {});
    EXPECT_EQ(c, want);
}

TEST(M4rm, MisalignedViewsFallBackCorrectly) {
    BitMatrix abase = random_matrix(25, 120, 11);
    BitMatrix bbase = random_matrix(40, 130, 12);
    ConstMatrixView a = abase.cview().sub(1, 7, 20, 33);
    ConstMatrixView b = bbase.cview().sub(2, 19, 33, 44);
    BitMatrix cbase(30, 90);
    MatrixView c = cbase.view().sub(3, 5, 20, 44);
    mul_m4rm(c, a, b, {});
    oracle::BoolMat want = oracle::multiply(oracle::from_view(a), oracle::from_view(b));
    EXPECT_TRUE(oracle::equal(want, c));
}

TEST(Strassen, IdentityAnySize) {
    BitMatrix b = random_matrix(130, 130, 13);
    MulConfig cfg;
    cfg.strassen_cutoff = 64;
    BitMatrix c = mul_strassen(BitMatrix::identity(130).cview(), b.cview(), cfg);
    EXPECT_EQ(c, b);
}

TEST(Strassen, BelowCutoffDelegates) {
    BitMatrix a = random_matrix(60, 60, 14);
    BitMatrix b = random_matrix(60, 60, 15);
    MulConfig cfg;
    cfg.strassen_cutoff = 64;
    BitMatrix viaStrassen = mul_strassen(a.cview(), b.cview(), cfg);
    BitMatrix viaTables(60, 60);
    mul_m4rm(viaTables.view(), a.cview(), b.cview(), cfg);
    EXPECT_EQ(viaStrassen, viaTables);
}

TEST(Strassen, OddDimensionsAboveCutoff) {
    BitMatrix a = random_matrix(300, 301, 16);
    BitMatrix b = random_matrix(301, 299, 17);
    MulConfig cfg;
    cfg.strassen_cutoff = 128;
    BitMatrix c = mul_strassen(a.cview(), b.cview(), cfg);
    EXPECT_EQ(c, mul_naive(a.cview(), b.cview()));
}

TEST(Strassen, CutoffGridAgreesWithNaive) {
    std::mt19937_64 rng(18);
    for (std::size_t cutoff : {std::size_t(64), std::size_t(128)}) {
        for (int rep = 0; rep < 4; ++rep) {
            const std::size_t m = 100 + rng() % 160;
            const std::size_t l = 100 + rng() % 160;
            const std::size_t n = 100 + rng() % 160;
            BitMatrix a = random_matrix(m, l, rng());
            BitMatrix b = random_matrix(l, n, rng());
            MulConfig cfg;
            cfg.strassen_cutoff = cutoff;
            BitMatrix c = mul_strassen(a.cview(), b.cview(), cfg);
            ASSERT_EQ(c, mul_naive(a.cview(), b.cview()))
                << m << "x" << l << "x" << n << " cutoff " << cutoff;
        }
    }
}

// square / wide / tall / single dimension / word-boundary shapes, all backends
TEST(Backends, ShapeClassSweep) {
    struct Shape {
        std::size_t m, l, n;
    };
    const Shape shapes[] = {
        {40, 40, 40},  {20, 90, 25},  {90, 20, 85}, {1, 50, 30},  {30, 1, 50},
        {50, 30, 1},   {63, 64, 65},  {64, 65, 63}, {65, 63, 64}, {127, 128, 129},
        {128, 129, 127},
    };
    std::mt19937_64 rng(19);
    for (const Shape& s : shapes) {
        for (int rep = 0; rep < 9; ++rep) {
            BitMatrix a = random_matrix(s.m, s.l, rng());
            BitMatrix b = random_matrix(s.l, s.n, rng());
            BitMatrix want = mul_naive(a.cview(), b.cview());

            MulConfig cfg;
            cfg.m4rm_k = 1 + rep % 8;
            cfg.table_count = (rep % 2) ? 4 : 1;
            BitMatrix viaTables(s.m, s.n);
            mul_m4rm(viaTables.view(), a.cview(), b.cview(), cfg);
            ASSERT_EQ(viaTables, want) << s.m << "x" << s.l << "x" << s.n;

            cfg.strassen_cutoff = 64;
            ASSERT_EQ(mul_strassen(a.cview(), b.cview(), cfg), want);

            ASSERT_EQ(mul(a.cview(), b.cview(), cfg), want);
        }
    }
}

TEST(Backends, Associativity) {
    std::mt19937_64 rng(20);
    for (int rep = 0; rep < 10; ++rep) {
        BitMatrix a = random_matrix(40, 40, rng());
        BitMatrix b = random_matrix(40, 40, rng());
        BitMatrix c = random_matrix(40, 40, rng());
        MulConfig cfg;
        cfg.strassen_cutoff = 64;
        BitMatrix ab_c = mul_strassen(mul_strassen(a.cview(), b.cview(), cfg).cview(),
                                      c.cview(), cfg);
        BitMatrix a_bc = mul_naive(a.cview(), mul_naive(b.cview(), c.cview()).cview());
        ASSERT_EQ(ab_c, a_bc);
    }
}

TEST(Trsm, LowerIdentityAndHandCase) {
    BitMatrix b = random_matrix(2, 33, 21);
    BitMatrix keep = b;
    trsm_lower_left_unit(BitMatrix::identity(2).cview(), b.view());
    EXPECT_EQ(b, keep);

    BitMatrix l(2, 2);
    l.set(0, 0, true);
    l.set(1, 0, true);
    l.set(1, 1, true);
    trsm_lower_left_unit(l.cview(), b.view());
    for (std::size_t c = 0; c < 33; ++c) {
        EXPECT_EQ(b.get(0, c), keep.get(0, c));
        EXPECT_EQ(b.get(1, c), keep.get(0, c) != keep.get(1, c));
    }
}

TEST(Trsm, UpperIdentityAndHandCase) {
    BitMatrix b = random_matrix(2, 20, 22);
    BitMatrix keep = b;
    trsm_upper_left_unit(BitMatrix::identity(2).cview(), b.view());
    EXPECT_EQ(b, keep);

    BitMatrix u(2, 2);
    u.set(0, 0, true);
    u.set(0, 1, true);
    u.set(1, 1, true);
    trsm_upper_left_unit(u.cview(), b.view());
    for (std::size_t c = 0; c < 20; ++c) {
        EXPECT_EQ(b.get(0, c), keep.get(0, c) != keep.get(1, c));
        EXPECT_EQ(b.get(1, c), keep.get(1, c));
    }
}

TEST(Trsm, MultiplyBackRoundTrip) {
    std::mt19937_64 rng(23);
    for (std::size_t r : {std::size_t(16), std::size_t(64), std::size_t(90), std::size_t(200)}) {
        BitMatrix l(r, r), u(r, r);
        for (std::size_t i = 0; i < r; ++i) {
            l.set(i, i, true);
            u.set(i, i, true);
            for (std::size_t j = 0; j < i; ++j) {
                if (rng() & 1) l.set(i, j, true);
                if (rng() & 1) u.set(j, i, true);
            }
        }
        BitMatrix b = random_matrix(r, 77, rng());
        BitMatrix x = b;
        trsm_lower_left_unit(l.cview(), x.view());
        EXPECT_EQ(mul_naive(l.cview(), x.cview()), b) << "lower r=" << r;

        BitMatrix y = b;
        trsm_upper_left_unit(u.cview(), y.view());
        EXPECT_EQ(mul_naive(u.cview(), y.cview()), b) << "upper r=" << r;
    }
}

TEST(Trsm, IgnoresTheOtherTriangle) {
    // space-shared inputs carry junk in the unused triangle
    BitMatrix l = random_matrix(40, 40, 24, 1.0); // ones everywhere
    BitMatrix clean(40, 40);
    for (std::size_t i = 0; i < 40; ++i) {
        clean.set(i, i, true);
        for (std::size_t j = 0; j < i; ++j) clean.set(i, j, true);
    }
    BitMatrix b = random_matrix(40, 21, 25);
    BitMatrix viaShared = b, viaClean = b;
    trsm_lower_left_unit(l.cview(), viaShared.view());
    trsm_lower_left_unit(clean.cview(), viaClean.view());
    EXPECT_EQ(viaShared, viaClean);
}

} // namespace
