#include "ratpoints/arith.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace ratpoints;

TEST(PerfectSquare, Examples)
{
    EXPECT_EQ(is_perfect_square(mpz_class(144)), mpz_class(12));
    EXPECT_FALSE(is_perfect_square(mpz_class(145)));
    EXPECT_EQ(is_perfect_square(mpz_class(0)), mpz_class(0));
    EXPECT_FALSE(is_perfect_square(mpz_class(-4)));
    EXPECT_EQ(is_perfect_square(mpz_class(1)), mpz_class(1));
}

TEST(PerfectSquare, AgreesWithIntegerSqrtOnRandom256BitValues)
{
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(20240517);
    for (int i = 0; i < 10000; ++i) {
        mpz_class n = rng.get_z_bits(256);
        if (i % 3 == 0)
            n = n / (mpz_class(1) << 128), n *= n; // make a good share of squares
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        const auto got = is_perfect_square(n);
        if (r * r == n) {
            ASSERT_TRUE(got) << n;
            ASSERT_EQ(*got, r);
        } else {
            ASSERT_FALSE(got) << n;
        }
    }
}

TEST(BinaryGcd, Examples)
{
    EXPECT_EQ(binary_gcd(12, 18), 6u);
    EXPECT_EQ(binary_gcd(0, 5), 5u);
    EXPECT_EQ(binary_gcd(-7, 7), 7u);
    EXPECT_EQ(binary_gcd(0, 0), 0u);
    EXPECT_EQ(binary_gcd(5, 0), 5u);
}

TEST(BinaryGcd, AgreesWithEuclid)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> sa(-(1LL << 40), 1LL << 40);
    std::uniform_int_distribution<std::uint64_t> sb(0, 1ULL << 40);
    for (int i = 0; i < 10000; ++i) {
        const std::int64_t a = sa(rng) * (i % 5 == 0 ? 12 : 1);
        const std::uint64_t b = sb(rng) * (i % 5 == 0 ? 18 : 1);
        const auto expected = static_cast<std::uint64_t>(std::gcd(a, static_cast<std::int64_t>(b)));
        ASSERT_EQ(binary_gcd(a, b), expected) << a << ' ' << b;
    }
}

TEST(Jacobi, Examples)
{
    EXPECT_EQ(jacobi(2, 7), 1);
    EXPECT_EQ(jacobi(5, 7), -1);
    EXPECT_EQ(jacobi(1, 9), 1);
    EXPECT_EQ(jacobi(3, 9), 0);
    EXPECT_EQ(jacobi(-1, 7), -1);
    EXPECT_EQ(jacobi(-1, 5), 1);
}

TEST(Jacobi, RejectsBadModulus)
{
    EXPECT_THROW(jacobi(3, 8), std::invalid_argument);
    EXPECT_THROW(jacobi(3, 0), std::invalid_argument);
    EXPECT_THROW(jacobi(3, -3), std::invalid_argument);
    EXPECT_THROW(jacobi_word(3, 4), std::invalid_argument);
}

TEST(Jacobi, MatchesLegendreByExhaustiveSquaring)
{
    for (unsigned p = 3; p < 200; p += 2) {
        bool prime = true;
        for (unsigned d = 3; d * d <= p; d += 2)
            prime = prime && p % d != 0;
        if (!prime)
            continue;
        std::vector<int> legendre(p, -1);
        legendre[0] = 0;
        for (unsigned s = 1; s < p; ++s)
            legendre[s * s % p] = 1;
        for (unsigned a = 0; a < p; ++a) {
            ASSERT_EQ(jacobi(mpz_class(a), mpz_class(p)), legendre[a]) << a << '/' << p;
            ASSERT_EQ(jacobi_word(a, p), legendre[a]) << a << '/' << p;
            // shifted by multiples of p, including negative representatives
            ASSERT_EQ(jacobi(mpz_class(a) + 5 * p, mpz_class(p)), legendre[a]);
            ASSERT_EQ(jacobi(mpz_class(a) - 3 * p, mpz_class(p)), legendre[a]);
        }
    }
}

TEST(Jacobi, IsMultiplicativeInTheModulus)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> sa(-100000, 100000);
    std::uniform_int_distribution<unsigned long> sm(0, 5000);
    for (int i = 0; i < 5000; ++i) {
        const mpz_class a = sa(rng);
        const mpz_class m = 2 * sm(rng) + 1;
        const mpz_class n = 2 * sm(rng) + 1;
        ASSERT_EQ(jacobi(a, m * n), jacobi(a, m) * jacobi(a, n)) << a << ' ' << m << ' ' << n;
        ASSERT_EQ(jacobi(a, m), mpz_jacobi(a.get_mpz_t(), m.get_mpz_t()));
    }
}

TEST(ResidueTracker, Examples)
{
    ResidueTracker t(7, 5);
    EXPECT_EQ(t.advance(3), 1u);
    ResidueTracker z(7, 0);
    EXPECT_EQ(z.advance(0), 0u);
    ResidueTracker three(3, 2);
    EXPECT_EQ(three.advance(4), 0u);
}

TEST(ResidueTracker, FollowsRunningSum)
{
    std::mt19937_64 rng(3);
    for (std::uint64_t p : {3u, 5u, 7u, 127u, 1021u}) {
        std::uniform_int_distribution<std::uint64_t> step(0, 10 * p);
        ResidueTracker t(p, 0);
        std::uint64_t sum = 0;
        for (int i = 0; i < 2000; ++i) {
            const std::uint64_t d = step(rng);
            sum += d;
            ASSERT_EQ(t.advance(d), sum % p);
            ASSERT_LT(t.current(), p);
        }
    }
}
