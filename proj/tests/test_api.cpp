#include "oracle.hpp"
#include "ratpoints/api.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace ratpoints;
using oracle::coeffs;

namespace {

struct Collected {
    SearchOutcome outcome;
    std::vector<RationalPoint> points;
};

Collected collect(SearchArgs& args)
{
    Collected c;
    c.outcome = find_points(args, [&](long x, long z, const mpz_class& y, bool&) {
        c.points.push_back({x, z, y, (args.flags & (NO_Y | NO_CHECK)) == 0});
        return 1L;
    });
    return c;
}

SearchArgs args_for(const oracle::Coeffs& c, long height)
{
    SearchArgs a;
    a.coefficients = c;
    a.height = height;
    return a;
}

} // namespace

TEST(Lifecycle, InitWorkClear)
{
    SearchArgs args = args_for(coeffs({0, -2, 0, 1}), 2);
    Session s = find_points_init(args);
    EXPECT_TRUE(s.active());
    EXPECT_GE(s.workspace_words(), static_cast<std::size_t>(kDefaultArraySize));
    long calls = 0;
    const SearchOutcome r = find_points_work(s, args, [&](long, long, const mpz_class&, bool&) {
        ++calls;
        return 1L;
    });
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.total, 6);
    EXPECT_EQ(calls, 6);
    find_points_clear(s);
    EXPECT_FALSE(s.active());
    EXPECT_THROW(find_points_clear(s), std::logic_error);
    EXPECT_THROW(find_points_work(s, args, [](long, long, const mpz_class&, bool&) { return 1L; }),
                 std::logic_error);
}

TEST(Lifecycle, SessionIsReusableAcrossCurves)
{
    std::mt19937_64 rng(89);
    SearchArgs shared = args_for(coeffs({1, 1}), 60);
    Session s = find_points_init(shared);
    for (int i = 0; i < 100; ++i) {
        SearchArgs args = shared;
        args.coefficients = oracle::random_squarefree(rng, 1 + i % 10, 15);
        args.degree = -1;
        std::vector<RationalPoint> got;
        const SearchOutcome r = find_points_work(s, args, [&](long x, long z, const mpz_class& y,
                                                              bool&) {
            got.push_back({x, z, y, true});
            return 1L;
        });
        ASSERT_TRUE(r.ok());
        oracle::Options opt;
        opt.height = 60;
        ASSERT_EQ(oracle::keys(got), oracle::points(args.coefficients, opt))
            << poly::to_string(args.coefficients);
    }
    find_points_clear(s);
}

TEST(Validation, BadArgsMakeNoCallbacks)
{
    auto expect_bad = [](SearchArgs args) {
        long calls = 0;
        const SearchOutcome r = find_points(args, [&](long, long, const mpz_class&, bool&) {
            ++calls;
            return 1L;
        });
        EXPECT_EQ(r.status, SearchStatus::BadArgs);
        EXPECT_EQ(calls, 0);
    };
    expect_bad(args_for(coeffs({1, 1}), 0));                 // height
    expect_bad(args_for(coeffs({5}), 10));                   // degree 0
    expect_bad(args_for(coeffs({0, 0, 0}), 10));             // zero polynomial
    expect_bad(args_for(oracle::Coeffs(12, 1), 10));         // degree 11
    SearchArgs short_list = args_for(coeffs({1, 1}), 10);
    short_list.degree = 4;
    expect_bad(short_list);
    SearchArgs backwards = args_for(coeffs({1, 0, 1}), 10);
    backwards.domain = {{3, 1}};
    expect_bad(backwards);
    SearchArgs many = args_for(coeffs({1, 0, 1}), 10);
    for (int i = 0; i < 11; ++i)
        many.domain.push_back({2.0 * i, 2.0 * i + 1});
    expect_bad(many);
}

TEST(Validation, DegreeTruncatesTheList)
{
    SearchArgs args = args_for(coeffs({0, -2, 0, 1, 7, 7}), 2);
    args.degree = 3;
    const Collected c = collect(args);
    ASSERT_TRUE(c.outcome.ok());
    EXPECT_EQ(c.points.size(), 6u);
}

TEST(Validation, NonSquarefree)
{
    const auto c = coeffs({1, 0, -2, 0, 1}); // (x^2 - 1)^2
    SearchArgs strict = args_for(c, 50);
    const Collected r = collect(strict);
    EXPECT_EQ(r.outcome.status, SearchStatus::NonSquarefree);
    EXPECT_TRUE(r.points.empty());

    // relaxed checking still searches, and finds everything
    SearchArgs relaxed = args_for(c, 50);
    relaxed.sturm = -1;
    const Collected s = collect(relaxed);
    ASSERT_TRUE(s.outcome.ok());
    oracle::Options opt;
    opt.height = 50;
    const auto expected = oracle::points(c, opt);
    const auto got = oracle::keys(s.points);
    EXPECT_TRUE(std::includes(got.begin(), got.end(), expected.begin(), expected.end()));

    // z^2 | F is rejected even without the Sturm analysis
    SearchArgs z_squared = args_for(coeffs({-2, 0, 1, 0}), 10);
    z_squared.sturm = -1;
    EXPECT_EQ(collect(z_squared).outcome.status, SearchStatus::NonSquarefree);
}

TEST(Reversal, IsTransparent)
{
    std::mt19937_64 rng(97);
    int reversed = 0;
    for (int i = 0; i < 80; ++i) {
        auto c = oracle::random_squarefree(rng, 2 + i % 9, 12);
        // square leading coefficient, usually non-square constant term: reversal pays off
        if (i % 2 == 0) {
            c.back() = 1;
            if (!oracle::form_squarefree(c))
                continue;
        }
        SearchArgs args = args_for(c, 100);
        const Collected on = collect(args);
        reversed += (args.flags & REVERSED) != 0;
        SearchArgs off_args = args_for(c, 100);
        off_args.flags = NO_REVERSE;
        const Collected off = collect(off_args);
        EXPECT_EQ(off_args.flags & REVERSED, 0u);
        oracle::Options opt;
        opt.height = 100;
        const auto expected = oracle::points(c, opt);
        ASSERT_EQ(oracle::keys(on.points), expected) << poly::to_string(c);
        ASSERT_EQ(oracle::keys(off.points), expected) << poly::to_string(c);
    }
    EXPECT_GT(reversed, 10);
}

TEST(Reversal, ReportsTheFlag)
{
    SearchArgs args = args_for(coeffs({3, 1, 0, 0, 0, 0, 1}), 10);
    collect(args);
    EXPECT_NE(args.flags & REVERSED, 0u);
    args.flags |= NO_REVERSE;
    collect(args);
    EXPECT_EQ(args.flags & REVERSED, 0u);
}

TEST(Domain, IntervalsRestrictTheSearch)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const auto c = coeffs({1, 0, 0, 1});
    for (const std::vector<Interval>& dom :
         {std::vector<Interval>{{0, 5}}, std::vector<Interval>{{-inf, -0.5}, {2, inf}},
          std::vector<Interval>{{-1, -1}, {0.25, 0.75}, {23, 23}}}) {
        SearchArgs args = args_for(c, 200);
        args.domain = dom;
        oracle::Options opt;
        opt.height = 200;
        for (const auto& iv : dom)
            opt.intervals.emplace_back(iv.low, iv.up);
        EXPECT_EQ(oracle::keys(collect(args).points), oracle::points(c, opt));
    }
}

TEST(Domain, DenominatorBounds)
{
    const auto c = coeffs({-3, 0, 0, 0, 0, 1});
    SearchArgs args = args_for(c, 200);
    args.b_low = 2;
    args.b_high = 9;
    oracle::Options opt;
    opt.height = 200;
    opt.b_low = 2;
    opt.b_high = 9;
    EXPECT_EQ(oracle::keys(collect(args).points), oracle::points(c, opt));
    SearchArgs integral = args_for(c, 200);
    integral.b_high = 1;
    opt.b_low = 1;
    opt.b_high = 1;
    EXPECT_EQ(oracle::keys(collect(integral).points), oracle::points(c, opt));
}

TEST(Parameters, OutOfRangeCountsAreClamped)
{
    const auto c = coeffs({1, 2, 3, 4, 5, 6, 7});
    oracle::Options opt;
    opt.height = 120;
    const auto expected = oracle::points(c, opt);
    for (long sp1 : {-5L, 0L, 40L})
        for (long sp2 : {-1L, 0L, 3L, 100L})
            for (long np : {-1L, 0L, 5L, 1000L}) {
                SearchArgs args = args_for(c, 120);
                args.sp1 = sp1;
                args.sp2 = sp2;
                args.num_primes = np;
                const Collected r = collect(args);
                ASSERT_TRUE(r.outcome.ok());
                ASSERT_EQ(oracle::keys(r.points), expected) << sp1 << ' ' << sp2 << ' ' << np;
            }
    for (int bits : {3, 5, 10, 12}) {
        SearchArgs args = args_for(c, 120);
        args.prime_bits = bits;
        args.num_primes = 1000;
        args.sp2 = 1000;
        ASSERT_EQ(oracle::keys(collect(args).points), expected) << bits;
    }
}

TEST(Flags, NoInfinityAndNoY)
{
    const auto c = coeffs({0, -2, 0, 1});
    SearchArgs args = args_for(c, 2);
    args.flags = NO_INFINITY;
    const Collected r = collect(args);
    for (const auto& p : r.points)
        EXPECT_NE(p.z, 0);
    EXPECT_EQ(r.points.size(), 5u);

    SearchArgs xo = args_for(c, 2);
    xo.flags = NO_Y;
    oracle::Options opt;
    opt.height = 2;
    opt.x_only = true;
    EXPECT_EQ(oracle::keys(collect(xo).points, true), oracle::points(c, opt));
}

TEST(Flags, NoInfinityAppliesInCallerCoordinates)
{
    // x^6 + x + 3 is searched reversed; its points at infinity are (1 : +-1 : 0)
    const auto c = coeffs({3, 1, 0, 0, 0, 0, 1});
    SearchArgs args = args_for(c, 50);
    const Collected all = collect(args);
    ASSERT_NE(args.flags & REVERSED, 0u);
    SearchArgs without = args_for(c, 50);
    without.flags = NO_INFINITY;
    const Collected finite = collect(without);
    EXPECT_EQ(all.points.size(), finite.points.size() + 2);
    for (const auto& p : finite.points)
        EXPECT_NE(p.z, 0);
}

TEST(Quit, FirstCallbackStopsTheSearch)
{
    SearchArgs args = args_for(coeffs({1, 0, 0, 1}), 1000);
    long calls = 0;
    const SearchOutcome r = find_points(args, [&](long, long, const mpz_class&, bool& quit) {
        ++calls;
        quit = true;
        return 1L;
    });
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(calls, 1);
    EXPECT_EQ(r.total, 1);
}

TEST(Verbose, NarratesToTheLog)
{
    std::ostringstream log;
    SearchArgs args = args_for(coeffs({3, 1, 0, 0, 0, 0, 1}), 20);
    args.flags = VERBOSE;
    args.log = &log;
    collect(args);
    EXPECT_NE(log.str().find("reversed"), std::string::npos);
    EXPECT_NE(log.str().find("sieving primes"), std::string::npos);
}
