// Public library surface: argument validation, preprocessing and the
// init / work / clear lifecycle around the search engine.

#pragma once

#include "ratpoints/arith.hpp"
#include "ratpoints/engine.hpp"
#include "ratpoints/poly.hpp"
#include "ratpoints/realroots.hpp"
#include "ratpoints/sieveprep.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ratpoints {

inline constexpr long kDefaultSp1 = 9;
inline constexpr long kDefaultSp2 = 16;
inline constexpr long kDefaultNumPrimes = 28;
inline constexpr long kDefaultMaxForbidden = 30;
inline constexpr long kDefaultSturm = 32;
inline constexpr long kDefaultArraySize = 256;
inline constexpr long kMaxArraySize = 1L << 20;
inline constexpr int kDefaultPrimeBits = 7;

/// Search parameters. Negative counts (and non-positive array_size, b_low,
/// b_high) select defaults; a negative `sturm` skips the real-root analysis.
struct SearchArgs {
    std::vector<mpz_class> coefficients; // constant term first
    long degree = -1;                    // negative: coefficients.size() - 1
    long height = 0;
    std::vector<Interval> domain;        // empty: the whole real line
    long b_low = 0;
    long b_high = 0;
    long sp1 = -1;
    long sp2 = -1;
    long array_size = 0;
    long sturm = kDefaultSturm;
    long num_primes = -1;
    long max_forbidden = -1;
    int prime_bits = kDefaultPrimeBits; // sieve with odd primes < 2^prime_bits, 5..10
    unsigned flags = 0;
    std::ostream* log = nullptr;        // VERBOSE narration; std::cerr if null

    long num_inter() const noexcept { return static_cast<long>(domain.size()); }
};

enum class SearchStatus { Ok, BadArgs, NonSquarefree };

struct SearchOutcome {
    SearchStatus status = SearchStatus::Ok;
    long total = 0; // sum of callback weights
    SearchStats stats;

    bool ok() const noexcept { return status == SearchStatus::Ok; }
};

/// Called once per point with the coordinates on the caller's curve.
/// Setting `quit` ends the search; the return value is the point's weight.
using PointCallback = std::function<long(long x, long z, const mpz_class& y, bool& quit)>;

/// Reusable working storage for a sequence of searches.
class Session {
public:
    Session() = default;

    bool active() const noexcept { return active_; }
    std::size_t workspace_words() const noexcept { return buffer_.capacity(); }

private:
    friend Session find_points_init(const SearchArgs& args);
    friend SearchOutcome find_points_work(Session& session, SearchArgs& args,
                                          const PointCallback& callback);
    friend void find_points_clear(Session& session);

    std::vector<std::uint64_t> buffer_;
    bool active_ = false;
};

namespace detail {

inline long or_default(long value, long fallback) { return value < 0 ? fallback : value; }

inline std::ostream& narration(const SearchArgs& args)
{
    return args.log != nullptr ? *args.log : std::cerr;
}

// Validates args; returns the form or reports the failure in `status`.
inline std::optional<BinaryForm> validated_form(const SearchArgs& args, SearchStatus& status)
{
    status = SearchStatus::BadArgs;
    const long degree = args.degree < 0 ? static_cast<long>(args.coefficients.size()) - 1
                                        : args.degree;
    if (degree <= 0 || degree > kMaxDegree || args.height <= 0)
        return std::nullopt;
    if (static_cast<long>(args.coefficients.size()) < degree + 1)
        return std::nullopt;
    if (args.num_inter() > kMaxDegree)
        return std::nullopt;
    for (const auto& iv : args.domain)
        if (!(iv.low <= iv.up))
            return std::nullopt;

    std::optional<BinaryForm> form;
    try {
        form.emplace(std::vector<mpz_class>(args.coefficients.begin(),
                                            args.coefficients.begin() + degree + 1));
    } catch (const BadArgs&) {
        return std::nullopt;
    }

    status = SearchStatus::NonSquarefree;
    // With sturm < 0 only the cheap check for a repeated factor z remains.
    if (args.sturm >= 0 ? !is_squarefree(*form)
                        : form->even_degree() - form->degree() >= 2)
        return std::nullopt;
    status = SearchStatus::Ok;
    return form;
}

// Maps a point of the reversed curve y^2 = F(z, x) back: (x : y : z) -> (z : y : x),
// with both x and z negated when needed to keep z >= 0 (F has even degree,
// so y is unchanged).
inline RationalPoint unreverse(const RationalPoint& pt)
{
    RationalPoint out = pt;
    if (pt.z == 0) {
        out.x = 0;
        out.z = 1;
    } else if (pt.x == 0) {
        out.x = 1;
        out.z = 0;
    } else if (pt.x > 0) {
        out.x = pt.z;
        out.z = pt.x;
    } else {
        out.x = -pt.z;
        out.z = -pt.x;
    }
    return out;
}

} // namespace detail

/// Allocates the sieve workspace; no curve-specific work happens here.
inline Session find_points_init(const SearchArgs& args)
{
    Session s;
    const long words = args.array_size > 0 ? std::min(args.array_size, kMaxArraySize)
                                           : kDefaultArraySize;
    s.buffer_.reserve(static_cast<std::size_t>(words));
    s.buffer_.resize(static_cast<std::size_t>(words));
    s.active_ = true;
    return s;
}

inline void find_points_clear(Session& session)
{
    if (!session.active_)
        throw std::logic_error("find_points_clear: session is not initialized");
    std::vector<std::uint64_t>().swap(session.buffer_);
    session.active_ = false;
}

/// Validates and normalizes `args`, decides on reversal (reported through
/// the REVERSED flag), builds the modular data and runs the search.
inline SearchOutcome find_points_work(Session& session, SearchArgs& args,
                                      const PointCallback& callback)
{
    if (!session.active_)
        throw std::logic_error("find_points_work: session is not initialized");

    SearchOutcome outcome;
    args.flags &= ~static_cast<unsigned>(REVERSED);
    const std::optional<BinaryForm> original = detail::validated_form(args, outcome.status);
    if (!original)
        return outcome;

    const bool verbose = (args.flags & VERBOSE) != 0;
    const long height = args.height;
    const long b_low = args.b_low <= 0 ? 1 : args.b_low;
    const long b_high = (args.b_high <= 0 || args.b_high > height) ? height : args.b_high;
    const bool unrestricted = args.domain.empty() && b_low == 1 && b_high == height;

    bool reversed = false;
    if ((args.flags & NO_REVERSE) == 0 && unrestricted && should_reverse(*original)) {
        reversed = true;
        args.flags |= REVERSED;
    }

    SearchPlan plan;
    plan.form = reversed ? reverse_form(*original) : *original;
    plan.cls = classify(plan.form);
    plan.height = height;
    plan.b_low = b_low;
    plan.b_high = b_high;
    plan.array_size = static_cast<std::size_t>(
        args.array_size > 0 ? std::min(args.array_size, kMaxArraySize) : kDefaultArraySize);
    // Infinity points are filtered below, in the caller's coordinates.
    plan.flags = args.flags & ~static_cast<unsigned>(NO_INFINITY | REVERSED);

    IntervalSet user = IntervalSet::whole_line();
    if (!args.domain.empty()) {
        user = IntervalSet(args.domain);
        plan.exact_domain = user;
    }
    const IntervalSet positive = args.sturm >= 0
        ? positivity_intervals(plan.form.univariate(), static_cast<int>(args.sturm))
        : IntervalSet::whole_line();
    plan.domain = intersect_domains(user, positive);

    const int bits = (args.prime_bits >= 5 && args.prime_bits <= 10) ? args.prime_bits
                                                                     : kDefaultPrimeBits;
    const std::vector<unsigned> primes = odd_primes_below(1u << bits);
    const PrimeCounts counts = clamp_prime_counts(
        static_cast<int>(detail::or_default(args.num_primes, kDefaultNumPrimes)),
        static_cast<int>(detail::or_default(args.sp2, kDefaultSp2)),
        static_cast<int>(detail::or_default(args.sp1, kDefaultSp1)),
        static_cast<int>(primes.size()));

    if (!plan.domain.empty()) {
        std::vector<PrimeSieveTable> candidates;
        for (int i = 0; i < counts.num_primes; ++i)
            candidates.emplace_back(plan.form, primes[static_cast<std::size_t>(i)]);
        const PrimeSelection sel = select_primes(candidates, counts.num_primes,
                                                 counts.sieve_primes, counts.stage1_primes);
        for (std::size_t i : sel.order)
            plan.tables.push_back(candidates[i]);
        plan.stage1 = sel.stage1;
        plan.local_obstruction = sel.local_obstruction;
        plan.forbidden = forbidden_divisors(
            plan.form, primes,
            static_cast<int>(detail::or_default(args.max_forbidden, kDefaultMaxForbidden)));
        plan.mod16 = mod16_analysis(plan.form);
    }

    if (verbose) {
        std::ostream& log = detail::narration(args);
        log << "curve: y^2 = " << poly::to_string(original->univariate()) << '\n';
        if (reversed)
            log << "searching on the reversed polynomial y^2 = "
                << poly::to_string(plan.form.univariate()) << '\n';
        log << "denominator class: " << to_string(plan.cls) << '\n';
        log << "search domain:";
        if (plan.domain.empty())
            log << " empty (f is negative definite)";
        for (const auto& iv : plan.domain)
            log << " [" << iv.low << ", " << iv.up << "]";
        log << '\n';
        log << "sieving primes:";
        for (std::size_t i = 0; i < plan.tables.size(); ++i)
            log << (i == plan.stage1 ? " |" : "") << ' ' << plan.tables[i].prime();
        log << '\n';
        if (!plan.forbidden.empty()) {
            log << "forbidden divisors:";
            for (long f : plan.forbidden)
                log << ' ' << f;
            log << '\n';
        }
        if (plan.local_obstruction)
            log << "no points modulo some sieving prime\n";
    }

    const bool no_infinity = (args.flags & NO_INFINITY) != 0;
    const PointSink sink = [&](const RationalPoint& raw, bool& quit) -> long {
        const RationalPoint pt = reversed ? detail::unreverse(raw) : raw;
        if (no_infinity && pt.z == 0)
            return 0;
        return callback(pt.x, pt.z, pt.y, quit);
    };
    outcome.total = search<std::uint64_t>(plan, sink, outcome.stats, session.buffer_);

    if (verbose)
        detail::narration(args) << "denominators sieved: " << outcome.stats.denominators_sieved
                                << ", exact checks: " << outcome.stats.exact_checks << '\n';
    return outcome;
}

/// init, work and clear in one call.
inline SearchOutcome find_points(SearchArgs& args, const PointCallback& callback)
{
    Session session = find_points_init(args);
    SearchOutcome outcome = find_points_work(session, args, callback);
    find_points_clear(session);
    return outcome;
}

} // namespace ratpoints
