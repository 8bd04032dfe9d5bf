// Exact Sturm sequences and the search-domain intervals derived from them.

#pragma once

#include "ratpoints/poly.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace ratpoints {

/// A point of the extended real line with a rational finite part.
struct ExtendedRational {
    enum class Kind { NegInf, Finite, PosInf };
    Kind kind = Kind::Finite;
    mpq_class value = 0;

    static ExtendedRational neg_inf() { return {Kind::NegInf, 0}; }
    static ExtendedRational pos_inf() { return {Kind::PosInf, 0}; }
    static ExtendedRational finite(const mpq_class& q) { return {Kind::Finite, q}; }
};

/// Sign of p at a point of the extended real line.
inline int sign_at(const IntPoly& p, const ExtendedRational& at)
{
    const int d = poly::degree(p);
    if (d < 0)
        return 0;
    switch (at.kind) {
    case ExtendedRational::Kind::PosInf:
        return sgn(p[static_cast<std::size_t>(d)]);
    case ExtendedRational::Kind::NegInf:
        return (d % 2 == 0 ? 1 : -1) * sgn(p[static_cast<std::size_t>(d)]);
    case ExtendedRational::Kind::Finite:
        break;
    }
    return poly::sign_at(p, at.value.get_num(), at.value.get_den());
}

/// f, f', then negated pseudo-remainders, each scaled by a positive factor.
class SturmChain {
public:
    explicit SturmChain(const IntPoly& f)
    {
        IntPoly a = f;
        poly::trim(a);
        if (a.empty())
            throw std::invalid_argument("sturm_chain: zero polynomial");
        IntPoly b = poly::derivative(a);
        polys_.push_back(a);
        while (!b.empty()) {
            polys_.push_back(b);
            const int delta = poly::degree(a) - poly::degree(b);
            IntPoly r = poly::pseudo_remainder(a, b);
            // prem carries lc(b)^(delta+1); undo a negative sign.
            const bool flip = sgn(b.back()) < 0 && (delta + 1) % 2 == 1;
            if (!flip)
                for (auto& c : r)
                    c = -c;
            r = poly::primitive_part(std::move(r));
            a = std::move(b);
            b = std::move(r);
        }
    }

    const std::vector<IntPoly>& polys() const noexcept { return polys_; }
    std::size_t size() const noexcept { return polys_.size(); }

    /// Sign changes of the chain at a point, zeros skipped.
    int sign_changes(const ExtendedRational& at) const
    {
        int changes = 0;
        int last = 0;
        for (const auto& p : polys_) {
            const int s = sign_at(p, at);
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++changes;
            last = s;
        }
        return changes;
    }

    /// Distinct real roots in (low, up].
    int count_real_roots(const ExtendedRational& low, const ExtendedRational& up) const
    {
        return sign_changes(low) - sign_changes(up);
    }

private:
    std::vector<IntPoly> polys_;
};

inline SturmChain sturm_chain(const IntPoly& f) { return SturmChain(f); }

struct Interval {
    double low = -std::numeric_limits<double>::infinity();
    double up = std::numeric_limits<double>::infinity();

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise disjoint closed intervals.
class IntervalSet {
public:
    IntervalSet() = default;

    /// Sorts and merges overlapping or touching intervals.
    explicit IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals))
    {
        normalize();
    }

    static IntervalSet whole_line() { return IntervalSet({Interval{}}); }

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    bool empty() const noexcept { return intervals_.empty(); }
    std::size_t size() const noexcept { return intervals_.size(); }
    auto begin() const noexcept { return intervals_.begin(); }
    auto end() const noexcept { return intervals_.end(); }

    bool is_whole_line() const
    {
        return intervals_.size() == 1 && std::isinf(intervals_[0].low)
            && std::isinf(intervals_[0].up);
    }

    /// Exact membership test for num/den, den > 0.
    bool contains(long num, long den) const
    {
        const mpq_class x(num, den);
        for (const auto& iv : intervals_) {
            if (!std::isinf(iv.low) && x < mpq_class(iv.low))
                continue;
            if (!std::isinf(iv.up) && x > mpq_class(iv.up))
                continue;
            return true;
        }
        return false;
    }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    void normalize()
    {
        std::erase_if(intervals_, [](const Interval& iv) { return !(iv.low <= iv.up); });
        std::sort(intervals_.begin(), intervals_.end(),
                  [](const Interval& x, const Interval& y) { return x.low < y.low; });
        std::vector<Interval> merged;
        for (const auto& iv : intervals_) {
            if (!merged.empty() && iv.low <= merged.back().up)
                merged.back().up = std::max(merged.back().up, iv.up);
            else
                merged.push_back(iv);
        }
        intervals_ = std::move(merged);
    }

    std::vector<Interval> intervals_;
};

inline IntervalSet intersect_domains(const IntervalSet& a, const IntervalSet& b)
{
    std::vector<Interval> out;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        const double low = std::max(i->low, j->low);
        const double up = std::min(i->up, j->up);
        if (low <= up)
            out.push_back({low, up});
        if (i->up < j->up)
            ++i;
        else
            ++j;
    }
    return IntervalSet(std::move(out));
}

namespace detail {

// Nearest double <= q (round_up == false) or >= q (round_up == true).
inline double to_double_outward(const mpq_class& q, bool round_up)
{
    constexpr double big = std::numeric_limits<double>::max();
    double d = q.get_d();
    if (std::isinf(d)) {
        if (d > 0)
            return round_up ? d : big;
        return round_up ? -big : d;
    }
    const mpq_class back(d);
    if (round_up && back < q)
        d = std::nextafter(d, std::numeric_limits<double>::infinity());
    else if (!round_up && back > q)
        d = std::nextafter(d, -std::numeric_limits<double>::infinity());
    return d;
}

struct RationalInterval {
    mpq_class low, up;
};

class PositivitySearch {
public:
    PositivitySearch(const IntPoly& f, const SturmChain& chain) : f_(f), chain_(chain) {}

    void refine(const mpq_class& low, const mpq_class& up, int depth,
                std::vector<RationalInterval>& out) const
    {
        const auto lo = ExtendedRational::finite(low);
        const auto hi = ExtendedRational::finite(up);
        if (chain_.count_real_roots(lo, hi) == 0) {
            // Constant sign on (low, up); `up` is not a root.
            const mpq_class mid = (low + up) / 2;
            if (poly::sign_at(f_, mid.get_num(), mid.get_den()) > 0)
                out.push_back({low, up});
            else if (poly::sign_at(f_, low.get_num(), low.get_den()) == 0)
                out.push_back({low, low});
            return;
        }
        if (depth <= 0) {
            out.push_back({low, up});
            return;
        }
        const mpq_class mid = (low + up) / 2;
        refine(low, mid, depth - 1, out);
        refine(mid, up, depth - 1, out);
    }

private:
    const IntPoly& f_;
    const SturmChain& chain_;
};

} // namespace detail

/// A power of two strictly exceeding |x| for every real root x of f.
inline mpz_class root_bound(const IntPoly& f)
{
    const int d = poly::degree(f);
    const mpz_class lc = abs(f[static_cast<std::size_t>(d)]);
    mpq_class cauchy = 1;
    for (int i = 0; i < d; ++i)
        cauchy = std::max(cauchy, mpq_class(abs(f[static_cast<std::size_t>(i)]), lc));
    cauchy += 1;
    mpz_class bound = 1;
    while (bound <= cauchy)
        bound *= 2;
    return bound;
}

/// Closed intervals whose union contains {x : f(x) >= 0}, obtained by
/// bisecting [-B, B] at most `depth` times around the real roots. Empty iff
/// f is negative definite.
inline IntervalSet positivity_intervals(const IntPoly& f_in, int depth)
{
    IntPoly f = f_in;
    poly::trim(f);
    if (f.empty())
        return IntervalSet::whole_line();
    const int d = poly::degree(f);
    if (d == 0)
        return sgn(f[0]) > 0 ? IntervalSet::whole_line() : IntervalSet();

    const SturmChain chain(f);
    const mpz_class bound = root_bound(f);
    std::vector<detail::RationalInterval> pieces;
    detail::PositivitySearch(f, chain).refine(mpq_class(-bound), mpq_class(bound),
                                              std::max(depth, 0), pieces);

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<Interval> out;
    if (sign_at(f, ExtendedRational::neg_inf()) > 0)
        out.push_back({-inf, detail::to_double_outward(mpq_class(-bound), true)});
    for (const auto& piece : pieces)
        out.push_back({detail::to_double_outward(piece.low, false),
                       detail::to_double_outward(piece.up, true)});
    if (sign_at(f, ExtendedRational::pos_inf()) > 0)
        out.push_back({detail::to_double_outward(mpq_class(bound), false), inf});
    return IntervalSet(std::move(out));
}

} // namespace ratpoints
