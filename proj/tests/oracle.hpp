// Brute-force reference implementations used only by the tests. They
// deliberately share no code with the library's evaluation, square test or
// enumeration paths.

#pragma once

#include "ratpoints/engine.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

using Coeffs = std::vector<mpz_class>;

inline Coeffs coeffs(std::initializer_list<long> xs)
{
    Coeffs out;
    for (long x : xs)
        out.emplace_back(x);
    return out;
}

/// F(a, b) for the form of even degree 2m >= declared degree, from powers.
inline mpz_class form_value(const Coeffs& c, long a, long b)
{
    const std::size_t declared = c.size() - 1;
    const unsigned long top = declared + (declared % 2);
    mpz_class sum = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        mpz_class ap, bp;
        const mpz_class az(a), bz(b);
        mpz_pow_ui(ap.get_mpz_t(), az.get_mpz_t(), i);
        mpz_pow_ui(bp.get_mpz_t(), bz.get_mpz_t(), top - i);
        sum += c[i] * ap * bp;
    }
    return sum;
}

inline int true_degree(const Coeffs& c)
{
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (c[static_cast<std::size_t>(i)] != 0)
            return i;
    return -1;
}

struct Options {
    long height = 0;
    long b_low = 1;
    long b_high = -1;        // -1: height
    bool infinity = true;
    bool x_only = false;
    std::vector<std::pair<double, double>> intervals; // empty: everything
};

using Key = std::tuple<long, long, std::string>; // x, z, y

inline std::vector<Key> points(const Coeffs& c, const Options& opt)
{
    std::vector<Key> out;
    const long b_high = opt.b_high < 0 ? opt.height : opt.b_high;
    auto add = [&](long x, long z, const mpz_class& y) {
        out.emplace_back(x, z, opt.x_only ? std::string("-") : y.get_str());
    };
    if (opt.infinity) {
        const std::size_t declared = c.size() - 1;
        const int top = static_cast<int>(declared + declared % 2);
        const mpz_class& lead = c.size() > static_cast<std::size_t>(top) ? c[static_cast<std::size_t>(top)]
                                                                         : mpz_class(0);
        // F(1, 0) is the coefficient of x^(2m)
        if (mpz_perfect_square_p(lead.get_mpz_t()) != 0 && lead >= 0) {
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), lead.get_mpz_t());
            add(1, 0, r);
            if (r != 0 && !opt.x_only)
                add(1, 0, -r);
        }
    }
    for (long b = std::max(opt.b_low, 1L); b <= b_high; ++b) {
        for (long a = -opt.height; a <= opt.height; ++a) {
            if (std::gcd(a, b) != 1)
                continue;
            if (!opt.intervals.empty()) {
                const mpq_class x(a, b);
                bool inside = false;
                for (const auto& [lo, up] : opt.intervals)
                    inside = inside || ((std::isinf(lo) || x >= mpq_class(lo))
                                        && (std::isinf(up) || x <= mpq_class(up)));
                if (!inside)
                    continue;
            }
            const mpz_class v = form_value(c, a, b);
            if (v < 0 || mpz_perfect_square_p(v.get_mpz_t()) == 0)
                continue;
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
            add(a, b, r);
            if (r != 0 && !opt.x_only)
                add(a, b, -r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Key> keys(const std::vector<ratpoints::RationalPoint>& pts, bool x_only = false)
{
    std::vector<Key> out;
    for (const auto& p : pts)
        out.emplace_back(p.x, p.z, x_only || !p.has_y ? std::string("-") : p.y.get_str());
    std::sort(out.begin(), out.end());
    return out;
}

/// Exact rational arithmetic: is gcd(f, f') constant? Uses the Sylvester
/// resultant res(f, f') computed by fraction-full Gaussian elimination.
inline bool resultant_nonzero(const Coeffs& f_in)
{
    Coeffs f = f_in;
    while (!f.empty() && f.back() == 0)
        f.pop_back();
    const int n = static_cast<int>(f.size()) - 1;
    if (n <= 0)
        return n == 0;
    Coeffs d;
    for (int i = 1; i <= n; ++i)
        d.push_back(f[static_cast<std::size_t>(i)] * i);
    const int m = n - 1;
    const int size = n + m;
    std::vector<std::vector<mpq_class>> s(static_cast<std::size_t>(size),
                                          std::vector<mpq_class>(static_cast<std::size_t>(size), 0));
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i)
            s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + i)] = f[static_cast<std::size_t>(n - i)];
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i)
            s[static_cast<std::size_t>(m + r)][static_cast<std::size_t>(r + i)] = d[static_cast<std::size_t>(m - i)];
    for (int col = 0; col < size; ++col) {
        int piv = -1;
        for (int r = col; r < size; ++r)
            if (s[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            return false;
        std::swap(s[static_cast<std::size_t>(piv)], s[static_cast<std::size_t>(col)]);
        for (int r = col + 1; r < size; ++r) {
            const mpq_class factor = s[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]
                / s[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            if (factor == 0)
                continue;
            for (int k = col; k < size; ++k)
                s[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -=
                    factor * s[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
        }
    }
    return true;
}

/// Squarefree as a binary form: res(f, f') != 0 and at most one declared
/// leading zero.
inline bool form_squarefree(const Coeffs& c)
{
    const int declared = static_cast<int>(c.size()) - 1;
    const int top = declared + declared % 2;
    return top - true_degree(c) <= 1 && resultant_nonzero(c);
}

/// Random coefficient list of the given degree (nonzero leading coefficient)
/// whose form is squarefree.
inline Coeffs random_squarefree(std::mt19937_64& rng, int degree, long bound)
{
    std::uniform_int_distribution<long> dist(-bound, bound);
    for (;;) {
        Coeffs c;
        for (int i = 0; i <= degree; ++i)
            c.emplace_back(dist(rng));
        if (c.back() == 0)
            continue;
        if (form_squarefree(c))
            return c;
    }
}

} // namespace oracle
