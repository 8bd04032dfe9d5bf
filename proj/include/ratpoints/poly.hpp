// Integer polynomials and the even-degree binary form attached to y^2 = f(x).

#pragma once

#include "ratpoints/arith.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ratpoints {

inline constexpr int kMaxDegree = 10;

/// Raised for malformed curve data or search parameters.
class BadArgs : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense polynomial with integer coefficients, constant term first.
using IntPoly = std::vector<mpz_class>;

namespace poly {

/// Degree of p, or -1 for the zero polynomial.
inline int degree(const IntPoly& p)
{
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (sgn(p[static_cast<std::size_t>(i)]) != 0)
            return i;
    return -1;
}

inline void trim(IntPoly& p)
{
    while (!p.empty() && sgn(p.back()) == 0)
        p.pop_back();
}

inline IntPoly derivative(const IntPoly& p)
{
    IntPoly d;
    for (std::size_t i = 1; i < p.size(); ++i)
        d.push_back(p[i] * static_cast<unsigned long>(i));
    trim(d);
    return d;
}

/// Positive gcd of the coefficients; 0 for the zero polynomial.
inline mpz_class content(const IntPoly& p)
{
    mpz_class g = 0;
    for (const auto& c : p)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

/// Divides by the positive content; keeps the sign of the leading coefficient.
inline IntPoly primitive_part(IntPoly p)
{
    const mpz_class g = content(p);
    if (g > 1)
        for (auto& c : p)
            mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return p;
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b.
inline IntPoly pseudo_remainder(IntPoly a, const IntPoly& b)
{
    trim(a);
    const int db = degree(b);
    if (db < 0)
        throw std::domain_error("pseudo_remainder: division by zero polynomial");
    const mpz_class& lb = b[static_cast<std::size_t>(db)];
    int da = degree(a);
    int steps = da - db + 1;
    while (da >= db) {
        const mpz_class la = a[static_cast<std::size_t>(da)];
        for (auto& c : a)
            c *= lb;
        for (int i = 0; i <= db; ++i)
            a[static_cast<std::size_t>(da - db + i)] -= la * b[static_cast<std::size_t>(i)];
        --steps;
        trim(a);
        da = degree(a);
    }
    // Missing multiplications when the degree dropped by more than one.
    for (; steps > 0; --steps)
        for (auto& c : a)
            c *= lb;
    return a;
}

/// Primitive gcd over Z (hence the gcd over Q up to a constant).
inline IntPoly gcd(IntPoly a, IntPoly b)
{
    trim(a);
    trim(b);
    if (degree(a) < degree(b))
        std::swap(a, b);
    if (b.empty())
        return primitive_part(a);
    a = primitive_part(a);
    b = primitive_part(b);
    while (!b.empty()) {
        IntPoly r = primitive_part(pseudo_remainder(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// Sign of p(num/den) for den > 0, evaluated exactly.
inline int sign_at(const IntPoly& p, const mpz_class& num, const mpz_class& den)
{
    const int d = degree(p);
    if (d < 0)
        return 0;
    mpz_class acc = p[static_cast<std::size_t>(d)];
    mpz_class den_pow = 1;
    for (int i = d - 1; i >= 0; --i) {
        den_pow *= den;
        acc = acc * num + p[static_cast<std::size_t>(i)] * den_pow;
    }
    return sgn(acc);
}

inline std::string to_string(const IntPoly& p, const char* var = "x")
{
    std::string out;
    for (int i = degree(p); i >= 0; --i) {
        const mpz_class& c = p[static_cast<std::size_t>(i)];
        if (sgn(c) == 0)
            continue;
        const bool neg = sgn(c) < 0;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        const mpz_class mag = abs(c);
        if (i == 0 || mag != 1) {
            out += mag.get_str();
            if (i > 0)
                out += "*";
        }
        if (i > 0) {
            out += var;
            if (i > 1)
                out += "^" + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace poly

/// Quality of the denominator restrictions available for a form, best first.
enum class DenominatorClass { OddMonic, OddGeneral, EvenNonSquareLC, EvenGeneral };

inline const char* to_string(DenominatorClass c)
{
    switch (c) {
    case DenominatorClass::OddMonic: return "odd degree, leading coefficient +-1";
    case DenominatorClass::OddGeneral: return "odd degree";
    case DenominatorClass::EvenNonSquareLC: return "even degree, non-square leading coefficient";
    case DenominatorClass::EvenGeneral: return "even degree, square leading coefficient";
    }
    return "?";
}

/// f(x) = a_0 + ... + a_d x^d homogenized to F(x, z) of the smallest even
/// degree 2m >= d, where d is the declared degree (length of the
/// coefficient list minus one). Declared leading zeros are kept: they
/// become factors of z in F.
class BinaryForm {
public:
    BinaryForm() = default;

    explicit BinaryForm(std::vector<mpz_class> coeffs)
    {
        if (coeffs.empty())
            throw BadArgs("empty coefficient list");
        const int declared = static_cast<int>(coeffs.size()) - 1;
        if (declared <= 0)
            throw BadArgs("degree must be positive");
        if (declared > kMaxDegree)
            throw BadArgs("degree exceeds " + std::to_string(kMaxDegree));
        degree_n_ = poly::degree(coeffs);
        if (degree_n_ < 0)
            throw BadArgs("all coefficients are zero");
        even_degree_ = declared + (declared & 1);
        coeffs.resize(static_cast<std::size_t>(even_degree_) + 1, mpz_class(0));
        coeffs_ = std::move(coeffs);
    }

    const std::vector<mpz_class>& coeffs() const noexcept { return coeffs_; }
    const mpz_class& coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
    int degree() const noexcept { return degree_n_; }
    int even_degree() const noexcept { return even_degree_; }
    /// m in the (1, m, 1)-weighted projective plane.
    int weight() const noexcept { return even_degree_ / 2; }
    const mpz_class& leading() const { return coeff(degree_n_); }

    /// f(x) = F(x, 1) trimmed to its true degree.
    IntPoly univariate() const
    {
        return IntPoly(coeffs_.begin(), coeffs_.begin() + degree_n_ + 1);
    }

    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;

private:
    std::vector<mpz_class> coeffs_;
    int degree_n_ = 0;
    int even_degree_ = 0;
};

inline BinaryForm new_form(std::vector<mpz_class> coeffs)
{
    return BinaryForm(std::move(coeffs));
}

/// F(a, b) = sum_i c_i a^i b^(2m - i).
inline mpz_class eval_form(const BinaryForm& form, long a, long b)
{
    const auto& c = form.coeffs();
    const int top = form.even_degree();
    mpz_class acc = c[static_cast<std::size_t>(top)];
    mpz_class b_pow = 1;
    for (int i = top - 1; i >= 0; --i) {
        b_pow *= b;
        acc *= a;
        acc += c[static_cast<std::size_t>(i)] * b_pow;
    }
    return acc;
}

/// F(z, x): the coefficient list reversed over 0..2m.
inline BinaryForm reverse_form(const BinaryForm& form)
{
    std::vector<mpz_class> rev(form.coeffs().rbegin(), form.coeffs().rend());
    return BinaryForm(std::move(rev));
}

/// True iff F(x, z) has no repeated factor: z^2 does not divide F and
/// gcd(f, f') is constant.
inline bool is_squarefree(const BinaryForm& form)
{
    if (form.even_degree() - form.degree() >= 2)
        return false;
    if (form.degree() == 0)
        return true;
    const IntPoly f = form.univariate();
    return poly::degree(poly::gcd(f, poly::derivative(f))) == 0;
}

inline DenominatorClass classify(const BinaryForm& form)
{
    const mpz_class& lc = form.leading();
    if (form.degree() % 2 == 1)
        return abs(lc) == 1 ? DenominatorClass::OddMonic : DenominatorClass::OddGeneral;
    return is_perfect_square(lc) ? DenominatorClass::EvenGeneral
                                 : DenominatorClass::EvenNonSquareLC;
}

/// True iff the reversed form admits strictly stronger denominator filters.
inline bool should_reverse(const BinaryForm& form)
{
    return static_cast<int>(classify(reverse_form(form))) < static_cast<int>(classify(form));
}

} // namespace ratpoints
