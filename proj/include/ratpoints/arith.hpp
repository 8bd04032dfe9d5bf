// Division-free number theory helpers used on the hot paths of the search:
// perfect-square testing, binary gcd, binary Jacobi symbol and residues that
// are updated by addition instead of reduction.

#pragma once

#include <gmpxx.h>

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

namespace ratpoints {

namespace detail {

// Bit r of word (r / 64) is set iff r is a square mod 64.
constexpr std::uint64_t squares_mod64_mask()
{
    std::uint64_t mask = 0;
    for (unsigned s = 0; s < 64; ++s)
        mask |= std::uint64_t{1} << ((s * s) & 63u);
    return mask;
}

template <unsigned M>
constexpr std::array<bool, M> squares_table()
{
    std::array<bool, M> t{};
    for (unsigned s = 0; s < M; ++s)
        t[(s * s) % M] = true;
    return t;
}

inline constexpr std::uint64_t kSquaresMod64 = squares_mod64_mask();
inline constexpr auto kSquaresMod63 = squares_table<63>();
inline constexpr auto kSquaresMod65 = squares_table<65>();
inline constexpr auto kSquaresMod11 = squares_table<11>();

} // namespace detail

/// Returns the nonnegative square root of `n` if `n` is a perfect square.
///
/// Residues mod 64, 63, 65 and 11 reject most non-squares before the
/// integer square root is taken.
inline std::optional<mpz_class> is_perfect_square(const mpz_class& n)
{
    const int sign = sgn(n);
    if (sign < 0)
        return std::nullopt;
    if (sign == 0)
        return mpz_class(0);

    const auto low = static_cast<unsigned>(mpz_getlimbn(n.get_mpz_t(), 0) & 63u);
    if (((detail::kSquaresMod64 >> low) & 1u) == 0)
        return std::nullopt;

    // 63 * 65 * 11 fits in a limb; one reduction serves all three tests.
    const unsigned long r = mpz_fdiv_ui(n.get_mpz_t(), 63ul * 65ul * 11ul);
    if (!detail::kSquaresMod63[r % 63] || !detail::kSquaresMod65[r % 65]
        || !detail::kSquaresMod11[r % 11])
        return std::nullopt;

    mpz_class root, rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0)
        return std::nullopt;
    return root;
}

/// gcd(|a|, b) using shifts and subtractions only. gcd(0, 0) is 0.
inline std::uint64_t binary_gcd(std::int64_t a, std::uint64_t b)
{
    std::uint64_t u = a < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(a)
                            : static_cast<std::uint64_t>(a);
    if (u == 0)
        return b;
    if (b == 0)
        return u;

    const int shift = std::countr_zero(u | b);
    u >>= std::countr_zero(u);
    do {
        b >>= std::countr_zero(b);
        if (u > b)
            std::swap(u, b);
        b -= u;
    } while (b != 0);
    return u << shift;
}

/// Jacobi symbol (a/n) for odd n >= 1 on machine words; binary algorithm.
inline int jacobi_word(std::uint64_t a, std::uint64_t n)
{
    if ((n & 1u) == 0)
        throw std::invalid_argument("jacobi: modulus must be odd and positive");

    int t = 1;
    while (a != 0) {
        const int z = std::countr_zero(a);
        a >>= z;
        // (2/n) = -1 iff n = 3, 5 (mod 8)
        if ((z & 1) != 0 && ((n & 7u) == 3 || (n & 7u) == 5))
            t = -t;
        if (a < n) {
            std::swap(a, n);
            if ((a & 3u) == 3 && (n & 3u) == 3)
                t = -t;
        }
        a -= n;
    }
    return n == 1 ? t : 0;
}

/// Jacobi symbol (a/n) for odd n >= 1; binary algorithm, no divisions.
inline int jacobi(const mpz_class& a, const mpz_class& n)
{
    if (n <= 0 || mpz_even_p(n.get_mpz_t()))
        throw std::invalid_argument("jacobi: modulus must be odd and positive");

    mpz_class x = abs(a);
    mpz_class m = n;
    int t = 1;
    // (-1/n) = -1 iff n = 3 (mod 4)
    if (sgn(a) < 0 && (mpz_getlimbn(m.get_mpz_t(), 0) & 3u) == 3)
        t = -t;

    while (sgn(x) != 0) {
        const mp_bitcnt_t z = mpz_scan1(x.get_mpz_t(), 0);
        mpz_tdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), z);
        const auto m8 = mpz_getlimbn(m.get_mpz_t(), 0) & 7u;
        if ((z & 1u) != 0 && (m8 == 3 || m8 == 5))
            t = -t;
        if (cmp(x, m) < 0) {
            swap(x, m);
            if ((mpz_getlimbn(x.get_mpz_t(), 0) & 3u) == 3
                && (mpz_getlimbn(m.get_mpz_t(), 0) & 3u) == 3)
                t = -t;
        }
        x -= m;
    }
    return m == 1 ? t : 0;
}

/// Residue of a running integer modulo a fixed odd modulus, maintained by
/// addition and conditional subtraction.
class ResidueTracker {
public:
    ResidueTracker() = default;
    ResidueTracker(std::uint64_t modulus, std::uint64_t start)
        : modulus_(modulus), current_(start % modulus)
    {
    }

    std::uint64_t modulus() const noexcept { return modulus_; }
    std::uint64_t current() const noexcept { return current_; }

    // Division-free for delta < 4 * modulus; larger steps are reduced once.
    std::uint64_t advance(std::uint64_t delta) noexcept
    {
        if (delta >= 4 * modulus_)
            delta %= modulus_;
        current_ += delta;
        while (current_ >= modulus_)
            current_ -= modulus_;
        return current_;
    }

private:
    std::uint64_t modulus_ = 1;
    std::uint64_t current_ = 0;
};

} // namespace ratpoints
