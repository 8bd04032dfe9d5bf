// Modular data computed once per search: square tables for the sieving
// primes, prime ordering, forbidden denominator divisors and the 2-adic
// (mod 16) numerator/denominator analysis.

#pragma once

#include "ratpoints/arith.hpp"
#include "ratpoints/poly.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace ratpoints {

/// Packed bits, least significant bit of word 0 first.
using BitRow = std::vector<std::uint64_t>;

inline bool test_bit(const BitRow& row, std::size_t i)
{
    return ((row[i / 64] >> (i % 64)) & 1u) != 0;
}

inline void set_bit(BitRow& row, std::size_t i) { row[i / 64] |= std::uint64_t{1} << (i % 64); }

inline std::size_t words_for_bits(std::size_t bits) { return (bits + 63) / 64; }

/// Odd primes below `bound`, ascending.
inline std::vector<unsigned> odd_primes_below(unsigned bound)
{
    std::vector<bool> composite(bound, false);
    std::vector<unsigned> primes;
    for (unsigned i = 3; i < bound; i += 2) {
        if (composite[i])
            continue;
        primes.push_back(i);
        for (unsigned long k = static_cast<unsigned long>(i) * i; k < bound; k += 2 * i)
            composite[k] = true;
    }
    return primes;
}

/// Residues mod p that are squares, 0 included.
inline BitRow squares_mod(unsigned p)
{
    BitRow mask(words_for_bits(p), 0);
    for (unsigned long s = 0; s < p; ++s)
        set_bit(mask, (s * s) % p);
    return mask;
}

/// Square indicators of F(a, b) mod p for all residue pairs.
class PrimeSieveTable {
public:
    PrimeSieveTable() = default;

    PrimeSieveTable(const BinaryForm& form, unsigned p)
        : p_(p), row_words_(words_for_bits(p)), bits_(static_cast<std::size_t>(p) * row_words_, 0)
    {
        const BitRow squares = squares_mod(p);
        const int top = form.even_degree();
        std::vector<std::uint64_t> cof(static_cast<std::size_t>(top) + 1);
        for (int i = 0; i <= top; ++i)
            cof[static_cast<std::size_t>(i)] = mpz_fdiv_ui(form.coeff(i).get_mpz_t(), p);

        std::vector<std::uint64_t> b_pow(static_cast<std::size_t>(top) + 1);
        for (unsigned b = 0; b < p; ++b) {
            b_pow[0] = 1;
            for (int k = 1; k <= top; ++k)
                b_pow[static_cast<std::size_t>(k)] = b_pow[static_cast<std::size_t>(k) - 1] * b % p;
            for (unsigned j = 0; j < p; ++j) {
                std::uint64_t acc = cof[static_cast<std::size_t>(top)];
                for (int i = top - 1; i >= 0; --i)
                    acc = (acc * j + cof[static_cast<std::size_t>(i)]
                                         * b_pow[static_cast<std::size_t>(top - i)])
                        % p;
                if (test_bit(squares, acc)) {
                    bits_[b * row_words_ + j / 64] |= std::uint64_t{1} << (j % 64);
                    ++popcount_;
                }
            }
        }
    }

    unsigned prime() const noexcept { return p_; }
    std::uint64_t popcount() const noexcept { return popcount_; }

    /// Fraction of residue pairs (a, b) mod p for which F(a, b) is a square.
    double score() const noexcept
    {
        return static_cast<double>(popcount_) / (static_cast<double>(p_) * p_);
    }

    /// Is F(j, b) a square mod p?
    bool test(unsigned b, unsigned j) const
    {
        return ((bits_[b * row_words_ + j / 64] >> (j % 64)) & 1u) != 0;
    }

    bool row_empty(unsigned b) const
    {
        const auto first = bits_.begin() + static_cast<std::ptrdiff_t>(b * row_words_);
        return std::all_of(first, first + static_cast<std::ptrdiff_t>(row_words_),
                           [](std::uint64_t w) { return w == 0; });
    }

    /// Row b spread over p words: bit i of word k is the indicator for the
    /// numerator a = stride * (k * W + i) + offset, W the width of Word.
    /// Word k serves every array word whose index is congruent to k mod p.
    template <typename Word>
    std::vector<Word> word_row(unsigned b, unsigned stride = 1, unsigned offset = 0) const
    {
        constexpr unsigned width = sizeof(Word) * CHAR_BIT;
        std::vector<Word> out(p_, 0);
        // a mod p for bit 0 of word 0; each bit adds stride, each word adds stride * W.
        std::uint64_t pos = offset % p_;
        const std::uint64_t step = stride % p_;
        for (unsigned k = 0; k < p_; ++k) {
            Word w = 0;
            for (unsigned i = 0; i < width; ++i) {
                if (test(b, static_cast<unsigned>(pos)))
                    w |= Word{1} << i;
                pos += step;
                if (pos >= p_)
                    pos -= p_;
            }
            out[k] = w;
        }
        return out;
    }

private:
    unsigned p_ = 0;
    std::size_t row_words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::uint64_t popcount_ = 0;
};

inline PrimeSieveTable build_prime_table(const BinaryForm& form, unsigned p)
{
    return PrimeSieveTable(form, p);
}

struct PrimeCounts {
    int num_primes = 0;    // candidates considered
    int sieve_primes = 0;  // used in both stages together
    int stage1_primes = 0; // used on the whole array
};

/// Enforces stage1 <= sieve <= num_primes <= available, reducing in that order.
inline PrimeCounts clamp_prime_counts(int num_primes, int sieve_primes, int stage1_primes,
                                      int available)
{
    PrimeCounts c;
    c.num_primes = std::clamp(num_primes, 0, std::max(available, 0));
    c.sieve_primes = std::clamp(sieve_primes, 0, c.num_primes);
    c.stage1_primes = std::clamp(stage1_primes, 0, c.sieve_primes);
    return c;
}

struct PrimeSelection {
    std::vector<std::size_t> order; // indices into the candidate tables, best first
    std::size_t stage1 = 0;         // order[0 .. stage1) sieve the whole array
    bool local_obstruction = false; // some candidate admits only (a, b) = (0, 0) mod p
};

/// Picks the `sieve_primes` candidates with the lowest survival score.
inline PrimeSelection select_primes(const std::vector<PrimeSieveTable>& tables,
                                    int num_primes, int sieve_primes, int stage1_primes)
{
    const PrimeCounts c = clamp_prime_counts(num_primes, sieve_primes, stage1_primes,
                                             static_cast<int>(tables.size()));
    PrimeSelection sel;
    std::vector<std::size_t> idx(static_cast<std::size_t>(c.num_primes));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i : idx)
        if (tables[i].popcount() <= 1)
            sel.local_obstruction = true;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        // score_x < score_y, compared exactly
        return static_cast<unsigned __int128>(tables[x].popcount()) * tables[y].prime()
                   * tables[y].prime()
            < static_cast<unsigned __int128>(tables[y].popcount()) * tables[x].prime()
                  * tables[x].prime();
    });
    idx.resize(static_cast<std::size_t>(c.sieve_primes));
    sel.order = std::move(idx);
    sel.stage1 = static_cast<std::size_t>(c.stage1_primes);
    return sel;
}

/// Primes and prime powers that cannot divide the denominator of any point.
using ForbiddenDivisorList = std::vector<long>;

/// Only meaningful for even degree with non-square leading coefficient l:
/// p is forbidden if l is a non-residue mod p; if p | l = p^v u and l is
/// not a p-adic square, p^(v+1) is forbidden.
inline ForbiddenDivisorList forbidden_divisors(const BinaryForm& form,
                                               const std::vector<unsigned>& primes,
                                               int max_forbidden)
{
    ForbiddenDivisorList out;
    if (classify(form) != DenominatorClass::EvenNonSquareLC || max_forbidden <= 0)
        return out;
    const mpz_class& lc = form.leading();
    for (unsigned p : primes) {
        if (static_cast<int>(out.size()) >= max_forbidden)
            break;
        const mpz_class pz(p);
        mpz_class unit;
        const auto v = mpz_remove(unit.get_mpz_t(), lc.get_mpz_t(), pz.get_mpz_t());
        if (v == 0) {
            if (jacobi(lc, pz) == -1)
                out.push_back(static_cast<long>(p));
            continue;
        }
        if (v % 2 == 1 || jacobi(unit, pz) == -1) {
            mpz_class power;
            mpz_pow_ui(power.get_mpz_t(), pz.get_mpz_t(), v + 1);
            if (power.fits_slong_p())
                out.push_back(power.get_si());
        }
    }
    return out;
}

/// Which numerator residues mod 16 can occur for each denominator residue.
struct Mod16Table {
    enum class Parity { None, Even, Odd, Mixed };

    std::array<std::uint16_t, 16> allowed{};

    bool row_empty(unsigned b) const { return allowed[b & 15u] == 0; }

    Parity parity(unsigned b) const
    {
        const std::uint16_t m = allowed[b & 15u];
        constexpr std::uint16_t even_bits = 0x5555;
        if (m == 0)
            return Parity::None;
        if ((m & even_bits) == m)
            return Parity::Even;
        if ((m & ~even_bits & 0xffff) == m)
            return Parity::Odd;
        return Parity::Mixed;
    }
};

inline Mod16Table mod16_analysis(const BinaryForm& form)
{
    const int top = form.even_degree();
    std::vector<unsigned> cof(static_cast<std::size_t>(top) + 1);
    for (int i = 0; i <= top; ++i)
        cof[static_cast<std::size_t>(i)] =
            static_cast<unsigned>(mpz_fdiv_ui(form.coeff(i).get_mpz_t(), 16));

    constexpr unsigned squares = (1u << 0) | (1u << 1) | (1u << 4) | (1u << 9);
    Mod16Table t;
    for (unsigned b = 0; b < 16; ++b) {
        for (unsigned a = 0; a < 16; ++a) {
            if (b % 2 == 0 && a % 2 == 0)
                continue;
            unsigned acc = cof[static_cast<std::size_t>(top)];
            unsigned b_pow = 1;
            for (int i = top - 1; i >= 0; --i) {
                b_pow = (b_pow * b) & 15u;
                acc = (acc * a + cof[static_cast<std::size_t>(i)] * b_pow) & 15u;
            }
            if ((squares >> acc) & 1u)
                t.allowed[b] = static_cast<std::uint16_t>(t.allowed[b] | (1u << a));
        }
    }
    return t;
}

} // namespace ratpoints
