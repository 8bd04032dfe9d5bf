// The search loop: admissible denominators, two-stage word-parallel sieving
// of the numerators and exact verification of the survivors.

#pragma once

#include "ratpoints/arith.hpp"
#include "ratpoints/poly.hpp"
#include "ratpoints/realroots.hpp"
#include "ratpoints/sieveprep.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace ratpoints {

/// A point (x : y : z) in the (1, m, 1)-weighted projective plane with
/// gcd(x, z) = 1 and z > 0, or z = 0 and x = 1. When has_y is false the
/// record stands for the x-coordinate (x : z) only and y is 0.
struct RationalPoint {
    long x = 0;
    long z = 0;
    mpz_class y = 0;
    bool has_y = true;

    friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

enum SearchFlags : unsigned {
    NO_CHECK = 1u << 0,
    NO_Y = 1u << 1,
    NO_REVERSE = 1u << 2,
    NO_JACOBI = 1u << 3,
    VERBOSE = 1u << 4,
    REVERSED = 1u << 5, // output only
    NO_INFINITY = 1u << 6,
    NO_PACKING = 1u << 7, // always sieve every numerator, never odd/even only
};

struct SearchStats {
    long denominators_sieved = 0;
    long words_sieved = 0;
    long survivors = 0;     // bits left after both sieving stages
    long exact_checks = 0;  // coprime survivors that were verified
    long points = 0;        // callback invocations
};

/// Everything the search loop needs, already validated and normalized.
struct SearchPlan {
    BinaryForm form;
    DenominatorClass cls = DenominatorClass::EvenGeneral;
    long height = 0;
    long b_low = 1;
    long b_high = 0;
    std::vector<PrimeSieveTable> tables; // sieving primes, best first
    std::size_t stage1 = 0;
    bool local_obstruction = false;
    ForbiddenDivisorList forbidden;
    Mod16Table mod16;
    IntervalSet domain = IntervalSet::whole_line(); // where F may be >= 0
    std::optional<IntervalSet> exact_domain;        // user restriction, checked exactly
    std::size_t array_size = 256;
    unsigned flags = 0;
};

/// Receives a point and may set `quit`; returns the point's weight.
using PointSink = std::function<long(const RationalPoint&, bool& quit)>;

namespace detail {

inline long floor_div(long a, long m)
{
    const long q = a / m;
    return (a % m != 0 && ((a < 0) != (m < 0))) ? q - 1 : q;
}

inline long ceil_div(long a, long m) { return -floor_div(-a, m); }

inline unsigned mod_nonneg(long a, unsigned p)
{
    const long r = a % static_cast<long>(p);
    return static_cast<unsigned>(r < 0 ? r + static_cast<long>(p) : r);
}

// x mod d by two multiplications, exact for x, d < 2^32.
class FastMod {
public:
    explicit FastMod(std::uint32_t d) : d_(d), m_(~std::uint64_t{0} / d + 1) {}

    std::uint32_t reduce(std::uint64_t x) const
    {
        const std::uint64_t low = m_ * static_cast<std::uint32_t>(x);
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * d_) >> 64);
    }

private:
    std::uint64_t d_;
    std::uint64_t m_;
};

// Squarefree divisors d <= limit of |n|, found by trial division up to
// min(limit, sqrt(cofactor)); prime factors above `limit` cannot occur.
inline std::vector<long> small_squarefree_divisors(const mpz_class& n, long limit)
{
    std::vector<long> primes;
    mpz_class rest = abs(n);
    for (long d = 2; d <= limit && d <= 3037000499L; d += (d == 2 ? 1 : 2)) {
        if (mpz_cmp_ui(rest.get_mpz_t(), static_cast<unsigned long>(d * d)) < 0)
            break;
        if (mpz_divisible_ui_p(rest.get_mpz_t(), static_cast<unsigned long>(d)) != 0) {
            primes.push_back(d);
            while (mpz_divisible_ui_p(rest.get_mpz_t(), static_cast<unsigned long>(d)) != 0)
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), static_cast<unsigned long>(d));
        }
    }
    // What is left is 1, a prime, or has only prime factors above `limit`.
    if (rest > 1 && rest <= limit)
        primes.push_back(rest.get_si());

    std::vector<long> divisors{1};
    for (long p : primes) {
        const std::size_t count = divisors.size();
        for (std::size_t i = 0; i < count; ++i)
            if (divisors[i] <= limit / p)
                divisors.push_back(divisors[i] * p);
    }
    std::sort(divisors.begin(), divisors.end());
    return divisors;
}

} // namespace detail

/// Yields, in increasing order, the denominators in [b_low, b_high] that
/// pass the filters available for the denominator class.
class DenominatorStream {
public:
    DenominatorStream(DenominatorClass cls, const mpz_class& lc, long b_low, long b_high,
                      const ForbiddenDivisorList& forbidden, const Mod16Table& mod16,
                      bool use_jacobi)
        : lc_(lc), b_high_(b_high), mod16_(mod16), use_jacobi_(use_jacobi)
    {
        b_low = std::max(b_low, 1L);
        sparse_mode_ = cls == DenominatorClass::OddMonic || cls == DenominatorClass::OddGeneral;
        if (sparse_mode_) {
            // b = d * e^2 with d a squarefree divisor of the leading coefficient
            const std::vector<long> ds = cls == DenominatorClass::OddMonic
                ? std::vector<long>{1}
                : detail::small_squarefree_divisors(lc, b_high);
            for (long d : ds) {
                for (long e = 1; d <= b_high / e / e; ++e) {
                    const long b = d * e * e;
                    if (b >= b_low && !mod16.row_empty(static_cast<unsigned>(b & 15)))
                        sparse_.push_back(b);
                }
            }
            std::sort(sparse_.begin(), sparse_.end());
            return;
        }
        next_ = b_low;
        if (cls == DenominatorClass::EvenNonSquareLC) {
            for (long f : forbidden)
                if (f > 1)
                    forbidden_.emplace_back(static_cast<std::uint64_t>(f),
                                            static_cast<std::uint64_t>(b_low));
            use_jacobi_ = use_jacobi;
        } else {
            use_jacobi_ = false;
        }
    }

    std::optional<long> next()
    {
        if (sparse_mode_) {
            if (pos_ >= sparse_.size())
                return std::nullopt;
            return sparse_[pos_++];
        }
        while (next_ <= b_high_) {
            const long b = next_++;
            bool ok = !mod16_.row_empty(static_cast<unsigned>(b & 15));
            // Trackers hold b mod f; move them on to b + 1 afterwards.
            for (auto& t : forbidden_) {
                if (t.current() == 0)
                    ok = false;
                t.advance(1);
            }
            if (ok && use_jacobi_ && !jacobi_allows(b))
                ok = false;
            if (ok)
                return b;
        }
        return std::nullopt;
    }

private:
    // (l / b') != -1 where b' is the part of b coprime to 2l.
    bool jacobi_allows(long b) const
    {
        auto odd = static_cast<std::uint64_t>(b);
        odd >>= std::countr_zero(odd);
        if (odd == 1)
            return true;
        const std::uint64_t lc_mod = mpz_fdiv_ui(lc_.get_mpz_t(), odd);
        std::uint64_t g = binary_gcd(static_cast<std::int64_t>(lc_mod), odd);
        while (g > 1) {
            odd /= g;
            g = binary_gcd(static_cast<std::int64_t>(g), odd);
        }
        if (odd == 1)
            return true;
        const std::uint64_t reduced = mpz_fdiv_ui(lc_.get_mpz_t(), odd);
        return jacobi_word(reduced, odd) != -1;
    }

    mpz_class lc_;
    long b_high_;
    Mod16Table mod16_;
    bool use_jacobi_;
    bool sparse_mode_ = false;
    std::vector<long> sparse_;
    std::size_t pos_ = 0;
    long next_ = 1;
    std::vector<ResidueTracker> forbidden_;
};

/// All admissible denominators at once; convenient for inspection.
inline std::vector<long> denominators(DenominatorClass cls, const mpz_class& lc, long b_low,
                                      long b_high, const ForbiddenDivisorList& forbidden,
                                      const Mod16Table& mod16, bool use_jacobi)
{
    DenominatorStream stream(cls, lc, b_low, b_high, forbidden, mod16, use_jacobi);
    std::vector<long> out;
    while (auto b = stream.next())
        out.push_back(*b);
    return out;
}

/// Verifies the pair (a, b): nothing unless gcd(a, b) = 1 and F(a, b) is a
/// square (the square test is skipped under NO_CHECK). Emits +y before -y
/// and a single point when y = 0.
inline std::vector<RationalPoint> exact_check(const BinaryForm& form, long a, long b,
                                              unsigned flags)
{
    std::vector<RationalPoint> out;
    if (binary_gcd(a, static_cast<std::uint64_t>(b)) != 1)
        return out;
    if ((flags & NO_CHECK) != 0) {
        out.push_back({a, b, 0, false});
        return out;
    }
    const auto root = is_perfect_square(eval_form(form, a, b));
    if (!root)
        return out;
    if ((flags & NO_Y) != 0) {
        out.push_back({a, b, 0, false});
        return out;
    }
    out.push_back({a, b, *root, true});
    if (sgn(*root) != 0)
        out.push_back({a, b, -*root, true});
    return out;
}

/// Points with z = 0, i.e. square roots of F(1, 0): one point when F(1, 0)
/// vanishes (odd degree), two when it is a nonzero square.
inline std::vector<RationalPoint> infinity_points(const BinaryForm& form, unsigned flags)
{
    std::vector<RationalPoint> out;
    if ((flags & NO_INFINITY) != 0)
        return out;
    const bool no_y = (flags & (NO_Y | NO_CHECK)) != 0;
    const auto root = is_perfect_square(form.coeff(form.even_degree()));
    if (!root)
        return out;
    if (no_y) {
        out.push_back({1, 0, 0, false});
        return out;
    }
    out.push_back({1, 0, *root, true});
    if (sgn(*root) != 0)
        out.push_back({1, 0, -*root, true});
    return out;
}

/// Two-stage bit sieve over the numerators of one denominator at a time.
/// Bit i of array word k stands for a = stride * (k * W + i) + offset,
/// W the width of Word; stride is 2 when the mod 16 analysis fixes the
/// parity of a, else 1.
template <typename Word = std::uint64_t>
class NumeratorSieve {
public:
    static constexpr unsigned kWidth = sizeof(Word) * CHAR_BIT;
    static_assert(kWidth >= 32 && std::has_single_bit(kWidth));

    NumeratorSieve(const SearchPlan& plan, std::vector<Word>& buffer)
        : plan_(plan), buffer_(buffer), rows_(plan.tables.size()), pats_(plan.tables.size()),
          base_(plan.tables.size()), mods_()
    {
        for (std::size_t j = 0; j < plan.tables.size(); ++j) {
            rows_[j].resize(3 * static_cast<std::size_t>(plan.tables[j].prime()));
            mods_.emplace_back(plan.tables[j].prime());
        }
        ext_.resize(std::min(plan.stage1, plan.tables.size()));
        idx_.resize(ext_.size());
        for (std::size_t j = 0; j < ext_.size(); ++j)
            ext_[j].resize(plan.tables[j].prime() + kBlock);
        if (buffer_.size() < std::max<std::size_t>(plan.array_size, 1))
            buffer_.resize(std::max<std::size_t>(plan.array_size, 1));
    }

    /// Sieves denominator b; `residues[j]` is b mod the j-th table's prime.
    /// Returns false once the sink asked to quit.
    bool run(long b, const std::vector<unsigned>& residues, const PointSink& sink,
             long& total, SearchStats& stats)
    {
        const std::uint16_t allowed = plan_.mod16.allowed[static_cast<std::size_t>(b & 15)];
        if (allowed == 0)
            return true;
        ++stats.denominators_sieved;

        unsigned stride = 1;
        unsigned offset = 0;
        unsigned mode = 0;
        if ((plan_.flags & NO_PACKING) == 0) {
            switch (plan_.mod16.parity(static_cast<unsigned>(b & 15))) {
            case Mod16Table::Parity::Even: stride = 2; offset = 0; mode = 1; break;
            case Mod16Table::Parity::Odd: stride = 2; offset = 1; mode = 2; break;
            default: break;
            }
        }

        Word pattern = 0;
        for (unsigned i = 0; i < kWidth; ++i)
            if ((allowed >> ((stride * i + offset) & 15u)) & 1u)
                pattern |= Word{1} << i;

        for (std::size_t j = 0; j < plan_.tables.size(); ++j)
            pats_[j] = row(j, residues[j], mode).data();
        for (std::size_t j = 0; j < ext_.size(); ++j) {
            const std::size_t p = plan_.tables[j].prime();
            for (std::size_t i = 0; i < ext_[j].size(); ++i)
                ext_[j][i] = pats_[j][i % p];
        }

        const std::vector<std::pair<long, long>> ranges = bit_ranges(b, stride, offset);
        for (const auto& [t_lo, t_hi] : ranges) {
            const long k_first = detail::floor_div(t_lo, kWidth);
            const long k_last = detail::floor_div(t_hi, kWidth);
            const long chunk = static_cast<long>(std::max<std::size_t>(plan_.array_size, 1));
            for (long k0 = k_first; k0 <= k_last; k0 += chunk) {
                const long k1 = std::min(k_last, k0 + chunk - 1);
                if (!sieve_chunk(b, residues, stride, offset, mode, pattern, t_lo, t_hi, k0, k1,
                                 sink, total, stats))
                    return false;
            }
        }
        return true;
    }

private:
    const std::vector<Word>& row(std::size_t j, unsigned residue, unsigned mode)
    {
        auto& slot = rows_[j][mode * plan_.tables[j].prime() + residue];
        if (slot.empty()) {
            const unsigned stride = mode == 0 ? 1 : 2;
            const unsigned offset = mode == 2 ? 1 : 0;
            slot = plan_.tables[j].template word_row<Word>(residue, stride, offset);
        }
        return slot;
    }

    // Inclusive bit-index ranges [t_lo, t_hi] covering every numerator a with
    // |a| <= H and a / b in the search domain; one step of slack per side.
    std::vector<std::pair<long, long>> bit_ranges(long b, unsigned stride, unsigned offset) const
    {
        const long h = plan_.height;
        const double bd = static_cast<double>(b);
        std::vector<std::pair<long, long>> out;
        for (const auto& iv : plan_.domain) {
            long a_lo = -h;
            long a_hi = h;
            const double lo = bd * iv.low;
            const double hi = bd * iv.up;
            if (lo > static_cast<double>(h) + 1 || hi < -static_cast<double>(h) - 1)
                continue;
            if (lo > -static_cast<double>(h))
                a_lo = std::max(-h, static_cast<long>(std::ceil(lo)) - 1);
            if (hi < static_cast<double>(h))
                a_hi = std::min(h, static_cast<long>(std::floor(hi)) + 1);
            if (a_lo > a_hi)
                continue;
            const long t_lo = detail::ceil_div(a_lo - static_cast<long>(offset), stride);
            const long t_hi = detail::floor_div(a_hi - static_cast<long>(offset), stride);
            if (t_lo > t_hi)
                continue;
            if (!out.empty() && t_lo <= out.back().second + 1)
                out.back().second = std::max(out.back().second, t_hi);
            else
                out.emplace_back(t_lo, t_hi);
        }
        return out;
    }

    bool sieve_chunk(long b, const std::vector<unsigned>& residues, unsigned stride,
                     unsigned offset, unsigned mode, Word pattern, long t_lo, long t_hi,
                     long k0, long k1, const PointSink& sink, long& total, SearchStats& stats)
    {
        const std::size_t n = static_cast<std::size_t>(k1 - k0 + 1);
        Word* words = buffer_.data();
        std::fill(words, words + n, pattern);
        // Clear bits outside [t_lo, t_hi] in the boundary words.
        if (k0 * static_cast<long>(kWidth) < t_lo) {
            const unsigned skip = static_cast<unsigned>(t_lo - k0 * static_cast<long>(kWidth));
            words[0] &= static_cast<Word>(~Word{0} << skip);
        }
        if ((k1 + 1) * static_cast<long>(kWidth) - 1 > t_hi) {
            const unsigned keep = static_cast<unsigned>(t_hi - k1 * static_cast<long>(kWidth) + 1);
            words[n - 1] &= static_cast<Word>(~Word{0} >> (kWidth - keep));
        }
        stats.words_sieved += static_cast<long>(n);

        const std::size_t count = plan_.tables.size();
        const std::size_t stage1 = ext_.size();
        for (std::size_t j = 0; j < stage1; ++j)
            idx_[j] = detail::mod_nonneg(k0, plan_.tables[j].prime());
        for (std::size_t j = stage1; j < count; ++j)
            base_[j] = detail::mod_nonneg(k0, plan_.tables[j].prime());

        // Blocks stay in L1 across all primes; ext_[j] is the row repeated
        // cyclically, so each block is one contiguous AND per prime.
        for (std::size_t w0 = 0; w0 < n; w0 += kBlock) {
            const std::size_t len = std::min(kBlock, n - w0);
            Word* out = words + w0;
            for (std::size_t j = 0; j < stage1; ++j) {
                const Word* in = ext_[j].data() + idx_[j];
                for (std::size_t i = 0; i < len; ++i)
                    out[i] &= in[i];
                const std::size_t p = plan_.tables[j].prime();
                idx_[j] = (idx_[j] + kBlock) % p;
            }
            for (std::size_t w = w0; w < w0 + len; ++w) {
                Word bits = words[w];
                if (bits == 0)
                    continue;
                const long k = k0 + static_cast<long>(w);
                for (std::size_t j = stage1; j < count && bits != 0; ++j)
                    bits &= pats_[j][mods_[j].reduce(base_[j] + w)];
                while (bits != 0) {
                    const unsigned i = static_cast<unsigned>(std::countr_zero(bits));
                    bits &= static_cast<Word>(bits - 1);
                    ++stats.survivors;
                    const long a = static_cast<long>(stride)
                            * (k * static_cast<long>(kWidth) + static_cast<long>(i))
                        + static_cast<long>(offset);
                    if (a < -plan_.height || a > plan_.height)
                        continue;
                    if (binary_gcd(a, static_cast<std::uint64_t>(b)) != 1)
                        continue;
                    if (plan_.exact_domain && !plan_.exact_domain->contains(a, b))
                        continue;
                    ++stats.exact_checks;
                    for (const auto& pt : exact_check(plan_.form, a, b, plan_.flags)) {
                        bool quit = false;
                        total += sink(pt, quit);
                        ++stats.points;
                        if (quit)
                            return false;
                    }
                }
            }
        }
        return true;
    }

    static constexpr std::size_t kBlock = 256;

    const SearchPlan& plan_;
    std::vector<Word>& buffer_;
    // rows_[j][mode * p + residue]: word_row for stride/offset `mode`
    std::vector<std::vector<std::vector<Word>>> rows_;
    std::vector<const Word*> pats_;   // rows for the current denominator
    std::vector<std::uint64_t> base_; // k0 mod p for the second-stage primes
    std::vector<detail::FastMod> mods_;
    std::vector<std::vector<Word>> ext_; // stage-1 rows, p + kBlock words
    std::vector<std::size_t> idx_;       // block start mod p, stage-1 primes
};

/// Runs the search described by `plan`: points at infinity first, then the
/// denominators in increasing order. Stops as soon as the sink sets quit.
template <typename Word = std::uint64_t>
long search(const SearchPlan& plan, const PointSink& sink, SearchStats& stats,
            std::vector<Word>& buffer)
{
    long total = 0;
    for (const auto& pt : infinity_points(plan.form, plan.flags)) {
        bool quit = false;
        total += sink(pt, quit);
        ++stats.points;
        if (quit)
            return total;
    }
    if (plan.domain.empty() || plan.local_obstruction || plan.b_low > plan.b_high)
        return total;

    DenominatorStream stream(plan.cls, plan.form.leading(), plan.b_low, plan.b_high,
                             plan.forbidden, plan.mod16, (plan.flags & NO_JACOBI) == 0);
    std::vector<ResidueTracker> trackers;
    for (const auto& t : plan.tables)
        trackers.emplace_back(t.prime(), 0);
    std::vector<unsigned> residues(plan.tables.size(), 0);

    NumeratorSieve<Word> sieve(plan, buffer);
    long last_b = 0;
    while (const auto b = stream.next()) {
        const auto delta = static_cast<std::uint64_t>(*b - last_b);
        last_b = *b;
        for (std::size_t j = 0; j < trackers.size(); ++j)
            residues[j] = static_cast<unsigned>(trackers[j].advance(delta));
        if (!sieve.run(*b, residues, sink, total, stats))
            break;
    }
    return total;
}

template <typename Word = std::uint64_t>
long search(const SearchPlan& plan, const PointSink& sink, SearchStats& stats)
{
    std::vector<Word> buffer;
    return search<Word>(plan, sink, stats, buffer);
}

} // namespace ratpoints
