// Command-line front end: option grammar, point formatting and the driver
// behind the `ratpoints` executable.

#pragma once

#include "ratpoints/api.hpp"

#include <gmpxx.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ratpoints::cli {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitBadArgs = 2, kExitNonSquarefree = 3 };

inline constexpr std::string_view kUsage =
    "usage: ratpoints 'a_0 a_1 ... a_n' H [options]\n"
    "  -1          stop after the first point      -i / -I  hide / show points at infinity\n"
    "  -q          only print the points           -v       verbose\n"
    "  -z / -Z     suppress / print points         -y / -Y  x-coordinates only / full points\n"
    "  -f FMT -fs BEFORE -fm BETWEEN -fe AFTER     point format, markers %x %y %z\n"
    "  -dl D -du D denominator bounds              -l L -u U ...  search intervals, in order\n"
    "  -p M -N N -n n -F D                         primes considered / sieving / first stage, forbidden divisors\n"
    "  -S [S] / -s Sturm refinement depth / skip   -k / -K  no reversal, -j / -J no Jacobi test\n"
    "  -x / -X     do not / do verify candidates\n";

/// A format string split into literal text and coordinate markers.
class FormatTemplate {
public:
    enum class Marker { X, Y, Z };
    using Piece = std::variant<std::string, Marker>;

    FormatTemplate() = default;

    /// Decodes \n, \t, \\ and \%; with `markers`, %x %y %z become markers.
    static FormatTemplate parse(std::string_view raw, bool markers)
    {
        FormatTemplate t;
        std::string text;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const char c = raw[i];
            if (c == '\\') {
                if (i + 1 == raw.size())
                    throw UsageError("format: trailing backslash");
                switch (raw[++i]) {
                case 'n': text += '\n'; break;
                case 't': text += '\t'; break;
                case '\\': text += '\\'; break;
                case '%': text += '%'; break;
                default: throw UsageError(std::string("format: unknown escape \\") + raw[i]);
                }
            } else if (c == '%' && markers) {
                if (i + 1 == raw.size())
                    throw UsageError("format: trailing %");
                Marker m{};
                switch (raw[++i]) {
                case 'x': m = Marker::X; break;
                case 'y': m = Marker::Y; break;
                case 'z': m = Marker::Z; break;
                default: throw UsageError(std::string("format: unknown marker %") + raw[i]);
                }
                if (!text.empty())
                    t.pieces_.emplace_back(std::move(text));
                text.clear();
                t.pieces_.emplace_back(m);
            } else {
                text += c;
            }
        }
        if (!text.empty())
            t.pieces_.emplace_back(std::move(text));
        return t;
    }

    /// %y renders as nothing for x-coordinate-only records.
    void render(std::ostream& out, const RationalPoint& pt) const
    {
        for (const auto& piece : pieces_) {
            if (const auto* s = std::get_if<std::string>(&piece)) {
                out << *s;
                continue;
            }
            switch (std::get<Marker>(piece)) {
            case Marker::X: out << pt.x; break;
            case Marker::Y:
                if (pt.has_y)
                    out << pt.y;
                break;
            case Marker::Z: out << pt.z; break;
            }
        }
    }

    std::string text() const
    {
        std::ostringstream out;
        for (const auto& piece : pieces_)
            if (const auto* s = std::get_if<std::string>(&piece))
                out << *s;
        return out.str();
    }

private:
    std::vector<Piece> pieces_;
};

struct OutputOptions {
    bool quiet = false;
    bool verbose = false;
    bool suppress_points = false;
    bool x_only = false;
    bool no_infinity = false;
    bool one_point = false;
    std::string fmt;        // raw; empty means the default for the mode
    std::string fs, fm, fe; // raw, escapes not yet decoded
};

/// Writes points as fs, p1, fm, p2, ..., fe; nothing at all without points.
class PointPrinter {
public:
    PointPrinter(std::ostream& out, const OutputOptions& opts, bool x_only)
        : out_(out),
          fmt_(FormatTemplate::parse(
              opts.fmt.empty() ? (x_only ? "(%x : %z)\\n" : "(%x : %y : %z)\\n") : opts.fmt,
              true)),
          fs_(FormatTemplate::parse(opts.fs, false).text()),
          fm_(FormatTemplate::parse(opts.fm, false).text()),
          fe_(FormatTemplate::parse(opts.fe, false).text())
    {
    }

    void print(const RationalPoint& pt)
    {
        out_ << (count_ == 0 ? fs_ : fm_);
        fmt_.render(out_, pt);
        ++count_;
    }

    void finish()
    {
        if (count_ > 0)
            out_ << fe_;
        out_.flush();
    }

    long count() const noexcept { return count_; }

private:
    std::ostream& out_;
    FormatTemplate fmt_;
    std::string fs_, fm_, fe_;
    long count_ = 0;
};

inline std::string format_points(const OutputOptions& opts, const std::vector<RationalPoint>& pts)
{
    bool x_only = opts.x_only;
    for (const auto& p : pts)
        x_only = x_only || !p.has_y;
    std::ostringstream out;
    PointPrinter printer(out, opts, x_only);
    for (const auto& p : pts)
        printer.print(p);
    printer.finish();
    return out.str();
}

struct CliConfig {
    SearchArgs args;
    OutputOptions output;
};

namespace detail {

inline long parse_long(std::string_view s, std::string_view what)
{
    long value = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        throw UsageError(std::string(what) + ": not an integer: '" + std::string(s) + "'");
    return value;
}

inline double parse_double(std::string_view s, std::string_view what)
{
    const std::string copy(s);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size() || std::isnan(v))
        throw UsageError(std::string(what) + ": not a number: '" + copy + "'");
    return v;
}

inline bool all_digits(std::string_view s)
{
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

} // namespace detail

/// Whitespace-separated integers, constant term first.
inline std::vector<mpz_class> parse_coefficients(std::string_view text)
{
    std::vector<mpz_class> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        mpz_class c;
        const std::string digits = !tok.empty() && tok[0] == '+' ? tok.substr(1) : tok;
        if (digits.empty() || c.set_str(digits, 10) != 0)
            throw UsageError("coefficient is not an integer: '" + tok + "'");
        out.push_back(c);
    }
    if (out.empty())
        throw UsageError("no coefficients given");
    if (static_cast<int>(out.size()) - 1 > kMaxDegree)
        throw UsageError("degree exceeds " + std::to_string(kMaxDegree));
    return out;
}

/// Parses "COEFFS H [options]" (program name excluded). Options may come in
/// any order; for opposing options the last one wins.
inline CliConfig parse_cli(const std::vector<std::string>& argv)
{
    if (argv.size() < 2)
        throw UsageError("expected a coefficient list and a height bound");
    CliConfig cfg;
    SearchArgs& a = cfg.args;
    OutputOptions& o = cfg.output;
    a.coefficients = parse_coefficients(argv[0]);
    a.degree = static_cast<long>(a.coefficients.size()) - 1;
    a.height = detail::parse_long(argv[1], "height");

    bool no_check = false, no_y = false, no_reverse = false, no_jacobi = false;
    bool skip_sturm = false;
    long sturm_depth = kDefaultSturm;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<Interval> intervals;
    bool open_interval = false; // last interval still waits for its -u

    auto value = [&](std::size_t& i) -> const std::string& {
        if (i + 1 >= argv.size())
            throw UsageError("option " + argv[i] + " needs an argument");
        return argv[++i];
    };

    for (std::size_t i = 2; i < argv.size(); ++i) {
        const std::string& opt = argv[i];
        if (opt == "-1") o.one_point = true;
        else if (opt == "-i") o.no_infinity = true;
        else if (opt == "-I") o.no_infinity = false;
        else if (opt == "-q") o.quiet = true;
        else if (opt == "-v") o.verbose = true;
        else if (opt == "-z") o.suppress_points = true;
        else if (opt == "-Z") o.suppress_points = false;
        else if (opt == "-y") no_y = true;
        else if (opt == "-Y") no_y = false;
        else if (opt == "-k") no_reverse = true;
        else if (opt == "-K") no_reverse = false;
        else if (opt == "-j") no_jacobi = true;
        else if (opt == "-J") no_jacobi = false;
        else if (opt == "-x") no_check = true;
        else if (opt == "-X") no_check = false;
        else if (opt == "-s") skip_sturm = true;
        else if (opt == "-S") {
            // "-S S" sets the depth; a bare -S cancels -s.
            if (i + 1 < argv.size() && detail::all_digits(argv[i + 1]))
                sturm_depth = detail::parse_long(argv[++i], "-S");
            skip_sturm = false;
        }
        else if (opt == "-f") o.fmt = value(i);
        else if (opt == "-fs") o.fs = value(i);
        else if (opt == "-fm") o.fm = value(i);
        else if (opt == "-fe") o.fe = value(i);
        else if (opt == "-dl") a.b_low = detail::parse_long(value(i), "-dl");
        else if (opt == "-du") a.b_high = detail::parse_long(value(i), "-du");
        else if (opt == "-p") a.num_primes = detail::parse_long(value(i), "-p");
        else if (opt == "-N") a.sp2 = detail::parse_long(value(i), "-N");
        else if (opt == "-n") a.sp1 = detail::parse_long(value(i), "-n");
        else if (opt == "-F") a.max_forbidden = detail::parse_long(value(i), "-F");
        else if (opt == "-l") {
            const double low = detail::parse_double(value(i), "-l");
            if (open_interval)
                throw UsageError("-l must be followed by -u before the next -l");
            if (!intervals.empty() && low < intervals.back().up)
                throw UsageError("search intervals must be given in increasing order");
            intervals.push_back({low, inf});
            open_interval = true;
        } else if (opt == "-u") {
            const double up = detail::parse_double(value(i), "-u");
            if (open_interval) {
                if (up < intervals.back().low)
                    throw UsageError("interval upper bound below its lower bound");
                intervals.back().up = up;
                open_interval = false;
            } else if (intervals.empty()) {
                intervals.push_back({-inf, up});
            } else {
                throw UsageError("-u without a preceding -l");
            }
        } else {
            throw UsageError("unknown option '" + opt + "'");
        }
    }
    if (static_cast<long>(intervals.size()) > kMaxDegree)
        throw UsageError("at most " + std::to_string(kMaxDegree) + " intervals");

    a.domain = std::move(intervals);
    a.sturm = skip_sturm ? -1 : sturm_depth;
    o.x_only = no_y || no_check;
    if (o.quiet)
        o.verbose = false;
    a.flags = (no_check ? unsigned{NO_CHECK} : 0u) | (no_y ? unsigned{NO_Y} : 0u)
        | (no_reverse ? unsigned{NO_REVERSE} : 0u) | (no_jacobi ? unsigned{NO_JACOBI} : 0u)
        | (o.verbose ? unsigned{VERBOSE} : 0u) | (o.no_infinity ? unsigned{NO_INFINITY} : 0u);
    // Validate the format strings now rather than at the first point.
    FormatTemplate::parse(o.fmt, true);
    for (const std::string* s : {&o.fs, &o.fm, &o.fe})
        FormatTemplate::parse(*s, false);
    return cfg;
}

/// Runs the whole command; returns the process exit status.
inline int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    CliConfig cfg;
    try {
        cfg = parse_cli(argv);
    } catch (const UsageError& e) {
        err << "ratpoints: " << e.what() << '\n' << kUsage;
        return kExitUsage;
    }
    SearchArgs& args = cfg.args;
    const OutputOptions& o = cfg.output;
    args.log = &out;

    if (!o.quiet) {
        out << "Searching for points on y^2 = "
            << poly::to_string(IntPoly(args.coefficients.begin(), args.coefficients.end()))
            << " with x-height <= " << args.height << ".\n";
        out << "parameters: primes " << ratpoints::detail::or_default(args.num_primes, kDefaultNumPrimes)
            << ", sieve " << ratpoints::detail::or_default(args.sp2, kDefaultSp2) << ", first stage "
            << ratpoints::detail::or_default(args.sp1, kDefaultSp1) << ", forbidden "
            << ratpoints::detail::or_default(args.max_forbidden, kDefaultMaxForbidden) << ", sturm "
            << args.sturm << '\n';
    }

    PointPrinter printer(out, o, o.x_only);
    const auto start = std::chrono::steady_clock::now();
    const SearchOutcome result = find_points(args, [&](long x, long z, const mpz_class& y,
                                                       bool& quit) -> long {
        if (!o.suppress_points)
            printer.print({x, z, y, !o.x_only});
        if (o.one_point)
            quit = true;
        return 1;
    });
    printer.finish();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    switch (result.status) {
    case SearchStatus::BadArgs:
        err << "ratpoints: bad arguments (degree and height must be positive, degree <= "
            << kMaxDegree << ")\n";
        return kExitBadArgs;
    case SearchStatus::NonSquarefree:
        err << "ratpoints: the polynomial is not squarefree\n";
        return kExitNonSquarefree;
    case SearchStatus::Ok:
        break;
    }
    if (!o.quiet)
        out << result.total << (result.total == 1 ? " point" : " points") << " found ("
            << std::fixed << std::setprecision(3) << elapsed.count() << " s).\n";
    return kExitOk;
}

} // namespace ratpoints::cli
