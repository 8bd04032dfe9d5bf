// Batch runner over a file of curves, used for timing parameter choices and
// for regression comparison of complete outputs.

#pragma once

#include "ratpoints/api.hpp"
#include "ratpoints/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ratpoints::cli {

inline constexpr long kCorpusDefaultHeight = 16383;

/// One curve per line, coefficients constant term first; '#' starts a comment.
inline std::vector<std::vector<mpz_class>> read_corpus(std::istream& in)
{
    std::vector<std::vector<mpz_class>> curves;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        curves.push_back(parse_coefficients(line));
    }
    return curves;
}

struct CorpusOptions {
    std::string corpus_path;
    std::string output_path = "rptest.out";
    SearchArgs args; // shared parameters; coefficients filled per curve
    bool suppress_points = false;
};

inline CorpusOptions parse_corpus_cli(const std::vector<std::string>& argv)
{
    CorpusOptions c;
    c.args.height = kCorpusDefaultHeight;
    bool skip_sturm = false;
    long depth = kDefaultSturm;
    auto value = [&](std::size_t& i) -> const std::string& {
        if (i + 1 >= argv.size())
            throw UsageError("option " + argv[i] + " needs an argument");
        return argv[++i];
    };
    for (std::size_t i = 0; i < argv.size(); ++i) {
        const std::string& opt = argv[i];
        if (opt == "-p") c.args.num_primes = detail::parse_long(value(i), "-p");
        else if (opt == "-N") c.args.sp2 = detail::parse_long(value(i), "-N");
        else if (opt == "-n") c.args.sp1 = detail::parse_long(value(i), "-n");
        else if (opt == "-F") c.args.max_forbidden = detail::parse_long(value(i), "-F");
        else if (opt == "-h") c.args.height = detail::parse_long(value(i), "-h");
        else if (opt == "-o") c.output_path = value(i);
        else if (opt == "-z") c.suppress_points = true;
        else if (opt == "-Z") c.suppress_points = false;
        else if (opt == "-s") skip_sturm = true;
        else if (opt == "-S") {
            if (i + 1 < argv.size() && detail::all_digits(argv[i + 1]))
                depth = detail::parse_long(argv[++i], "-S");
            skip_sturm = false;
        }
        else if (opt == "-k") c.args.flags |= NO_REVERSE;
        else if (opt == "-K") c.args.flags &= ~static_cast<unsigned>(NO_REVERSE);
        else if (opt == "-j") c.args.flags |= NO_JACOBI;
        else if (opt == "-J") c.args.flags &= ~static_cast<unsigned>(NO_JACOBI);
        else if (!opt.empty() && opt[0] == '-') throw UsageError("unknown option '" + opt + "'");
        else if (c.corpus_path.empty()) c.corpus_path = opt;
        else throw UsageError("unexpected argument '" + opt + "'");
    }
    if (c.corpus_path.empty())
        throw UsageError("expected a corpus file");
    c.args.sturm = skip_sturm ? -1 : depth;
    return c;
}

/// Searches every corpus curve with shared parameters, writes the points
/// to the output file and reports totals and wall-clock time on `out`.
inline int run_corpus(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    CorpusOptions c;
    std::vector<std::vector<mpz_class>> curves;
    try {
        c = parse_corpus_cli(argv);
        std::ifstream in(c.corpus_path);
        if (!in)
            throw UsageError("cannot read corpus '" + c.corpus_path + "'");
        curves = read_corpus(in);
    } catch (const UsageError& e) {
        err << "rptest: " << e.what() << '\n'
            << "usage: rptest CORPUS [-h H] [-p M] [-N N] [-n n] [-F D] [-S [S] | -s] [-k] [-j] "
               "[-z] [-o FILE]\n";
        return kExitUsage;
    }

    std::ofstream file(c.output_path, std::ios::trunc);
    if (!file) {
        err << "rptest: cannot write '" << c.output_path << "'\n";
        return kExitUsage;
    }

    long total = 0;
    Session session = find_points_init(c.args);
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t idx = 0; idx < curves.size(); ++idx) {
        SearchArgs args = c.args;
        args.coefficients = curves[idx];
        args.degree = static_cast<long>(curves[idx].size()) - 1;
        std::ostringstream block;
        block << "curve " << idx + 1 << ": y^2 = "
              << poly::to_string(IntPoly(curves[idx].begin(), curves[idx].end())) << '\n';
        const SearchOutcome r = find_points_work(
            session, args, [&](long x, long z, const mpz_class& y, bool&) -> long {
                block << '(' << x << " : " << y << " : " << z << ")\n";
                return 1;
            });
        if (r.status == SearchStatus::NonSquarefree)
            block << "not squarefree\n";
        else if (r.status == SearchStatus::BadArgs)
            block << "bad arguments\n";
        total += r.total;
        if (!c.suppress_points)
            file << block.str();
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    find_points_clear(session);

    out << curves.size() << " curves, " << total << " points, height " << c.args.height << ", "
        << std::fixed << std::setprecision(3) << elapsed.count() << " s\n";
    return kExitOk;
}

} // namespace ratpoints::cli
