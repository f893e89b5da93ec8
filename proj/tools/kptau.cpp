// kptau: compute, verify and mine the Kontsevich-Penner tau-function.
//
// exit codes: 0 pass, 1 verification failure, 2 usage / IO error

#include "kptau/kptau.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <iostream>
#include <optional>
#include <regex>
#include <set>
#include <string>

using namespace kptau;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_range(const std::string& text) {
    static const std::regex re(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw UsageError("--range expects a..b, got '" + text + "'");
    int a = std::stoi(m[1]), b = std::stoi(m[2]);
    if (a > b) throw UsageError("--range: empty range " + text);
    return {a, b};
}

Rational parse_rational(const std::string& text) {
    try {
        return Rational::parse(text);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--eval-n: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- compute --------------------------------------------------------------

struct ComputeArgs {
    int gmax = 3;
    std::string out;
    std::string resume;
    std::string eval_n;
    std::string engine = "cutjoin";
};

int cmd_compute(const ComputeArgs& a) {
    if (a.gmax < 0) throw UsageError("--gmax must be >= 0");
    std::optional<Rational> n;
    if (!a.eval_n.empty()) n = parse_rational(a.eval_n);

    SeriesFile f;
    f.eval_n = n;
    auto t0 = std::chrono::steady_clock::now();
    // Layers are persisted as they appear so an interrupted run can resume.
    // A file at fixed N is only written at the end: resuming needs exact N.
    auto persist = [&](const TauSeries& tau, int g) {
        std::cerr << "layer " << g << ": " << tau.layer(g).size() << " terms, " << seconds_since(t0) << " s\n";
        if (!a.out.empty() && !n) {
            SeriesFile partial = f;
            partial.series = tau;
            write_series(a.out, partial);
        }
    };

    if (a.engine == "cutjoin") {
        f.engine = "cut-and-join";
        std::optional<TauSeries> start;
        if (!a.resume.empty()) {
            SeriesFile r = read_series(a.resume);
            if (r.eval_n) throw UsageError("cannot resume from a file evaluated at N = " + r.eval_n->to_string());
            if (r.series.kind != SeriesKind::tau) throw UsageError("resume file is not a tau series");
            start = r.series;
            std::cerr << "resuming from layer " << r.series.gmax() << "\n";
        }
        f.series = compute_tau_cutjoin(a.gmax, start ? &*start : nullptr, persist);
    } else if (a.engine == "linear") {
        if (!a.resume.empty()) throw UsageError("--resume is only supported by the cut-and-join engine");
        f.engine = "linear";
        try {
            LinearTau lt = compute_tau_linear(a.gmax, persist);
            f.series = std::move(lt.tau);
            f.manifest = std::move(lt.manifest);
        } catch (const LinearSolveError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_fail;
        }
    } else {
        throw UsageError("--engine must be cutjoin or linear");
    }

    if (n) f.series = eval_N(f.series, *n);
    std::string text = series_to_string(f);
    if (a.out.empty()) std::cout << text;
    else write_text_file(a.out, text);
    return exit_ok;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
    std::string file;
    std::string suite = "all";
    std::string range;
    int W = -1;
    std::string out;
};

struct SuiteLog {
    json entries = json::array();
    bool pass = true;
    std::string first_failure;

    void add(const std::string& suite, const std::string& name, bool ok, const std::string& detail = {}) {
        json e{{"suite", suite}, {"check", name}, {"pass", ok}};
        if (!detail.empty()) e["detail"] = detail;
        entries.push_back(std::move(e));
        std::cout << (ok ? "PASS " : "FAIL ") << suite << ": " << name;
        if (!ok && !detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n";
        if (!ok && pass) {
            pass = false;
            first_failure = suite + ": " + name + (detail.empty() ? "" : " " + detail);
        }
    }
};

int cmd_verify(const VerifyArgs& a) {
    static const std::set<std::string> suites = {"annihilation", "commutators", "miura", "oracle", "degree", "all"};
    if (suites.count(a.suite) == 0) throw UsageError("unknown --suite " + a.suite);
    auto want = [&](const char* s) { return a.suite == "all" || a.suite == s; };
    std::optional<std::pair<int, int>> range;
    if (!a.range.empty()) range = parse_range(a.range);

    SeriesFile f = read_series(a.file, /*tolerate_checksum=*/true);
    TauSeries tau = f.series.kind == SeriesKind::tau ? f.series : exp_series(f.series);
    const int G = tau.gmax();
    SuiteLog log;
    json report;
    report["file"] = a.file;
    report["gmax"] = G;
    if (f.eval_n) report["eval_n"] = f.eval_n->to_string();
    log.add("file", "checksum", f.checksum_ok, f.checksum_ok ? "" : "stored checksum does not match contents");

    if (want("annihilation")) {
        // Without --range, operators the stored layers cannot reach at all are
        // left out; without --W, each operator is checked as deep as the layers allow.
        std::pair<int, int> lr{-1, 5}, mr{-2, 4};
        if (range) {
            lr = {std::max(range->first, -1), range->second};
            mr = {std::max(range->first, -2), range->second};
        }
        VerificationReport rep;
        for (const auto& op : constraint_operators(lr, mr)) {
            int reach = std::min(3 * G, max_complete_weight(op, G));
            if (!range && reach < 0) continue;
            int W = a.W >= 0 ? a.W : std::max(reach, 0);
            rep.entries.push_back(residual(op, tau, W, f.eval_n));
        }
        for (const auto& e : rep.entries) {
            std::string detail;
            if (!e.complete)
                detail = "layers up to g=" + std::to_string(G) + " only cover weight " +
                         std::to_string(e.max_weight_checked) + " < " + std::to_string(e.requested_weight);
            if (!e.residual.is_zero()) {
                const auto& [m, c] = *e.residual.terms().begin();
                detail = "residual at " + (m.weight() == 0 ? std::string("1") : m.to_string()) + ": " + c.to_string();
            }
            log.add("annihilation", e.op.to_string() + " tau = 0 (W=" + std::to_string(e.requested_weight) + ")",
                    e.pass, detail);
        }
        report["annihilation"] = report_to_json(rep);
    }
    if (want("degree")) {
        for (const auto& d : degree_check(tau))
            log.add("degree", "D tau^(" + std::to_string(d.g) + ") = " + std::to_string(d.g) + " tau^(" +
                                  std::to_string(d.g) + ")",
                    d.pass);
    }
    if (want("oracle")) {
        bool ok = true;
        std::string detail;
        try {
            TauSeries lin = compute_tau_linear(G).tau;
            if (f.eval_n) lin = eval_N(lin, *f.eval_n);
            for (int g = 0; g <= G && ok; ++g) {
                if (!(lin.layer(g) == tau.layer(g))) {
                    ok = false;
                    TPolynomial diff = tau.layer(g) - lin.layer(g);
                    const auto& [m, c] = *diff.terms().begin();
                    detail = "layer " + std::to_string(g) + " differs at " + m.to_string() + " by " + c.to_string();
                }
            }
        } catch (const LinearSolveError& e) {
            ok = false;
            detail = e.what();
        }
        log.add("oracle", "file == linear constraint solution through g=" + std::to_string(G), ok, detail);
    }
    // The algebraic suites do not read the file; W defaults to min(3 gmax, 9).
    const int Walg = a.W >= 0 ? a.W : std::min(3 * G, 9);
    const auto [lo, hi] = range.value_or(std::pair<int, int>{-3, 3});
    if (want("commutators")) {
        for (bool mkp : {false, true})
            for (const auto& r : wcomr_suite(mkp, lo, hi, Walg)) log.add("commutators", r.name, r.pass, r.detail);
        std::vector<std::pair<int, int>> mm;
        for (auto [k, m] : std::vector<std::pair<int, int>>{{1, -1}, {2, -2}, {3, -2}})
            if (k >= lo && k <= hi && m >= lo && m <= hi) mm.emplace_back(k, m);
        for (const auto& r : mastcr_suite(lo, hi, mm, Walg)) log.add("commutators", r.name, r.pass, r.detail);
    }
    if (want("miura")) {
        for (const auto& r : check_miura_match(Walg, lo, hi)) log.add("miura", r.name, r.pass, r.detail);
    }

    report["pass"] = log.pass;
    if (!log.pass) report["first_failure"] = log.first_failure;
    report["checks"] = log.entries;
    if (!a.out.empty()) write_text_file(a.out, report.dump(1) + "\n");
    std::cout << (log.pass ? "verify: PASS\n" : "verify: FAIL (" + log.first_failure + ")\n");
    return log.pass ? exit_ok : exit_fail;
}

// ---- correlators ----------------------------------------------------------

int cmd_correlators(const std::string& file, const std::string& out) {
    SeriesFile f = read_series(file);
    if (f.eval_n) throw UsageError("correlators need the exact N-dependence; " + file + " is evaluated at N = " +
                                   f.eval_n->to_string());
    TauSeries F = f.series.kind == SeriesKind::free_energy ? f.series : free_energy(f.series);
    auto rows = correlator_table(F);
    std::cout << correlators_to_text(rows);
    if (!out.empty()) write_text_file(out, correlators_to_json(rows, F.gmax()).dump(1) + "\n");
    return exit_ok;
}

// ---- selfcheck ------------------------------------------------------------

int cmd_selfcheck() {
    SuiteLog log;
    const int G = 4;
    TauSeries tau = compute_tau_cutjoin(G);
    LinearTau lin = compute_tau_linear(G);
    log.add("engine", "cut-and-join == linear through g=4", tau == lin.tau);
    bool unique = true;
    for (const auto& m : lin.manifest) unique = unique && m.unique;
    log.add("engine", "unique linear solve at every layer", unique);

    TauSeries F = free_energy(tau);
    auto coeff = [&](std::initializer_list<std::pair<int, int>> fs) {
        TMonomial m;
        for (auto [k, e] : fs) m.multiply_var(k, e);
        return F.layer(m.weight() / 3).coefficient(m);
    };
    log.add("coefficients", "F[t1^3] = 1/6", coeff({{1, 3}}) == NPoly(Rational(1, 6)));
    log.add("coefficients", "F[t1 t2] = 2N", coeff({{1, 1}, {2, 1}}) == NPoly{0, 2});
    log.add("coefficients", "F[t3] = 1/8 + 3/2 N^2", coeff({{3, 1}}) == NPoly{Rational(1, 8), 0, Rational(3, 2)});

    auto rep = verify_annihilation(tau, constraint_operators({-1, 2}, {-2, 1}), 6);
    log.add("annihilation", "Lsf, Msf, CalL_N, CalM_N on tau, W=6", rep.pass());
    bool deg = true;
    for (const auto& d : degree_check(tau)) deg = deg && d.pass;
    log.add("degree", "D tau^(g) = g tau^(g)", deg);

    log.add("correlators", "<tau_0^3>_{0,0} = 1", correlator(F, {{0, 0, 0}, {}, 0, 0}).value == Rational(1));
    log.add("correlators", "<tau_0 sigma_0>_{0,1} = 1", correlator(F, {{0}, {0}, 0, 1}).value == Rational(1));
    log.add("correlators", "<tau_1>_{1,0} = 1/24", correlator(F, {{1}, {}, 1, 0}).value == Rational(1, 24));

    SeriesFile sf;
    sf.series = tau;
    std::string text = series_to_string(sf);
    log.add("serialization", "write -> read -> write is byte-identical",
            series_to_string(series_from_string(text)) == text);
    std::cout << (log.pass ? "selfcheck: PASS\n" : "selfcheck: FAIL\n");
    return log.pass ? exit_ok : exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact engine for the Kontsevich-Penner tau-function"};
    app.require_subcommand(1);

    ComputeArgs ca;
    auto* compute = app.add_subcommand("compute", "compute tau layer by layer and write it as JSON");
    compute->add_option("--gmax", ca.gmax, "highest hbar layer")->required();
    compute->add_option("--out", ca.out, "output file (stdout if omitted)");
    compute->add_option("--resume", ca.resume, "continue from an existing tau file");
    compute->add_option("--eval-n", ca.eval_n, "store the series at a fixed N = p/q");
    compute->add_option("--engine", ca.engine, "cutjoin (default) or linear");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "check a tau file against the constraints and the oracle");
    verify->add_option("file", va.file, "tau file")->required();
    verify->add_option("--suite", va.suite, "annihilation|commutators|miura|oracle|degree|all");
    verify->add_option("--range", va.range, "operator index range a..b");
    verify->add_option("--W", va.W, "weight cutoff");
    verify->add_option("--out", va.out, "JSON report");

    std::string cfile, cout_path;
    auto* corr = app.add_subcommand("correlators", "extract open intersection numbers from a tau file");
    corr->add_option("file", cfile, "tau or free-energy file")->required();
    corr->add_option("--out", cout_path, "JSON table");

    auto* self = app.add_subcommand("selfcheck", "small end-to-end consistency run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*compute) return cmd_compute(ca);
        if (*verify) return cmd_verify(va);
        if (*corr) return cmd_correlators(cfile, cout_path);
        if (*self) return cmd_selfcheck();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const SerializeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_usage;
}
