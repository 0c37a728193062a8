// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "oracle.hpp"
#include "topdc/check.hpp"
#include "topdc/cli/config.hpp"

using namespace topdc;
namespace fs = std::filesystem;

namespace tol {
constexpr double identity_rel = 1e-12;
constexpr std::size_t identity_cases = 1000;
constexpr double identity_seconds = 0.25;
constexpr double reduction_rel = 1e-12;
constexpr double set_residual = 1e-10;
constexpr double set_seconds = 60.0;
constexpr double separable_k = 1e-10;
constexpr double antidiagonal_k = 1e-8;
constexpr double purity_rel = 1e-10;
constexpr double schmidt_max = 1.2;
constexpr double refinement = 1e-3;
constexpr double jsi_norm = 1e-10;
constexpr double jsi_seconds = 30.0;
} // namespace tol

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kPaper = oracle::config_path("paper.toml");

Scenario paper_scenario() { return cli::parse_config(kPaper).scenario; }

Outcome stimulation_identity() {
    std::mt19937_64 rng(20211015);
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < tol::identity_cases; ++i) {
        const ProcessConfig cfg = random_nondegenerate_config(rng);
        const double stim = rate_stimulated(cfg).value;
        const double spon = rate_spontaneous_nondegenerate(cfg).value;
        const double pv = vacuum_power(cfg.ring.mode(Role::G), cfg.ring.mode(Role::S));
        worst = std::max(worst, std::abs(stim - spon * *cfg.p_seed / pv) / std::abs(stim));
    }
    const double dt = seconds_since(t0);
    return {worst <= tol::identity_rel && dt < tol::identity_seconds,
            fmt::format("{} configs, max rel error {:.2e}, {:.3f} s", tol::identity_cases, worst, dt)};
}

Outcome quoted_consistency() {
    const double pairs = stimulated_rate_from_coefficient(1.5e8, 0.1, 0.01);
    return {pairs == 1.5e5, fmt::format("1.5e8 x 0.1 W x 0.01 W = {} pairs/s", pairs)};
}

Outcome symmetric_reduction() {
    std::mt19937_64 rng(31415);
    double worst = 0.0;
    for (std::size_t i = 0; i < tol::identity_cases; ++i) {
        ProcessConfig cfg = random_nondegenerate_config(rng);
        ResonatorMode s = cfg.ring.mode(Role::G);
        s.role = Role::S;
        cfg.ring.modes[Role::S] = s;
        cfg.ring.modes.at(Role::P).omega = 3.0 * s.omega;
        const double nd = rate_spontaneous_nondegenerate(cfg).value;
        const double dg = rate_spontaneous_degenerate(degenerate_twin(cfg)).value;
        worst = std::max(worst, std::abs(nd - 3.0 * dg) / nd);
    }
    return {worst <= tol::reduction_rel, fmt::format("{} configs, max rel error {:.2e}", tol::identity_cases, worst)};
}

Outcome reconciliation_report(const fs::path& work) {
    const fs::path out = work / "reconcile.txt";
    const int rc = shell(fmt::format("'{}' rates --config '{}' --reconcile > '{}' 2>&1", TOPDC_SIM_PATH, kPaper,
                                     out.string()));
    const std::string text = slurp(out);
    std::vector<std::string> missing;
    for (const char* needle : {"computed", "quoted", "computed/quoted", "0.19", "1.5e8", "1.5e5", "assumptions",
                               "mode F:", "mode T:", "mode G:", "mode S:", "mode P:", "Lambda", "delta kappa",
                               "wavelengths", "CW pump"})
        if (text.find(needle) == std::string::npos) missing.push_back(needle);
    std::string detail = fmt::format("exit {}", rc);
    for (const auto& m : missing) detail += ", missing '" + m + "'";
    if (missing.empty()) detail += ", quoted values and assumption list present";
    return {rc == 0 && missing.empty(), detail};
}

Outcome set_proportionality() {
    const Scenario sc = paper_scenario();
    SetScanOptions o;
    o.amplitude = sc.amplitude_options();
    o.memory_budget_points = sc.grid.memory_budget_points;
    const auto t0 = Clock::now();
    const SetScanResult r = set_scan(sc.ring, sc.envelope(), sc.seed_scan_axis(), sc.pair_grid(101), o);
    const double dt = seconds_since(t0);
    double worst = 0.0;
    for (double v : r.proportionality_residuals) worst = std::max(worst, v);
    const bool ok = !r.residuals_skipped && r.proportionality_residuals.size() == 11 && worst <= tol::set_residual &&
                    dt <= tol::set_seconds;
    return {ok, fmt::format("{} slices on 101^2, max residual {:.2e}, {:.2f} s", r.proportionality_residuals.size(),
                            worst, dt)};
}

Outcome schmidt_properties() {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    const std::size_t n = 16;
    std::vector<cplx> f(n), sep(n * n);
    for (auto& v : f) v = {nd(rng), nd(rng)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sep[i * n + j] = f[i] * f[j];
    const double k_sep = schmidt_decompose(sep, n, 0.7).schmidt_number;

    std::vector<cplx> anti(64);
    for (std::size_t i = 0; i < 8; ++i) anti[i * 8 + 7 - i] = std::polar(1.0, 0.4 * double(i));
    const double k_anti = schmidt_decompose(anti, 8, 1.0).schmidt_number;

    double worst = 0.0;
    for (std::size_t m = 2; m <= 16; ++m)
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<cplx> a(m * m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i; j < m; ++j) a[i * m + j] = a[j * m + i] = {nd(rng), nd(rng)};
            const double dk = std::exp(nd(rng));
            const double svd = schmidt_decompose(a, m, dk).schmidt_number;
            worst = std::max(worst, std::abs(svd - purity_schmidt_number(a, m, dk)) / svd);
        }
    const bool ok = k_sep - 1.0 <= tol::separable_k && std::abs(k_anti - 8.0) <= tol::antidiagonal_k &&
                    worst <= tol::purity_rel;
    return {ok, fmt::format("(a) K-1 = {:.1e}  (b) K = {:.12f}  (c) max rel diff {:.1e} on N = 2..16", k_sep - 1.0,
                            k_anti, worst)};
}

Outcome reference_jsi() {
    const Scenario sc = paper_scenario();
    const auto t0 = Clock::now();
    const BiphotonProblem pb = sc.biphoton_problem();
    const BiphotonAmplitude amp = pb.build();
    const SchmidtResult s = schmidt(pb, amp);
    const double dt = seconds_since(t0);
    const JsiMatrix m = jsi(amp);
    bool symmetric = true;
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < i; ++j) symmetric = symmetric && m.at(i, j) == m.at(j, i);
    const double norm_err = std::abs(m.integral() - 1.0);
    const bool ok = s.schmidt_number <= tol::schmidt_max && s.converged && s.refinement_delta <= tol::refinement &&
                    symmetric && norm_err <= tol::jsi_norm && dt <= tol::jsi_seconds && m.n() == 401;
    return {ok, fmt::format("K = {:.6f}, |dK| = {:.1e}, symmetric = {}, |norm-1| = {:.1e}, {}^2 in {:.2f} s",
                            s.schmidt_number, s.refinement_delta, symmetric, norm_err, m.n(), dt)};
}

Outcome trends() {
    const Scenario sc = paper_scenario();
    auto ks = [&](SweepParameter p, const std::vector<double>& v) {
        std::vector<double> out;
        for (const auto& row : sweep(p, v, sc)) out.push_back(row.result ? row.result->schmidt.schmidt_number : NAN);
        return out;
    };
    const auto kq = ks(SweepParameter::q_generated, {1e5, 2e5, 4e5, 8e5, 1.6e6});
    const auto kt = ks(SweepParameter::pump_fwhm, {10e-12, 30e-12, 100e-12, 300e-12, 1e-9});
    bool dec = true, inc = true;
    for (std::size_t i = 1; i < 5; ++i) {
        dec = dec && kq[i] < kq[i - 1];
        inc = inc && kt[i] > kt[i - 1];
    }
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (double x : v) s += fmt::format("{}{:.7f}", s.empty() ? "" : " ", x);
        return s;
    };
    return {dec && inc, fmt::format("Q_G 1e5..1.6e6: K = [{}]; FWHM 10 ps..1 ns: K = [{}]", list(kq), list(kt))};
}

Outcome determinism(const fs::path& work) {
    const std::vector<std::string> commands{
        "rates --reconcile --out o", "jsi --out o", "triphoton --out o", "set-scan --out o",
        "sweep --param q_generated --values 2e5,4e5 --out o", "check --cases 300"};
    std::vector<std::string> mismatched;
    std::size_t files = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::vector<std::map<std::string, std::string>> runs;
        for (const char* threads : {"1", "4", "1"}) {
            const fs::path d = work / fmt::format("det_{}_{}_{}", c, threads, runs.size());
            fs::create_directories(d);
            const std::string cfg = commands[c].rfind("check", 0) == 0 ? "" : " --config '" + kPaper + "'";
            const std::string sub = commands[c].substr(0, commands[c].find(' '));
            const std::string rest = commands[c].substr(commands[c].find(' '));
            shell(fmt::format("cd '{}' && TOPDC_THREADS={} '{}' {}{}{} > stdout.txt 2> stderr.txt", d.string(),
                              threads, TOPDC_SIM_PATH, sub, cfg, rest));
            std::map<std::string, std::string> contents;
            for (const auto& e : fs::directory_iterator(d)) contents[e.path().filename().string()] = slurp(e.path());
            runs.push_back(std::move(contents));
        }
        files += runs[0].size();
        if (runs[0].size() < 2 || runs[0] != runs[1] || runs[0] != runs[2]) mismatched.push_back(commands[c]);
    }
    std::string detail = fmt::format("{} subcommands x 3 runs (TOPDC_THREADS 1/4/1), {} files each compared",
                                     commands.size(), files);
    for (const auto& m : mismatched) detail += "; differs: " + m;
    return {mismatched.empty(), detail};
}

} // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / ("topdc_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(work);
    fs::create_directories(work);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"stimulation identity", stimulation_identity},
        {"quoted-number consistency", quoted_consistency},
        {"symmetric reduction", symmetric_reduction},
        {"reconciliation report", [&] { return reconciliation_report(work); }},
        {"SET proportionality", set_proportionality},
        {"Schmidt properties", schmidt_properties},
        {"reference JSI", reference_jsi},
        {"separability trends", trends},
        {"determinism", [&] { return determinism(work); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o{false, ""};
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << fmt::format("[{}] {} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail)
                  << std::flush;
    }
    fs::remove_all(work);
    std::cout << fmt::format("{} of {} acceptance criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
