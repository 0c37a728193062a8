#pragma once

// Subcommands of topdc-sim. Each writes its report to `out`, diagnostics to
// `err`, and returns the process exit code. Library exceptions propagate and
// are mapped to exit codes by the caller (see exit_code_for).

#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "topdc/check.hpp"
#include "topdc/cli/config.hpp"
#include "topdc/sweep.hpp"

namespace topdc::cli {

enum ExitCode : int { ok = 0, check_failed = 1, schema_error = 2, physics_error = 3, mode_misuse = 4 };

/// Quoted reference values the reconciliation report compares against.
struct QuotedValues {
    static constexpr double spontaneous_degenerate = 0.19; // 1/(s W)
    static constexpr double stimulated_coefficient = 1.5e8; // 1/(s W^2)
    static constexpr double stimulated_pairs = 1.5e5;       // 1/s at the operating point below
    static constexpr double pump_power = 0.1;               // W
    static constexpr double seed_power = 0.01;              // W
};

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    return f;
}

inline void require_nondegenerate(const Scenario& sc, const char* command) {
    if (!sc.has_nondegenerate_modes())
        throw UsageError(std::string(command) + " needs the non-degenerate mode set G, S, P");
}

inline void require_pulsed(const Scenario& sc, const char* command) {
    require_nondegenerate(sc, command);
    if (sc.pump.kind != PumpEnvelope::Kind::gaussian)
        throw UsageError(std::string(command) + " needs a pulsed (gaussian) pump; set pump.kind = \"gaussian\"");
}

inline void write_matrix(std::ostream& f, const std::vector<double>& values, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j) f << ',';
            f << fmt::format("{}", values[i * n + j]);
        }
        f << '\n';
    }
}

inline std::string breakdown(const RateResult& r) {
    std::string s;
    for (const auto& f : r.factor_breakdown) s += fmt::format(" {}={:.6e}", f.name, f.value);
    return s;
}

inline void emit_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

} // namespace detail

struct RatesOptions {
    bool reconcile = false;
    std::optional<std::string> out_prefix;
};

inline int cmd_rates(const SimulationConfig& cfg, const RatesOptions& opts, std::ostream& out, std::ostream&) {
    const Scenario& sc = cfg.scenario;
    ensure_rates_applicable(PumpEnvelope{sc.pump.kind}, sc.pump.rates_cw_limit);
    const RateSummary r = evaluate_rates(sc);

    struct Row {
        std::string name;
        double value;
        std::string unit;
    };
    std::vector<Row> rows;
    if (r.spontaneous_degenerate) {
        rows.push_back({"R_spon degenerate (FFF)", r.spontaneous_degenerate->value, "triplets/s"});
        rows.push_back({"R_spon degenerate per pump W", rate_coefficient(*r.spontaneous_degenerate), "1/(s W)"});
    }
    if (r.spontaneous_nondegenerate) {
        rows.push_back({"R_spon non-degenerate (GGS)", r.spontaneous_nondegenerate->value, "triplets/s"});
        rows.push_back({"R_spon non-degenerate per pump W", rate_coefficient(*r.spontaneous_nondegenerate), "1/(s W)"});
        rows.push_back({"P_vac", *r.vacuum_power, "W"});
    }
    if (r.stimulated) {
        rows.push_back({"R_stim (GG)", r.stimulated->value, "pairs/s"});
        rows.push_back({"R_stim per pump W per seed W", rate_coefficient(*r.stimulated), "1/(s W^2)"});
        rows.push_back({"enhancement P_S/P_vac", *r.enhancement, "1"});
    }

    out << "TOPDC generation rates (CW pump and seed, at the output)\n";
    out << fmt::format("pump power {} W", sc.pump_power);
    if (sc.seed_power) out << fmt::format(", seed power {} W", *sc.seed_power);
    out << "\n\n";
    out << fmt::format("{:<36} {:>14}  {}\n", "quantity", "value", "unit");
    for (const auto& row : rows) out << fmt::format("{:<36} {:>14.6e}  {}\n", row.name, row.value, row.unit);
    out << "\nfactor breakdown\n";
    if (r.spontaneous_degenerate) out << "  R_spon degenerate:" << detail::breakdown(*r.spontaneous_degenerate) << '\n';
    if (r.spontaneous_nondegenerate)
        out << "  R_spon non-degenerate:" << detail::breakdown(*r.spontaneous_nondegenerate) << '\n';
    if (r.stimulated) out << "  R_stim:" << detail::breakdown(*r.stimulated) << '\n';

    if (opts.reconcile) {
        using Q = QuotedValues;
        out << "\nreconciliation (computed vs quoted; informational, no pass/fail)\n";
        out << fmt::format("{:<40} {:>14} {:>10} {:>16}\n", "quantity", "computed", "quoted", "computed/quoted");
        auto line = [&](const std::string& name, std::optional<double> computed, const char* quoted, double q) {
            if (computed)
                out << fmt::format("{:<40} {:>14.6e} {:>10} {:>16.4f}\n", name, *computed, quoted, *computed / q);
            else
                out << fmt::format("{:<40} {:>14} {:>10} {:>16}\n", name, "n/a", quoted, "n/a");
        };
        std::optional<double> deg, stim_coef, stim_pairs;
        if (r.spontaneous_degenerate) deg = rate_coefficient(*r.spontaneous_degenerate);
        if (sc.has_nondegenerate_modes()) {
            ProcessConfig nd = sc.process(Scheme::non_degenerate);
            nd.p_pump = Q::pump_power;
            nd.p_seed = Q::seed_power;
            const RateResult at_quoted = rate_stimulated(nd);
            stim_coef = rate_coefficient(at_quoted);
            stim_pairs = at_quoted.value;
        }
        line("R_spon FFF coefficient [1/(s W)]", deg, "0.19", Q::spontaneous_degenerate);
        line("R_stim coefficient [1/(s W^2)]", stim_coef, "1.5e8", Q::stimulated_coefficient);
        line("R_stim at 0.1 W pump, 0.01 W seed [1/s]", stim_pairs, "1.5e5", Q::stimulated_pairs);
        out << fmt::format("quoted-coefficient consistency: 1.5e8 * 0.1 * 0.01 = {} pairs/s (quoted 1.5e5)\n",
                           stimulated_rate_from_coefficient(Q::stimulated_coefficient, Q::pump_power, Q::seed_power));
        out << "assumptions\n";
        for (const auto& [role, m] : sc.ring.modes)
            out << fmt::format("  - mode {}: wavelength {:.6g} nm, Q = {:.6g}, eta = {:.6g}, n = {:.6g}\n",
                               to_string(role), 2.0 * pi * PhysicalConstants::c / m.omega * 1e9, m.q_loaded,
                               escape_efficiency(m), m.n_char);
        if (sc.lambda_nl)
            out << fmt::format("  - Lambda given directly: {} 1/s, same value for FFFT and GGSP\n", *sc.lambda_nl);
        else
            out << "  - Lambda derived from chi3, a_eff and the mode indices\n";
        if (sc.has_degenerate_modes())
            out << fmt::format("  - delta kappa (FFFT) = {} rad/m\n", phase_mismatch(sc.process(Scheme::degenerate)).delta_kappa);
        if (sc.has_nondegenerate_modes())
            out << fmt::format("  - delta kappa (GGSP) = {} rad/m\n",
                               phase_mismatch(sc.process(Scheme::non_degenerate)).delta_kappa);
        out << "  - operating wavelengths of the reference device are not stated; values above are config inputs\n";
        out << "  - rates are at the system output; no detector or propagation losses\n";
        out << "  - CW pump and seed\n";
    }

    if (opts.out_prefix) {
        auto f = detail::open_output(*opts.out_prefix + ".rates.csv");
        f << "quantity,value,unit\n";
        for (const auto& row : rows) f << fmt::format("{},{},{}\n", row.name, row.value, row.unit);
    }
    return ExitCode::ok;
}

namespace detail {

inline void write_jsi_file(const std::string& path, const JsiMatrix& m, double k_seed,
                           const std::vector<std::pair<std::string, std::string>>& extra) {
    auto f = open_output(path);
    f << "# format: topdc-jsi-v1\n";
    f << "# layout: rows k1 ascending, columns k2 ascending, values |phi|^2 in m^2\n";
    f << fmt::format("# n: {}\n# k_min: {}\n# k_max: {}\n# dk: {}\n# k_seed: {}\n", m.n(), m.grid.k_min,
                     m.grid.k_max, m.grid.spacing(), k_seed);
    f << fmt::format("# norm_residual: {}\n", m.integral() - 1.0);
    for (const auto& [k, v] : extra) f << "# " << k << ": " << v << '\n';
    write_matrix(f, m.values, m.n());
}

inline void write_axes_file(const std::string& path, const KGrid& grid, const ResonatorMode& mode) {
    auto f = open_output(path);
    f << "index,k,k_detuning,omega,omega_detuning\n";
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double k = grid.at(i);
        const double w = mode_frequency_at(mode, k);
        f << fmt::format("{},{},{},{},{}\n", i, k, k - mode.k_res, w, w - mode.omega);
    }
}

} // namespace detail

inline int cmd_jsi(const SimulationConfig& cfg, const std::string& prefix, std::ostream& out, std::ostream& err) {
    const Scenario& sc = cfg.scenario;
    detail::require_pulsed(sc, "jsi");
    const BiphotonProblem problem = sc.biphoton_problem();
    const BiphotonAmplitude amp = problem.build();
    const JsiMatrix m = jsi(amp);
    const SchmidtResult s = schmidt(problem, amp);
    detail::emit_warnings(err, amp.diagnostics.warnings);

    detail::write_jsi_file(prefix + ".jsi.csv", m, amp.k_seed,
                           {{"schmidt_number", fmt::format("{}", s.schmidt_number)},
                            {"converged", s.converged ? "true" : "false"},
                            {"refinement_delta", fmt::format("{}", s.refinement_delta)},
                            {"coverage", fmt::format("{}", amp.diagnostics.coverage)}});
    detail::write_axes_file(prefix + ".axes.csv", m.grid, sc.ring.mode(Role::G));
    {
        auto f = detail::open_output(prefix + ".schmidt.csv");
        f << fmt::format("# schmidt_number: {}\n# converged: {}\n# refinement_delta: {}\n", s.schmidt_number,
                         s.converged, s.refinement_delta);
        f << "rank,coefficient\n";
        for (std::size_t i = 0; i < s.coefficients.size(); ++i) f << fmt::format("{},{}\n", i, s.coefficients[i]);
    }

    out << "StTOPDC biphoton JSI\n";
    out << fmt::format("grid: {} x {} points, dk = {} rad/m, k_seed offset = {} linewidths\n", m.n(), m.n(),
                       m.grid.spacing(), sc.seed.offset_linewidths);
    out << fmt::format("Schmidt number K = {:.9f}\n", s.schmidt_number);
    out << fmt::format("refinement |dK| = {:.3e} ({})\n", s.refinement_delta, s.converged ? "converged" : "NOT converged");
    out << fmt::format("norm residual = {:.3e}\n", m.integral() - 1.0);
    out << fmt::format("wrote {0}.jsi.csv {0}.axes.csv {0}.schmidt.csv\n", prefix);
    if (!s.converged) err << "warning: Schmidt number not converged under grid refinement\n";
    return ExitCode::ok;
}

inline int cmd_triphoton(const SimulationConfig& cfg, const std::string& prefix, std::ostream& out,
                         std::ostream& err) {
    const Scenario& sc = cfg.scenario;
    detail::require_pulsed(sc, "triphoton");
    const KGrid pair = sc.pair_grid(sc.grid.triphoton_points);
    const SeedAxis seeds = sc.triphoton_seed_axis();
    const std::size_t total = pair.n_points * pair.n_points * seeds.size();
    if (total > sc.grid.memory_budget_points)
        throw UsageError(fmt::format("triphoton grid has {} points, above grid.memory_budget_points = {}", total,
                                     sc.grid.memory_budget_points));
    const TriphotonAmplitude tri = triphoton_amplitude(sc.ring, sc.envelope(), pair, seeds, sc.amplitude_options());
    detail::emit_warnings(err, tri.diagnostics.warnings);

    const std::size_t n = tri.n(), m = tri.m();
    const double dk = pair.spacing();
    std::vector<double> pair_marginal(n * n, 0.0), seed_marginal(m, 0.0);
    for (std::size_t ij = 0; ij < n * n; ++ij)
        for (std::size_t l = 0; l < m; ++l) {
            const double w = std::norm(tri.values[ij * m + l]);
            pair_marginal[ij] += w * seeds.spacing;
            seed_marginal[l] += w * dk * dk;
        }
    {
        JsiMatrix jm{pair, pair_marginal};
        detail::write_jsi_file(prefix + ".triphoton_pair.csv", jm, std::nan(""),
                               {{"marginal", "integrated over k3"}, {"coverage", fmt::format("{}", tri.diagnostics.coverage)}});
    }
    {
        auto f = detail::open_output(prefix + ".triphoton_k3.csv");
        f << "index,k3,k3_detuning,marginal\n";
        const double ks = sc.ring.mode(Role::S).k_res;
        for (std::size_t l = 0; l < m; ++l)
            f << fmt::format("{},{},{},{}\n", l, seeds.k[l], seeds.k[l] - ks, seed_marginal[l]);
    }
    double norm = 0.0;
    for (double v : seed_marginal) norm += v * seeds.spacing;
    out << "SpTOPDC triphoton amplitude\n";
    out << fmt::format("grid: {} x {} x {} points\n", n, n, m);
    out << fmt::format("norm residual = {:.3e}\n", norm - 1.0);
    out << fmt::format("wrote {0}.triphoton_pair.csv {0}.triphoton_k3.csv\n", prefix);
    return ExitCode::ok;
}

struct SetScanCliOptions {
    std::optional<std::size_t> seed_points;
    std::optional<double> seed_halfwidth_linewidths;
    std::optional<std::size_t> pair_points;
};

inline int cmd_set_scan(const SimulationConfig& cfg, const SetScanCliOptions& o, const std::string& prefix,
                        std::ostream& out, std::ostream& err) {
    Scenario sc = cfg.scenario;
    detail::require_pulsed(sc, "set-scan");
    if (o.seed_points) sc.seed.scan_points = *o.seed_points;
    if (o.seed_halfwidth_linewidths) sc.seed.scan_halfwidth_linewidths = *o.seed_halfwidth_linewidths;
    const KGrid pair = sc.pair_grid(o.pair_points.value_or(sc.grid.triphoton_points));
    const SeedAxis seeds = sc.seed_scan_axis();

    SetScanOptions so;
    so.amplitude = sc.amplitude_options();
    so.memory_budget_points = sc.grid.memory_budget_points;
    so.seed_band_halfwidth = sc.seed_band_halfwidth();
    const SetScanResult res = set_scan(sc.ring, sc.envelope(), seeds, pair, so);
    detail::emit_warnings(err, res.warnings);

    const ResonatorMode& s_mode = sc.ring.mode(Role::S);
    const double lw = Scenario::linewidth_k(s_mode);
    for (std::size_t l = 0; l < seeds.size(); ++l)
        detail::write_jsi_file(fmt::format("{}.slice_{:03d}.csv", prefix, l), res.slices[l], seeds.k[l],
                               {{"seed_offset_linewidths", fmt::format("{}", (seeds.k[l] - s_mode.k_res) / lw)}});
    {
        auto f = detail::open_output(prefix + ".set_residuals.csv");
        f << "index,k_seed,seed_offset_linewidths,residual,reconstructed_marginal,direct_marginal\n";
        for (std::size_t l = 0; l < seeds.size(); ++l) {
            const std::string resid =
                res.residuals_skipped ? "skipped" : fmt::format("{}", res.proportionality_residuals[l]);
            const std::string direct = res.residuals_skipped ? "skipped" : fmt::format("{}", res.direct_marginal[l]);
            f << fmt::format("{},{},{},{},{},{}\n", l, seeds.k[l], (seeds.k[l] - s_mode.k_res) / lw, resid,
                             res.reconstructed_marginal[l], direct);
        }
    }

    out << "SET slice scan\n";
    out << fmt::format("{} seed wavenumbers, pair grid {} x {}\n", seeds.size(), pair.n_points, pair.n_points);
    if (res.residuals_skipped) {
        out << "proportionality residuals: skipped (memory budget)\n";
    } else {
        double worst = 0.0;
        for (double r : res.proportionality_residuals) worst = std::max(worst, r);
        out << fmt::format("max proportionality residual = {:.3e}\n", worst);
        out << fmt::format("seed-marginal L1 distance = {:.3e}\n", res.marginal_l1);
    }
    out << fmt::format("wrote {0}.slice_NNN.csv (x{1}) {0}.set_residuals.csv\n", prefix, seeds.size());
    return ExitCode::ok;
}

inline int cmd_sweep(const SimulationConfig& cfg, SweepParameter p, const std::vector<double>& values,
                     const std::optional<std::string>& out_prefix, std::ostream& out, std::ostream& err) {
    detail::require_pulsed(cfg.scenario, "sweep");
    const auto rows = sweep(p, values, cfg.scenario);
    auto opt = [](std::optional<double> v) { return v ? fmt::format("{:.6e}", *v) : std::string("-"); };
    out << fmt::format("sweep over {} ({} values); rates in the CW limit at the configured powers\n", to_string(p),
                       values.size());
    out << fmt::format("{:>14} {:>14} {:>10} {:>10} {:>14} {:>14}\n", "value", "K", "dK", "converged", "R_spon",
                       "R_stim");
    for (const auto& r : rows) {
        if (!r.result) {
            out << fmt::format("{:>14.6e} error: {}\n", r.value, r.error);
            err << fmt::format("warning: sweep value {} failed: {}\n", r.value, r.error);
            continue;
        }
        const auto& s = r.result->schmidt;
        out << fmt::format("{:>14.6e} {:>14.9f} {:>10.2e} {:>10} {:>14} {:>14}\n", r.value, s.schmidt_number,
                           s.refinement_delta, s.converged ? "yes" : "no", opt(r.result->rate_spontaneous),
                           opt(r.result->rate_stimulated));
    }
    if (out_prefix) {
        auto f = detail::open_output(*out_prefix + ".sweep.csv");
        f << fmt::format("{},schmidt_number,refinement_delta,converged,rate_spontaneous,rate_stimulated,error\n",
                         to_string(p));
        for (const auto& r : rows) {
            if (!r.result) {
                f << fmt::format("{},,,,,,\"{}\"\n", r.value, r.error);
                continue;
            }
            const auto& s = r.result->schmidt;
            f << fmt::format("{},{},{},{},{},{},\n", r.value, s.schmidt_number, s.refinement_delta, s.converged,
                             r.result->rate_spontaneous ? fmt::format("{}", *r.result->rate_spontaneous) : "",
                             r.result->rate_stimulated ? fmt::format("{}", *r.result->rate_stimulated) : "");
        }
    }
    return ExitCode::ok;
}

struct CheckOptions {
    std::uint64_t seed = 20211015;
    std::size_t cases = 1000;
    bool inject_fault = false; ///< halve the stimulated prefactor (2^6 -> 2^5)
};

inline int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
    RateModel model;
    if (o.inject_fault)
        model.stimulated = [](const ProcessConfig& c) {
            RateResult r = rate_stimulated(c);
            r.factor_breakdown.front().value = 9.0 * 32.0;
            r.value = r.product();
            return r;
        };
    out << fmt::format("topdc self-check: seed {}, {} randomized configs\n", o.seed, o.cases);
    const CheckReport rep = run_checks(o.seed, o.cases, model);
    std::size_t passed = 0, failed = 0;
    for (const auto& s : rep.suites) {
        out << fmt::format("  {:<24} {:>6} passed {:>6} failed\n", s.name, s.passed, s.failed);
        passed += s.passed;
        failed += s.failed;
    }
    out << fmt::format("total: {} passed, {} failed\n", passed, failed);
    if (rep.ok()) return ExitCode::ok;
    err << "first failure " << *rep.first_failure << '\n';
    return ExitCode::check_failed;
}

} // namespace topdc::cli
