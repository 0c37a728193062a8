#pragma once

// Randomized self-check suites: rate identities, scaling laws, symmetric
// reduction, Schmidt oracles and amplitude symmetry. Used by `topdc-sim check`.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "topdc/jsa.hpp"
#include "topdc/rates.hpp"
#include "topdc/wavefunction.hpp"

namespace topdc {

/// The rate formulas under test. Replaceable so a deliberately broken model
/// can prove the suites catch it.
struct RateModel {
    std::function<RateResult(const ProcessConfig&)> spontaneous_degenerate = rate_spontaneous_degenerate;
    std::function<RateResult(const ProcessConfig&)> spontaneous = rate_spontaneous_nondegenerate;
    std::function<RateResult(const ProcessConfig&)> stimulated = rate_stimulated;
};

inline bool relative_close(double a, double b, double tol) {
    if (a == b) return true;
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Random valid non-degenerate process: energy conserving, eta in (0, 1].
inline ProcessConfig random_nondegenerate_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };
    auto eta = [&] { return 0.05 + 0.95 * (1.0 - unit(rng)); };

    ProcessConfig cfg;
    cfg.scheme = Scheme::non_degenerate;
    cfg.ring.length = log_uniform(1e-5, 1e-2);
    const double w_g = 0.8e15 + 1.2e15 * unit(rng);
    const double w_s = 0.8e15 + 1.2e15 * unit(rng);
    const double w_p = w_s + 2.0 * w_g;
    auto mode = [&](Role r, double w) {
        const double q = log_uniform(1e4, 1e7);
        return make_mode(r, w, q, q / eta(), 1.4 + 2.1 * unit(rng));
    };
    cfg.ring.modes[Role::G] = mode(Role::G, w_g);
    cfg.ring.modes[Role::S] = mode(Role::S, w_s);
    ResonatorMode p = mode(Role::P, w_p);
    p.kappa_ring += (2.0 * unit(rng) - 1.0) * 4.0 * pi / cfg.ring.length;
    cfg.ring.modes[Role::P] = p;
    cfg.lambda_nl = log_uniform(1e-2, 1e3);
    cfg.p_pump = unit(rng);
    cfg.p_seed = 0.1 * unit(rng);
    return cfg;
}

inline std::string describe(const ProcessConfig& cfg) {
    std::string out = fmt::format("scheme={} length={} lambda_nl={} p_pump={} p_seed={}\n", to_string(cfg.scheme),
                                  cfg.ring.length, cfg.lambda_nl, cfg.p_pump, cfg.p_seed.value_or(0.0));
    for (const auto& [role, m] : cfg.ring.modes)
        out += fmt::format("  mode {}: omega={} q_loaded={} q_coupling={} v_group={} k_res={} kappa={} n_char={}\n",
                           to_string(role), m.omega, m.q_loaded, m.q_coupling, m.v_group, m.k_res, m.kappa_ring,
                           m.n_char);
    return out;
}

/// Reduces a non-degenerate config to its degenerate twin: F <- G, T <- P.
inline ProcessConfig degenerate_twin(const ProcessConfig& nd) {
    ProcessConfig d = nd;
    d.scheme = Scheme::degenerate;
    d.p_seed.reset();
    d.ring.modes.clear();
    ResonatorMode f = nd.ring.mode(Role::G);
    ResonatorMode t = nd.ring.mode(Role::P);
    f.role = Role::F;
    t.role = Role::T;
    d.ring.modes[Role::F] = f;
    d.ring.modes[Role::T] = t;
    return d;
}

/// 1 / tr(rho^2) of the reduced one-photon matrix, by explicit summation.
inline double purity_schmidt_number(const std::vector<cplx>& phi, std::size_t n, double dk) {
    std::vector<cplx> rho(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            cplx s{};
            for (std::size_t k = 0; k < n; ++k) s += phi[a * n + k] * std::conj(phi[b * n + k]);
            rho[a * n + b] = s * dk * dk;
        }
    cplx trace{};
    for (std::size_t a = 0; a < n; ++a) trace += rho[a * n + a];
    cplx tr2{};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) tr2 += rho[a * n + b] * rho[b * n + a];
    return (trace.real() * trace.real()) / tr2.real();
}

struct SuiteResult {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
};

struct CheckReport {
    std::uint64_t seed = 0;
    std::vector<SuiteResult> suites;
    std::optional<std::string> first_failure;

    bool ok() const {
        for (const auto& s : suites)
            if (s.failed != 0) return false;
        return true;
    }
};

inline CheckReport run_checks(std::uint64_t seed, std::size_t cases, const RateModel& model = {}) {
    CheckReport rep;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto record = [&](SuiteResult& s, bool ok, const std::function<std::string()>& what) {
        if (ok) {
            ++s.passed;
            return;
        }
        ++s.failed;
        if (!rep.first_failure) rep.first_failure = "[" + s.name + "] " + what();
    };

    SuiteResult identity{"stimulation-identity"}, scaling{"power-scaling"}, breakdown{"factor-breakdown"},
        reduction{"symmetric-reduction"}, generator{"generator-invariants"};
    for (std::size_t c = 0; c < cases; ++c) {
        const ProcessConfig cfg = random_nondegenerate_config(rng);
        const double alpha = 0.1 + 10.0 * unit(rng);
        const double beta = 0.1 + 10.0 * unit(rng);

        bool gen_ok = true;
        for (const auto& [r, m] : cfg.ring.modes) {
            const double eta = escape_efficiency(m);
            gen_ok = gen_ok && eta > 0.0 && eta <= 1.0;
        }
        record(generator, gen_ok, [&] { return describe(cfg); });

        const RateResult spon = model.spontaneous(cfg);
        const RateResult stim = model.stimulated(cfg);
        const double enh = stimulation_enhancement(cfg);
        record(identity, relative_close(stim.value, spon.value * enh, 1e-12), [&] {
            return fmt::format("stim={} spon*Ps/Pvac={}\n{}", stim.value, spon.value * enh, describe(cfg));
        });

        ProcessConfig scaled = cfg;
        scaled.p_pump *= alpha;
        scaled.p_seed = *cfg.p_seed * beta;
        const bool lin = relative_close(model.spontaneous(scaled).value, alpha * spon.value, 1e-12) &&
                         relative_close(model.stimulated(scaled).value, alpha * beta * stim.value, 1e-12);
        record(scaling, lin, [&] { return fmt::format("alpha={} beta={}\n{}", alpha, beta, describe(cfg)); });

        record(breakdown,
               relative_close(spon.product(), spon.value, 1e-12) && relative_close(stim.product(), stim.value, 1e-12),
               [&] { return describe(cfg); });

        // Symmetric substitution: S and G identical, same Lambda and efficiencies.
        ProcessConfig sym = cfg;
        ResonatorMode s = sym.ring.mode(Role::G);
        s.role = Role::S;
        sym.ring.modes[Role::S] = s;
        ResonatorMode& p = sym.ring.modes.at(Role::P);
        p.omega = 3.0 * s.omega;
        p.kappa_ring = 3.0 * s.kappa_ring;
        const double nd = model.spontaneous(sym).value;
        const double dg = model.spontaneous_degenerate(degenerate_twin(sym)).value;
        record(reduction, relative_close(nd, 3.0 * dg, 1e-12),
               [&] { return fmt::format("nondeg={} 3*deg={}\n{}", nd, 3.0 * dg, describe(sym)); });
    }

    SuiteResult oracle{"schmidt-oracle"};
    {
        // Rank one.
        const std::size_t n = 12;
        std::vector<cplx> sep(n * n);
        std::vector<cplx> f(n);
        for (auto& v : f) v = {unit(rng) + 0.1, unit(rng) - 0.5};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) sep[i * n + j] = f[i] * f[j];
        const double k_sep = schmidt_decompose(sep, n, 0.3).schmidt_number;
        record(oracle, std::abs(k_sep - 1.0) <= 1e-10, [&] { return fmt::format("separable K={}", k_sep); });

        // Anti-diagonal, equal magnitudes.
        const std::size_t na = 8;
        std::vector<cplx> anti(na * na);
        for (std::size_t i = 0; i < na; ++i) anti[i * na + (na - 1 - i)] = std::polar(1.0, 0.7 * double(i));
        const double k_anti = schmidt_decompose(anti, na, 1.0).schmidt_number;
        record(oracle, std::abs(k_anti - double(na)) <= 1e-8, [&] { return fmt::format("antidiagonal K={}", k_anti); });

        // Random symmetric matrices against the reduced-density purity.
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t m = 2 + static_cast<std::size_t>(unit(rng) * 15.0);
            std::vector<cplx> a(m * m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i; j < m; ++j) a[i * m + j] = a[j * m + i] = {unit(rng) - 0.5, unit(rng) - 0.5};
            const double dk = 0.01 + unit(rng);
            const double svd_k = schmidt_decompose(a, m, dk).schmidt_number;
            const double brute = purity_schmidt_number(a, m, dk);
            record(oracle, relative_close(svd_k, brute, 1e-10),
                   [&] { return fmt::format("N={} svd K={} purity K={}", m, svd_k, brute); });
        }
    }

    SuiteResult amplitude{"biphoton-symmetry"};
    for (int trial = 0; trial < 5; ++trial) {
        const ProcessConfig cfg = random_nondegenerate_config(rng);
        const ResonatorMode& g = cfg.ring.mode(Role::G);
        const ResonatorMode& p = cfg.ring.mode(Role::P);
        const PumpEnvelope env = PumpEnvelope::gaussian(p.k_res, 1e-12 + 1e-10 * unit(rng));
        const KGrid grid = KGrid::centered(g.k_res, 12.0 * half_linewidth(g) / g.v_group, 41);
        const BiphotonAmplitude amp = biphoton_amplitude(cfg.ring, env, cfg.ring.mode(Role::S).k_res, grid);
        bool sym_ok = true;
        double norm = 0.0;
        for (std::size_t i = 0; i < amp.n(); ++i)
            for (std::size_t j = 0; j < amp.n(); ++j) {
                sym_ok = sym_ok && amp.at(i, j) == amp.at(j, i);
                norm += std::norm(amp.at(i, j));
            }
        norm *= grid.spacing() * grid.spacing();
        record(amplitude, sym_ok && std::abs(norm - 1.0) <= 1e-10,
               [&] { return fmt::format("norm={} symmetric={}\n{}", norm, sym_ok, describe(cfg)); });
    }

    rep.suites = {identity, scaling, breakdown, reduction, generator, oracle, amplitude};
    return rep;
}

} // namespace topdc
