#pragma once

// A fully resolved simulation setup (SI units) plus the derived objects every
// subcommand builds from it. Sweeps and single runs both go through here so a
// one-value sweep reproduces a single run exactly.

#include <cstddef>
#include <optional>

#include "topdc/jsa.hpp"
#include "topdc/process.hpp"
#include "topdc/rates.hpp"
#include "topdc/wavefunction.hpp"

namespace topdc {

struct GridSettings {
    double halfwidth_linewidths = 12.0;      ///< per axis, in units of Gamma/v
    std::size_t points = 401;                ///< biphoton grid
    std::size_t triphoton_points = 101;      ///< per pair axis of the triphoton grid
    std::size_t memory_budget_points = std::size_t{1} << 24;
};

struct SeedSettings {
    double offset_linewidths = 0.0;          ///< k_S - K_S in units of Gamma_S / v_S
    std::size_t scan_points = 11;
    double scan_halfwidth_linewidths = 5.0;
    std::size_t triphoton_seed_points = 101; ///< k3 axis of the `triphoton` command
};

struct PumpSettings {
    PumpEnvelope::Kind kind = PumpEnvelope::Kind::gaussian;
    double fwhm = 10e-12;                    ///< s, temporal intensity FWHM
    double detuning_linewidths = 0.0;        ///< carrier offset from K_P in units of Gamma_P / v_P
    bool rates_cw_limit = false;             ///< allow CW-limit rates with a pulsed pump
};

struct Scenario {
    Scheme scheme = Scheme::non_degenerate;
    RingResonator ring;
    std::optional<double> lambda_nl; ///< direct input; derived from chi3 and a_eff when absent
    double pump_power = 0.0;
    std::optional<double> seed_power;
    std::optional<double> upsilon; ///< overrides the value derived from the modes
    PumpSettings pump;
    GridSettings grid;
    SeedSettings seed;

    double coupling_rate(Scheme s) const {
        if (lambda_nl) return *lambda_nl;
        if (s == Scheme::degenerate) return nonlinear_coupling_rate(ring, ring.mode(Role::T), ring.mode(Role::F));
        return nonlinear_coupling_rate(ring, ring.mode(Role::G), ring.mode(Role::S), ring.mode(Role::P));
    }

    ProcessConfig process(Scheme s) const {
        ProcessConfig p{s, ring, coupling_rate(s), pump_power,
                        s == Scheme::non_degenerate ? seed_power : std::nullopt};
        p.validate();
        return p;
    }

    bool has_degenerate_modes() const { return ring.has(Role::F) && ring.has(Role::T); }
    bool has_nondegenerate_modes() const { return ring.has(Role::G) && ring.has(Role::S) && ring.has(Role::P); }

    PumpEnvelope envelope() const {
        const ResonatorMode& p = ring.mode(Role::P);
        const double k_center = p.k_res + pump.detuning_linewidths * half_linewidth(p) / p.v_group;
        if (pump.kind == PumpEnvelope::Kind::cw) return PumpEnvelope::cw(k_center);
        return PumpEnvelope::gaussian(k_center, pump.fwhm);
    }

    AmplitudeOptions amplitude_options() const { return {upsilon, false}; }

    static double linewidth_k(const ResonatorMode& m) { return half_linewidth(m) / m.v_group; }

    KGrid pair_grid(std::size_t n) const {
        const ResonatorMode& g = ring.mode(Role::G);
        return KGrid::centered(g.k_res, grid.halfwidth_linewidths * linewidth_k(g), n);
    }

    double seed_band_halfwidth() const { return grid.halfwidth_linewidths * linewidth_k(ring.mode(Role::S)); }

    double k_seed() const {
        const ResonatorMode& s = ring.mode(Role::S);
        return s.k_res + seed.offset_linewidths * linewidth_k(s);
    }

    SeedAxis seed_scan_axis() const {
        const ResonatorMode& s = ring.mode(Role::S);
        return SeedAxis::uniform(s.k_res, seed.scan_halfwidth_linewidths * linewidth_k(s), seed.scan_points);
    }

    SeedAxis triphoton_seed_axis() const {
        return SeedAxis::uniform(ring.mode(Role::S).k_res, seed_band_halfwidth(), seed.triphoton_seed_points);
    }

    BiphotonProblem biphoton_problem() const {
        return {ring, envelope(), k_seed(), pair_grid(grid.points), amplitude_options()};
    }
};

/// CW-limit rates for whichever schemes the scenario's mode set supports.
struct RateSummary {
    std::optional<RateResult> spontaneous_degenerate;
    std::optional<RateResult> spontaneous_nondegenerate;
    std::optional<RateResult> stimulated;
    std::optional<double> vacuum_power;
    std::optional<double> enhancement;
};

inline RateSummary evaluate_rates(const Scenario& sc) {
    RateSummary out;
    if (sc.has_degenerate_modes()) out.spontaneous_degenerate = rate_spontaneous_degenerate(sc.process(Scheme::degenerate));
    if (sc.has_nondegenerate_modes()) {
        const ProcessConfig nd = sc.process(Scheme::non_degenerate);
        out.spontaneous_nondegenerate = rate_spontaneous_nondegenerate(nd);
        out.vacuum_power = vacuum_power(sc.ring.mode(Role::G), sc.ring.mode(Role::S));
        if (sc.seed_power) {
            out.stimulated = rate_stimulated(nd);
            out.enhancement = stimulation_enhancement(nd);
        }
    }
    return out;
}

} // namespace topdc
