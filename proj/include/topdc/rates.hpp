#pragma once

// Fermi-golden-rule generation rates for CW pump (and seed) fields.

#include <string>
#include <vector>

#include "topdc/process.hpp"
#include "topdc/pump.hpp"

namespace topdc {

struct RateFactor {
    std::string name;
    double value = 0.0;
};

struct RateResult {
    double value = 0.0; ///< events per second at the output
    Scheme scheme = Scheme::degenerate;
    std::vector<RateFactor> factor_breakdown;

    /// Product of the breakdown factors, evaluated left to right.
    double product() const {
        double p = 1.0;
        for (const auto& f : factor_breakdown) p *= f.value;
        return p;
    }
};

namespace detail {

inline RateResult assemble(Scheme scheme, std::vector<RateFactor> factors) {
    RateResult r;
    r.scheme = scheme;
    r.factor_breakdown = std::move(factors);
    r.value = r.product();
    return r;
}

inline void require_scheme(const ProcessConfig& cfg, Scheme want) {
    if (cfg.scheme != want)
        throw UsageError("rate formula needs a " + std::string(to_string(want)) + " process, got " +
                         std::string(to_string(cfg.scheme)));
    cfg.validate();
}

} // namespace detail

/// Triplets/s in mode F from a CW third-harmonic pump in mode T.
inline RateResult rate_spontaneous_degenerate(const ProcessConfig& cfg) {
    detail::require_scheme(cfg, Scheme::degenerate);
    const auto& f = cfg.ring.mode(Role::F);
    const auto& t = cfg.ring.mode(Role::T);
    const double eta_f = escape_efficiency(f);
    const double eta_t = escape_efficiency(t);
    const double hbar = PhysicalConstants::hbar;
    return detail::assemble(Scheme::degenerate,
                            {{"prefactor", 32.0},
                             {"lambda_sq", cfg.lambda_nl * cfg.lambda_nl},
                             {"efficiencies", eta_f * eta_f * eta_f * eta_t},
                             {"q_term", f.q_loaded * t.q_loaded / (hbar * t.omega * t.omega * f.omega)},
                             {"power", cfg.p_pump},
                             {"sinc_sq", phase_mismatch(cfg).sinc_sq}});
}

/// Triplets/s (two photons in G, one in S) from a CW pump in mode P.
inline RateResult rate_spontaneous_nondegenerate(const ProcessConfig& cfg) {
    detail::require_scheme(cfg, Scheme::non_degenerate);
    const auto& g = cfg.ring.mode(Role::G);
    const auto& s = cfg.ring.mode(Role::S);
    const auto& p = cfg.ring.mode(Role::P);
    const double eta_g = escape_efficiency(g);
    const double q_term = g.q_loaded * s.q_loaded * p.q_loaded /
                          (PhysicalConstants::hbar * p.omega * p.omega *
                           (2.0 * s.q_loaded * g.omega + g.q_loaded * s.omega));
    return detail::assemble(Scheme::non_degenerate,
                            {{"prefactor", 9.0 * 32.0},
                             {"lambda_sq", cfg.lambda_nl * cfg.lambda_nl},
                             {"efficiencies", eta_g * eta_g * escape_efficiency(s) * escape_efficiency(p)},
                             {"q_term", q_term},
                             {"power", cfg.p_pump},
                             {"sinc_sq", phase_mismatch(cfg).sinc_sq}});
}

/// Effective power of the vacuum fluctuations driving the seed mode.
inline double vacuum_power(const ResonatorMode& g_mode, const ResonatorMode& s_mode) {
    return PhysicalConstants::hbar * s_mode.omega /
           (2.0 / half_linewidth(s_mode) + 1.0 / half_linewidth(g_mode));
}

/// Pairs/s in mode G with a CW seed in S. A missing seed power counts as zero.
inline RateResult rate_stimulated(const ProcessConfig& cfg) {
    detail::require_scheme(cfg, Scheme::non_degenerate);
    const auto& g = cfg.ring.mode(Role::G);
    const auto& s = cfg.ring.mode(Role::S);
    const auto& p = cfg.ring.mode(Role::P);
    const double hbar = PhysicalConstants::hbar;
    const double eta_g = escape_efficiency(g);
    const double q_term = g.q_loaded * s.q_loaded * p.q_loaded /
                          (hbar * hbar * p.omega * p.omega * g.omega * s.omega * s.omega);
    return detail::assemble(Scheme::non_degenerate,
                            {{"prefactor", 9.0 * 64.0},
                             {"lambda_sq", cfg.lambda_nl * cfg.lambda_nl},
                             {"efficiencies", eta_g * eta_g * escape_efficiency(s) * escape_efficiency(p)},
                             {"q_term", q_term},
                             {"power", cfg.p_pump * cfg.p_seed.value_or(0.0)},
                             {"sinc_sq", phase_mismatch(cfg).sinc_sq}});
}

/// Gain of the stimulated over the spontaneous rate: P_S / P_vac.
inline double stimulation_enhancement(const ProcessConfig& cfg) {
    detail::require_scheme(cfg, Scheme::non_degenerate);
    return cfg.p_seed.value_or(0.0) / vacuum_power(cfg.ring.mode(Role::G), cfg.ring.mode(Role::S));
}

/// Rate normalized by the powers it is linear in (1/(s W) or 1/(s W^2)).
inline double rate_coefficient(const RateResult& r) {
    double c = 1.0;
    for (const auto& f : r.factor_breakdown)
        if (f.name != "power") c *= f.value;
    return c;
}

/// Stimulated pair rate from a given coefficient (1/(s W^2)).
inline double stimulated_rate_from_coefficient(double coefficient, double p_pump, double p_seed) {
    return coefficient * p_pump * p_seed;
}

/// The closed-form rates assume CW fields. A pulsed envelope is accepted only
/// when the caller explicitly asks for the CW limit at the configured power.
inline void ensure_rates_applicable(const PumpEnvelope& env, bool cw_limit_requested) {
    if (env.kind != PumpEnvelope::Kind::cw && !cw_limit_requested)
        throw UsageError("rates are CW-only: the configured pump is pulsed");
}

} // namespace topdc
