#pragma once

#include <cmath>
#include <optional>
#include <string_view>

#include "topdc/resonator.hpp"

namespace topdc {

enum class Scheme { degenerate, non_degenerate };

inline constexpr std::string_view to_string(Scheme s) {
    return s == Scheme::degenerate ? "degenerate" : "non_degenerate";
}

/// One TOPDC process instance. Degenerate: T -> F+F+F. Non-degenerate: P -> G+G+S.
struct ProcessConfig {
    Scheme scheme = Scheme::degenerate;
    RingResonator ring;
    double lambda_nl = 0.0;              ///< nonlinear coupling rate (1/s)
    double p_pump = 0.0;                 ///< pump power in the channel (W)
    std::optional<double> p_seed;        ///< seed power (W), stimulated process only

    /// Throws UsageError when the ring lacks a mode the scheme needs,
    /// PhysicsError for negative powers or non-finite Lambda.
    void validate() const {
        if (scheme == Scheme::degenerate) {
            ring.mode(Role::F);
            ring.mode(Role::T);
        } else {
            ring.mode(Role::G);
            ring.mode(Role::S);
            ring.mode(Role::P);
        }
        if (!std::isfinite(lambda_nl)) throw PhysicsError("lambda_nl must be finite");
        if (!(p_pump >= 0.0) || !std::isfinite(p_pump)) throw PhysicsError("pump power must be >= 0");
        if (p_seed && (!(*p_seed >= 0.0) || !std::isfinite(*p_seed)))
            throw PhysicsError("seed power must be >= 0");
    }
};

struct PhaseMismatch {
    double delta_kappa = 0.0; ///< rad/m
    double sinc_sq = 1.0;     ///< sinc^2(delta_kappa L / 2)
};

inline PhaseMismatch phase_mismatch(const ProcessConfig& cfg) {
    const RingResonator& ring = cfg.ring;
    double dk = 0.0;
    if (cfg.scheme == Scheme::degenerate) {
        dk = ring.mode(Role::T).kappa_ring - 3.0 * ring.mode(Role::F).kappa_ring;
    } else {
        dk = ring.mode(Role::P).kappa_ring - (ring.mode(Role::S).kappa_ring + 2.0 * ring.mode(Role::G).kappa_ring);
    }
    const double s = sinc(dk * ring.length / 2.0);
    return {dk, s * s};
}

} // namespace topdc
