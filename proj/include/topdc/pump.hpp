#pragma once

#include <cmath>
#include <complex>

#include "topdc/errors.hpp"

namespace topdc {

/// Classical pump spectral envelope. `fwhm_intensity_time` is the FWHM of the
/// temporal intensity profile.
struct PumpEnvelope {
    enum class Kind { cw, gaussian };

    Kind kind = Kind::cw;
    double k_center = 0.0;            ///< carrier wavenumber (rad/m)
    double fwhm_intensity_time = 0.0; ///< s, gaussian only
    double amplitude_scale = 1.0;

    static PumpEnvelope cw(double k_center) { return {Kind::cw, k_center, 0.0, 1.0}; }

    static PumpEnvelope gaussian(double k_center, double fwhm) {
        if (!(fwhm > 0.0) || !std::isfinite(fwhm)) throw PhysicsError("pulse FWHM must be > 0");
        return {Kind::gaussian, k_center, fwhm, 1.0};
    }

    /// Temporal amplitude std: tau / (2 sqrt(ln 2)).
    double sigma_t() const { return fwhm_intensity_time / (2.0 * std::sqrt(std::log(2.0))); }

    /// Spectral amplitude std in angular frequency, 1 / sigma_t.
    double sigma_omega() const { return 1.0 / sigma_t(); }
};

/// alpha(k) = scale * exp(-sigma_t^2 v^2 (k - K)^2 / 2). A CW pump is a point
/// mass and cannot be sampled.
inline std::complex<double> pump_spectral_amplitude(const PumpEnvelope& env, double v_pump, double k) {
    if (env.kind == PumpEnvelope::Kind::cw)
        throw UsageError("a CW pump is a delta function in k and cannot be sampled on a grid");
    const double x = env.sigma_t() * v_pump * (k - env.k_center);
    return env.amplitude_scale * std::exp(-0.5 * x * x);
}

} // namespace topdc
