#pragma once

// Triphoton (spontaneous, pulsed pump) and biphoton (CW-seeded) spectral
// amplitudes on wavenumber grids. Both share the pair factor
//   F*_G+(k1) F*_G+(k2) F_P-(u) alpha_P(u),
//   u = (v_G (k1 + k2) + v_S k3 + Upsilon) / v_P,
// and the triphoton adds F*_S+(k3). All arithmetic is carried out in
// detunings from the resonant wavenumbers to avoid cancellation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "topdc/grid.hpp"
#include "topdc/parallel.hpp"
#include "topdc/pump.hpp"
#include "topdc/resonator.hpp"

namespace topdc {

using cplx = std::complex<double>;

struct PhaseMatchOffset {
    double upsilon = 0.0; ///< rad/s
};

/// Upsilon = v_P K_P - v_S K_S - 2 v_G K_G.
inline PhaseMatchOffset phase_match_offset(const ResonatorMode& g, const ResonatorMode& s, const ResonatorMode& p) {
    return {p.v_group * p.k_res - s.v_group * s.k_res - 2.0 * g.v_group * g.k_res};
}

struct AmplitudeOptions {
    /// Replaces the Upsilon derived from the modes; the pump argument at
    /// resonance then shifts by (upsilon - derived) / v_P.
    std::optional<double> upsilon;
    /// Replace F_P- alpha_P by 1 (separable limit).
    bool flat_pump = false;
};

struct GridDiagnostics {
    double coverage = 1.0; ///< smallest per-axis captured fraction of the Lorentzian |F|^2 weight
    std::vector<std::string> warnings;
};

inline constexpr double kCoverageThreshold = 0.999;

/// Fraction of the Lorentzian |F_J(k)|^2 weight that falls inside [k_lo, k_hi].
inline double lorentzian_coverage(const ResonatorMode& m, double k_lo, double k_hi) {
    const double g = half_linewidth(m);
    return (std::atan(m.v_group * (k_hi - m.k_res) / g) - std::atan(m.v_group * (k_lo - m.k_res) / g)) / pi;
}

/// Evaluates the individual factors of the amplitudes for one ring and pump.
class TripletKernel {
public:
    TripletKernel(const RingResonator& ring, const PumpEnvelope& env, AmplitudeOptions opts = {})
        : g_(ring.mode(Role::G)), s_(ring.mode(Role::S)), p_(ring.mode(Role::P)), env_(env), opts_(opts),
          length_(ring.length), gamma_g_(CouplingConstantGamma::for_mode(g_)),
          gamma_s_(CouplingConstantGamma::for_mode(s_)), gamma_p_(CouplingConstantGamma::for_mode(p_)) {
        ring.validate();
        if (!opts.flat_pump && env.kind == PumpEnvelope::Kind::cw)
            throw UsageError("triphoton/biphoton amplitudes need a pulsed (gaussian) pump");
        const double derived = phase_match_offset(g_, s_, p_).upsilon;
        upsilon_ = opts.upsilon.value_or(derived);
        offset_ = opts.upsilon ? (*opts.upsilon - derived) : 0.0;
    }

    double upsilon() const { return upsilon_; }
    const ResonatorMode& g() const { return g_; }
    const ResonatorMode& s() const { return s_; }
    const ResonatorMode& p() const { return p_; }

    /// F*_G+(k)
    cplx generated(double k) const {
        return std::conj(field_enhancement(g_, gamma_g_, k, Direction::incoming, length_));
    }

    /// F*_S+(k)
    cplx seed(double k) const {
        return std::conj(field_enhancement(s_, gamma_s_, k, Direction::incoming, length_));
    }

    /// u - K_P given generated-mode detunings summed and the seed-mode detuning.
    double pump_detuning(double pair_detuning_sum, double seed_detuning) const {
        return (g_.v_group * pair_detuning_sum + s_.v_group * seed_detuning + offset_) / p_.v_group;
    }

    /// F_P-(u) alpha_P(u) at u = K_P + du.
    cplx pump_term(double du) const {
        if (opts_.flat_pump) return {1.0, 0.0};
        const double u = p_.k_res + du;
        const cplx denom(-p_.v_group * du, -half_linewidth(p_));
        const cplx f = std::conj(gamma_p_.value()) / denom / std::sqrt(length_);
        return f * pump_spectral_amplitude(env_, p_.v_group, u);
    }

    /// Unnormalized pair factor F*_G+(k1) F*_G+(k2) F_P-(u) alpha_P(u), with
    /// the generated-mode factors supplied precomputed.
    cplx pair_value(cplx g1, cplx g2, double d1, double d2, double seed_detuning) const {
        return g1 * g2 * pump_term(pump_detuning(d1 + d2, seed_detuning));
    }

private:
    ResonatorMode g_, s_, p_;
    PumpEnvelope env_;
    AmplitudeOptions opts_;
    double length_;
    CouplingConstantGamma gamma_g_, gamma_s_, gamma_p_;
    double upsilon_ = 0.0;
    double offset_ = 0.0;
};

namespace detail {

/// Scales `values` so that sum |v|^2 * cell = 1 and the reference element is
/// real and non-negative. Falls back to the first largest-magnitude element
/// when the reference is zero. Returns the applied constant.
inline cplx normalize(std::vector<cplx>& values, double cell, std::size_t reference) {
    double sum = 0.0;
    for (const cplx& v : values) sum += std::norm(v);
    if (!(sum > 0.0) || !std::isfinite(sum)) throw PhysicsError("amplitude has zero or non-finite norm");
    std::size_t ref = reference;
    if (std::abs(values[ref]) == 0.0) {
        double best = -1.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (std::abs(values[i]) > best) {
                best = std::abs(values[i]);
                ref = i;
            }
        }
    }
    const cplx phase = std::conj(values[ref]) / std::abs(values[ref]);
    const cplx n = phase / std::sqrt(sum * cell);
    for (cplx& v : values) v *= n;
    return n;
}

inline std::vector<cplx> generated_factors(const TripletKernel& kern, const KGrid& grid) {
    std::vector<cplx> out(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) out[i] = kern.generated(grid.at(i));
    return out;
}

inline void check_coverage(GridDiagnostics& diag, const ResonatorMode& m, double k_lo, double k_hi,
                           const std::string& axis) {
    const double c = lorentzian_coverage(m, k_lo, k_hi);
    diag.coverage = std::min(diag.coverage, c);
    if (c < kCoverageThreshold) {
        diag.warnings.push_back(axis + " axis captures " + std::to_string(100.0 * c) +
                                "% of the resonance weight (< 99.9%); widen the grid for tail-sensitive results");
    }
}

} // namespace detail

struct BiphotonAmplitude {
    KGrid grid;                 ///< shared by k1 and k2
    std::vector<cplx> values;   ///< row-major, k1 along rows
    double k_seed = 0.0;
    cplx norm_constant;
    GridDiagnostics diagnostics;

    std::size_t n() const { return grid.n_points; }
    cplx at(std::size_t i, std::size_t j) const { return values[i * grid.n_points + j]; }
};

/// Seed-mode (third photon) axis: arbitrary list of wavenumbers with a
/// quadrature weight. A single point carries unit weight.
struct SeedAxis {
    std::vector<double> k;
    double spacing = 1.0;

    static SeedAxis from_grid(const KGrid& g) {
        g.validate();
        SeedAxis a;
        a.k.resize(g.n_points);
        for (std::size_t i = 0; i < g.n_points; ++i) a.k[i] = g.at(i);
        a.spacing = g.spacing();
        return a;
    }

    /// n points spanning center +- half_width; n == 1 gives just the centre.
    static SeedAxis uniform(double center, double half_width, std::size_t n) {
        if (n == 0) throw PhysicsError("seed axis needs at least one point");
        if (n == 1) return {{center}, 1.0};
        if (n % 2 == 0) throw PhysicsError("seed axis needs an odd number of points");
        return from_grid(KGrid::centered(center, half_width, n));
    }

    std::size_t size() const { return k.size(); }
};

struct TriphotonAmplitude {
    KGrid pair_grid;          ///< k1 and k2
    SeedAxis seed_axis;       ///< k3
    std::vector<cplx> values; ///< index (i * n + j) * m + l
    cplx norm_constant;
    GridDiagnostics diagnostics;

    std::size_t n() const { return pair_grid.n_points; }
    std::size_t m() const { return seed_axis.size(); }
    cplx at(std::size_t i, std::size_t j, std::size_t l) const { return values[(i * n() + j) * m() + l]; }
};

/// CW-seeded biphoton amplitude phi(k1, k2), normalized on the grid.
inline BiphotonAmplitude biphoton_amplitude(const RingResonator& ring, const PumpEnvelope& env, double k_seed,
                                            const KGrid& grid, AmplitudeOptions opts = {}) {
    grid.validate();
    const TripletKernel kern(ring, env, opts);
    const std::size_t n = grid.n_points;
    const auto gfac = detail::generated_factors(kern, grid);
    const double seed_det = k_seed - kern.s().k_res;

    BiphotonAmplitude amp;
    amp.grid = grid;
    amp.k_seed = k_seed;
    amp.values.assign(n * n, cplx{});
    parallel_for(n, [&](std::size_t i) {
        const double di = grid.at(i) - kern.g().k_res;
        for (std::size_t j = i; j < n; ++j) {
            const double dj = grid.at(j) - kern.g().k_res;
            amp.values[i * n + j] = kern.pair_value(gfac[i], gfac[j], di, dj, seed_det);
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) amp.values[i * n + j] = amp.values[j * n + i];

    const double dk = grid.spacing();
    amp.norm_constant = detail::normalize(amp.values, dk * dk, grid.center_index() * n + grid.center_index());
    detail::check_coverage(amp.diagnostics, kern.g(), grid.k_min, grid.k_max, "k1/k2");
    return amp;
}

/// Spontaneous triphoton amplitude phi(k1, k2, k3), normalized on the grid.
inline TriphotonAmplitude triphoton_amplitude(const RingResonator& ring, const PumpEnvelope& env,
                                              const KGrid& pair_grid, const SeedAxis& seed_axis,
                                              AmplitudeOptions opts = {}) {
    pair_grid.validate();
    const TripletKernel kern(ring, env, opts);
    const std::size_t n = pair_grid.n_points;
    const std::size_t m = seed_axis.size();
    const auto gfac = detail::generated_factors(kern, pair_grid);
    std::vector<cplx> sfac(m);
    std::vector<double> sdet(m);
    for (std::size_t l = 0; l < m; ++l) {
        sfac[l] = kern.seed(seed_axis.k[l]);
        sdet[l] = seed_axis.k[l] - kern.s().k_res;
    }

    TriphotonAmplitude amp;
    amp.pair_grid = pair_grid;
    amp.seed_axis = seed_axis;
    amp.values.assign(n * n * m, cplx{});
    parallel_for(n, [&](std::size_t i) {
        const double di = pair_grid.at(i) - kern.g().k_res;
        for (std::size_t j = i; j < n; ++j) {
            const double dj = pair_grid.at(j) - kern.g().k_res;
            for (std::size_t l = 0; l < m; ++l)
                amp.values[(i * n + j) * m + l] = kern.pair_value(gfac[i], gfac[j], di, dj, sdet[l]) * sfac[l];
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            for (std::size_t l = 0; l < m; ++l) amp.values[(i * n + j) * m + l] = amp.values[(j * n + i) * m + l];

    const double dk = pair_grid.spacing();
    const std::size_t c = pair_grid.center_index();
    amp.norm_constant = detail::normalize(amp.values, dk * dk * seed_axis.spacing, (c * n + c) * m + m / 2);
    detail::check_coverage(amp.diagnostics, kern.g(), pair_grid.k_min, pair_grid.k_max, "k1/k2");
    if (m > 1) detail::check_coverage(amp.diagnostics, kern.s(), seed_axis.k.front(), seed_axis.k.back(), "k3");
    return amp;
}

/// Recipe for a biphoton amplitude; rebuilding at higher resolution is how
/// Schmidt-number convergence is certified.
struct BiphotonProblem {
    RingResonator ring;
    PumpEnvelope envelope;
    double k_seed = 0.0;
    KGrid grid;
    AmplitudeOptions options;

    BiphotonAmplitude build() const { return biphoton_amplitude(ring, envelope, k_seed, grid, options); }

    BiphotonProblem refined() const {
        BiphotonProblem r = *this;
        r.grid = grid.refined();
        return r;
    }
};

} // namespace topdc
