#pragma once

// Joint spectral intensity, Schmidt decomposition and slice-by-slice
// reconstruction of the triphoton spectrum from seeded biphotons.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "topdc/wavefunction.hpp"

namespace topdc {

struct JsiMatrix {
    KGrid grid;
    std::vector<double> values; ///< |phi|^2, row-major

    std::size_t n() const { return grid.n_points; }
    double at(std::size_t i, std::size_t j) const { return values[i * grid.n_points + j]; }

    double integral() const {
        double s = 0.0;
        for (double v : values) s += v;
        const double dk = grid.spacing();
        return s * dk * dk;
    }

    /// Axis in angular frequency through the linear dispersion of `mode`.
    std::vector<double> frequency_axis(const ResonatorMode& mode) const {
        std::vector<double> w(n());
        for (std::size_t i = 0; i < n(); ++i) w[i] = mode_frequency_at(mode, grid.at(i));
        return w;
    }
};

inline JsiMatrix jsi(const BiphotonAmplitude& amp) {
    JsiMatrix m{amp.grid, std::vector<double>(amp.values.size())};
    for (std::size_t i = 0; i < amp.values.size(); ++i) m.values[i] = std::norm(amp.values[i]);
    return m;
}

struct SchmidtResult {
    std::vector<double> coefficients; ///< descending, sum to 1
    double schmidt_number = 1.0;
    bool rank_one = false;            ///< second singular value <= 1e-10 of the first
    bool converged = false;
    double refinement_delta = std::numeric_limits<double>::quiet_NaN();
};

/// Singular-value spectrum of the n x n matrix phi * dk (row-major).
inline SchmidtResult schmidt_decompose(std::span<const cplx> values, std::size_t n, double dk) {
    if (values.size() != n * n) throw UsageError("amplitude matrix size mismatch");
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx v = values[i * n + j];
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw PhysicsError("non-finite amplitude entry; decomposition aborted");
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v * dk;
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    const Eigen::VectorXd s = svd.singularValues();

    SchmidtResult r;
    r.coefficients.resize(static_cast<std::size_t>(s.size()));
    double total = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) total += s[i] * s[i];
    if (!(total > 0.0)) throw PhysicsError("amplitude matrix is identically zero");
    double purity = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double p = s[i] * s[i] / total;
        r.coefficients[static_cast<std::size_t>(i)] = p;
        purity += p * p;
    }
    std::sort(r.coefficients.begin(), r.coefficients.end(), std::greater<>());
    r.schmidt_number = 1.0 / purity;
    r.rank_one = s.size() < 2 || s[1] <= 1e-10 * s[0];
    return r;
}

/// Decomposition of an already built amplitude (no convergence check).
inline SchmidtResult schmidt_decompose(const BiphotonAmplitude& amp) {
    return schmidt_decompose(amp.values, amp.n(), amp.grid.spacing());
}

inline constexpr double kSchmidtConvergenceTolerance = 1e-3;

/// Schmidt decomposition of `built` (the amplitude of `problem`) with a
/// refinement check at twice the grid resolution.
inline SchmidtResult schmidt(const BiphotonProblem& problem, const BiphotonAmplitude& built) {
    SchmidtResult r = schmidt_decompose(built);
    const SchmidtResult fine = schmidt_decompose(problem.refined().build());
    r.refinement_delta = std::abs(fine.schmidt_number - r.schmidt_number);
    r.converged = r.refinement_delta <= kSchmidtConvergenceTolerance;
    return r;
}

inline SchmidtResult schmidt(const BiphotonProblem& problem) { return schmidt(problem, problem.build()); }

struct SetScanResult {
    std::vector<double> seed_wavenumbers;
    std::vector<JsiMatrix> slices;
    std::vector<BiphotonAmplitude> amplitudes;
    /// Per-slice max pointwise relative deviation between the normalized
    /// triphoton slice and the seeded biphoton. Empty when skipped.
    std::vector<double> proportionality_residuals;
    bool residuals_skipped = false;
    /// Seed-axis marginals: rebuilt from slice weights, and read off the
    /// direct triphoton (empty when skipped). Both integrate to 1.
    std::vector<double> reconstructed_marginal;
    std::vector<double> direct_marginal;
    double marginal_l1 = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
};

struct SetScanOptions {
    AmplitudeOptions amplitude;
    /// Triphoton size limit in complex entries; above it residuals are skipped.
    std::size_t memory_budget_points = std::size_t{1} << 24;
    /// Seeds detuned beyond this (rad/m, from K_S) draw a warning; 0 disables.
    double seed_band_halfwidth = 0.0;
};

namespace detail {

/// Divides by the slice L2 norm and rotates the reference element to the real axis.
inline std::vector<cplx> normalized_slice(std::vector<cplx> v, double cell, std::size_t reference) {
    normalize(v, cell, reference);
    return v;
}

inline double max_relative_deviation(std::span<const cplx> a, std::span<const cplx> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max(std::abs(a[i]), std::abs(b[i]));
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

} // namespace detail

/// Seeded biphoton JSI for every seed wavenumber, checked against one direct
/// triphoton computation on the same (pair x seed) axes.
inline SetScanResult set_scan(const RingResonator& ring, const PumpEnvelope& env, const SeedAxis& seeds,
                              const KGrid& pair_grid, const SetScanOptions& opts = {}) {
    pair_grid.validate();
    const std::size_t n = pair_grid.n_points;
    const std::size_t m = seeds.size();
    if (m == 0) throw UsageError("seed scan needs at least one seed wavenumber");

    SetScanResult res;
    res.seed_wavenumbers = seeds.k;
    res.amplitudes.resize(m);
    parallel_for(m, [&](std::size_t l) {
        res.amplitudes[l] = biphoton_amplitude(ring, env, seeds.k[l], pair_grid, opts.amplitude);
    });

    const ResonatorMode& s_mode = ring.mode(Role::S);
    const CouplingConstantGamma gamma_s = CouplingConstantGamma::for_mode(s_mode);
    res.slices.reserve(m);
    res.reconstructed_marginal.resize(m);
    double total = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
        const BiphotonAmplitude& a = res.amplitudes[l];
        res.slices.push_back(jsi(a));
        if (opts.seed_band_halfwidth > 0.0 && std::abs(seeds.k[l] - s_mode.k_res) > opts.seed_band_halfwidth)
            res.warnings.push_back("seed " + std::to_string(l) +
                                   " lies outside the seed resonance band; its pair amplitude is negligible");
        for (const auto& w : a.diagnostics.warnings)
            if (std::find(res.warnings.begin(), res.warnings.end(), w) == res.warnings.end())
                res.warnings.push_back(w);
        // Unnormalized slice weight is 1/|N'|^2; the triphoton slice carries an extra |F_S+(k_S)|^2.
        const double fs = std::norm(field_enhancement(s_mode, gamma_s, seeds.k[l], Direction::incoming, ring.length));
        res.reconstructed_marginal[l] = fs / std::norm(a.norm_constant);
        total += res.reconstructed_marginal[l];
    }
    for (double& v : res.reconstructed_marginal) v /= total * seeds.spacing;

    if (n * n * m > opts.memory_budget_points) {
        res.residuals_skipped = true;
        res.warnings.push_back("triphoton grid exceeds the memory budget; proportionality residuals skipped");
        return res;
    }

    const TriphotonAmplitude tri = triphoton_amplitude(ring, env, pair_grid, seeds, opts.amplitude);
    const double dk = pair_grid.spacing();
    const std::size_t center = pair_grid.center_index() * n + pair_grid.center_index();
    res.proportionality_residuals.resize(m);
    res.direct_marginal.resize(m);
    parallel_for(m, [&](std::size_t l) {
        std::vector<cplx> slice(n * n);
        double weight = 0.0;
        for (std::size_t ij = 0; ij < n * n; ++ij) {
            slice[ij] = tri.values[ij * m + l];
            weight += std::norm(slice[ij]);
        }
        res.direct_marginal[l] = weight * dk * dk;
        const auto a = detail::normalized_slice(std::move(slice), dk * dk, center);
        const auto b = detail::normalized_slice(res.amplitudes[l].values, dk * dk, center);
        res.proportionality_residuals[l] = detail::max_relative_deviation(a, b);
    });
    double direct_total = 0.0;
    for (double v : res.direct_marginal) direct_total += v;
    for (double& v : res.direct_marginal) v /= direct_total * seeds.spacing;

    res.marginal_l1 = 0.0;
    for (std::size_t l = 0; l < m; ++l)
        res.marginal_l1 += std::abs(res.direct_marginal[l] - res.reconstructed_marginal[l]) * seeds.spacing;
    return res;
}

} // namespace topdc
