#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"

using namespace topdc;

namespace {

KGrid pair_grid(const RingResonator& ring, std::size_t n, double halfwidth = 12.0) {
    const ResonatorMode& g = ring.mode(Role::G);
    return KGrid::centered(g.k_res, halfwidth * half_linewidth(g) / g.v_group, n);
}

PumpEnvelope pump(const RingResonator& ring, double fwhm = 10e-12) {
    return PumpEnvelope::gaussian(ring.mode(Role::P).k_res, fwhm);
}

double max_ratio_deviation(const std::vector<cplx>& got, const std::vector<cplx>& want, std::size_t ref) {
    const cplx r0 = got[ref] / want[ref];
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (std::abs(want[i]) == 0.0) continue;
        worst = std::max(worst, std::abs(got[i] / want[i] / r0 - 1.0));
    }
    return worst;
}

} // namespace

TEST(PumpEnvelope, TenPicosecondPulse) {
    const PumpEnvelope env = PumpEnvelope::gaussian(0.0, 10e-12);
    EXPECT_NEAR(env.sigma_t(), 6.006e-12, 0.001e-12);
    EXPECT_NEAR(env.sigma_omega(), 1.665e11, 0.001e11);
    const double v = 1.5e8;
    EXPECT_EQ(pump_spectral_amplitude(env, v, 0.0), cplx(1.0, 0.0));
    const double k_sigma = env.sigma_omega() / v;
    EXPECT_NEAR(std::abs(pump_spectral_amplitude(env, v, k_sigma)), std::exp(-0.5), 1e-15);
    EXPECT_NEAR(std::abs(pump_spectral_amplitude(env, v, -k_sigma)), std::exp(-0.5), 1e-15);
}

TEST(PumpEnvelope, CwCannotBeSampled) {
    EXPECT_THROW(pump_spectral_amplitude(PumpEnvelope::cw(0.0), 1e8, 0.0), UsageError);
    EXPECT_THROW(PumpEnvelope::gaussian(0.0, 0.0), PhysicsError);
    const RingResonator ring = oracle::reference_ring();
    EXPECT_THROW(biphoton_amplitude(ring, PumpEnvelope::cw(0.0), ring.mode(Role::S).k_res, pair_grid(ring, 11)),
                 UsageError);
}

TEST(PhaseMatch, DerivedOffsetVanishesForMatchedModes) {
    const RingResonator ring = oracle::reference_ring();
    const double ups = phase_match_offset(ring.mode(Role::G), ring.mode(Role::S), ring.mode(Role::P)).upsilon;
    EXPECT_LT(std::abs(ups), 1e-6 * ring.mode(Role::P).omega);
}

TEST(Biphoton, SymmetricAndNormalized) {
    const RingResonator ring = oracle::reference_ring();
    const KGrid g = pair_grid(ring, 81);
    const BiphotonAmplitude a = biphoton_amplitude(ring, pump(ring), ring.mode(Role::S).k_res + 3.0, g);
    double norm = 0.0;
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t j = 0; j < a.n(); ++j) {
            EXPECT_EQ(a.at(i, j), a.at(j, i));
            norm += std::norm(a.at(i, j));
        }
    EXPECT_NEAR(norm * g.spacing() * g.spacing(), 1.0, 1e-12);
    const cplx c = a.at(g.center_index(), g.center_index());
    EXPECT_EQ(c.imag(), 0.0);
    EXPECT_GT(c.real(), 0.0);
}

TEST(Biphoton, ProportionalToDirectFormula) {
    const RingResonator ring = oracle::reference_ring(2e5, 5e4);
    const KGrid g = pair_grid(ring, 41);
    const PumpEnvelope env = pump(ring, 30e-12);
    const double ks = ring.mode(Role::S).k_res - 2.0;
    const BiphotonAmplitude a = biphoton_amplitude(ring, env, ks, g);
    std::vector<cplx> want(a.values.size());
    for (std::size_t i = 0; i < g.n_points; ++i)
        for (std::size_t j = 0; j < g.n_points; ++j)
            want[i * g.n_points + j] = oracle::triphoton(ring, env.k_center, 30e-12, g.at(i), g.at(j), ks);
    EXPECT_LT(max_ratio_deviation(a.values, want, g.center_index() * (g.n_points + 1)), 1e-8);
}

TEST(Triphoton, ExchangeSymmetryAndPeak) {
    const RingResonator ring = oracle::reference_ring();
    const KGrid g = pair_grid(ring, 21);
    const SeedAxis sax = SeedAxis::uniform(ring.mode(Role::S).k_res, 12.0 * half_linewidth(ring.mode(Role::S)) /
                                                                        ring.mode(Role::S).v_group, 21);
    const TriphotonAmplitude t = triphoton_amplitude(ring, pump(ring), g, sax);
    std::size_t best = 0;
    double best_mag = -1.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < t.n(); ++i)
        for (std::size_t j = 0; j < t.n(); ++j)
            for (std::size_t l = 0; l < t.m(); ++l) {
                EXPECT_EQ(t.at(i, j, l), t.at(j, i, l));
                const double mag = std::abs(t.at(i, j, l));
                norm += mag * mag;
                if (mag > best_mag) {
                    best_mag = mag;
                    best = (i * t.n() + j) * t.m() + l;
                }
            }
    const std::size_t c = g.center_index();
    EXPECT_EQ(best, (c * t.n() + c) * t.m() + t.m() / 2);
    EXPECT_NEAR(norm * g.spacing() * g.spacing() * sax.spacing, 1.0, 1e-12);
}

TEST(Triphoton, MatchesDirectFormula) {
    const RingResonator ring = oracle::reference_ring(3e5, 8e4);
    const KGrid g = pair_grid(ring, 15);
    const auto& s = ring.mode(Role::S);
    const SeedAxis sax = SeedAxis::uniform(s.k_res, 6.0 * half_linewidth(s) / s.v_group, 9);
    const PumpEnvelope env = pump(ring, 20e-12);
    const TriphotonAmplitude t = triphoton_amplitude(ring, env, g, sax);
    std::vector<cplx> want(t.values.size());
    for (std::size_t i = 0; i < t.n(); ++i)
        for (std::size_t j = 0; j < t.n(); ++j)
            for (std::size_t l = 0; l < t.m(); ++l)
                want[(i * t.n() + j) * t.m() + l] = oracle::triphoton(ring, env.k_center, 20e-12, g.at(i), g.at(j), sax.k[l]);
    EXPECT_LT(max_ratio_deviation(t.values, want, 0), 1e-8);
}

TEST(Triphoton, SliceProportionalToSeededBiphoton) {
    const RingResonator ring = oracle::reference_ring();
    const KGrid g = pair_grid(ring, 31);
    const auto& s = ring.mode(Role::S);
    const SeedAxis sax = SeedAxis::uniform(s.k_res, 5.0 * half_linewidth(s) / s.v_group, 7);
    const TriphotonAmplitude t = triphoton_amplitude(ring, pump(ring), g, sax);
    for (std::size_t l = 0; l < t.m(); ++l) {
        const BiphotonAmplitude b = biphoton_amplitude(ring, pump(ring), sax.k[l], g);
        std::vector<cplx> slice(t.n() * t.n());
        for (std::size_t ij = 0; ij < slice.size(); ++ij) slice[ij] = t.values[ij * t.m() + l];
        EXPECT_LT(max_ratio_deviation(slice, b.values, 0), 1e-12);
    }
}

TEST(Triphoton, FlatPumpFactorizes) {
    const RingResonator ring = oracle::reference_ring();
    const KGrid g = pair_grid(ring, 11);
    const SeedAxis sax = SeedAxis::from_grid(g);
    const TriphotonAmplitude t = triphoton_amplitude(ring, PumpEnvelope::cw(0.0), g, sax, {std::nullopt, true});
    // phi(i,j,l) phi(0,0,0)^2 == phi(i,0,0) phi(0,j,0) phi(0,0,l)
    const cplx p000 = t.at(0, 0, 0);
    for (std::size_t i = 0; i < t.n(); ++i)
        for (std::size_t j = 0; j < t.n(); ++j)
            for (std::size_t l = 0; l < t.m(); ++l) {
                const cplx lhs = t.at(i, j, l) * p000 * p000;
                const cplx rhs = t.at(i, 0, 0) * t.at(0, j, 0) * t.at(0, 0, l);
                EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
            }
}

TEST(Coverage, LorentzianFractionAndWarning) {
    const RingResonator ring = oracle::reference_ring();
    const auto& g = ring.mode(Role::G);
    const double w = half_linewidth(g) / g.v_group;
    EXPECT_NEAR(lorentzian_coverage(g, g.k_res - 12 * w, g.k_res + 12 * w), 2.0 * std::atan(12.0) / oracle::pi, 1e-9);
    EXPECT_NEAR(lorentzian_coverage(g, g.k_res - w, g.k_res + w), 0.5, 1e-9);

    const BiphotonAmplitude narrow = biphoton_amplitude(ring, pump(ring), ring.mode(Role::S).k_res, pair_grid(ring, 21));
    EXPECT_EQ(narrow.diagnostics.warnings.size(), 1u);
    const BiphotonAmplitude wide =
        biphoton_amplitude(ring, pump(ring), ring.mode(Role::S).k_res, pair_grid(ring, 21, 1000.0));
    EXPECT_TRUE(wide.diagnostics.warnings.empty());
    EXPECT_GE(wide.diagnostics.coverage, kCoverageThreshold);
}

TEST(Upsilon, OverrideShiftsPumpArgument) {
    const RingResonator ring = oracle::reference_ring();
    const TripletKernel derived(ring, pump(ring));
    const auto& p = ring.mode(Role::P);
    const double shift = 3.0 * half_linewidth(p);
    const TripletKernel shifted(ring, pump(ring), {derived.upsilon() + shift, false});
    EXPECT_EQ(derived.pump_detuning(0.0, 0.0), 0.0);
    EXPECT_NEAR(shifted.pump_detuning(0.0, 0.0), shift / p.v_group, 1e-6 * shift / p.v_group);
    EXPECT_LT(std::abs(shifted.pump_term(shifted.pump_detuning(0.0, 0.0))),
              std::abs(derived.pump_term(0.0)));
}

TEST(Parallel, ThreadCountDoesNotChangeBytes) {
    const RingResonator ring = oracle::reference_ring();
    const KGrid g = pair_grid(ring, 61);
    set_thread_count(1);
    const BiphotonAmplitude a = biphoton_amplitude(ring, pump(ring), ring.mode(Role::S).k_res, g);
    set_thread_count(4);
    const BiphotonAmplitude b = biphoton_amplitude(ring, pump(ring), ring.mode(Role::S).k_res, g);
    set_thread_count(0);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_EQ(a.values[i], b.values[i]);
}
