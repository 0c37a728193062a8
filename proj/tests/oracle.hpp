#pragma once

// Independent reference formulas for the tests. Written out longhand from the
// model, sharing no code with the library beyond the plain data types.

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include "topdc/topdc.hpp"

namespace oracle {

inline constexpr double hbar = 1.054571817e-34;
inline constexpr double c0 = 299792458.0;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double pi = 3.14159265358979323846;

inline double omega_of_nm(double nm) { return 2.0 * pi * c0 / (nm * 1e-9); }

inline double gamma_bar(const topdc::ResonatorMode& m) { return m.omega / m.q_loaded / 2.0; }
inline double eta(const topdc::ResonatorMode& m) { return m.q_loaded / m.q_coupling; }

inline double sinc_sq_of(double dkappa, double length) {
    const double x = 0.5 * dkappa * length;
    if (x == 0.0) return 1.0;
    return std::pow(std::sin(x) / x, 2);
}

inline double rate_degenerate(const topdc::ProcessConfig& c, bool with_sinc = true) {
    const auto& f = c.ring.modes.at(topdc::Role::F);
    const auto& t = c.ring.modes.at(topdc::Role::T);
    const double sinc2 = sinc_sq_of(t.kappa_ring - 3.0 * f.kappa_ring, c.ring.length);
    const double s2 = with_sinc ? sinc2 : 1.0;
    return std::pow(2.0, 5) * std::pow(c.lambda_nl, 2) * std::pow(eta(f), 3) * eta(t) * f.q_loaded * t.q_loaded *
           c.p_pump * s2 / (hbar * std::pow(t.omega, 2) * f.omega);
}

inline double rate_nondegenerate(const topdc::ProcessConfig& c, bool with_sinc = true) {
    const auto& g = c.ring.modes.at(topdc::Role::G);
    const auto& s = c.ring.modes.at(topdc::Role::S);
    const auto& p = c.ring.modes.at(topdc::Role::P);
    const double sinc2 = sinc_sq_of(p.kappa_ring - s.kappa_ring - 2.0 * g.kappa_ring, c.ring.length);
    const double s2 = with_sinc ? sinc2 : 1.0;
    return 9.0 * std::pow(2.0, 5) * std::pow(c.lambda_nl, 2) * std::pow(eta(g), 2) * eta(s) * eta(p) * g.q_loaded *
           s.q_loaded * p.q_loaded * c.p_pump * s2 /
           (hbar * std::pow(p.omega, 2) * (2.0 * s.q_loaded * g.omega + g.q_loaded * s.omega));
}

inline double rate_stimulated(const topdc::ProcessConfig& c, bool with_sinc = true) {
    const auto& g = c.ring.modes.at(topdc::Role::G);
    const auto& s = c.ring.modes.at(topdc::Role::S);
    const auto& p = c.ring.modes.at(topdc::Role::P);
    const double sinc2 = sinc_sq_of(p.kappa_ring - s.kappa_ring - 2.0 * g.kappa_ring, c.ring.length);
    const double s2 = with_sinc ? sinc2 : 1.0;
    return 9.0 * std::pow(2.0, 6) * std::pow(c.lambda_nl, 2) * std::pow(eta(g), 2) * eta(s) * eta(p) * g.q_loaded *
           s.q_loaded * p.q_loaded * c.p_pump * c.p_seed.value_or(0.0) * s2 /
           (hbar * hbar * std::pow(p.omega, 2) * g.omega * std::pow(s.omega, 2));
}

inline double vacuum_power(const topdc::ResonatorMode& g, const topdc::ResonatorMode& s) {
    return hbar * s.omega / (2.0 / gamma_bar(s) + 1.0 / gamma_bar(g));
}

/// gamma* / (sqrt(L) (v (K - k) + sign i Gamma)), with |gamma|^2 = 2 v Gamma_C.
inline std::complex<double> enhancement(const topdc::ResonatorMode& m, double k, double length, double sign) {
    const double gamma_c = m.omega / (2.0 * m.q_coupling);
    const double gmag = std::sqrt(2.0 * m.v_group * gamma_c);
    return gmag / (std::sqrt(length) * std::complex<double>(m.v_group * (m.k_res - k), sign * gamma_bar(m)));
}

/// Unnormalized triphoton amplitude straight from the definition.
inline std::complex<double> triphoton(const topdc::RingResonator& ring, double k_center, double fwhm, double k1,
                                      double k2, double k3) {
    const auto& g = ring.modes.at(topdc::Role::G);
    const auto& s = ring.modes.at(topdc::Role::S);
    const auto& p = ring.modes.at(topdc::Role::P);
    const double L = ring.length;
    const double upsilon = p.v_group * p.k_res - s.v_group * s.k_res - 2.0 * g.v_group * g.k_res;
    const double u = (g.v_group * (k1 + k2) + s.v_group * k3 + upsilon) / p.v_group;
    const double sigma_t = fwhm / (2.0 * std::sqrt(std::log(2.0)));
    const double alpha = std::exp(-std::pow(sigma_t * p.v_group * (u - k_center), 2) / 2.0);
    return std::conj(enhancement(g, k1, L, 1.0)) * std::conj(enhancement(g, k2, L, 1.0)) *
           std::conj(enhancement(s, k3, L, 1.0)) * enhancement(p, u, L, -1.0) * alpha;
}

/// Paper-like ring: all generated modes at 1550 nm, pump at a third of it.
inline topdc::RingResonator reference_ring(double q_gen = 4e5, double q_pump = 6.4e4) {
    topdc::RingResonator ring;
    ring.length = 1.8849556e-4;
    const double w = omega_of_nm(1550.0);
    ring.modes[topdc::Role::G] = topdc::make_mode(topdc::Role::G, w, q_gen, 2.0 * q_gen, 2.0);
    ring.modes[topdc::Role::S] = topdc::make_mode(topdc::Role::S, w, q_gen, 2.0 * q_gen, 2.0);
    ring.modes[topdc::Role::P] = topdc::make_mode(topdc::Role::P, 3.0 * w, q_pump, 2.0 * q_pump, 2.0);
    return ring;
}

inline std::string config_path(const std::string& name) {
    return (std::filesystem::path(TOPDC_CONFIG_DIR) / name).string();
}

} // namespace oracle
