#pragma once

// Single-resonance model of a microring: linewidths, linear dispersion,
// Lorentzian field enhancement and the chi(3) coupling rate.

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "topdc/constants.hpp"
#include "topdc/errors.hpp"

namespace topdc {

/// Role a resonance plays in the process: fundamental/third-harmonic for the
/// degenerate scheme, generated/seed/pump for the non-degenerate one.
enum class Role { F, T, G, S, P };

inline constexpr std::string_view to_string(Role r) {
    switch (r) {
    case Role::F: return "F";
    case Role::T: return "T";
    case Role::G: return "G";
    case Role::S: return "S";
    case Role::P: return "P";
    }
    return "?";
}

inline std::optional<Role> role_from_string(std::string_view s) {
    if (s == "F") return Role::F;
    if (s == "T") return Role::T;
    if (s == "G") return Role::G;
    if (s == "S") return Role::S;
    if (s == "P") return Role::P;
    return std::nullopt;
}

struct ResonatorMode {
    Role role = Role::F;
    double omega = 0.0;      ///< resonant angular frequency (rad/s)
    double q_loaded = 0.0;   ///< loaded quality factor
    double q_coupling = 0.0; ///< coupling-limited quality factor
    double v_group = 0.0;    ///< group velocity (m/s)
    double k_res = 0.0;      ///< resonant wavenumber in the channel (rad/m)
    double kappa_ring = 0.0; ///< resonant wavenumber in the ring (rad/m)
    double n_char = 1.0;     ///< characteristic refractive index

    /// Throws PhysicsError on the first violated invariant.
    void validate() const {
        const std::string who = "mode " + std::string(to_string(role));
        auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };
        if (!finite_pos(omega)) throw PhysicsError(who + ": omega must be > 0");
        if (!finite_pos(q_loaded)) throw PhysicsError(who + ": q_loaded must be > 0");
        if (!(q_coupling >= q_loaded) || !std::isfinite(q_coupling))
            throw PhysicsError(who + ": q_coupling < q_loaded gives escape efficiency > 1");
        if (!finite_pos(v_group)) throw PhysicsError(who + ": group velocity must be > 0");
        if (!(n_char >= 1.0) || !std::isfinite(n_char)) throw PhysicsError(who + ": n_char must be >= 1");
        if (!std::isfinite(k_res) || !std::isfinite(kappa_ring))
            throw PhysicsError(who + ": wavenumbers must be finite");
    }
};

/// Builds a mode from its frequency, Q factors and index. The group velocity
/// defaults to c / n_char and the ring wavenumber to the channel wavenumber
/// (identical ring and channel waveguides).
inline ResonatorMode make_mode(Role role, double omega, double q_loaded, double q_coupling, double n_char,
                               std::optional<double> v_group = std::nullopt,
                               std::optional<double> k_res = std::nullopt,
                               std::optional<double> kappa_ring = std::nullopt) {
    ResonatorMode m;
    m.role = role;
    m.omega = omega;
    m.q_loaded = q_loaded;
    m.q_coupling = q_coupling;
    m.n_char = n_char;
    m.v_group = v_group.value_or(PhysicalConstants::c / n_char);
    m.k_res = k_res.value_or(n_char * omega / PhysicalConstants::c);
    m.kappa_ring = kappa_ring.value_or(m.k_res);
    m.validate();
    return m;
}

struct RingResonator {
    double length = 0.0;          ///< circumference (m)
    std::optional<double> a_eff;  ///< effective area (m^2), needed only to derive Lambda
    std::optional<double> chi3;   ///< characteristic chi(3) (m^2/V^2)
    std::map<Role, ResonatorMode> modes;

    bool has(Role r) const { return modes.count(r) != 0; }

    const ResonatorMode& mode(Role r) const {
        auto it = modes.find(r);
        if (it == modes.end())
            throw UsageError("ring has no mode with role " + std::string(to_string(r)));
        return it->second;
    }

    void validate() const {
        if (!(length > 0.0) || !std::isfinite(length)) throw PhysicsError("ring length must be > 0");
        if (a_eff && (!(*a_eff > 0.0) || !std::isfinite(*a_eff))) throw PhysicsError("a_eff must be > 0");
        if (chi3 && !std::isfinite(*chi3)) throw PhysicsError("chi3 must be finite");
        for (const auto& [role, m] : modes) m.validate();
    }
};

/// omega / (2 Q): half width of the resonance in angular frequency.
inline double half_linewidth(const ResonatorMode& m) { return m.omega / (2.0 * m.q_loaded); }

/// Coupling-limited half linewidth omega / (2 Q_C).
inline double coupling_half_linewidth(const ResonatorMode& m) { return m.omega / (2.0 * m.q_coupling); }

inline double escape_efficiency(const ResonatorMode& m) {
    if (!(m.q_coupling >= m.q_loaded))
        throw PhysicsError("q_coupling < q_loaded: escape efficiency would exceed 1");
    return m.q_loaded / m.q_coupling;
}

/// Linear dispersion about the resonance.
inline double mode_frequency_at(const ResonatorMode& m, double k) { return m.omega + m.v_group * (k - m.k_res); }

/// Ring-channel coupling constant. Convention: |gamma|^2 = 2 v Gamma_C, zero phase.
struct CouplingConstantGamma {
    double magnitude_sq = 0.0;
    double phase = 0.0;

    static CouplingConstantGamma for_mode(const ResonatorMode& m) {
        return {2.0 * m.v_group * coupling_half_linewidth(m), 0.0};
    }

    std::complex<double> value() const { return std::polar(std::sqrt(magnitude_sq), phase); }
};

enum class Direction { incoming, outgoing };

/// F_{J+-}(k) = gamma* / (sqrt(L) (v (K - k) +- i Gamma)), + incoming, - outgoing.
inline std::complex<double> field_enhancement(const ResonatorMode& m, const CouplingConstantGamma& gamma, double k,
                                              Direction dir, double ring_length) {
    const double sign = dir == Direction::incoming ? 1.0 : -1.0;
    const std::complex<double> denom(m.v_group * (m.k_res - k), sign * half_linewidth(m));
    return std::conj(gamma.value()) / denom / std::sqrt(ring_length);
}

/// Unnormalized sinc, sin(x)/x.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

/// Nonlinear coupling rate Lambda for a pump mode down-converting into three
/// generated modes (repeat a mode for degenerate photons).
inline double nonlinear_coupling_rate(const RingResonator& ring, const ResonatorMode& pump,
                                      std::span<const ResonatorMode* const, 3> generated) {
    if (!ring.a_eff || !ring.chi3)
        throw UsageError("deriving Lambda needs both a_eff and chi3");
    using C = PhysicalConstants;
    double omega_prod = pump.omega;
    double v_prod = pump.v_group;
    double n_prod = pump.n_char;
    for (const ResonatorMode* g : generated) {
        omega_prod *= g->omega;
        v_prod *= g->v_group;
        n_prod *= g->n_char;
    }
    return C::hbar * std::sqrt(omega_prod) / (4.0 * C::eps0 * C::c * C::c) * std::sqrt(v_prod / n_prod) *
           *ring.chi3 / (ring.length * *ring.a_eff);
}

/// Degenerate form: high_mode (T) -> three photons in low_mode (F).
inline double nonlinear_coupling_rate(const RingResonator& ring, const ResonatorMode& high_mode,
                                      const ResonatorMode& low_mode) {
    const std::array<const ResonatorMode*, 3> gen{&low_mode, &low_mode, &low_mode};
    return nonlinear_coupling_rate(ring, high_mode, std::span<const ResonatorMode* const, 3>(gen));
}

/// Non-degenerate form: P -> G + G + S.
inline double nonlinear_coupling_rate(const RingResonator& ring, const ResonatorMode& g, const ResonatorMode& s,
                                      const ResonatorMode& p) {
    const std::array<const ResonatorMode*, 3> gen{&g, &g, &s};
    return nonlinear_coupling_rate(ring, p, std::span<const ResonatorMode* const, 3>(gen));
}

} // namespace topdc
