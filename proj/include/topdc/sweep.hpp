#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topdc/parallel.hpp"
#include "topdc/scenario.hpp"

namespace topdc {

enum class SweepParameter { pump_fwhm, q_pump, q_generated, upsilon, k_seed };

inline constexpr std::string_view to_string(SweepParameter p) {
    switch (p) {
    case SweepParameter::pump_fwhm: return "pump_fwhm";
    case SweepParameter::q_pump: return "q_pump";
    case SweepParameter::q_generated: return "q_generated";
    case SweepParameter::upsilon: return "upsilon";
    case SweepParameter::k_seed: return "k_seed";
    }
    return "?";
}

inline std::optional<SweepParameter> sweep_parameter_from_string(std::string_view s) {
    for (auto p : {SweepParameter::pump_fwhm, SweepParameter::q_pump, SweepParameter::q_generated,
                   SweepParameter::upsilon, SweepParameter::k_seed})
        if (to_string(p) == s) return p;
    return std::nullopt;
}

namespace detail {
/// Replaces the loaded Q of a mode, keeping its escape efficiency.
inline void set_q_keep_eta(RingResonator& ring, Role r, double q) {
    ResonatorMode& m = ring.modes.at(r);
    const double eta = escape_efficiency(m);
    m.q_loaded = q;
    m.q_coupling = q / eta;
    m.validate();
}
} // namespace detail

/// Copy of `base` with one parameter replaced. Units: pump_fwhm in s,
/// q_* dimensionless, upsilon in rad/s, k_seed as seed offset in linewidths.
inline Scenario with_parameter(Scenario base, SweepParameter p, double value) {
    if (!std::isfinite(value)) throw PhysicsError("sweep value must be finite");
    switch (p) {
    case SweepParameter::pump_fwhm:
        if (!(value > 0.0)) throw PhysicsError("pump_fwhm must be > 0");
        base.pump.fwhm = value;
        break;
    case SweepParameter::q_pump: detail::set_q_keep_eta(base.ring, Role::P, value); break;
    case SweepParameter::q_generated: detail::set_q_keep_eta(base.ring, Role::G, value); break;
    case SweepParameter::upsilon: base.upsilon = value; break;
    case SweepParameter::k_seed: base.seed.offset_linewidths = value; break;
    }
    return base;
}

/// Schmidt number and CW-limit rates of one scenario.
struct RunSummary {
    SchmidtResult schmidt;
    std::optional<double> rate_spontaneous;
    std::optional<double> rate_stimulated;
};

inline RunSummary evaluate_run(const Scenario& sc) {
    RunSummary out;
    out.schmidt = schmidt(sc.biphoton_problem());
    const ProcessConfig nd = sc.process(Scheme::non_degenerate);
    out.rate_spontaneous = rate_spontaneous_nondegenerate(nd).value;
    if (sc.seed_power) out.rate_stimulated = rate_stimulated(nd).value;
    return out;
}

struct SweepRow {
    double value = 0.0;
    std::optional<RunSummary> result;
    std::string error;
};

/// One row per value, in input order. A failing row records its error and
/// the sweep continues.
inline std::vector<SweepRow> sweep(SweepParameter p, std::span<const double> values, const Scenario& base) {
    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), [&](std::size_t i) {
        rows[i].value = values[i];
        try {
            rows[i].result = evaluate_run(with_parameter(base, p, values[i]));
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    });
    return rows;
}

} // namespace topdc
