#pragma once

// Sectioned key-value configuration:
//
//   # comment
//   [ring]
//   length = 1.885e-4
//   [mode.G]
//   wavelength_nm = 1550
//   q_loaded = 4e5
//   eta = 0.5            # or q_coupling
//   [process]
//   scheme = "non_degenerate"
//
// Values are numbers, double-quoted strings or true/false. Every key is
// checked against the schema; unknown keys are errors. Resolution converts
// everything to SI and applies defaults. `print_config` writes the resolved
// setup back in the same format, losslessly.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "topdc/errors.hpp"
#include "topdc/scenario.hpp"

namespace topdc::cli {

struct RawValue {
    std::string text;
    bool quoted = false;
    int line = 0;
};

struct RawConfig {
    std::map<std::string, std::map<std::string, RawValue>> sections;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline RawConfig parse_text(std::string_view text) {
    RawConfig cfg;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string where = "line " + std::to_string(line_no);

        // Strip comments outside quotes.
        bool in_quote = false;
        std::size_t cut = line.size();
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            if (line[i] == '#' && !in_quote) {
                cut = i;
                break;
            }
        }
        line = detail::trim(line.substr(0, cut));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw SchemaError(where, "unterminated section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (section.empty()) throw SchemaError(where, "empty section name");
            if (cfg.sections.count(section)) throw SchemaError(section, "section declared twice");
            cfg.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw SchemaError(where, "expected 'key = value'");
        if (section.empty()) throw SchemaError(where, "key outside of any section");
        const std::string key(detail::trim(line.substr(0, eq)));
        std::string_view val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw SchemaError(where, "empty key");
        if (val.empty()) throw SchemaError(section + "." + key, "missing value");
        RawValue rv;
        rv.line = line_no;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"') throw SchemaError(section + "." + key, "unterminated string");
            rv.text = std::string(val.substr(1, val.size() - 2));
            rv.quoted = true;
        } else {
            rv.text = std::string(val);
        }
        auto& sec = cfg.sections[section];
        if (sec.count(key)) throw SchemaError(section + "." + key, "duplicate key");
        sec.emplace(key, std::move(rv));
    }
    return cfg;
}

struct SimulationConfig {
    Scenario scenario;
    double energy_tolerance = 1e-6;
    std::string source; ///< file the config was read from
};

namespace detail {

/// Typed, consumption-tracking access to one section.
class SectionReader {
public:
    SectionReader(std::string name, const std::map<std::string, RawValue>* values)
        : name_(std::move(name)), values_(values) {}

    const std::string& name() const { return name_; }
    bool exists() const { return values_ != nullptr; }
    bool has(const std::string& key) const { return values_ && values_->count(key); }
    std::string path(const std::string& key) const { return name_ + "." + key; }

    std::optional<double> number(const std::string& key) {
        const RawValue* v = find(key);
        if (!v) return std::nullopt;
        if (v->quoted) throw SchemaError(path(key), "expected a number, got a string");
        double out = 0.0;
        const char* b = v->text.data();
        const char* e = b + v->text.size();
        if (*b == '+') ++b;
        auto [p, ec] = std::from_chars(b, e, out);
        if (ec != std::errc() || p != e || !std::isfinite(out))
            throw SchemaError(path(key), "'" + v->text + "' is not a finite number");
        return out;
    }

    double required_number(const std::string& key) {
        auto v = number(key);
        if (!v) throw SchemaError(path(key), "required key missing");
        return *v;
    }

    std::optional<std::size_t> count(const std::string& key) {
        const RawValue* v = find(key);
        if (!v) return std::nullopt;
        std::size_t out = 0;
        auto [p, ec] = std::from_chars(v->text.data(), v->text.data() + v->text.size(), out);
        if (v->quoted || ec != std::errc() || p != v->text.data() + v->text.size())
            throw SchemaError(path(key), "expected a non-negative integer, got '" + v->text + "'");
        return out;
    }

    std::optional<std::string> string(const std::string& key) {
        const RawValue* v = find(key);
        if (!v) return std::nullopt;
        if (!v->quoted) throw SchemaError(path(key), "expected a quoted string");
        return v->text;
    }

    std::optional<bool> boolean(const std::string& key) {
        const RawValue* v = find(key);
        if (!v) return std::nullopt;
        if (!v->quoted && v->text == "true") return true;
        if (!v->quoted && v->text == "false") return false;
        throw SchemaError(path(key), "expected true or false");
    }

    void reject_unknown() const {
        if (!values_) return;
        for (const auto& [k, v] : *values_)
            if (!used_.count(k)) throw SchemaError(path(k), "unknown key");
    }

private:
    const RawValue* find(const std::string& key) {
        if (!values_) return nullptr;
        auto it = values_->find(key);
        if (it == values_->end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    std::string name_;
    const std::map<std::string, RawValue>* values_;
    std::set<std::string> used_;
};

inline SectionReader reader(const RawConfig& raw, const std::string& name) {
    auto it = raw.sections.find(name);
    return {name, it == raw.sections.end() ? nullptr : &it->second};
}

inline void exactly_one(const SectionReader& s, const std::string& a, const std::string& b) {
    const bool ha = s.has(a), hb = s.has(b);
    if (ha == hb)
        throw SchemaError(s.path(a), "exactly one of '" + a + "' or '" + b + "' must be given");
}

inline ResonatorMode resolve_mode(SectionReader& s, Role role) {
    exactly_one(s, "wavelength_nm", "omega");
    exactly_one(s, "q_coupling", "eta");
    if (s.has("v_group") && s.has("group_index"))
        throw SchemaError(s.path("v_group"), "give at most one of 'v_group' or 'group_index'");

    double omega = 0.0;
    if (auto wl = s.number("wavelength_nm")) {
        if (!(*wl > 0.0)) throw PhysicsError(s.path("wavelength_nm") + ": must be > 0");
        omega = 2.0 * pi * PhysicalConstants::c / (*wl * 1e-9);
    } else {
        omega = *s.number("omega");
    }
    const double q = s.required_number("q_loaded");
    double q_c = 0.0;
    if (auto eta = s.number("eta")) {
        if (!(*eta > 0.0 && *eta <= 1.0))
            throw PhysicsError(s.path("eta") + ": escape efficiency must lie in (0, 1], got " + fmt::format("{}", *eta));
        q_c = q / *eta;
    } else {
        q_c = *s.number("q_coupling");
    }
    const double n_char = s.required_number("n_char");
    std::optional<double> v = s.number("v_group");
    if (auto ng = s.number("group_index")) {
        if (!(*ng > 0.0)) throw PhysicsError(s.path("group_index") + ": must be > 0");
        v = PhysicalConstants::c / *ng;
    }
    const auto k_res = s.number("k_res");
    const auto kappa = s.number("kappa");
    s.reject_unknown();
    try {
        return make_mode(role, omega, q, q_c, n_char, v, k_res, kappa);
    } catch (const PhysicsError& e) {
        throw PhysicsError(s.name() + ": " + e.what());
    }
}

} // namespace detail

inline SimulationConfig resolve(const RawConfig& raw, std::string source = {}) {
    using detail::reader;
    static const std::set<std::string> known{"ring", "process", "pump", "grid", "seed"};
    for (const auto& [name, _] : raw.sections) {
        if (known.count(name)) continue;
        if (name.rfind("mode.", 0) == 0 && role_from_string(name.substr(5))) continue;
        throw SchemaError(name, "unknown section");
    }

    SimulationConfig cfg;
    cfg.source = std::move(source);
    Scenario& sc = cfg.scenario;

    auto ring = reader(raw, "ring");
    if (!ring.exists()) throw SchemaError("ring", "section missing");
    sc.ring.length = ring.required_number("length");
    sc.ring.a_eff = ring.number("a_eff");
    sc.ring.chi3 = ring.number("chi3");
    ring.reject_unknown();

    for (Role r : {Role::F, Role::T, Role::G, Role::S, Role::P}) {
        auto m = reader(raw, "mode." + std::string(to_string(r)));
        if (m.exists()) sc.ring.modes[r] = detail::resolve_mode(m, r);
    }

    auto proc = reader(raw, "process");
    if (!proc.exists()) throw SchemaError("process", "section missing");
    const auto scheme = proc.string("scheme");
    if (!scheme) throw SchemaError("process.scheme", "required key missing");
    if (*scheme == "degenerate") sc.scheme = Scheme::degenerate;
    else if (*scheme == "non_degenerate") sc.scheme = Scheme::non_degenerate;
    else throw SchemaError("process.scheme", "expected \"degenerate\" or \"non_degenerate\"");

    const bool derived = sc.ring.chi3 || sc.ring.a_eff;
    if (proc.has("lambda_nl") == derived)
        throw SchemaError("process.lambda_nl",
                          "exactly one of process.lambda_nl or (ring.chi3, ring.a_eff) must be given");
    if (derived && !(sc.ring.chi3 && sc.ring.a_eff))
        throw SchemaError(sc.ring.chi3 ? "ring.a_eff" : "ring.chi3", "deriving Lambda needs both chi3 and a_eff");
    sc.lambda_nl = proc.number("lambda_nl");
    sc.pump_power = proc.required_number("pump_power");
    sc.seed_power = proc.number("seed_power");
    sc.upsilon = proc.number("upsilon");
    cfg.energy_tolerance = proc.number("energy_tolerance").value_or(1e-6);
    proc.reject_unknown();

    const std::vector<Role> needed = sc.scheme == Scheme::degenerate ? std::vector<Role>{Role::F, Role::T}
                                                                     : std::vector<Role>{Role::G, Role::S, Role::P};
    for (Role r : needed)
        if (!sc.ring.has(r))
            throw SchemaError("mode." + std::string(to_string(r)),
                              "section required by scheme " + *scheme + " is missing");

    auto pump = reader(raw, "pump");
    if (auto kind = pump.string("kind")) {
        if (*kind == "cw") sc.pump.kind = PumpEnvelope::Kind::cw;
        else if (*kind == "gaussian") sc.pump.kind = PumpEnvelope::Kind::gaussian;
        else throw SchemaError("pump.kind", "expected \"cw\" or \"gaussian\"");
    } else {
        sc.pump.kind = PumpEnvelope::Kind::cw;
    }
    if (pump.has("fwhm_ps") && pump.has("fwhm_s"))
        throw SchemaError("pump.fwhm_ps", "give at most one of 'fwhm_ps' or 'fwhm_s'");
    if (auto f = pump.number("fwhm_ps")) sc.pump.fwhm = *f * 1e-12;
    else if (auto fs = pump.number("fwhm_s")) sc.pump.fwhm = *fs;
    else if (sc.pump.kind == PumpEnvelope::Kind::gaussian)
        throw SchemaError("pump.fwhm_ps", "a gaussian pump needs fwhm_ps or fwhm_s");
    sc.pump.detuning_linewidths = pump.number("detuning_linewidths").value_or(0.0);
    sc.pump.rates_cw_limit = pump.boolean("rates_cw_limit").value_or(false);
    pump.reject_unknown();

    auto grid = reader(raw, "grid");
    sc.grid.halfwidth_linewidths = grid.number("halfwidth_linewidths").value_or(sc.grid.halfwidth_linewidths);
    sc.grid.points = grid.count("points").value_or(sc.grid.points);
    sc.grid.triphoton_points = grid.count("triphoton_points").value_or(sc.grid.triphoton_points);
    sc.grid.memory_budget_points = grid.count("memory_budget_points").value_or(sc.grid.memory_budget_points);
    grid.reject_unknown();

    auto seed = reader(raw, "seed");
    sc.seed.offset_linewidths = seed.number("offset_linewidths").value_or(0.0);
    sc.seed.scan_points = seed.count("scan_points").value_or(sc.seed.scan_points);
    sc.seed.scan_halfwidth_linewidths =
        seed.number("scan_halfwidth_linewidths").value_or(sc.seed.scan_halfwidth_linewidths);
    sc.seed.triphoton_seed_points = seed.count("triphoton_points").value_or(sc.seed.triphoton_seed_points);
    seed.reject_unknown();

    // Physics checks.
    sc.ring.validate();
    if (!(sc.pump_power >= 0.0)) throw PhysicsError("process.pump_power must be >= 0");
    if (sc.seed_power && !(*sc.seed_power >= 0.0)) throw PhysicsError("process.seed_power must be >= 0");
    if (!(sc.grid.halfwidth_linewidths > 0.0)) throw PhysicsError("grid.halfwidth_linewidths must be > 0");
    const std::pair<const char*, std::size_t> grid_sizes[] = {{"grid.points", sc.grid.points},
                                                              {"grid.triphoton_points", sc.grid.triphoton_points},
                                                              {"seed.triphoton_points", sc.seed.triphoton_seed_points}};
    for (const auto& [key, n] : grid_sizes)
        if (n < 3 || n % 2 == 0) throw PhysicsError(std::string(key) + " must be odd and >= 3");
    if (sc.seed.scan_points == 0 || (sc.seed.scan_points > 1 && sc.seed.scan_points % 2 == 0))
        throw PhysicsError("seed.scan_points must be 1 or odd");
    if (sc.has_nondegenerate_modes()) {
        const double wp = sc.ring.mode(Role::P).omega;
        const double mismatch = wp - sc.ring.mode(Role::S).omega - 2.0 * sc.ring.mode(Role::G).omega;
        if (std::abs(mismatch) > cfg.energy_tolerance * wp)
            throw PhysicsError(fmt::format("energy not conserved: omega_P - omega_S - 2 omega_G = {} rad/s "
                                           "(relative {}, tolerance {})",
                                           mismatch, mismatch / wp, cfg.energy_tolerance));
    }
    if (sc.has_degenerate_modes()) {
        const double wt = sc.ring.mode(Role::T).omega;
        const double mismatch = wt - 3.0 * sc.ring.mode(Role::F).omega;
        if (std::abs(mismatch) > cfg.energy_tolerance * wt)
            throw PhysicsError(fmt::format("energy not conserved: omega_T - 3 omega_F = {} rad/s (relative {})",
                                           mismatch, mismatch / wt));
    }
    return cfg;
}

inline SimulationConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return resolve(parse_text(ss.str()), path);
}

/// Canonical, lossless dump of a resolved config (all defaults explicit).
inline std::string print_config(const SimulationConfig& cfg) {
    const Scenario& sc = cfg.scenario;
    std::string o = "# resolved configuration, SI units\n";
    o += "[ring]\n";
    o += fmt::format("length = {}\n", sc.ring.length);
    if (sc.ring.a_eff) o += fmt::format("a_eff = {}\n", *sc.ring.a_eff);
    if (sc.ring.chi3) o += fmt::format("chi3 = {}\n", *sc.ring.chi3);
    for (const auto& [role, m] : sc.ring.modes) {
        o += fmt::format("\n[mode.{}]\n", to_string(role));
        o += fmt::format("omega = {}  # wavelength {} nm\n", m.omega, 2.0 * pi * PhysicalConstants::c / m.omega * 1e9);
        o += fmt::format("q_loaded = {}\n", m.q_loaded);
        o += fmt::format("q_coupling = {}  # eta = {}\n", m.q_coupling, escape_efficiency(m));
        o += fmt::format("n_char = {}\n", m.n_char);
        o += fmt::format("v_group = {}\n", m.v_group);
        o += fmt::format("k_res = {}\n", m.k_res);
        o += fmt::format("kappa = {}  # half linewidth {} rad/s\n", m.kappa_ring, half_linewidth(m));
    }
    o += "\n[process]\n";
    o += fmt::format("scheme = \"{}\"\n", to_string(sc.scheme));
    if (sc.lambda_nl) o += fmt::format("lambda_nl = {}\n", *sc.lambda_nl);
    o += fmt::format("pump_power = {}\n", sc.pump_power);
    if (sc.seed_power) o += fmt::format("seed_power = {}\n", *sc.seed_power);
    if (sc.upsilon) o += fmt::format("upsilon = {}\n", *sc.upsilon);
    o += fmt::format("energy_tolerance = {}\n", cfg.energy_tolerance);
    o += "\n[pump]\n";
    o += fmt::format("kind = \"{}\"\n", sc.pump.kind == PumpEnvelope::Kind::cw ? "cw" : "gaussian");
    o += fmt::format("fwhm_s = {}\n", sc.pump.fwhm);
    o += fmt::format("detuning_linewidths = {}\n", sc.pump.detuning_linewidths);
    o += fmt::format("rates_cw_limit = {}\n", sc.pump.rates_cw_limit);
    o += "\n[grid]\n";
    o += fmt::format("halfwidth_linewidths = {}\n", sc.grid.halfwidth_linewidths);
    o += fmt::format("points = {}\n", sc.grid.points);
    o += fmt::format("triphoton_points = {}\n", sc.grid.triphoton_points);
    o += fmt::format("memory_budget_points = {}\n", sc.grid.memory_budget_points);
    o += "\n[seed]\n";
    o += fmt::format("offset_linewidths = {}\n", sc.seed.offset_linewidths);
    o += fmt::format("scan_points = {}\n", sc.seed.scan_points);
    o += fmt::format("scan_halfwidth_linewidths = {}\n", sc.seed.scan_halfwidth_linewidths);
    o += fmt::format("triphoton_points = {}\n", sc.seed.triphoton_seed_points);
    return o;
}

} // namespace topdc::cli
