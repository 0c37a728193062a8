// topdc-sim: config-driven TOPDC microring simulator.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topdc/cli/commands.hpp"
#include "topdc/cli/config.hpp"
#include "topdc/parallel.hpp"

namespace {

using namespace topdc;
using namespace topdc::cli;

struct Options {
    std::string config;
    std::string out = "topdc";
    bool out_given = false;
    bool reconcile = false;
    bool print_config = false;

    SetScanCliOptions scan;
    std::string param;
    std::vector<double> values;
    CheckOptions check;
};

int run(CLI::App& app, const Options& o) {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "check") return cmd_check(o.check, std::cout, std::cerr);

    const SimulationConfig cfg = parse_config(o.config);
    if (o.print_config) {
        std::cout << print_config(cfg);
        return ExitCode::ok;
    }
    if (cmd == "rates") {
        RatesOptions ro{o.reconcile, std::nullopt};
        if (o.out_given) ro.out_prefix = o.out;
        return cmd_rates(cfg, ro, std::cout, std::cerr);
    }
    if (cmd == "jsi") return cmd_jsi(cfg, o.out, std::cout, std::cerr);
    if (cmd == "triphoton") return cmd_triphoton(cfg, o.out, std::cout, std::cerr);
    if (cmd == "set-scan") return cmd_set_scan(cfg, o.scan, o.out, std::cout, std::cerr);
    if (cmd == "sweep") {
        const std::optional<std::string> prefix = o.out_given ? std::optional(o.out) : std::nullopt;
        const auto param = sweep_parameter_from_string(o.param);
        if (!param) throw SchemaError("--param", "unknown sweep parameter '" + o.param + "'");
        return cmd_sweep(cfg, *param, o.values, prefix, std::cout, std::cerr);
    }
    throw UsageError("unknown subcommand " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TOPDC microring simulator: rates, joint spectra, Schmidt analysis"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "simulation config file")->required();
        sub->add_option("--out", o.out, "output file prefix")->each([&](const std::string&) { o.out_given = true; });
        sub->add_flag("--print-config", o.print_config, "print the resolved config and exit");
    };

    auto* rates = app.add_subcommand("rates", "CW-limit generation rates");
    add_common(rates);
    rates->add_flag("--reconcile", o.reconcile, "compare against the quoted reference rates");

    add_common(app.add_subcommand("jsi", "biphoton JSI and Schmidt number"));
    add_common(app.add_subcommand("triphoton", "direct spontaneous triphoton amplitude"));

    auto* scan = app.add_subcommand("set-scan", "seeded biphoton slices vs the direct triphoton");
    add_common(scan);
    scan->add_option("--seed-points", o.scan.seed_points, "number of seed wavenumbers");
    scan->add_option("--seed-halfwidth", o.scan.seed_halfwidth_linewidths, "seed scan half-width in linewidths");
    scan->add_option("--pair-points", o.scan.pair_points, "pair grid points per axis");

    auto* sw = app.add_subcommand("sweep", "Schmidt number and rates over one parameter");
    add_common(sw);
    sw->add_option("--param", o.param, "pump_fwhm | q_pump | q_generated | upsilon | k_seed")->required();
    sw->add_option("--values", o.values, "comma-separated values")->required()->delimiter(',');

    auto* check = app.add_subcommand("check", "randomized self-check suites");
    check->add_option("--seed", o.check.seed, "RNG seed");
    check->add_option("--cases", o.check.cases, "randomized configs per suite");
    check->add_flag("--inject-fault", o.check.inject_fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ExitCode::ok : ExitCode::schema_error;
    }

    try {
        configure_threads_from_env();
        return run(app, o);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return ExitCode::schema_error;
    } catch (const PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << '\n';
        return ExitCode::physics_error;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return ExitCode::mode_misuse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::check_failed;
    }
}
