// Command-line front end: run bundled or user experiments, validate configs,
// and list what ships with the library.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "resonance/resonance.hpp"

namespace {

using namespace resonance;

/// A config argument is either a bundled experiment name or a path to an
/// INI file.
ExperimentConfig resolve_config(const std::string& arg) {
    if (const auto text = find_bundled(arg)) {
        return load_experiment_string(*text, "bundled:" + arg);
    }
    if (std::filesystem::exists(arg)) {
        return load_experiment_file(arg);
    }
    throw ConfigError("'" + arg + "' is neither a bundled experiment nor an existing file; "
                      "see 'resonance list'");
}

int cmd_list() {
    std::cout << "bundled experiments:\n";
    for (const auto& b : bundled_experiments()) {
        std::cout << "  " << b.name << "\n";
    }
    std::cout << "\nbuilt-in nonlinearities:\n";
    for (const auto& info : builtin_catalog()) {
        std::cout << "  " << info.signature << "\n    " << info.summary << "\n";
    }
    return kExitOk;
}

int cmd_run(const std::string& config_arg, const std::string& out_dir,
            std::optional<std::uint64_t> seed, bool no_timestamp, bool force_orbit) {
    ExperimentConfig cfg = resolve_config(config_arg);
    if (force_orbit) cfg.orbit.enabled = true;
    RunOptions opts;
    opts.out_dir = out_dir;
    opts.with_timestamp = !no_timestamp;
    opts.seed = seed;
    const ExperimentResult result = run_experiment(cfg, opts);
    result.report.emit(std::cout);
    for (const auto& a : result.artifacts) {
        std::cerr << "wrote " << a << "\n";
    }
    return result.exit_code;
}

/// Cheap validation pass: hypotheses and integral conditions only, no
/// neighborhood search or integration.
int cmd_check(const std::string& config_arg) {
    const ExperimentConfig cfg = resolve_config(config_arg);
    Report rep;
    rep.put("experiment.name", cfg.name);

    if (cfg.op.kind != "laplacian_1d") {
        throw ConfigError("check needs a concrete interval operator (kind = laplacian_1d)");
    }
    const EigenSystem es = build_laplacian_1d(cfg.op.n_modes, cfg.op.length);
    const Decomposition d = decompose(es, cfg.op.k);
    rep.put("spectrum.lambda", d.lambda);
    rep.put("spectrum.gap_c", d.spectral_gap_c);
    const QuadratureGrid grid = make_composite_gauss(
        cfg.op.length, cfg.checks.quadrature_order, cfg.checks.quadrature_panels);
    const NonlinearityModel model =
        cfg.nonlinearity.table_path.empty()
            ? make_builtin(cfg.nonlinearity.name, cfg.nonlinearity.params, cfg.op.length)
            : load_table_model(cfg.nonlinearity.table_path);
    rep.put("nonlinearity.display", model.display);

    int code = kExitOk;
    const BoundReport bound = verify_bound(model, grid);
    rep.put("bound.holds", bound.holds);
    rep.put("bound.max_abs", bound.max_abs);
    if (!bound.holds) code = kExitHypothesisFailed;

    try {
        const LinearizationReport lin = estimate_linearization(model, grid);
        rep.put("linearization.nu_estimated", lin.nu);
        if (model.nu && std::abs(lin.nu - *model.nu) > LinearizationOptions{}.tolerance) {
            rep.put("linearization.error", "declared slope contradicts the estimate");
            code = kExitHypothesisFailed;
        }
    } catch (const HypothesisViolation& hv) {
        rep.put("linearization.hypothesis_failed", hv.hypothesis());
        if (model.nu) code = kExitHypothesisFailed;
    }

    if (model.has_limits()) {
        const ConditionVerdict ll =
            check_landesman_lazer(model, es, cfg.op.k, grid, cfg.checks.n_sphere_samples);
        rep.put("landesman_lazer.condition", condition_name(ll.condition));
        rep.put("landesman_lazer.holds", ll.holds);
    }
    if (model.has_limit_infty()) {
        const ConditionVerdict sr = check_strong_resonance(model, es, grid);
        rep.put("strong_resonance.condition", condition_name(sr.condition));
        rep.put("strong_resonance.holds", sr.holds);
    }

    rep.put("exit_code", code);
    rep.emit(std::cout);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral-Galerkin verification toolkit for parabolic problems at resonance"};
    app.require_subcommand(1);

    std::string config_arg;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool no_timestamp = false;

    auto* run = app.add_subcommand("run", "run the full verification pipeline");
    run->add_option("config", config_arg, "bundled experiment name or path to an INI file")
        ->required();
    run->add_option("--out", out_dir, "directory for report and trajectory artifacts");
    std::uint64_t seed_value = 0;
    auto* seed_opt = run->add_option("--seed", seed_value, "override the sampling seed");
    run->add_flag("--no-timestamp", no_timestamp, "omit the generated_at line (stable output)");

    auto* check = app.add_subcommand("check", "validate hypotheses and integral conditions only");
    check->add_option("config", config_arg, "bundled experiment name or path to an INI file")
        ->required();

    auto* orbit = app.add_subcommand("orbit", "run the pipeline with the orbit search forced on");
    orbit->add_option("config", config_arg, "bundled experiment name or path to an INI file")
        ->required();
    orbit->add_option("--out", out_dir, "directory for report and trajectory artifacts");
    auto* orbit_seed_opt = orbit->add_option("--seed", seed_value, "override the sampling seed");
    orbit->add_flag("--no-timestamp", no_timestamp, "omit the generated_at line");

    auto* list = app.add_subcommand("list", "list bundled experiments and built-in laws");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(list)) return cmd_list();
        if (app.got_subcommand(check)) return cmd_check(config_arg);
        if (seed_opt->count() > 0 || orbit_seed_opt->count() > 0) seed = seed_value;
        if (app.got_subcommand(run)) {
            return cmd_run(config_arg, out_dir, seed, no_timestamp, false);
        }
        return cmd_run(config_arg, out_dir, seed, no_timestamp, true);
    } catch (const ConfigError& e) {
        std::cerr << "config error";
        if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
        std::cerr << ": " << e.what() << "\n";
        return resonance::kExitConfigError;
    } catch (const HypothesisViolation& e) {
        std::cerr << "hypothesis violated (" << e.hypothesis() << "): " << e.what() << "\n";
        return resonance::kExitHypothesisFailed;
    } catch (const ConditionNotVerified& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return resonance::kExitNotVerified;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
