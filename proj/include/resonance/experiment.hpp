#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "resonance/conditions.hpp"
#include "resonance/config.hpp"
#include "resonance/conley.hpp"
#include "resonance/errors.hpp"
#include "resonance/nonlinearity.hpp"
#include "resonance/orbit.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/report.hpp"
#include "resonance/semiflow.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitHypothesisFailed = 3;
inline constexpr int kExitNotVerified = 4;

enum class Outcome {
    ORBIT_EXISTS,
    INCONCLUSIVE,
    NO_INVARIANT_SET,
    HYPOTHESIS_FAILED,
    NOT_VERIFIED,
};

[[nodiscard]] constexpr const char* outcome_name(Outcome o) noexcept {
    switch (o) {
        case Outcome::ORBIT_EXISTS: return "orbit-exists";
        case Outcome::INCONCLUSIVE: return "inconclusive";
        case Outcome::NO_INVARIANT_SET: return "no-bounded-invariant-set";
        case Outcome::HYPOTHESIS_FAILED: return "hypothesis-failed";
        case Outcome::NOT_VERIFIED: return "not-verified";
    }
    return "not-verified";
}

struct RunOptions {
    std::string out_dir;  // empty disables artifact files
    bool with_timestamp = true;
    std::optional<std::uint64_t> seed;
};

struct ExperimentResult {
    int exit_code = kExitOk;
    Outcome outcome = Outcome::NOT_VERIFIED;
    Report report;
    std::optional<DecisionRecord> decision;
    std::optional<IsolatingNeighborhood> neighborhood;
    std::vector<std::string> artifacts;
};

namespace detail {

inline void put_verdict(Report& rep, const std::string& prefix, const ConditionVerdict& v) {
    rep.put(prefix + ".condition", condition_name(v.condition));
    rep.put(prefix + ".holds", v.holds);
    rep.put(prefix + ".margin", v.margin);
    if (v.radius_R > 0.0) rep.put(prefix + ".radius", v.radius_R);
    for (std::size_t i = 0; i < v.witnesses.size() && i < 4; ++i) {
        rep.put(prefix + ".witness_" + std::to_string(i),
                v.witnesses[i].description + ": " + format_double(v.witnesses[i].value));
    }
    if (!v.notes.empty()) {
        std::string joined;
        for (const auto& n : v.notes) {
            if (!joined.empty()) joined += "; ";
            joined += n;
        }
        rep.put(prefix + ".notes", joined);
    }
}

/// Least-squares slope of coefficient `mode` against time over saved rows.
[[nodiscard]] inline double fit_coefficient_slope(const Trajectory& traj, int mode) {
    const std::size_t n = traj.times.size();
    if (n < 2) throw std::invalid_argument("need at least two saved rows to fit a slope");
    double st = 0.0;
    double sc = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        st += traj.times[r];
        sc += traj.states[r].c[static_cast<std::size_t>(mode)];
    }
    const double mt = st / static_cast<double>(n);
    const double mc = sc / static_cast<double>(n);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double dt = traj.times[r] - mt;
        num += dt * (traj.states[r].c[static_cast<std::size_t>(mode)] - mc);
        den += dt * dt;
    }
    if (!(den > 0.0)) throw std::invalid_argument("degenerate time samples in slope fit");
    return num / den;
}

inline std::string artifact_path(const RunOptions& opts, const std::string& file) {
    return (std::filesystem::path(opts.out_dir) / file).string();
}

inline void save_trajectory(const RunOptions& opts, ExperimentResult& result,
                            const std::string& stem, const Trajectory& traj, int n_modes) {
    if (opts.out_dir.empty()) return;
    const std::string csv = artifact_path(opts, stem + ".csv");
    write_trajectory_csv(csv, traj);
    result.artifacts.push_back(csv);
    const std::string gp = artifact_path(opts, stem + ".gp");
    write_gnuplot_script(gp, stem + ".csv", n_modes, {0, 1, 2}, stem);
    result.artifacts.push_back(gp);
}

}  // namespace detail

/// Run the full verification pipeline for one experiment: spectral setup,
/// hypothesis spot checks, condition verification, neighborhood and block
/// construction, index comparison, and the orbit search.  Never throws for
/// outcomes the pipeline can classify; the exit code distinguishes success
/// (0), failed standing hypotheses (3), and failed numerical verification
/// (4).  Config problems (unknown operator kinds, out-of-range k) throw
/// ConfigError and are mapped to exit 2 by the caller.
[[nodiscard]] inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                                     const RunOptions& opts = {}) {
    ExperimentResult result;
    Report& rep = result.report;

    if (!opts.out_dir.empty()) std::filesystem::create_directories(opts.out_dir);

    rep.put("experiment.name", cfg.name);
    if (!cfg.description.empty()) rep.put("experiment.description", cfg.description);
    if (opts.with_timestamp) rep.put("generated_at", utc_timestamp());

    // --- spectral setup -----------------------------------------------------
    if (cfg.op.kind != "laplacian_1d") {
        throw ConfigError("the run pipeline needs a concrete interval operator "
                          "(kind = laplacian_1d); abstract spectra support only the "
                          "library-level index algebra");
    }
    const EigenSystem es = build_laplacian_1d(cfg.op.n_modes, cfg.op.length);
    Decomposition d;
    try {
        d = decompose(es, cfg.op.k);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad resonance index k: ") + e.what());
    }
    ConstantsBundle cb = [&] {
        try {
            return ConstantsBundle::for_model(es, d, cfg.constants.alpha, cfg.constants.delta);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("bad constants: ") + e.what());
        }
    }();
    const QuadratureGrid grid =
        make_composite_gauss(cfg.op.length, cfg.checks.quadrature_order,
                             cfg.checks.quadrature_panels);

    rep.put("operator.kind", cfg.op.kind);
    rep.put("operator.length", cfg.op.length);
    rep.put("operator.n_modes", cfg.op.n_modes);
    rep.put("operator.k", cfg.op.k);
    rep.put("spectrum.lambda", d.lambda);
    rep.put("spectrum.gap_c", d.spectral_gap_c);
    rep.put("spectrum.d_k", d.d_k);
    rep.put("spectrum.d_km1", d.d_km1);
    rep.put("spectrum.dim_X0", d.dim_X0);
    rep.put("spectrum.dim_Xminus", d.dim_Xminus);
    rep.put("constants.alpha", cb.alpha);
    rep.put("constants.delta", cb.delta);
    rep.put("constants.M", cb.M);
    rep.put("constants.c", cb.c);

    // --- nonlinearity -------------------------------------------------------
    NonlinearityModel model;
    try {
        model = cfg.nonlinearity.table_path.empty()
                    ? make_builtin(cfg.nonlinearity.name, cfg.nonlinearity.params, cfg.op.length)
                    : load_table_model(cfg.nonlinearity.table_path);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad nonlinearity: ") + e.what());
    }
    rep.put("nonlinearity.display", model.display);
    rep.put("nonlinearity.bound_m", model.bound_m);
    if (model.nu) rep.put("nonlinearity.nu_declared", *model.nu);

    const std::uint64_t seed = opts.seed.value_or(cfg.checks.seed);
    rep.put("checks.seed", static_cast<long>(seed));

    auto finish = [&](Outcome o, int code) {
        result.outcome = o;
        result.exit_code = code;
        rep.put("outcome", outcome_name(o));
        rep.put("exit_code", code);
        if (!opts.out_dir.empty()) {
            const std::string path = detail::artifact_path(opts, "report.txt");
            rep.write_file(path);
            result.artifacts.push_back(path);
        }
        return result;
    };

    // --- boundedness of the substitution law --------------------------------
    const BoundReport bound = verify_bound(model, grid);
    rep.put("bound.holds", bound.holds);
    rep.put("bound.declared", bound.declared_bound);
    rep.put("bound.max_abs", bound.max_abs);
    rep.put("bound.samples", bound.samples);
    if (!bound.holds) {
        rep.put("bound.witness_s", bound.witness_s);
        rep.put("bound.error", "sampled |f| exceeds the declared bound; the law is not "
                               "an admissible bounded perturbation");
        return finish(Outcome::HYPOTHESIS_FAILED, kExitHypothesisFailed);
    }

    // --- linearization at zero ----------------------------------------------
    bool origin_equilibrium = true;
    std::optional<double> nu;
    try {
        const LinearizationReport lin = estimate_linearization(model, grid);
        rep.put("linearization.nu_estimated", lin.nu);
        rep.put("linearization.slope_spread", lin.slope_spread);
        nu = model.nu ? model.nu : std::optional<double>(lin.nu);
        const double tol = LinearizationOptions{}.tolerance;
        if (model.nu && std::abs(lin.nu - *model.nu) > tol) {
            rep.put("linearization.error",
                    "declared slope at zero contradicts the finite-difference estimate");
            return finish(Outcome::HYPOTHESIS_FAILED, kExitHypothesisFailed);
        }
        if (cfg.nonlinearity.expected_nu && std::abs(*nu - *cfg.nonlinearity.expected_nu) > tol) {
            rep.put("linearization.error", "config expected_nu contradicts the model slope");
            return finish(Outcome::HYPOTHESIS_FAILED, kExitHypothesisFailed);
        }
    } catch (const HypothesisViolation& hv) {
        rep.put("linearization.hypothesis_failed", hv.hypothesis());
        rep.put("linearization.witness_x", hv.witness_x());
        rep.put("linearization.witness_value", hv.witness_value());
        if (model.nu || cfg.nonlinearity.expected_nu) {
            // The model claims a smooth slope at zero yet fails the spot
            // check; that is a contradiction, not a demonstration.
            return finish(Outcome::HYPOTHESIS_FAILED, kExitHypothesisFailed);
        }
        origin_equilibrium = false;
    }
    rep.put("origin.equilibrium", origin_equilibrium);
    if (nu) rep.put("nonlinearity.nu", *nu);

    // --- integral conditions ------------------------------------------------
    ConditionVerdict integral;
    if (model.has_limits()) {
        const ConditionVerdict ll =
            check_landesman_lazer(model, es, cfg.op.k, grid, cfg.checks.n_sphere_samples);
        detail::put_verdict(rep, "landesman_lazer", ll);
        if (ll.holds) integral = ll;
    } else {
        rep.put("landesman_lazer.condition", "none");
        rep.put("landesman_lazer.notes", "model carries no asymptotic limits");
    }
    if (!integral.holds && model.has_limit_infty()) {
        try {
            const ConditionVerdict sr = check_strong_resonance(model, es, grid);
            detail::put_verdict(rep, "strong_resonance", sr);
            if (sr.holds) integral = sr;
        } catch (const MetadataError& e) {
            rep.put("strong_resonance.error", e.what());
        }
    }
    if (integral.holds) {
        rep.put("condition.integral", condition_name(integral.condition));
        rep.put("condition.lifted", condition_name(lift_to_G(integral).condition));
    }

    // --- isolating neighborhood (direct geometric check) --------------------
    RadiusSearchSpec rspec;
    rspec.r_min = cfg.checks.radius_r_min;
    rspec.factor = cfg.checks.radius_factor;
    rspec.n_steps = cfg.checks.radius_steps;
    rspec.n_confirm_samples = std::max(rspec.n_confirm_samples, cfg.orbit.n_block_samples);
    rspec.sampling.n_ball = cfg.checks.n_ball_samples;
    rspec.sampling.n_radii = cfg.checks.n_radii;
    rspec.sampling.rng_seed = seed;

    const AprioriRadius r1 = apriori_radius_R1(model, es, d, cb);
    rep.put("radius.m0", r1.m0);
    rep.put("radius.c_prime", r1.c_prime);
    rep.put("radius.R1", r1.total);

    std::optional<IsolatingNeighborhood> nbhd;
    try {
        nbhd = build_isolating_neighborhood(model, es, d, cb, grid, rspec);
    } catch (const ConditionNotVerified& e) {
        rep.put("neighborhood.error", e.what());
    }

    const std::vector<double> s_values = default_homotopy_family();

    if (!nbhd) {
        // No geometric condition could be certified.  Demonstrate why when
        // possible: a kernel average of the forcing that never vanishes
        // makes every kernel orbit drift, so no bounded invariant set and
        // no neighborhood of the sought type exist.
        IsolatingNeighborhood nominal;
        nominal.r1 = r1;
        nominal.R_Q = r1.total + 1.0;
        nominal.R_P = 1.0;
        const BlockReport block = verify_isolating_block(model, es, d, cb, grid, nominal,
                                                         s_values, cfg.orbit.n_block_samples,
                                                         seed);
        rep.put("block.verified", block.verified);
        rep.put("block.samples", block.samples);
        rep.put("block.mixed_witnesses", block.mixed_witnesses.size());

        IntegratorConfig drift_cfg;
        drift_cfg.scheme = cfg.integration.scheme;
        drift_cfg.step_h = cfg.integration.step;
        drift_cfg.t_end = std::min(cfg.integration.t_end, 20.0);
        drift_cfg.save_stride = cfg.integration.save_stride;
        const Trajectory traj = integrate(model, es, d, cb, grid, d.lambda, 1.0,
                                          SpectralState::zeros(es.n_modes()), drift_cfg);
        detail::save_trajectory(opts, result, "kernel_drift", traj, cfg.op.n_modes);
        double slope = 0.0;
        if (d.dim_X0 == 1) {
            slope = detail::fit_coefficient_slope(traj, d.idx0.front());
        } else {
            // Multi-dimensional kernels: rate of growth of the kernel norm.
            slope = (traj.H_norm_P_part.back() - traj.H_norm_P_part.front()) /
                    (traj.final_time() - traj.times.front());
        }
        rep.put("drift.slope", slope);
        const bool drift = std::abs(slope) > 1e-3;
        rep.put("drift.demonstrated", drift);
        if (drift) {
            rep.put("drift.explanation",
                    "kernel forcing has a nonvanishing average, so the resonant "
                    "coefficient drifts linearly and no bounded invariant set exists");
            return finish(Outcome::NO_INVARIANT_SET, kExitOk);
        }
        return finish(Outcome::NOT_VERIFIED, kExitNotVerified);
    }

    result.neighborhood = nbhd;
    rep.put("neighborhood.R_Q", nbhd->R_Q);
    rep.put("neighborhood.R_P", nbhd->R_P);
    detail::put_verdict(rep, "geometric", nbhd->verdict);
    if (integral.holds &&
        lift_to_G(integral).condition != nbhd->verdict.condition) {
        rep.put("geometric.error",
                "integral criterion and direct sampling disagree on the geometric condition");
        return finish(Outcome::NOT_VERIFIED, kExitNotVerified);
    }

    // --- isolating block ----------------------------------------------------
    const BlockReport block = verify_isolating_block(model, es, d, cb, grid, *nbhd, s_values,
                                                     cfg.orbit.n_block_samples, seed);
    rep.put("block.verified", block.verified);
    rep.put("block.exit_set",
            block.exit_set == ExitSet::FULL_BOUNDARY ? "full-boundary" : "empty");
    rep.put("block.min_abs_derivative", block.min_abs_derivative);
    rep.put("block.samples", block.samples);
    rep.put("block.mixed_witnesses", block.mixed_witnesses.size());
    if (!block.verified) {
        rep.put("block.error", "boundary derivative changed sign over the interpolation "
                               "family; the product set is not an isolating block");
        return finish(Outcome::NOT_VERIFIED, kExitNotVerified);
    }

    // --- indices and the connection criterion -------------------------------
    if (!origin_equilibrium || !nu) {
        rep.put("criterion.skipped", "origin is not an equilibrium or the slope at zero "
                                     "is unavailable; index comparison not applicable");
        return finish(Outcome::NOT_VERIFIED, kExitNotVerified);
    }

    DecisionRecord dec;
    try {
        dec = connecting_orbit_criterion(es, cfg.op.k, *nu, nbhd->verdict);
    } catch (const NonhyperbolicOriginError& e) {
        rep.put("criterion.error", e.what());
        rep.put("criterion.lambda_plus_nu", e.lambda_plus_nu());
        return finish(Outcome::HYPOTHESIS_FAILED, kExitHypothesisFailed);
    }
    result.decision = dec;
    rep.put("index.h_K", dec.h_K.to_string());
    rep.put("index.h_0", dec.h_0.to_string());
    rep.put("criterion.condition_used", condition_name(dec.condition_used));
    rep.put("criterion.provenance", dec.provenance);
    rep.put("criterion.case", connection_case_name(dec.case_id));
    rep.put("criterion.existence",
            dec.existence == Existence::EXISTS ? "exists" : "inconclusive");
    if (!dec.failed_hypothesis.empty()) {
        rep.put("criterion.failed_hypothesis", dec.failed_hypothesis);
    }

    const LinearIndexReport lin_chk = linear_index_check(es, d, d.lambda);
    rep.put("linear_check.index", lin_chk.index.to_string());
    rep.put("linear_check.growth_consistent", lin_chk.growth_consistent);

    if (dec.existence != Existence::EXISTS) {
        return finish(Outcome::INCONCLUSIVE, kExitOk);
    }

    // --- orbit evidence -----------------------------------------------------
    if (cfg.orbit.enabled) {
        IntegratorConfig icfg;
        icfg.scheme = cfg.integration.scheme;
        icfg.step_h = cfg.integration.step;
        icfg.t_end = cfg.orbit.t_end;
        icfg.save_stride = cfg.integration.save_stride;

        const UnstableDirections unstable = unstable_directions(es, d.lambda, *nu);
        rep.put("shot.unstable_dimension", unstable.dimension);
        ShotSpec sspec;
        sspec.epsilon = cfg.orbit.shot_epsilon;
        int shot_no = 0;
        for (int mode : unstable.indices) {
            if (shot_no >= 4) break;
            for (double sign : {1.0, -1.0}) {
                SpectralState dir(es.n_modes());
                dir.c[static_cast<std::size_t>(mode)] = sign;
                const ShotReport shot = shoot_from_origin(model, es, d, cb, grid, d.lambda,
                                                          *nbhd, dir, sspec, icfg);
                const std::string prefix =
                    "shot." + std::to_string(mode + 1) + (sign > 0 ? "p" : "m");
                rep.put(prefix + ".fate", orbit_fate_name(shot.fate));
                if (shot.fate == OrbitFate::EXITS_N) rep.put(prefix + ".exit_time",
                                                             shot.exit_time);
                rep.put(prefix + ".final_alpha_norm", shot.final_alpha_norm);
                if (shot.settled_to_nonzero_equilibrium) {
                    rep.put(prefix + ".settled_to_nonzero_equilibrium", true);
                }
                detail::save_trajectory(opts, result,
                                        "shot_" + std::to_string(mode + 1) +
                                            (sign > 0 ? "_plus" : "_minus"),
                                        shot.trajectory, cfg.op.n_modes);
                ++shot_no;
            }
        }

        SearchSpec search_spec;
        search_spec.n_starts = cfg.orbit.n_starts;
        search_spec.rng_seed = cfg.orbit.seed;
        const OrbitSearchReport search = forward_attraction_search(
            model, es, d, cb, grid, d.lambda, *nbhd, search_spec, icfg);
        rep.put("search.n_starts", search.n_starts);
        rep.put("search.n_exited", search.n_exited);
        rep.put("search.n_converged_to_zero", search.n_converged_to_zero);
        rep.put("search.n_long_resident", search.n_long_resident);
        rep.put("search.connecting_witnesses", search.connecting_witnesses.size());
        if (search.best_witness) {
            const auto& best = search.hits[static_cast<std::size_t>(*search.best_witness)];
            rep.put("search.best_witness_start_P_norm", best.start_P_norm);
            detail::save_trajectory(opts, result, "connecting_witness", best.trajectory,
                                    cfg.op.n_modes);
        }
    }

    return finish(Outcome::ORBIT_EXISTS, kExitOk);
}

}  // namespace resonance
