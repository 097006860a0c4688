#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resonance/conditions.hpp"
#include "resonance/conley.hpp"
#include "resonance/errors.hpp"
#include "resonance/sampling.hpp"
#include "resonance/semiflow.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

struct UnstableDirections {
    std::vector<int> indices;
    int dimension = 0;
};

/// Modes that grow under the linearization u' = (lambda + nu - A) u at the
/// origin.  Throws when lambda + nu sits on the spectrum.
[[nodiscard]] inline UnstableDirections unstable_directions(const EigenSystem& es, double lambda,
                                                            double nu) {
    const double level = lambda + nu;
    (void)detail::modes_below(es, level);  // hyperbolicity and truncation guards
    UnstableDirections out;
    for (std::size_t i = 0; i < es.n_modes(); ++i) {
        if (es.mode_eigenvalue[i] < level) out.indices.push_back(static_cast<int>(i));
    }
    out.dimension = static_cast<int>(out.indices.size());
    return out;
}

namespace detail {

struct NeighborhoodMonitor {
    const EigenSystem* es = nullptr;
    const Decomposition* d = nullptr;
    std::vector<double> q_weight_sq;  // (lambda_i + delta)^(2 alpha) on Q modes, 0 on kernel
    std::vector<bool> is_kernel;
    double R_Q = 0.0;
    double R_P = 0.0;

    NeighborhoodMonitor(const EigenSystem& sys, const Decomposition& dec,
                        const ConstantsBundle& cb, const IsolatingNeighborhood& nbhd)
        : es(&sys), d(&dec), R_Q(nbhd.R_Q), R_P(nbhd.R_P) {
        q_weight_sq.assign(sys.n_modes(), 0.0);
        is_kernel.assign(sys.n_modes(), false);
        for (int i : dec.idx0) is_kernel[static_cast<std::size_t>(i)] = true;
        for (std::size_t i = 0; i < sys.n_modes(); ++i) {
            if (!is_kernel[i]) {
                q_weight_sq[i] = std::pow(sys.mode_eigenvalue[i] + cb.delta, 2.0 * cb.alpha);
            }
        }
    }

    [[nodiscard]] double q_alpha_norm(const SpectralState& u) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < u.c.size(); ++i) acc += q_weight_sq[i] * u.c[i] * u.c[i];
        return std::sqrt(acc);
    }

    [[nodiscard]] double p_norm(const SpectralState& u) const {
        double acc = 0.0;
        for (int i : d->idx0) {
            const double v = u.c[static_cast<std::size_t>(i)];
            acc += v * v;
        }
        return std::sqrt(acc);
    }

    [[nodiscard]] bool inside(const SpectralState& u) const {
        return q_alpha_norm(u) <= R_Q && p_norm(u) <= R_P;
    }

    [[nodiscard]] StopCondition exit_monitor() const {
        return [*this](double, const SpectralState& u) { return !inside(u); };
    }
};

/// Largest distance (plain l2) from the final saved state over saved rows in
/// the trailing time window.
[[nodiscard]] inline double tail_wander(const Trajectory& traj, double window) {
    if (traj.states.empty()) return 0.0;
    const SpectralState& last = traj.states.back();
    const double t_from = traj.times.back() - window;
    double worst = 0.0;
    for (std::size_t r = 0; r < traj.states.size(); ++r) {
        if (traj.times[r] < t_from) continue;
        const double dist = l2_norm(difference(traj.states[r], last));
        if (dist > worst) worst = dist;
    }
    return worst;
}

[[nodiscard]] inline double tail_peak_alpha(const Trajectory& traj, double window) {
    if (traj.alpha_norms.empty()) return 0.0;
    const double t_from = traj.times.back() - window;
    double peak = 0.0;
    for (std::size_t r = 0; r < traj.alpha_norms.size(); ++r) {
        if (traj.times[r] < t_from) continue;
        if (traj.alpha_norms[r] > peak) peak = traj.alpha_norms[r];
    }
    return peak;
}

}  // namespace detail

enum class OrbitFate { EXITS_N, BOUNDED_IN_N, CONVERGES_TO_ZERO };

[[nodiscard]] constexpr const char* orbit_fate_name(OrbitFate f) noexcept {
    switch (f) {
        case OrbitFate::EXITS_N: return "exits-neighborhood";
        case OrbitFate::BOUNDED_IN_N: return "bounded-in-neighborhood";
        case OrbitFate::CONVERGES_TO_ZERO: return "converges-to-zero";
    }
    return "exits-neighborhood";
}

struct ShotSpec {
    double epsilon = 1e-4;
    double tail_window = 10.0;
    double zero_threshold = 1e-6;
    double equilibrium_threshold = 1e-8;
};

struct ShotReport {
    double epsilon = 0.0;
    OrbitFate fate = OrbitFate::EXITS_N;
    double exit_time = 0.0;
    double final_time = 0.0;
    double final_alpha_norm = 0.0;
    double final_P_norm = 0.0;
    bool settled_to_nonzero_equilibrium = false;
    Trajectory trajectory;
};

/// Launch from epsilon times the unit direction and watch whether the orbit
/// leaves the neighborhood, collapses back to the origin, or stays inside for
/// the whole horizon.  The offset must be small against the kernel radius so
/// the shot genuinely starts near the origin.
[[nodiscard]] inline ShotReport shoot_from_origin(
    const NonlinearityModel& model, const EigenSystem& es, const Decomposition& d,
    const ConstantsBundle& cb, const QuadratureGrid& grid, double lambda,
    const IsolatingNeighborhood& nbhd, const SpectralState& direction, const ShotSpec& spec,
    const IntegratorConfig& cfg) {
    if (!(spec.epsilon > 0.0) || spec.epsilon > 1e-3 * nbhd.R_P) {
        throw std::invalid_argument("shot offset must lie in (0, R_P / 1000]");
    }
    const double norm = l2_norm(direction);
    if (!(norm > 0.0)) throw std::invalid_argument("shot direction must be nonzero");

    const detail::NeighborhoodMonitor mon(es, d, cb, nbhd);
    const SpectralState u0 = scaled(direction, spec.epsilon / norm);
    if (!mon.inside(u0)) throw std::invalid_argument("shot start lies outside the neighborhood");

    ShotReport rep;
    rep.epsilon = spec.epsilon;
    rep.trajectory = integrate(model, es, d, cb, grid, lambda, 1.0, u0, cfg, mon.exit_monitor());
    rep.final_time = rep.trajectory.final_time();
    rep.final_alpha_norm = rep.trajectory.alpha_norms.back();
    rep.final_P_norm = mon.p_norm(rep.trajectory.final_state());

    if (rep.trajectory.stop_reason == StopReason::STOPPED) {
        rep.fate = OrbitFate::EXITS_N;
        rep.exit_time = rep.trajectory.stop_time;
    } else if (detail::tail_peak_alpha(rep.trajectory, spec.tail_window) < spec.zero_threshold) {
        rep.fate = OrbitFate::CONVERGES_TO_ZERO;
    } else {
        rep.fate = OrbitFate::BOUNDED_IN_N;
        rep.settled_to_nonzero_equilibrium =
            detail::tail_wander(rep.trajectory, spec.tail_window) < spec.equilibrium_threshold &&
            rep.final_alpha_norm > spec.zero_threshold;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Forward attraction search
// ---------------------------------------------------------------------------

enum class StartFate { EXITED, CONVERGED_TO_ZERO, LONG_RESIDENT };

[[nodiscard]] constexpr const char* start_fate_name(StartFate f) noexcept {
    switch (f) {
        case StartFate::EXITED: return "exited";
        case StartFate::CONVERGED_TO_ZERO: return "converged-to-zero";
        case StartFate::LONG_RESIDENT: return "long-resident";
    }
    return "exited";
}

struct SearchSpec {
    int n_starts = 32;
    double min_witness_P_fraction = 0.02;  // start must be clearly nonzero to witness a connection
    double tail_window = 10.0;
    double zero_threshold = 1e-6;
    std::uint64_t rng_seed = 2026;
};

struct SearchHit {
    int start_index = 0;
    StartFate fate = StartFate::EXITED;
    double start_P_norm = 0.0;
    double start_Q_alpha_norm = 0.0;
    double exit_time = 0.0;
    double final_alpha_norm = 0.0;
    Trajectory trajectory;
};

struct OrbitSearchReport {
    int n_starts = 0;
    int n_exited = 0;
    int n_converged_to_zero = 0;
    int n_long_resident = 0;
    std::vector<SearchHit> hits;
    std::vector<int> connecting_witnesses;  // converged-to-zero hits with a clearly nonzero start
    std::optional<int> best_witness;        // largest starting kernel norm among those
};

/// Scatter quasi-random starts through the neighborhood and integrate each
/// forward.  Starts that collapse to the origin from well inside the kernel
/// disc witness orbits arriving at zero from the nonzero invariant set;
/// starts that stay for the whole horizon trace out that set itself.
[[nodiscard]] inline OrbitSearchReport forward_attraction_search(
    const NonlinearityModel& model, const EigenSystem& es, const Decomposition& d,
    const ConstantsBundle& cb, const QuadratureGrid& grid, double lambda,
    const IsolatingNeighborhood& nbhd, const SearchSpec& spec, const IntegratorConfig& cfg) {
    if (spec.n_starts < 1) throw std::invalid_argument("need at least one start");

    const detail::NeighborhoodMonitor mon(es, d, cb, nbhd);
    Rng rng(spec.rng_seed);
    std::vector<int> q_idx;
    q_idx.insert(q_idx.end(), d.idx_minus.begin(), d.idx_minus.end());
    q_idx.insert(q_idx.end(), d.idx_plus.begin(), d.idx_plus.end());
    std::vector<double> q_weights;
    for (int i : q_idx) {
        q_weights.push_back(
            std::pow(es.mode_eigenvalue[static_cast<std::size_t>(i)] + cb.delta, cb.alpha));
    }
    const std::vector<double> unit_weights(d.idx0.size(), 1.0);

    OrbitSearchReport rep;
    rep.n_starts = spec.n_starts;
    for (int n = 0; n < spec.n_starts; ++n) {
        // Kernel radius from a low-discrepancy sequence, direction from the
        // seeded generator; the Q part fills a small fraction of its ball so
        // starts sit near the kernel disc without lying exactly on it.
        const double frac = radical_inverse(static_cast<unsigned>(n + 1), 2);
        SpectralState u0(es.n_modes());
        if (!d.idx0.empty()) {
            const auto dir = random_direction(rng, es.n_modes(), d.idx0, unit_weights);
            u0 = scaled(dir, frac * nbhd.R_P);
        }
        if (!q_idx.empty()) {
            const double q_frac = 0.25 * radical_inverse(static_cast<unsigned>(n + 1), 3);
            const auto y = random_ball_point(rng, es.n_modes(), q_idx, q_weights,
                                             q_frac * nbhd.R_Q);
            axpy(1.0, y, u0);
        }

        SearchHit hit;
        hit.start_index = n;
        hit.start_P_norm = mon.p_norm(u0);
        hit.start_Q_alpha_norm = mon.q_alpha_norm(u0);
        hit.trajectory =
            integrate(model, es, d, cb, grid, lambda, 1.0, u0, cfg, mon.exit_monitor());
        hit.final_alpha_norm = hit.trajectory.alpha_norms.back();

        if (hit.trajectory.stop_reason == StopReason::STOPPED) {
            hit.fate = StartFate::EXITED;
            hit.exit_time = hit.trajectory.stop_time;
            ++rep.n_exited;
        } else if (detail::tail_peak_alpha(hit.trajectory, spec.tail_window) <
                   spec.zero_threshold) {
            hit.fate = StartFate::CONVERGED_TO_ZERO;
            ++rep.n_converged_to_zero;
            if (hit.start_P_norm >= spec.min_witness_P_fraction * nbhd.R_P) {
                rep.connecting_witnesses.push_back(n);
            }
        } else {
            hit.fate = StartFate::LONG_RESIDENT;
            ++rep.n_long_resident;
        }
        rep.hits.push_back(std::move(hit));
    }

    double best = -1.0;
    for (int idx : rep.connecting_witnesses) {
        const auto& h = rep.hits[static_cast<std::size_t>(idx)];
        if (h.start_P_norm > best) {
            best = h.start_P_norm;
            rep.best_witness = idx;
        }
    }
    return rep;
}

}  // namespace resonance
