#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resonance/errors.hpp"
#include "resonance/nonlinearity.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

enum class Scheme { ETD1, ETD2 };

struct IntegratorConfig {
    Scheme scheme = Scheme::ETD2;
    double step_h = 1e-2;
    double t_end = 1.0;
    double phi_taylor_threshold = 1e-4;
    double blowup_guard = 1e12;
    int save_stride = 1;
};

enum class StopReason { COMPLETED, STOPPED };

/// Sampled trajectory.  States are recorded every save_stride steps plus
/// the final state; the cached norms are aligned with `times`.
struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralState> states;
    std::vector<double> alpha_norms;    // fractional norm of the full state
    std::vector<double> H_norm_P_part;  // L2 norm of the kernel component
    StopReason stop_reason = StopReason::COMPLETED;
    double stop_time = 0.0;

    [[nodiscard]] const SpectralState& final_state() const { return states.back(); }
    [[nodiscard]] double final_time() const { return times.back(); }
};

/// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, with Taylor
/// fallbacks near zero where the closed forms lose digits.
[[nodiscard]] inline double phi1(double z, double threshold = 1e-4) {
    if (std::abs(z) < threshold) {
        return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    }
    return std::expm1(z) / z;
}

[[nodiscard]] inline double phi2(double z, double threshold = 1e-4) {
    if (std::abs(z) < threshold) {
        return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
    }
    return (std::expm1(z) - z) / (z * z);
}

/// Vector field of the interpolation family:
///   G(s, u) = P F(s Q u + P u) + s Q F(s Q u + P u).
/// s = 1 is the full substitution operator, s = 0 decouples the kernel
/// flow from the (then linear) complement.
[[nodiscard]] inline SpectralState homotopy_field(const NonlinearityModel& model,
                                                  const SynthesisTable& table,
                                                  const QuadratureGrid& grid,
                                                  const Decomposition& d, double s,
                                                  const SpectralState& u) {
    SpectralState arg(u.size());
    for (int i : d.idx0) arg.c[static_cast<std::size_t>(i)] = u.c[static_cast<std::size_t>(i)];
    for (int i : d.idx_minus) {
        arg.c[static_cast<std::size_t>(i)] = s * u.c[static_cast<std::size_t>(i)];
    }
    for (int i : d.idx_plus) {
        arg.c[static_cast<std::size_t>(i)] = s * u.c[static_cast<std::size_t>(i)];
    }
    SpectralState F = apply_niemytzki(model, table, grid, arg);
    SpectralState G(u.size());
    for (int i : d.idx0) G.c[static_cast<std::size_t>(i)] = F.c[static_cast<std::size_t>(i)];
    for (int i : d.idx_minus) {
        G.c[static_cast<std::size_t>(i)] = s * F.c[static_cast<std::size_t>(i)];
    }
    for (int i : d.idx_plus) {
        G.c[static_cast<std::size_t>(i)] = s * F.c[static_cast<std::size_t>(i)];
    }
    return G;
}

[[nodiscard]] inline SpectralState homotopy_field(const NonlinearityModel& model,
                                                  const EigenSystem& es,
                                                  const QuadratureGrid& grid,
                                                  const Decomposition& d, double s,
                                                  const SpectralState& u) {
    const SynthesisTable table(es, grid);
    return homotopy_field(model, table, grid, d, s, u);
}

namespace detail {

/// Per-mode exponential propagator factors for one step of size h.
struct ExpTable {
    std::vector<double> E;       // e^{z_i}
    std::vector<double> h_phi1;  // h phi1(z_i)
    std::vector<double> h_phi2;  // h phi2(z_i)

    ExpTable(const EigenSystem& es, double lambda, double h, double threshold) {
        const std::size_t n = es.n_modes();
        E.resize(n);
        h_phi1.resize(n);
        h_phi2.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (lambda - es.mode_eigenvalue[i]) * h;
            E[i] = std::exp(z);
            h_phi1[i] = h * phi1(z, threshold);
            h_phi2[i] = h * phi2(z, threshold);
        }
    }
};

inline void guard_finite(const SpectralState& u, double t, double guard) {
    double norm2 = 0.0;
    for (double v : u.c) norm2 += v * v;
    if (!std::isfinite(norm2) || norm2 > guard * guard) {
        throw BlowUpError("trajectory norm crossed the divergence guard at t = " +
                              std::to_string(t),
                          t);
    }
}

}  // namespace detail

using StopCondition = std::function<bool(double, const SpectralState&)>;

/// Integrate u' = (lambda - A) u + G(s, u) by exponential time
/// differencing on the diagonal linear part.  The linear flow is applied
/// exactly; ETD1 is first order and ETD2 a second-order predictor-
/// corrector in the nonlinear term.  Stops early when `stop` fires.
[[nodiscard]] inline Trajectory integrate(const NonlinearityModel& model, const EigenSystem& es,
                                          const Decomposition& d, const ConstantsBundle& cb,
                                          const QuadratureGrid& grid, double lambda, double s,
                                          const SpectralState& u0, const IntegratorConfig& cfg,
                                          const StopCondition& stop = {}) {
    if (!(cfg.step_h > 0.0)) throw std::invalid_argument("step_h must be > 0");
    if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    if (u0.size() != es.n_modes()) {
        throw std::invalid_argument("initial state length does not match eigensystem");
    }

    const SynthesisTable table(es, grid);
    const detail::ExpTable exp_table(es, lambda, cfg.step_h, cfg.phi_taylor_threshold);
    const auto n_steps = static_cast<long>(std::llround(cfg.t_end / cfg.step_h));

    Trajectory traj;
    auto record = [&](double t, const SpectralState& u) {
        traj.times.push_back(t);
        traj.states.push_back(u);
        traj.alpha_norms.push_back(fractional_norm(u, es, cb));
        double p2 = 0.0;
        for (int i : d.idx0) {
            const double v = u.c[static_cast<std::size_t>(i)];
            p2 += v * v;
        }
        traj.H_norm_P_part.push_back(std::sqrt(p2));
    };

    SpectralState u = u0;
    record(0.0, u);
    const int stride = std::max(1, cfg.save_stride);
    for (long step = 0; step < n_steps; ++step) {
        const double t_next = cfg.step_h * static_cast<double>(step + 1);
        const SpectralState N0 = homotopy_field(model, table, grid, d, s, u);
        SpectralState predictor(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            predictor.c[i] = exp_table.E[i] * u.c[i] + exp_table.h_phi1[i] * N0.c[i];
        }
        if (cfg.scheme == Scheme::ETD1) {
            u = std::move(predictor);
        } else {
            const SpectralState N1 = homotopy_field(model, table, grid, d, s, predictor);
            for (std::size_t i = 0; i < u.size(); ++i) {
                predictor.c[i] += exp_table.h_phi2[i] * (N1.c[i] - N0.c[i]);
            }
            u = std::move(predictor);
        }
        detail::guard_finite(u, t_next, cfg.blowup_guard);

        const bool last = (step + 1 == n_steps);
        const bool hit_stop = stop && stop(t_next, u);
        if ((step + 1) % stride == 0 || last || hit_stop) record(t_next, u);
        if (hit_stop) {
            traj.stop_reason = StopReason::STOPPED;
            traj.stop_time = t_next;
            return traj;
        }
    }
    traj.stop_reason = StopReason::COMPLETED;
    traj.stop_time = traj.times.back();
    return traj;
}

/// Classical RK4 on the reduced kernel equation u' = P F(u), u in X0.
/// Coefficients outside the kernel stay exactly zero.
[[nodiscard]] inline Trajectory integrate_kernel_flow(const NonlinearityModel& model,
                                                      const EigenSystem& es,
                                                      const Decomposition& d,
                                                      const ConstantsBundle& cb,
                                                      const QuadratureGrid& grid,
                                                      const SpectralState& u0,
                                                      const IntegratorConfig& cfg) {
    if (!(cfg.step_h > 0.0)) throw std::invalid_argument("step_h must be > 0");
    for (std::size_t i = 0; i < u0.size(); ++i) {
        const bool in_kernel =
            std::find(d.idx0.begin(), d.idx0.end(), static_cast<int>(i)) != d.idx0.end();
        if (!in_kernel && u0.c[i] != 0.0) {
            throw std::invalid_argument("kernel flow requires a state supported on the kernel");
        }
    }

    const SynthesisTable table(es, grid);
    auto rhs = [&](const SpectralState& u) {
        const SpectralState F = apply_niemytzki(model, table, grid, u);
        SpectralState out(u.size());
        for (int i : d.idx0) out.c[static_cast<std::size_t>(i)] = F.c[static_cast<std::size_t>(i)];
        return out;
    };

    const auto n_steps = static_cast<long>(std::llround(cfg.t_end / cfg.step_h));
    Trajectory traj;
    auto record = [&](double t, const SpectralState& u) {
        traj.times.push_back(t);
        traj.states.push_back(u);
        traj.alpha_norms.push_back(fractional_norm(u, es, cb));
        double p2 = 0.0;
        for (int i : d.idx0) {
            const double v = u.c[static_cast<std::size_t>(i)];
            p2 += v * v;
        }
        traj.H_norm_P_part.push_back(std::sqrt(p2));
    };

    SpectralState u = u0;
    record(0.0, u);
    const double h = cfg.step_h;
    const int stride = std::max(1, cfg.save_stride);
    for (long step = 0; step < n_steps; ++step) {
        const double t_next = h * static_cast<double>(step + 1);
        const SpectralState k1 = rhs(u);
        SpectralState tmp = u;
        axpy(h / 2.0, k1, tmp);
        const SpectralState k2 = rhs(tmp);
        tmp = u;
        axpy(h / 2.0, k2, tmp);
        const SpectralState k3 = rhs(tmp);
        tmp = u;
        axpy(h, k3, tmp);
        const SpectralState k4 = rhs(tmp);
        axpy(h / 6.0, k1, u);
        axpy(h / 3.0, k2, u);
        axpy(h / 3.0, k3, u);
        axpy(h / 6.0, k4, u);
        detail::guard_finite(u, t_next, cfg.blowup_guard);
        if ((step + 1) % stride == 0 || step + 1 == n_steps) record(t_next, u);
    }
    traj.stop_reason = StopReason::COMPLETED;
    traj.stop_time = traj.times.back();
    return traj;
}

/// Outward derivative of ||P u||^2 / 2 along the s-flow at a point of the
/// kernel sphere: <P F(s Q u + P u), P u>, doubled.  The declared radius
/// is validated against the actual kernel norm to 1e-9.
[[nodiscard]] inline double boundary_exit_derivative(const NonlinearityModel& model,
                                                     const EigenSystem& es,
                                                     const Decomposition& d,
                                                     const QuadratureGrid& grid, double s,
                                                     const SpectralState& u,
                                                     double boundary_radius) {
    double p2 = 0.0;
    for (int i : d.idx0) {
        const double v = u.c[static_cast<std::size_t>(i)];
        p2 += v * v;
    }
    if (std::abs(std::sqrt(p2) - boundary_radius) > 1e-9) {
        throw std::invalid_argument("point is not on the declared kernel sphere (||Pu|| = " +
                                    std::to_string(std::sqrt(p2)) + ", radius = " +
                                    std::to_string(boundary_radius) + ")");
    }
    const SynthesisTable table(es, grid);
    const SpectralState G = homotopy_field(model, table, grid, d, s, u);
    double pairing = 0.0;
    for (int i : d.idx0) {
        pairing += G.c[static_cast<std::size_t>(i)] * u.c[static_cast<std::size_t>(i)];
    }
    return 2.0 * pairing;
}

/// Write a trajectory as CSV: t, every coefficient, then the cached norms.
inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (std::size_t j = 1; j <= n; ++j) out << ",c_" << j;
    out << ",alpha_norm,H_norm_P_part\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t row = 0; row < traj.times.size(); ++row) {
        put(traj.times[row]);
        for (std::size_t j = 0; j < n; ++j) {
            out << ",";
            put(traj.states[row].c[j]);
        }
        out << ",";
        put(traj.alpha_norms[row]);
        out << ",";
        put(traj.H_norm_P_part[row]);
        out << "\n";
    }
}

}  // namespace resonance
