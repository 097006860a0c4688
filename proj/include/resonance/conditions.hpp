#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resonance/errors.hpp"
#include "resonance/nonlinearity.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/sampling.hpp"
#include "resonance/semiflow.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

enum class Condition { G1, G2, LL1, LL2, SR1, SR2, NONE };

[[nodiscard]] constexpr const char* condition_name(Condition c) noexcept {
    switch (c) {
        case Condition::G1: return "G1";
        case Condition::G2: return "G2";
        case Condition::LL1: return "LL1";
        case Condition::LL2: return "LL2";
        case Condition::SR1: return "SR1";
        case Condition::SR2: return "SR2";
        case Condition::NONE: return "none";
    }
    return "none";
}

[[nodiscard]] inline std::optional<Condition> condition_from_name(const std::string& s) {
    for (Condition c : {Condition::G1, Condition::G2, Condition::LL1, Condition::LL2,
                        Condition::SR1, Condition::SR2, Condition::NONE}) {
        if (s == condition_name(c)) return c;
    }
    return std::nullopt;
}

struct ConditionWitness {
    std::string description;
    double value = 0.0;
};

/// Outcome of one condition checker.  `holds` is the strict verdict at the
/// stated tolerance; `margin` is the distance of the worst sample from the
/// sign threshold, and witnesses record extremal samples either way.
struct ConditionVerdict {
    Condition condition = Condition::NONE;
    bool holds = false;
    double radius_R = 0.0;
    double tolerance = 1e-9;
    double margin = 0.0;
    std::vector<ConditionWitness> witnesses;
    std::vector<std::string> notes;
};

/// Default strictness tolerance used to call a sampled sign.
inline constexpr double kSignTolerance = 1e-9;

// ---------------------------------------------------------------------------
// A priori radius
// ---------------------------------------------------------------------------

/// Terms of the a priori bound on the non-kernel part of bounded full
/// orbits.  In the orthonormal diagonal model every projector has unit
/// operator norm, so m0 = 2 * bound_m, and the embedding constant for the
/// finite-dimensional unstable part is C' = max (lambda_i + delta)^alpha
/// over idx_minus.
struct AprioriRadius {
    double m0 = 0.0;
    double c_prime = 0.0;
    double plus_part = 0.0;
    double minus_part = 0.0;
    double total = 0.0;
};

[[nodiscard]] inline AprioriRadius apriori_radius_R1(const NonlinearityModel& model,
                                                     const EigenSystem& es,
                                                     const Decomposition& d,
                                                     const ConstantsBundle& cb) {
    if (!(model.bound_m > 0.0)) {
        throw std::invalid_argument("a priori radius needs a positive bound on |f|");
    }
    AprioriRadius r;
    r.m0 = 2.0 * model.bound_m;
    r.plus_part = r.m0 * cb.M * (std::exp(-cb.c) / cb.c + 1.0 / (1.0 - cb.alpha));
    r.c_prime = 0.0;
    for (int i : d.idx_minus) {
        r.c_prime = std::max(
            r.c_prime, std::pow(es.mode_eigenvalue[static_cast<std::size_t>(i)] + cb.delta,
                                cb.alpha));
    }
    r.minus_part = d.idx_minus.empty() ? 0.0 : r.m0 * r.c_prime * cb.M / cb.c;
    r.total = r.plus_part + r.minus_part;
    return r;
}

// ---------------------------------------------------------------------------
// Landesman-Lazer
// ---------------------------------------------------------------------------

namespace detail {

/// Kernel directions with unit L2 norm.  One-dimensional kernels get
/// exactly the two signed eigenfunctions; higher-dimensional ones are
/// sampled on the coefficient sphere with a fixed stream.
inline std::vector<SpectralState> kernel_directions(const EigenSystem& es,
                                                    const Decomposition& d, int n_samples,
                                                    std::uint64_t seed) {
    std::vector<SpectralState> dirs;
    if (d.idx0.empty()) throw std::invalid_argument("empty kernel");
    if (d.dim_X0 == 1) {
        const auto i = static_cast<std::size_t>(d.idx0.front());
        auto plus = SpectralState::zeros(es.n_modes());
        plus.c[i] = 1.0;
        auto minus = SpectralState::zeros(es.n_modes());
        minus.c[i] = -1.0;
        dirs.push_back(std::move(plus));
        dirs.push_back(std::move(minus));
        return dirs;
    }
    Rng rng(seed);
    const std::vector<double> unit_weights(d.idx0.size(), 1.0);
    const int n = std::max(2, n_samples);
    for (int t = 0; t < n; ++t) {
        dirs.push_back(random_direction(rng, es.n_modes(), d.idx0, unit_weights));
    }
    return dirs;
}

}  // namespace detail

/// Boundary-integral test: for each kernel direction u, evaluate
///   I(u) = int_{u>0} f_plus u + int_{u<0} f_minus u
/// and call LL1 / LL2 when every sample is strictly positive / negative.
[[nodiscard]] inline ConditionVerdict check_landesman_lazer(const NonlinearityModel& model,
                                                            const EigenSystem& es, int k,
                                                            const QuadratureGrid& grid,
                                                            int n_sphere_samples = 32) {
    if (!model.has_limits()) {
        throw MetadataError("model '" + model.display +
                            "' carries no s -> +-infinity limits; boundary-integral test "
                            "needs them");
    }
    es.require_realization("boundary-integral evaluation");
    const auto d = decompose(es, k);
    const auto dirs = detail::kernel_directions(es, d, n_sphere_samples, 0x4c4cu);
    const SynthesisTable table(es, grid);

    ConditionVerdict v;
    v.tolerance = kSignTolerance;
    double imin = 0.0;
    double imax = 0.0;
    std::vector<double> uvals;
    for (std::size_t t = 0; t < dirs.size(); ++t) {
        table.synthesize(dirs[t], uvals);
        double integral = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double u = uvals[i];
            if (u > 0.0) {
                integral += grid.weights[i] * model.limit_plus(grid.nodes[i]) * u;
            } else if (u < 0.0) {
                integral += grid.weights[i] * model.limit_minus(grid.nodes[i]) * u;
            }
        }
        if (t == 0) {
            imin = imax = integral;
        } else {
            imin = std::min(imin, integral);
            imax = std::max(imax, integral);
        }
        v.witnesses.push_back({"kernel direction " + std::to_string(t), integral});
    }

    if (imin > v.tolerance) {
        v.condition = Condition::LL1;
        v.holds = true;
        v.margin = imin;
    } else if (imax < -v.tolerance) {
        v.condition = Condition::LL2;
        v.holds = true;
        v.margin = -imax;
    } else {
        v.condition = Condition::NONE;
        v.margin = std::min(std::abs(imin), std::abs(imax));
        if (std::max(std::abs(imin), std::abs(imax)) <= v.tolerance) {
            v.notes.push_back(
                "boundary integrals vanish at tolerance; strong-resonance candidate");
        } else {
            v.notes.push_back("boundary integrals change sign across kernel directions");
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Strong resonance
// ---------------------------------------------------------------------------

/// Integral-plus-floor test: with g(x) = lim f(x,s,y) s, call SR1 when
/// int g > 0 and f s >= h everywhere sampled, SR2 with both signs flipped.
[[nodiscard]] inline ConditionVerdict check_strong_resonance(const NonlinearityModel& model,
                                                             const EigenSystem& es,
                                                             const QuadratureGrid& grid,
                                                             const BoundSampleSpec& spec = {}) {
    ConditionVerdict v;
    v.tolerance = kSignTolerance;
    if (es.has_realization() && es.basis.length > 0.0) {
        v.notes.push_back(
            "domain is a 1-D interval; the integral criteria are usually stated for "
            "dimension >= 3, so this verdict is numerical evidence only");
    }
    if (!model.has_limit_infty()) {
        v.condition = Condition::NONE;
        v.notes.push_back("f * s admits no finite limit; strong-resonance test not applicable");
        return v;
    }
    if (!model.has_floor()) {
        throw MetadataError("model '" + model.display +
                            "' declares a limit of f * s but no integrable floor; cannot "
                            "check the one-sided inequality");
    }

    const double integral = grid.integrate(model.limit_infty);
    v.witnesses.push_back({"integral of lim f*s", integral});

    // One-sided inequality f s >= h (resp. <=) sampled over a box with tails.
    double worst_above = 0.0;  // min of f s - h
    double worst_below = 0.0;  // max of f s - h
    bool first = true;
    std::vector<double> ss;
    for (int i = 0; i < spec.n_s; ++i) {
        const double t = (spec.n_s == 1) ? 0.0 : static_cast<double>(i) / (spec.n_s - 1);
        ss.push_back(-spec.s_range + 2.0 * spec.s_range * t);
    }
    for (double tail : spec.s_tails) {
        ss.push_back(tail);
        ss.push_back(-tail);
    }
    const std::size_t stride =
        std::max<std::size_t>(1, grid.size() / static_cast<std::size_t>(spec.max_x_samples));
    for (std::size_t i = 0; i < grid.size(); i += stride) {
        const double x = grid.nodes[i];
        const double h = model.floor_h(x);
        for (double s : ss) {
            for (double y : spec.y_values) {
                const double fs = model.eval(x, s, y) * s;
                const double gap = fs - h;
                if (first) {
                    worst_above = worst_below = gap;
                    first = false;
                } else {
                    worst_above = std::min(worst_above, gap);
                    worst_below = std::max(worst_below, gap);
                }
            }
        }
    }
    v.witnesses.push_back({"min of f*s - h", worst_above});
    v.witnesses.push_back({"max of f*s - h", worst_below});

    const double floor_slack = 1e-9;
    if (integral > v.tolerance && worst_above >= -floor_slack) {
        v.condition = Condition::SR1;
        v.holds = true;
        v.margin = integral;
    } else if (integral < -v.tolerance && worst_below <= floor_slack) {
        v.condition = Condition::SR2;
        v.holds = true;
        v.margin = -integral;
    } else {
        v.condition = Condition::NONE;
        v.margin = std::abs(integral);
        if (std::abs(integral) <= v.tolerance) {
            v.notes.push_back("integral of the limit vanishes at tolerance");
        } else {
            v.notes.push_back("one-sided floor inequality fails on samples");
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Direct geometric condition
// ---------------------------------------------------------------------------

struct GSampleSpec {
    int n_ball = 64;
    int n_radii = 32;
    int n_kernel_dirs = 2;
    std::uint64_t rng_seed = 2026;
};

/// Monte-Carlo falsifier for the sign of <F(x + y), x> over kernel parts x
/// with ||x|| in [R, 10R] and y in the alpha-ball of the complement.
/// Uniformly positive samples give G1, uniformly negative G2; anything
/// else gives no verdict plus extremal witnesses.
[[nodiscard]] inline ConditionVerdict check_G_direct(const NonlinearityModel& model,
                                                     const EigenSystem& es,
                                                     const Decomposition& d,
                                                     const ConstantsBundle& cb,
                                                     const QuadratureGrid& grid,
                                                     double ball_radius_alpha,
                                                     double R_candidate,
                                                     const GSampleSpec& spec = {}) {
    if (!(R_candidate > 0.0)) throw std::invalid_argument("R_candidate must be > 0");
    if (ball_radius_alpha < 0.0) throw std::invalid_argument("ball radius must be >= 0");
    es.require_realization("direct geometric check");

    const SynthesisTable table(es, grid);
    Rng rng(spec.rng_seed);

    // Complement modes and their alpha-norm weights.
    std::vector<int> q_idx;
    q_idx.reserve(d.idx_minus.size() + d.idx_plus.size());
    q_idx.insert(q_idx.end(), d.idx_minus.begin(), d.idx_minus.end());
    q_idx.insert(q_idx.end(), d.idx_plus.begin(), d.idx_plus.end());
    std::vector<double> q_weights;
    q_weights.reserve(q_idx.size());
    for (int i : q_idx) {
        q_weights.push_back(
            std::pow(es.mode_eigenvalue[static_cast<std::size_t>(i)] + cb.delta, cb.alpha));
    }

    const auto dirs = detail::kernel_directions(es, d, spec.n_kernel_dirs, rng.raw());

    // Node-value caches: u(x_i) = y(x_i) + r * omega(x_i).
    std::vector<std::vector<double>> dir_vals(dirs.size());
    for (std::size_t t = 0; t < dirs.size(); ++t) table.synthesize(dirs[t], dir_vals[t]);

    ConditionVerdict v;
    v.tolerance = kSignTolerance;
    v.radius_R = R_candidate;
    double pmin = 0.0;
    double pmax = 0.0;
    std::string min_desc;
    std::string max_desc;
    bool first = true;

    std::vector<double> yvals;
    std::vector<double> radii;
    const int n_radii = std::max(1, spec.n_radii);
    for (int j = 0; j < n_radii; ++j) {
        const double t = (n_radii == 1) ? 0.0 : static_cast<double>(j) / (n_radii - 1);
        radii.push_back(R_candidate * (1.0 + 9.0 * t));
    }

    for (int b = 0; b < std::max(1, spec.n_ball); ++b) {
        SpectralState y(es.n_modes());
        if (!q_idx.empty() && ball_radius_alpha > 0.0) {
            y = random_ball_point(rng, es.n_modes(), q_idx, q_weights, ball_radius_alpha);
        }
        table.synthesize(y, yvals);
        for (std::size_t t = 0; t < dirs.size(); ++t) {
            for (double r : radii) {
                // pairing <F(y + r omega), r omega> via the quadrature nodes
                double pairing = 0.0;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double uval = yvals[i] + r * dir_vals[t][i];
                    const double fval = model.eval(grid.nodes[i], uval, 0.0);
                    pairing += grid.weights[i] * fval * r * dir_vals[t][i];
                }
                auto describe = [&]() {
                    return "ball sample " + std::to_string(b) + ", kernel direction " +
                           std::to_string(t) + ", r = " + std::to_string(r);
                };
                if (first || pairing < pmin) {
                    pmin = pairing;
                    min_desc = describe();
                }
                if (first || pairing > pmax) {
                    pmax = pairing;
                    max_desc = describe();
                }
                first = false;
            }
        }
    }

    v.witnesses.push_back({"min pairing: " + min_desc, pmin});
    v.witnesses.push_back({"max pairing: " + max_desc, pmax});
    if (pmin > v.tolerance) {
        v.condition = Condition::G1;
        v.holds = true;
        v.margin = pmin;
    } else if (pmax < -v.tolerance) {
        v.condition = Condition::G2;
        v.holds = true;
        v.margin = -pmax;
    } else {
        v.condition = Condition::NONE;
        v.margin = 0.0;
        v.notes.push_back("kernel pairing is not uniformly signed at this radius");
    }
    return v;
}

/// Theorem-backed lift of an integral verdict to the geometric condition:
/// LL1 and SR1 imply G1, LL2 and SR2 imply G2.  G verdicts pass through.
[[nodiscard]] inline ConditionVerdict lift_to_G(const ConditionVerdict& v) {
    ConditionVerdict out = v;
    if (!v.holds) return out;
    switch (v.condition) {
        case Condition::G1:
        case Condition::G2:
            return out;
        case Condition::LL1:
        case Condition::SR1:
            out.condition = Condition::G1;
            break;
        case Condition::LL2:
        case Condition::SR2:
            out.condition = Condition::G2;
            break;
        case Condition::NONE:
            return out;
    }
    out.notes.push_back(std::string("lifted from ") + condition_name(v.condition) +
                        " via the integral-to-geometric implication");
    return out;
}

// ---------------------------------------------------------------------------
// Isolating neighborhood
// ---------------------------------------------------------------------------

struct RadiusSearchSpec {
    double r_min = 0.25;
    double factor = 2.0;
    int n_steps = 14;
    int n_confirm_samples = 256;
    GSampleSpec sampling;
};

/// Product neighborhood N: the alpha-ball of radius R_Q in the non-kernel
/// part times the L2-ball of radius R_P in the kernel.
struct IsolatingNeighborhood {
    double R_Q = 0.0;
    double R_P = 0.0;
    AprioriRadius r1;
    ConditionVerdict verdict;  // the geometric verdict certified at R_P
};

// ---------------------------------------------------------------------------
// Isolating block verification
// ---------------------------------------------------------------------------

enum class ExitSet { FULL_BOUNDARY, EMPTY };

struct BlockWitness {
    double s = 0.0;
    double value = 0.0;
    std::string description;
};

struct BlockReport {
    bool verified = false;
    ExitSet exit_set = ExitSet::FULL_BOUNDARY;
    double min_abs_derivative = 0.0;
    long samples = 0;
    std::vector<BlockWitness> mixed_witnesses;
};

/// Homotopy parameters checked when no explicit family is given.
[[nodiscard]] inline std::vector<double> default_homotopy_family() {
    return {0.0, 0.25, 0.5, 0.75, 1.0};
}

/// Sample the kernel sphere of the neighborhood against the whole
/// interpolation family: every outward derivative must share one sign.
/// Positive derivatives mean the kernel boundary is the exit set
/// (expected under G1); negative ones mean no exit there (G2).
[[nodiscard]] inline BlockReport verify_isolating_block(
    const NonlinearityModel& model, const EigenSystem& es, const Decomposition& d,
    const ConstantsBundle& cb, const QuadratureGrid& grid, const IsolatingNeighborhood& nbhd,
    const std::vector<double>& s_values, int n_boundary_samples, std::uint64_t seed = 2026) {
    if (s_values.empty()) throw std::invalid_argument("need at least one homotopy parameter");
    if (n_boundary_samples < 1) throw std::invalid_argument("need at least one boundary sample");

    Rng rng(seed);
    std::vector<int> q_idx;
    q_idx.insert(q_idx.end(), d.idx_minus.begin(), d.idx_minus.end());
    q_idx.insert(q_idx.end(), d.idx_plus.begin(), d.idx_plus.end());
    std::vector<double> q_weights;
    for (int i : q_idx) {
        q_weights.push_back(
            std::pow(es.mode_eigenvalue[static_cast<std::size_t>(i)] + cb.delta, cb.alpha));
    }
    const std::vector<double> unit_weights(d.idx0.size(), 1.0);

    BlockReport rep;
    std::vector<BlockWitness> all;
    for (int b = 0; b < n_boundary_samples; ++b) {
        SpectralState omega(es.n_modes());
        if (d.dim_X0 == 1) {
            const auto i0 = static_cast<std::size_t>(d.idx0.front());
            omega.c[i0] = (b % 2 == 0) ? 1.0 : -1.0;
        } else {
            omega = random_direction(rng, es.n_modes(), d.idx0, unit_weights);
        }
        SpectralState u = scaled(omega, nbhd.R_P);
        if (!q_idx.empty()) {
            const auto y = random_ball_point(rng, es.n_modes(), q_idx, q_weights, nbhd.R_Q);
            axpy(1.0, y, u);
        }
        for (double s : s_values) {
            const double v = boundary_exit_derivative(model, es, d, grid, s, u, nbhd.R_P);
            all.push_back({s, v, "boundary sample " + std::to_string(b)});
        }
    }
    rep.samples = static_cast<long>(all.size());
    int n_pos = 0;
    int n_neg = 0;
    bool first = true;
    for (const auto& w : all) {
        (w.value > 0.0 ? n_pos : n_neg) += 1;
        if (first || std::abs(w.value) < rep.min_abs_derivative) {
            rep.min_abs_derivative = std::abs(w.value);
        }
        first = false;
    }
    if (n_pos > 0 && n_neg > 0) {
        // Record a few samples of the minority sign so a failed
        // verification can be inspected.
        const bool minority_positive = n_pos <= n_neg;
        for (const auto& w : all) {
            if (rep.mixed_witnesses.size() >= 8) break;
            if ((w.value > 0.0) == minority_positive) rep.mixed_witnesses.push_back(w);
        }
        rep.verified = false;
    } else if (rep.min_abs_derivative > kSignTolerance) {
        rep.verified = true;
        rep.exit_set = (n_pos > 0) ? ExitSet::FULL_BOUNDARY : ExitSet::EMPTY;
    } else {
        rep.verified = false;
    }
    return rep;
}

/// R_Q is the a priori radius plus margin 1; R_P is the smallest radius in
/// a geometric grid at which the direct check returns a uniform sign.  A
/// radius that passes the scan over [r, 10r] is accepted only after the
/// boundary shell ||P u|| = r itself survives the block verification over
/// the whole interpolation family: the scan spreads its samples across a
/// cone of radii, so a thin margin at the shell can be a sampling artifact.
[[nodiscard]] inline IsolatingNeighborhood build_isolating_neighborhood(
    const NonlinearityModel& model, const EigenSystem& es, const Decomposition& d,
    const ConstantsBundle& cb, const QuadratureGrid& grid, const RadiusSearchSpec& spec = {}) {
    IsolatingNeighborhood nbhd;
    nbhd.r1 = apriori_radius_R1(model, es, d, cb);
    nbhd.R_Q = nbhd.r1.total + 1.0;

    const auto family = default_homotopy_family();
    double r = spec.r_min;
    for (int step = 0; step < spec.n_steps; ++step, r *= spec.factor) {
        const auto scan = check_G_direct(model, es, d, cb, grid, nbhd.R_Q, r, spec.sampling);
        if (!scan.holds) continue;
        IsolatingNeighborhood candidate = nbhd;
        candidate.R_P = r;
        candidate.verdict = scan;
        const auto block = verify_isolating_block(model, es, d, cb, grid, candidate, family,
                                                  spec.n_confirm_samples,
                                                  spec.sampling.rng_seed);
        const ExitSet expected =
            scan.condition == Condition::G1 ? ExitSet::FULL_BOUNDARY : ExitSet::EMPTY;
        if (block.verified && block.exit_set == expected) return candidate;
    }
    throw ConditionNotVerified(
        "no radius in [" + std::to_string(spec.r_min) + ", " +
        std::to_string(spec.r_min * std::pow(spec.factor, spec.n_steps - 1)) +
        "] gave a uniform kernel pairing sign for '" + model.display + "'");
}

}  // namespace resonance
