#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resonance/conditions.hpp"
#include "resonance/errors.hpp"
#include "resonance/homotopy.hpp"
#include "resonance/sampling.hpp"
#include "resonance/semiflow.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

inline constexpr double kHyperbolicityTolerance = 1e-9;

/// Index of the maximal bounded invariant set under a verified geometric
/// condition: a single sphere whose dimension counts the modes at or below
/// resonance (G1) or strictly below it (G2).
[[nodiscard]] inline HomotopyType index_of_bounded_invariant_set(const Decomposition& d,
                                                                 const ConditionVerdict& v) {
    const ConditionVerdict g = lift_to_G(v);
    if (!g.holds || (g.condition != Condition::G1 && g.condition != Condition::G2)) {
        throw std::invalid_argument(
            "index formula needs a verified geometric condition (have '" +
            std::string(condition_name(v.condition)) + "', holds = " +
            (v.holds ? "true" : "false") + ")");
    }
    return HomotopyType::sphere(g.condition == Condition::G1 ? d.d_k : d.d_km1);
}

namespace detail {

/// Number of retained modes strictly below the shifted level, with
/// hyperbolicity and truncation guards.
[[nodiscard]] inline int modes_below(const EigenSystem& es, double level) {
    for (double lam : es.distinct_eigenvalues) {
        if (std::abs(level - lam) <= kHyperbolicityTolerance) {
            throw NonhyperbolicOriginError(
                "lambda + nu lies on the spectrum (distance to eigenvalue " +
                    std::to_string(lam) + " below tolerance)",
                level);
        }
    }
    if (level > es.distinct_eigenvalues.back()) {
        throw std::invalid_argument(
            "lambda + nu exceeds the largest retained eigenvalue; increase n_modes");
    }
    int count = 0;
    for (std::size_t i = 0; i < es.n_distinct(); ++i) {
        if (es.distinct_eigenvalues[i] < level) count += es.multiplicities[i];
    }
    return count;
}

}  // namespace detail

/// Index of the origin for the linearized flow u' = (lambda + nu - A) u:
/// a sphere of dimension equal to the total multiplicity below the level
/// lambda + nu (Sigma^0 when the level sits under the whole spectrum).
[[nodiscard]] inline HomotopyType index_of_origin(const EigenSystem& es, double lambda,
                                                  double nu) {
    return HomotopyType::sphere(detail::modes_below(es, lambda + nu));
}

// ---------------------------------------------------------------------------
// Connection criterion
// ---------------------------------------------------------------------------

enum class ConnectionCase { NONE, I, II, III, IV };

[[nodiscard]] constexpr const char* connection_case_name(ConnectionCase c) noexcept {
    switch (c) {
        case ConnectionCase::NONE: return "none";
        case ConnectionCase::I: return "i";
        case ConnectionCase::II: return "ii";
        case ConnectionCase::III: return "iii";
        case ConnectionCase::IV: return "iv";
    }
    return "none";
}

enum class Existence { EXISTS, INCONCLUSIVE };

/// Full audit trail of the connecting-orbit decision: which geometric
/// condition entered (and what it was lifted from), the two indices being
/// compared, the matched hypothesis case, and the verdict.
struct DecisionRecord {
    int k = 0;
    double lambda = 0.0;
    double nu = 0.0;
    Condition condition_used = Condition::NONE;
    std::string provenance;
    HomotopyType h_K;
    HomotopyType h_0;
    ConnectionCase case_id = ConnectionCase::NONE;
    Existence existence = Existence::INCONCLUSIVE;
    std::string failed_hypothesis;
};

/// Decide whether a nonzero bounded orbit with one end at the origin is
/// forced: the index of the maximal bounded invariant set must differ from
/// the index of the origin, under one of four interval hypotheses on
/// lambda + nu.
[[nodiscard]] inline DecisionRecord connecting_orbit_criterion(const EigenSystem& es, int k,
                                                               double nu,
                                                               const ConditionVerdict& verdict) {
    const auto d = decompose(es, k);
    DecisionRecord rec;
    rec.k = k;
    rec.lambda = d.lambda;
    rec.nu = nu;

    const ConditionVerdict g = lift_to_G(verdict);
    if (!g.holds || (g.condition != Condition::G1 && g.condition != Condition::G2)) {
        rec.failed_hypothesis = "no geometric condition verified";
        return rec;
    }
    rec.condition_used = g.condition;
    if (g.condition != verdict.condition) {
        rec.provenance = std::string(condition_name(verdict.condition)) + " => " +
                         condition_name(g.condition);
    } else {
        rec.provenance = condition_name(g.condition);
    }

    rec.h_K = index_of_bounded_invariant_set(d, g);
    const double level = d.lambda + nu;
    const int below = detail::modes_below(es, level);  // throws when nonhyperbolic
    rec.h_0 = HomotopyType::sphere(below);

    // Count of distinct eigenvalues under the level; the level sits in the
    // open interval between distinct eigenvalues number l and l + 1.
    int l = 0;
    for (double lam : es.distinct_eigenvalues) {
        if (lam < level) ++l;
    }

    if (g.condition == Condition::G1) {
        if (l == 0) {
            rec.case_id = ConnectionCase::II;
        } else {
            const double lambda_l = es.distinct_eigenvalues[static_cast<std::size_t>(l - 1)];
            if (lambda_l != rec.lambda) {
                rec.case_id = ConnectionCase::I;
            } else {
                rec.failed_hypothesis = "lambda_l != lambda";
            }
        }
    } else {
        if (l == 0) {
            if (rec.lambda != es.distinct_eigenvalues.front()) {
                rec.case_id = ConnectionCase::IV;
            } else {
                rec.failed_hypothesis = "lambda != lambda_1";
            }
        } else {
            // level in (lambda_l, lambda_{l+1}); the upper neighbor must
            // not be the resonant eigenvalue
            const double upper = es.distinct_eigenvalues[static_cast<std::size_t>(l)];
            if (rec.lambda != upper) {
                rec.case_id = ConnectionCase::III;
            } else {
                rec.failed_hypothesis = "lambda != lambda_{l+1}";
            }
        }
    }

    if (rec.case_id != ConnectionCase::NONE) {
        if (rec.h_K == rec.h_0) {
            // The case hypotheses force distinct indices; equality would
            // mean an internal inconsistency, so refuse to claim anything.
            rec.case_id = ConnectionCase::NONE;
            rec.failed_hypothesis = "index comparison degenerate (h_K = h_0)";
        } else {
            rec.existence = Existence::EXISTS;
        }
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Linear cross-check
// ---------------------------------------------------------------------------

struct LinearIndexReport {
    HomotopyType index;
    bool growth_consistent = false;
    int n_growing = 0;
    double min_growth_factor = 0.0;
    double max_decay_factor = 0.0;
};

/// For the pure linear flow at resonance the origin's index is a sphere of
/// dimension dim X-.  Confirm the mode-by-mode growth/decay split of the
/// shifted propagator over one horizon as a numeric cross-check.
[[nodiscard]] inline LinearIndexReport linear_index_check(const EigenSystem& es,
                                                          const Decomposition& d, double lambda,
                                                          double horizon_T = 1.0) {
    if (!(horizon_T > 0.0)) throw std::invalid_argument("horizon must be > 0");
    LinearIndexReport rep;
    rep.index = HomotopyType::sphere(d.dim_Xminus);
    rep.growth_consistent = true;
    bool first_growth = true;
    bool first_decay = true;
    for (int i : d.idx_minus) {
        const double f = std::exp((lambda - es.mode_eigenvalue[static_cast<std::size_t>(i)]) *
                                  horizon_T);
        if (f > 1.0) ++rep.n_growing;
        else rep.growth_consistent = false;
        if (first_growth || f < rep.min_growth_factor) rep.min_growth_factor = f;
        first_growth = false;
    }
    for (int i : d.idx_plus) {
        const double f = std::exp((lambda - es.mode_eigenvalue[static_cast<std::size_t>(i)]) *
                                  horizon_T);
        if (f >= 1.0) rep.growth_consistent = false;
        if (first_decay || f > rep.max_decay_factor) rep.max_decay_factor = f;
        first_decay = false;
    }
    if (rep.n_growing != d.dim_Xminus) rep.growth_consistent = false;
    return rep;
}

}  // namespace resonance
