#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "resonance/errors.hpp"

namespace resonance {

/// How eigenfunctions are realized.  ANALYTIC_SINE carries the interval
/// length and gives phi_j(x) = sqrt(2/L) sin(j pi x / L); ABSTRACT systems
/// have no pointwise realization and support coefficient-space work only.
enum class BasisKind { ANALYTIC_SINE, ABSTRACT };

struct Basis {
    BasisKind kind = BasisKind::ABSTRACT;
    double length = 0.0;  // meaningful for ANALYTIC_SINE only
};

/// Diagonalized model of a sectorial operator A on a separable Hilbert
/// space: the retained modes, their eigenvalues in nondecreasing order, and
/// the distinct-eigenvalue bookkeeping used for spectral decompositions.
struct EigenSystem {
    std::vector<double> distinct_eigenvalues;  // strictly increasing
    std::vector<int> multiplicities;           // same length, all >= 1
    std::vector<double> mode_eigenvalue;       // flat, length n_modes, nondecreasing
    std::vector<int> mode_function_id;         // sine: frequency j of phi_j; abstract: ordinal
    Basis basis;

    [[nodiscard]] std::size_t n_modes() const noexcept { return mode_eigenvalue.size(); }
    [[nodiscard]] std::size_t n_distinct() const noexcept { return distinct_eigenvalues.size(); }

    [[nodiscard]] bool has_realization() const noexcept {
        return basis.kind == BasisKind::ANALYTIC_SINE;
    }

    /// Pointwise eigenfunction value phi_j(x).  The id j is 1-based.
    [[nodiscard]] double eigenfunction(int id, double x) const {
        require_realization("eigenfunction evaluation");
        const double L = basis.length;
        return std::sqrt(2.0 / L) * std::sin(static_cast<double>(id) * pi() * x / L);
    }

    /// Pointwise derivative phi_j'(x).
    [[nodiscard]] double eigenfunction_derivative(int id, double x) const {
        require_realization("eigenfunction derivative evaluation");
        const double L = basis.length;
        const double w = static_cast<double>(id) * pi() / L;
        return std::sqrt(2.0 / L) * w * std::cos(w * x);
    }

    void require_realization(const std::string& op) const {
        if (!has_realization()) {
            throw UnsupportedBasisError(op + " requires an analytic basis realization");
        }
    }

    static constexpr double pi() noexcept { return 3.141592653589793238462643383279502884; }
};

/// Coefficient vector of a state in the retained eigenbasis.  The L2 inner
/// product of states is the Euclidean product of their coefficients.
struct SpectralState {
    std::vector<double> c;

    SpectralState() = default;
    explicit SpectralState(std::size_t n) : c(n, 0.0) {}
    explicit SpectralState(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    [[nodiscard]] std::size_t size() const noexcept { return c.size(); }
    double& operator[](std::size_t i) noexcept { return c[i]; }
    double operator[](std::size_t i) const noexcept { return c[i]; }

    static SpectralState zeros(std::size_t n) { return SpectralState(n); }

    static SpectralState unit(std::size_t n, std::size_t mode) {
        SpectralState u(n);
        u.c.at(mode) = 1.0;
        return u;
    }
};

[[nodiscard]] inline double dot(const SpectralState& a, const SpectralState& b) {
    if (a.size() != b.size()) throw std::invalid_argument("state dimension mismatch in dot");
    return std::inner_product(a.c.begin(), a.c.end(), b.c.begin(), 0.0);
}

[[nodiscard]] inline double l2_norm(const SpectralState& a) {
    double s = 0.0;
    for (double v : a.c) s += v * v;
    return std::sqrt(s);
}

inline SpectralState& axpy(double alpha, const SpectralState& x, SpectralState& y) {
    if (x.size() != y.size()) throw std::invalid_argument("state dimension mismatch in axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y.c[i] += alpha * x.c[i];
    return y;
}

[[nodiscard]] inline SpectralState scaled(const SpectralState& x, double alpha) {
    SpectralState y = x;
    for (double& v : y.c) v *= alpha;
    return y;
}

[[nodiscard]] inline SpectralState sum(const SpectralState& a, const SpectralState& b) {
    SpectralState y = a;
    axpy(1.0, b, y);
    return y;
}

[[nodiscard]] inline SpectralState difference(const SpectralState& a, const SpectralState& b) {
    SpectralState y = a;
    axpy(-1.0, b, y);
    return y;
}

/// Splitting of the retained modes around the resonant eigenvalue
/// lambda_k: idx_minus below it, idx0 at it, idx_plus above it.  d_k and
/// d_km1 are the cumulative multiplicity counts up to (and excluding) the
/// resonant eigenvalue; spectral_gap_c is the distance from lambda_k to its
/// spectral neighbors.
struct Decomposition {
    int k = 0;                       // 1-based position among distinct eigenvalues
    double lambda = 0.0;             // the distinct eigenvalue at position k
    std::vector<int> idx_minus;      // flat mode indices with eigenvalue < lambda
    std::vector<int> idx0;           // flat mode indices with eigenvalue == lambda
    std::vector<int> idx_plus;       // flat mode indices with eigenvalue > lambda
    int dim_X0 = 0;
    int dim_Xminus = 0;
    int d_k = 0;
    int d_km1 = 0;
    double spectral_gap_c = 0.0;
};

enum class Part { P, QPlus, QMinus, Q };

/// Analysis constants: the fractional power alpha in (3/4, 1), the shift
/// delta making A + delta positive, the semigroup constant M and the decay
/// rate c.  In the diagonal orthonormal model M = 1 and c is the spectral
/// gap; both stay overridable for sensitivity studies.
struct ConstantsBundle {
    double alpha = 0.8;
    double delta = 0.0;
    double M = 1.0;
    double c = 1.0;

    ConstantsBundle(double alpha_, double delta_, double M_, double c_)
        : alpha(alpha_), delta(delta_), M(M_), c(c_) {
        if (!(alpha > 0.75 && alpha < 1.0)) {
            throw std::invalid_argument("alpha must lie in (3/4, 1)");
        }
        if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
        if (M < 1.0) throw std::invalid_argument("M must be >= 1");
        if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
    }

    static ConstantsBundle for_model(const EigenSystem& es, const Decomposition& d,
                                     double alpha, double delta) {
        if (es.distinct_eigenvalues.empty()) {
            throw std::invalid_argument("empty eigensystem");
        }
        if (es.distinct_eigenvalues.front() + delta <= 0.0) {
            throw std::invalid_argument("delta too small: lambda_1 + delta must be positive");
        }
        return ConstantsBundle(alpha, delta, 1.0, d.spectral_gap_c);
    }
};

namespace detail {

inline void finalize_distinct(EigenSystem& es) {
    es.distinct_eigenvalues.clear();
    es.multiplicities.clear();
    for (double lam : es.mode_eigenvalue) {
        if (es.distinct_eigenvalues.empty() || lam > es.distinct_eigenvalues.back()) {
            es.distinct_eigenvalues.push_back(lam);
            es.multiplicities.push_back(1);
        } else {
            es.multiplicities.back() += 1;
        }
    }
}

}  // namespace detail

/// Dirichlet Laplacian on (0, length), first n_modes sine modes.  The
/// eigenvalues (j pi / length)^2 are simple and strictly increasing.
[[nodiscard]] inline EigenSystem build_laplacian_1d(int n_modes, double length) {
    if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
    if (!(length > 0.0)) throw std::invalid_argument("length must be > 0");
    EigenSystem es;
    es.basis = Basis{BasisKind::ANALYTIC_SINE, length};
    es.mode_eigenvalue.reserve(static_cast<std::size_t>(n_modes));
    es.mode_function_id.reserve(static_cast<std::size_t>(n_modes));
    for (int j = 1; j <= n_modes; ++j) {
        const double w = static_cast<double>(j) * EigenSystem::pi() / length;
        es.mode_eigenvalue.push_back(w * w);
        es.mode_function_id.push_back(j);
    }
    detail::finalize_distinct(es);
    return es;
}

/// Abstract diagonal model from a distinct spectrum with multiplicities.
/// Useful for exercising decompositions that the 1-D Laplacian cannot
/// produce (repeated eigenvalues).
[[nodiscard]] inline EigenSystem make_abstract_system(std::vector<double> distinct,
                                                      std::vector<int> mult) {
    if (distinct.empty() || distinct.size() != mult.size()) {
        throw std::invalid_argument("distinct eigenvalue and multiplicity lists must match");
    }
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        if (!(distinct[i] < distinct[i + 1])) {
            throw std::invalid_argument("distinct eigenvalues must be strictly increasing");
        }
    }
    EigenSystem es;
    es.basis = Basis{BasisKind::ABSTRACT, 0.0};
    int id = 1;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        if (mult[i] < 1) throw std::invalid_argument("multiplicities must be >= 1");
        for (int r = 0; r < mult[i]; ++r) {
            es.mode_eigenvalue.push_back(distinct[i]);
            es.mode_function_id.push_back(id++);
        }
    }
    detail::finalize_distinct(es);
    return es;
}

/// Split the modes around the k-th distinct eigenvalue (1-based).
[[nodiscard]] inline Decomposition decompose(const EigenSystem& es, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > es.n_distinct()) {
        throw std::invalid_argument("k out of range: need 1 <= k <= " +
                                    std::to_string(es.n_distinct()));
    }
    Decomposition d;
    d.k = k;
    d.lambda = es.distinct_eigenvalues[static_cast<std::size_t>(k - 1)];
    for (std::size_t i = 0; i < es.n_modes(); ++i) {
        const double lam = es.mode_eigenvalue[i];
        if (lam < d.lambda) {
            d.idx_minus.push_back(static_cast<int>(i));
        } else if (lam > d.lambda) {
            d.idx_plus.push_back(static_cast<int>(i));
        } else {
            d.idx0.push_back(static_cast<int>(i));
        }
    }
    d.dim_X0 = static_cast<int>(d.idx0.size());
    d.dim_Xminus = static_cast<int>(d.idx_minus.size());
    d.d_km1 = d.dim_Xminus;
    d.d_k = d.d_km1 + d.dim_X0;

    double gap = std::numeric_limits<double>::infinity();
    const auto ku = static_cast<std::size_t>(k);
    if (ku >= 2) {
        gap = std::min(gap, d.lambda - es.distinct_eigenvalues[ku - 2]);
    }
    if (ku < es.n_distinct()) {
        gap = std::min(gap, es.distinct_eigenvalues[ku] - d.lambda);
    }
    d.spectral_gap_c = gap;
    return d;
}

/// Orthogonal projection onto one summand of X = X+ (+) X- (+) X0.
[[nodiscard]] inline SpectralState project(const SpectralState& u, const Decomposition& d,
                                           Part part) {
    SpectralState out(u.size());
    auto copy_indices = [&](const std::vector<int>& idx) {
        for (int i : idx) {
            const auto iu = static_cast<std::size_t>(i);
            if (iu >= u.size()) throw std::invalid_argument("state shorter than decomposition");
            out.c[iu] = u.c[iu];
        }
    };
    switch (part) {
        case Part::P: copy_indices(d.idx0); break;
        case Part::QPlus: copy_indices(d.idx_plus); break;
        case Part::QMinus: copy_indices(d.idx_minus); break;
        case Part::Q:
            copy_indices(d.idx_plus);
            copy_indices(d.idx_minus);
            break;
    }
    return out;
}

/// Norm of the fractional power space X^alpha: the ell^2 norm weighted by
/// (lambda_i + delta)^alpha per mode.  Reduces to the plain ell^2 norm as
/// alpha -> 0 when delta = 0.
[[nodiscard]] inline double fractional_norm(const SpectralState& u, const EigenSystem& es,
                                            double alpha, double delta) {
    if (u.size() != es.n_modes()) {
        throw std::invalid_argument("state length does not match eigensystem");
    }
    if (es.distinct_eigenvalues.empty() || es.distinct_eigenvalues.front() + delta <= 0.0) {
        throw std::invalid_argument("invalid operator shift: lambda_1 + delta must be positive");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double w = std::pow(es.mode_eigenvalue[i] + delta, alpha);
        s += w * w * u.c[i] * u.c[i];
    }
    return std::sqrt(s);
}

[[nodiscard]] inline double fractional_norm(const SpectralState& u, const EigenSystem& es,
                                            const ConstantsBundle& cb) {
    return fractional_norm(u, es, cb.alpha, cb.delta);
}

/// Apply the lambda-shifted semigroup e^{lambda t} S_A(t): each coefficient
/// is scaled by exp((lambda - lambda_i) t).  Negative t is the group
/// extension and is well posed only when the state has no mass on modes
/// with lambda_i > lambda.
[[nodiscard]] inline SpectralState shifted_semigroup_apply(const SpectralState& u,
                                                           const EigenSystem& es,
                                                           double lambda, double t) {
    if (u.size() != es.n_modes()) {
        throw std::invalid_argument("state length does not match eigensystem");
    }
    if (t < 0.0) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (es.mode_eigenvalue[i] > lambda && u.c[i] != 0.0) {
                throw BackwardFlowError(
                    "backward evolution is ill posed on contracting modes (mode " +
                    std::to_string(i) + ", eigenvalue " +
                    std::to_string(es.mode_eigenvalue[i]) + ")");
            }
        }
    }
    SpectralState out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.c[i] = u.c[i] * std::exp((lambda - es.mode_eigenvalue[i]) * t);
    }
    return out;
}

}  // namespace resonance
