#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "resonance/errors.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

/// Substitution operator data: the pointwise law f(x, s, y) where s is the
/// state value and y its spatial derivative, the uniform bound on |f|, and
/// whatever asymptotic metadata the law admits.  Metadata fields are empty
/// when the corresponding limit does not exist.
struct NonlinearityModel {
    std::string name;     // registry key, "table", or "custom"
    std::string display;  // human-readable, with parameters

    std::function<double(double, double, double)> eval;
    double bound_m = 0.0;
    std::optional<double> lipschitz_L;
    std::optional<double> nu;  // D_s f(x, 0, 0) when x-independent

    std::function<double(double)> limit_plus;   // f(x, s, y) as s -> +inf
    std::function<double(double)> limit_minus;  // f(x, s, y) as s -> -inf
    std::function<double(double)> limit_infty;  // f(x, s, y) * s as |s| -> inf
    std::function<double(double)> floor_h;      // pointwise floor/ceiling for f * s

    bool uses_gradient = false;

    [[nodiscard]] bool has_limits() const {
        return static_cast<bool>(limit_plus) && static_cast<bool>(limit_minus);
    }
    [[nodiscard]] bool has_limit_infty() const { return static_cast<bool>(limit_infty); }
    [[nodiscard]] bool has_floor() const { return static_cast<bool>(floor_h); }

    [[nodiscard]] double operator()(double x, double s, double y) const { return eval(x, s, y); }
};

// ---------------------------------------------------------------------------
// Built-in registry
// ---------------------------------------------------------------------------

struct BuiltinInfo {
    std::string name;
    std::string signature;
    std::string summary;
};

[[nodiscard]] inline std::vector<BuiltinInfo> builtin_catalog() {
    return {
        {"arctan", "arctan", "f(s) = atan(s); bounded, limits +-pi/2"},
        {"arctan_minus_gauss", "arctan_minus_gauss(a,b)",
         "f(s) = a*atan(s) - b*s*exp(-s^2); slope at zero a - b, limits +-a*pi/2"},
        {"strong_res", "strong_res(a)",
         "f(s) = a*s/(1+s^2); limits 0, f*s -> a (strong resonance)"},
        {"const_kernel", "const_kernel(k)",
         "f(x) = phi_k(x); state-independent forcing along the k-th mode"},
        {"linear", "linear(a)",
         "f(s) = a*s; unbounded, kept to demonstrate boundedness-check failures"},
    };
}

namespace detail {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
// max over s of |s * exp(-s^2)|, attained at s = 1/sqrt(2)
inline constexpr double kGaussPeak = 0.42888194248035344;

inline void require_params(const std::string& name, const std::vector<double>& params,
                           std::size_t expected) {
    if (params.size() != expected) {
        throw std::invalid_argument("nonlinearity '" + name + "' expects " +
                                    std::to_string(expected) + " parameter(s), got " +
                                    std::to_string(params.size()));
    }
}

inline std::string format_params(const std::string& name, const std::vector<double>& params) {
    if (params.empty()) return name;
    std::string s = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i > 0) s += ",";
        std::ostringstream os;
        os << params[i];
        s += os.str();
    }
    return s + ")";
}

}  // namespace detail

/// Instantiate a registry model.  The interval length is needed by laws
/// with explicit x-dependence (const_kernel).
[[nodiscard]] inline NonlinearityModel make_builtin(const std::string& name,
                                                    const std::vector<double>& params,
                                                    double length) {
    NonlinearityModel m;
    m.name = name;
    m.display = detail::format_params(name, params);

    if (name == "arctan") {
        detail::require_params(name, params, 0);
        m.eval = [](double, double s, double) { return std::atan(s); };
        m.bound_m = detail::kPi / 2.0;
        m.lipschitz_L = 1.0;
        m.nu = 1.0;
        m.limit_plus = [](double) { return detail::kPi / 2.0; };
        m.limit_minus = [](double) { return -detail::kPi / 2.0; };
        return m;
    }
    if (name == "arctan_minus_gauss") {
        detail::require_params(name, params, 2);
        const double a = params[0];
        const double b = params[1];
        m.eval = [a, b](double, double s, double) {
            return a * std::atan(s) - b * s * std::exp(-s * s);
        };
        m.bound_m = std::abs(a) * detail::kPi / 2.0 + std::abs(b) * detail::kGaussPeak;
        m.lipschitz_L = std::abs(a) + std::abs(b);
        m.nu = a - b;
        m.limit_plus = [a](double) { return a * detail::kPi / 2.0; };
        m.limit_minus = [a](double) { return -a * detail::kPi / 2.0; };
        return m;
    }
    if (name == "strong_res") {
        detail::require_params(name, params, 1);
        const double a = params[0];
        m.eval = [a](double, double s, double) { return a * s / (1.0 + s * s); };
        m.bound_m = std::abs(a) / 2.0;
        m.lipschitz_L = std::abs(a);
        m.nu = a;
        m.limit_plus = [](double) { return 0.0; };
        m.limit_minus = [](double) { return 0.0; };
        m.limit_infty = [a](double) { return a; };
        m.floor_h = [](double) { return 0.0; };
        return m;
    }
    if (name == "const_kernel") {
        detail::require_params(name, params, 1);
        const double kd = params[0];
        const int k = static_cast<int>(kd);
        if (static_cast<double>(k) != kd || k < 1) {
            throw std::invalid_argument("const_kernel expects a positive integer mode number");
        }
        if (!(length > 0.0)) {
            throw std::invalid_argument("const_kernel requires a positive interval length");
        }
        const double amp = std::sqrt(2.0 / length);
        const double w = static_cast<double>(k) * detail::kPi / length;
        m.eval = [amp, w](double x, double, double) { return amp * std::sin(w * x); };
        m.bound_m = amp;
        m.lipschitz_L = 0.0;
        m.limit_plus = [amp, w](double x) { return amp * std::sin(w * x); };
        m.limit_minus = [amp, w](double x) { return amp * std::sin(w * x); };
        return m;
    }
    if (name == "linear") {
        detail::require_params(name, params, 1);
        const double a = params[0];
        m.eval = [a](double, double s, double) { return a * s; };
        // Declared bound is |a|; the law is unbounded, so the boundedness
        // check is expected to reject this model.
        m.bound_m = std::abs(a);
        m.lipschitz_L = std::abs(a);
        m.nu = a;
        return m;
    }
    throw std::invalid_argument("unknown nonlinearity '" + name + "'");
}

// ---------------------------------------------------------------------------
// Tabulated laws
// ---------------------------------------------------------------------------

/// Bilinear interpolant on a tensor grid of (x, s) with the derivative
/// argument ignored.  Outside the table the nearest edge value is used.
class TableLaw {
public:
    TableLaw(std::vector<double> xs, std::vector<double> ss, std::vector<double> values)
        : xs_(std::move(xs)), ss_(std::move(ss)), values_(std::move(values)) {
        if (xs_.size() < 2 || ss_.size() < 2) {
            throw std::invalid_argument("table needs at least a 2x2 grid");
        }
        if (values_.size() != xs_.size() * ss_.size()) {
            throw std::invalid_argument("table is not a full tensor grid");
        }
    }

    [[nodiscard]] double operator()(double x, double s) const {
        const auto [ix, tx] = bracket(xs_, x);
        const auto [is, ts] = bracket(ss_, s);
        const double v00 = at(ix, is);
        const double v10 = at(ix + 1, is);
        const double v01 = at(ix, is + 1);
        const double v11 = at(ix + 1, is + 1);
        return (1.0 - tx) * ((1.0 - ts) * v00 + ts * v01) + tx * ((1.0 - ts) * v10 + ts * v11);
    }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    [[nodiscard]] double at(std::size_t ix, std::size_t is) const {
        return values_[ix * ss_.size() + is];
    }

    static std::pair<std::size_t, double> bracket(const std::vector<double>& axis, double v) {
        if (v <= axis.front()) return {0, 0.0};
        if (v >= axis.back()) return {axis.size() - 2, 1.0};
        const auto it = std::upper_bound(axis.begin(), axis.end(), v);
        const auto hi = static_cast<std::size_t>(it - axis.begin());
        const std::size_t lo = hi - 1;
        return {lo, (v - axis[lo]) / (axis[hi] - axis[lo])};
    }

    std::vector<double> xs_;
    std::vector<double> ss_;
    std::vector<double> values_;
};

/// Read a CSV of rows "x,s,f" (header line optional, '#' comments allowed)
/// covering a full tensor grid, and wrap it as a model.  The declared bound
/// is the largest |f| in the table.
[[nodiscard]] inline NonlinearityModel load_table_model(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::invalid_argument("cannot open table file '" + csv_path + "'");

    std::vector<double> xs;
    std::vector<double> ss;
    std::vector<std::tuple<double, double, double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string cell;
        double vals[3];
        int got = 0;
        while (got < 3 && std::getline(fields, cell, ',')) {
            try {
                std::size_t used = 0;
                vals[got] = std::stod(cell, &used);
            } catch (const std::exception&) {
                if (lineno == 1) { got = -1; break; }  // header line
                throw std::invalid_argument("table '" + csv_path + "': bad number at line " +
                                            std::to_string(lineno));
            }
            ++got;
        }
        if (got == -1) continue;
        if (got != 3) {
            throw std::invalid_argument("table '" + csv_path + "': expected x,s,f at line " +
                                        std::to_string(lineno));
        }
        rows.emplace_back(vals[0], vals[1], vals[2]);
        xs.push_back(vals[0]);
        ss.push_back(vals[1]);
    }
    auto dedupe = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedupe(xs);
    dedupe(ss);
    if (rows.size() != xs.size() * ss.size()) {
        throw std::invalid_argument("table '" + csv_path + "' does not cover a full (x, s) grid");
    }
    std::vector<double> values(rows.size(), 0.0);
    for (const auto& [x, s, f] : rows) {
        const auto ix = static_cast<std::size_t>(
            std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
        const auto is = static_cast<std::size_t>(
            std::lower_bound(ss.begin(), ss.end(), s) - ss.begin());
        values[ix * ss.size() + is] = f;
    }
    TableLaw law(xs, ss, std::move(values));

    NonlinearityModel m;
    m.name = "table";
    m.display = "table:" + csv_path;
    m.bound_m = law.max_abs();
    m.eval = [law = std::move(law)](double x, double s, double) { return law(x, s); };
    return m;
}

// ---------------------------------------------------------------------------
// Niemytzki evaluation
// ---------------------------------------------------------------------------

/// Eigenfunction values (and derivatives) tabulated at the quadrature
/// nodes.  Built once per (eigensystem, grid) pair and reused by every hot
/// loop; layout is node-major.
struct SynthesisTable {
    std::size_t n_nodes = 0;
    std::size_t n_modes = 0;
    std::vector<double> phi;        // phi[node * n_modes + mode]
    std::vector<double> phi_prime;  // same layout

    SynthesisTable(const EigenSystem& es, const QuadratureGrid& grid) {
        es.require_realization("Niemytzki evaluation");
        n_nodes = grid.size();
        n_modes = es.n_modes();
        phi.resize(n_nodes * n_modes);
        phi_prime.resize(n_nodes * n_modes);
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const double x = grid.nodes[i];
            for (std::size_t j = 0; j < n_modes; ++j) {
                const int id = es.mode_function_id[j];
                phi[i * n_modes + j] = es.eigenfunction(id, x);
                phi_prime[i * n_modes + j] = es.eigenfunction_derivative(id, x);
            }
        }
    }

    /// u(x_i) for every node.
    void synthesize(const SpectralState& u, std::vector<double>& out) const {
        out.assign(n_nodes, 0.0);
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const double* row = phi.data() + i * n_modes;
            double s = 0.0;
            for (std::size_t j = 0; j < n_modes; ++j) s += row[j] * u.c[j];
            out[i] = s;
        }
    }

    /// u'(x_i) for every node.
    void synthesize_derivative(const SpectralState& u, std::vector<double>& out) const {
        out.assign(n_nodes, 0.0);
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const double* row = phi_prime.data() + i * n_modes;
            double s = 0.0;
            for (std::size_t j = 0; j < n_modes; ++j) s += row[j] * u.c[j];
            out[i] = s;
        }
    }
};

/// Pointwise values f(x_i, u(x_i), u'(x_i)) at the quadrature nodes.
inline void niemytzki_values(const NonlinearityModel& model, const SynthesisTable& table,
                             const QuadratureGrid& grid, const SpectralState& u,
                             std::vector<double>& out) {
    thread_local std::vector<double> uvals;
    thread_local std::vector<double> dvals;
    table.synthesize(u, uvals);
    if (model.uses_gradient) {
        table.synthesize_derivative(u, dvals);
    } else {
        dvals.assign(table.n_nodes, 0.0);
    }
    out.resize(table.n_nodes);
    for (std::size_t i = 0; i < table.n_nodes; ++i) {
        out[i] = model.eval(grid.nodes[i], uvals[i], dvals[i]);
    }
}

/// Galerkin coefficients of x -> f(x, u(x), u'(x)).
[[nodiscard]] inline SpectralState apply_niemytzki(const NonlinearityModel& model,
                                                   const SynthesisTable& table,
                                                   const QuadratureGrid& grid,
                                                   const SpectralState& u) {
    if (u.size() != table.n_modes) {
        throw std::invalid_argument("state length does not match eigensystem");
    }
    thread_local std::vector<double> fvals;
    niemytzki_values(model, table, grid, u, fvals);
    SpectralState out(table.n_modes);
    for (std::size_t i = 0; i < table.n_nodes; ++i) {
        const double wf = grid.weights[i] * fvals[i];
        const double* row = table.phi.data() + i * table.n_modes;
        for (std::size_t j = 0; j < table.n_modes; ++j) out.c[j] += wf * row[j];
    }
    return out;
}

/// Convenience overload that tabulates eigenfunctions on the fly.
[[nodiscard]] inline SpectralState apply_niemytzki(const NonlinearityModel& model,
                                                   const EigenSystem& es,
                                                   const QuadratureGrid& grid,
                                                   const SpectralState& u) {
    SynthesisTable table(es, grid);
    return apply_niemytzki(model, table, grid, u);
}

// ---------------------------------------------------------------------------
// Hypothesis checks
// ---------------------------------------------------------------------------

struct BoundSampleSpec {
    double s_range = 8.0;
    int n_s = 81;
    std::vector<double> s_tails = {1e2, 1e3, 1e4, 1e6};
    std::vector<double> y_values = {-4.0, -1.0, 0.0, 1.0, 4.0};
    int max_x_samples = 48;
};

struct BoundReport {
    bool holds = false;
    double declared_bound = 0.0;
    double max_abs = 0.0;
    double witness_x = 0.0;
    double witness_s = 0.0;
    double witness_y = 0.0;
    long samples = 0;
};

/// Spot check |f| <= bound_m over a box of (x, s, y) samples including
/// heavy tails in s.  Report-only; never throws on failure.
[[nodiscard]] inline BoundReport verify_bound(const NonlinearityModel& model,
                                              const QuadratureGrid& grid,
                                              const BoundSampleSpec& spec = {}) {
    BoundReport rep;
    rep.declared_bound = model.bound_m;

    std::vector<double> xs;
    const std::size_t stride =
        std::max<std::size_t>(1, grid.size() / static_cast<std::size_t>(spec.max_x_samples));
    for (std::size_t i = 0; i < grid.size(); i += stride) xs.push_back(grid.nodes[i]);

    std::vector<double> ss;
    for (int i = 0; i < spec.n_s; ++i) {
        const double t = (spec.n_s == 1) ? 0.0 : static_cast<double>(i) / (spec.n_s - 1);
        ss.push_back(-spec.s_range + 2.0 * spec.s_range * t);
    }
    for (double tail : spec.s_tails) {
        ss.push_back(tail);
        ss.push_back(-tail);
    }

    for (double x : xs) {
        for (double s : ss) {
            for (double y : spec.y_values) {
                const double v = std::abs(model.eval(x, s, y));
                ++rep.samples;
                if (v > rep.max_abs) {
                    rep.max_abs = v;
                    rep.witness_x = x;
                    rep.witness_s = s;
                    rep.witness_y = y;
                }
            }
        }
    }
    rep.holds = rep.max_abs <= model.bound_m + 1e-9;
    return rep;
}

struct LinearizationOptions {
    double fd_step = 1e-5;
    double tolerance = 1e-4;
    int max_x_samples = 64;
};

struct LinearizationReport {
    double nu = 0.0;
    double max_abs_f0 = 0.0;
    double max_abs_dy = 0.0;
    double slope_spread = 0.0;
    int samples = 0;
};

/// Estimate nu = D_s f(x, 0, 0) by central differences and verify the
/// linearization hypotheses: f(x,0,0) = 0, D_y f(x,0,0) = 0, and slope
/// independent of x.  Throws HypothesisViolation with a witness otherwise.
[[nodiscard]] inline LinearizationReport estimate_linearization(
    const NonlinearityModel& model, const QuadratureGrid& grid,
    const LinearizationOptions& opt = {}) {
    const double h = opt.fd_step;
    std::vector<double> xs;
    const std::size_t stride =
        std::max<std::size_t>(1, grid.size() / static_cast<std::size_t>(opt.max_x_samples));
    for (std::size_t i = 0; i < grid.size(); i += stride) xs.push_back(grid.nodes[i]);

    LinearizationReport rep;
    double slope_min = 0.0;
    double slope_max = 0.0;
    double slope_sum = 0.0;
    for (std::size_t n = 0; n < xs.size(); ++n) {
        const double x = xs[n];
        const double f0 = model.eval(x, 0.0, 0.0);
        if (std::abs(f0) > opt.tolerance) {
            throw HypothesisViolation("f(x,0,0) = 0",
                                      "nonzero value of f at the zero state (x = " +
                                          std::to_string(x) + ")",
                                      x, f0);
        }
        rep.max_abs_f0 = std::max(rep.max_abs_f0, std::abs(f0));

        const double dy = (model.eval(x, 0.0, h) - model.eval(x, 0.0, -h)) / (2.0 * h);
        if (std::abs(dy) > opt.tolerance) {
            throw HypothesisViolation("D_y f(x,0,0) = 0",
                                      "gradient dependence at the zero state (x = " +
                                          std::to_string(x) + ")",
                                      x, dy);
        }
        rep.max_abs_dy = std::max(rep.max_abs_dy, std::abs(dy));

        const double ds = (model.eval(x, h, 0.0) - model.eval(x, -h, 0.0)) / (2.0 * h);
        if (n == 0) {
            slope_min = slope_max = ds;
        } else {
            slope_min = std::min(slope_min, ds);
            slope_max = std::max(slope_max, ds);
        }
        if (slope_max - slope_min > opt.tolerance) {
            throw HypothesisViolation("D_s f(x,0,0) constant in x",
                                      "slope at zero varies across the domain (x = " +
                                          std::to_string(x) + ")",
                                      x, ds);
        }
        slope_sum += ds;
        ++rep.samples;
    }
    rep.nu = slope_sum / static_cast<double>(rep.samples);
    rep.slope_spread = slope_max - slope_min;
    return rep;
}

}  // namespace resonance
