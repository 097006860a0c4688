#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace resonance {

/// Gauss-Legendre nodes and weights on (-1, 1), computed by Newton
/// iteration on the Legendre recurrence.  Standard approach; converges to
/// machine precision in a handful of iterations for the orders used here.
inline void gauss_legendre_reference(int order, std::vector<double>& nodes,
                                     std::vector<double>& weights) {
    if (order < 1 || order > 64) throw std::invalid_argument("quadrature order must be in [1, 64]");
    nodes.assign(static_cast<std::size_t>(order), 0.0);
    weights.assign(static_cast<std::size_t>(order), 0.0);
    const double pi = 3.141592653589793238462643383279502884;
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess for the i-th positive root.
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(order) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int n = 2; n <= order; ++n) {
                const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(order) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
}

/// Composite Gauss-Legendre rule on (0, length): `panels` equal panels with
/// `order` points each.  Nodes are strictly interior and symmetric about
/// length/2, weights positive and summing to length.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double length = 0.0;
    int order = 0;
    int panels = 0;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }

    template <typename F>
    [[nodiscard]] double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

[[nodiscard]] inline QuadratureGrid make_composite_gauss(double length, int order, int panels) {
    if (!(length > 0.0)) throw std::invalid_argument("length must be > 0");
    if (panels < 1) throw std::invalid_argument("panels must be >= 1");
    std::vector<double> ref_x;
    std::vector<double> ref_w;
    gauss_legendre_reference(order, ref_x, ref_w);

    QuadratureGrid g;
    g.length = length;
    g.order = order;
    g.panels = panels;
    g.nodes.reserve(static_cast<std::size_t>(order * panels));
    g.weights.reserve(static_cast<std::size_t>(order * panels));
    const double h = length / static_cast<double>(panels);
    for (int p = 0; p < panels; ++p) {
        const double a = h * static_cast<double>(p);
        const double mid = a + 0.5 * h;
        for (int i = 0; i < order; ++i) {
            g.nodes.push_back(mid + 0.5 * h * ref_x[static_cast<std::size_t>(i)]);
            g.weights.push_back(0.5 * h * ref_w[static_cast<std::size_t>(i)]);
        }
    }
    return g;
}

/// Default rule used by the toolkit: resolves products of the first ~64
/// sine modes on (0, L) to around 1e-12.
[[nodiscard]] inline QuadratureGrid default_grid(double length) {
    return make_composite_gauss(length, 10, 64);
}

}  // namespace resonance
