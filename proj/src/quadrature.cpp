#include "rigidflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "rigidflow/core.hpp"

namespace rigidflow {

QuadRule1D gauss_legendre(int n) {
    if (n < 1) throw InputError("gauss_legendre: n must be >= 1");
    QuadRule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev initial guess. Symmetric, so
    // only the lower half is computed.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

QuadRule1D gauss_legendre(int n, double a, double b) {
    QuadRule1D base = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        base.nodes[i] = mid + half * base.nodes[i];
        base.weights[i] *= half;
    }
    return base;
}

QuadRule1D composite_gauss(int n, int panels, double a, double b) {
    if (panels < 1) throw InputError("composite_gauss: panels must be >= 1");
    QuadRule1D base = gauss_legendre(n);
    QuadRule1D rule;
    rule.nodes.reserve(static_cast<std::size_t>(n) * panels);
    rule.weights.reserve(static_cast<std::size_t>(n) * panels);
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h, half = 0.5 * h;
        for (int i = 0; i < n; ++i) {
            rule.nodes.push_back(mid + half * base.nodes[i]);
            rule.weights.push_back(half * base.weights[i]);
        }
    }
    return rule;
}

QuadRule1D periodic_trapezoid(int n, double period) {
    if (n < 1) throw InputError("periodic_trapezoid: n must be >= 1");
    QuadRule1D rule;
    rule.nodes.resize(n);
    rule.weights.assign(n, period / n);
    for (int i = 0; i < n; ++i) rule.nodes[i] = period * i / n;
    return rule;
}

}  // namespace rigidflow
