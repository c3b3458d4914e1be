#pragma once

#include <vector>

namespace rigidflow {

/// One-dimensional quadrature rule on a caller-chosen interval.
struct QuadRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss–Legendre rule with n points on [-1, 1].
QuadRule1D gauss_legendre(int n);

/// Gauss–Legendre rule mapped to [a, b].
QuadRule1D gauss_legendre(int n, double a, double b);

/// Composite rule: `panels` equal panels over [a, b], n-point Gauss each.
QuadRule1D composite_gauss(int n, int panels, double a, double b);

/// Periodic trapezoid rule on [0, period): n equispaced nodes, weight period/n.
/// Spectrally accurate for smooth periodic integrands.
QuadRule1D periodic_trapezoid(int n, double period);

}  // namespace rigidflow
