#pragma once

#include <cmath>

#include "rigidflow/core.hpp"

namespace rigidflow {

/// Barotropic gamma-law p = a rho^gamma with its inverse and the pressure
/// potential P satisfying P'(rho) rho - P(rho) = p(rho).
struct PressureLaw {
    double a = 1.0;
    double gamma = 1.4;

    PressureLaw() = default;
    PressureLaw(double a_, double gamma_) : a(a_), gamma(gamma_) {
        if (!(a > 0.0)) throw InputError("pressure law: a must be > 0");
        if (!(gamma >= 1.0)) throw InputError("pressure law: gamma must be >= 1");
    }

    double pressure(double rho) const { return a * std::pow(rho, gamma); }

    double density(double p) const {
        if (!(p > 0.0)) throw InputError("pressure law: density requires p > 0");
        return std::pow(p / a, 1.0 / gamma);
    }

    /// d rho / d p, used by the mass-offset Newton step.
    double density_derivative(double p) const {
        if (!(p > 0.0)) throw InputError("pressure law: derivative requires p > 0");
        return std::pow(p / a, 1.0 / gamma) / (gamma * p);
    }

    /// Pressure potential: a rho^gamma / (gamma - 1), or a rho log rho for
    /// gamma = 1.
    double potential(double rho) const {
        if (gamma == 1.0) return a * rho * std::log(rho);
        return a * std::pow(rho, gamma) / (gamma - 1.0);
    }
};

}  // namespace rigidflow
