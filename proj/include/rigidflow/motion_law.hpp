#pragma once

#include <string>
#include <vector>

namespace rigidflow {

// Closed-form time primitive. Motions are supplied analytically so Newton
// residuals can use exact derivatives instead of finite differences.
struct MotionTerm {
    enum class Kind { Constant, Polynomial, Sin, Cos };

    Kind kind = Kind::Constant;
    double value = 0.0;               // Constant
    std::vector<double> coeffs;       // Polynomial: c0 + c1 t + c2 t^2 + ...
    double amplitude = 0.0;           // Sin/Cos: A trig(omega t + phase)
    double omega = 0.0;
    double phase = 0.0;

    static MotionTerm constant(double c);
    static MotionTerm polynomial(std::vector<double> coeffs);
    static MotionTerm sine(double amplitude, double omega, double phase = 0.0);
    static MotionTerm cosine(double amplitude, double omega, double phase = 0.0);

    double eval(double t) const;
    double deriv(double t) const;
};

/// Linear combination of primitives describing one scalar component of a
/// prescribed velocity (or an angular velocity).
struct ScalarLaw {
    std::vector<MotionTerm> terms;

    double eval(double t) const;
    double deriv(double t) const;
    bool is_zero() const { return terms.empty(); }
};

}  // namespace rigidflow
