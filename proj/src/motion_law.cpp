#include "rigidflow/motion_law.hpp"

#include <cmath>

#include "rigidflow/core.hpp"

namespace rigidflow {

MotionTerm MotionTerm::constant(double c) {
    MotionTerm t;
    t.kind = Kind::Constant;
    t.value = c;
    return t;
}

MotionTerm MotionTerm::polynomial(std::vector<double> coeffs) {
    MotionTerm t;
    t.kind = Kind::Polynomial;
    t.coeffs = std::move(coeffs);
    return t;
}

MotionTerm MotionTerm::sine(double amplitude, double omega, double phase) {
    MotionTerm t;
    t.kind = Kind::Sin;
    t.amplitude = amplitude;
    t.omega = omega;
    t.phase = phase;
    return t;
}

MotionTerm MotionTerm::cosine(double amplitude, double omega, double phase) {
    MotionTerm t = sine(amplitude, omega, phase);
    t.kind = Kind::Cos;
    return t;
}

double MotionTerm::eval(double t) const {
    switch (kind) {
        case Kind::Constant:
            return value;
        case Kind::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
            return acc;
        }
        case Kind::Sin:
            return amplitude * std::sin(omega * t + phase);
        case Kind::Cos:
            return amplitude * std::cos(omega * t + phase);
    }
    return 0.0;
}

double MotionTerm::deriv(double t) const {
    switch (kind) {
        case Kind::Constant:
            return 0.0;
        case Kind::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * t + coeffs[i] * static_cast<double>(i);
            return acc;
        }
        case Kind::Sin:
            return amplitude * omega * std::cos(omega * t + phase);
        case Kind::Cos:
            return -amplitude * omega * std::sin(omega * t + phase);
    }
    return 0.0;
}

double ScalarLaw::eval(double t) const {
    double acc = 0.0;
    for (const auto& term : terms) acc += term.eval(t);
    return acc;
}

double ScalarLaw::deriv(double t) const {
    double acc = 0.0;
    for (const auto& term : terms) acc += term.deriv(t);
    return acc;
}

}  // namespace rigidflow
