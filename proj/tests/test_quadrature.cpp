#include <cmath>

#include "doctest.h"
#include "rigidflow/core.hpp"
#include "rigidflow/motion_law.hpp"
#include "rigidflow/quadrature.hpp"

using namespace rigidflow;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    QuadRule1D r = gauss_legendre(8, 0.0, 2.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        double x = r.nodes[i];
        acc += r.weights[i] * (x * x * x * x * x * x * x);  // x^7
    }
    CHECK(acc == doctest::Approx(std::pow(2.0, 8) / 8.0).epsilon(1e-14));
}

TEST_CASE("composite gauss handles smooth integrands to machine precision") {
    QuadRule1D r = composite_gauss(8, 16, 0.0, kPi);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::sin(r.nodes[i]);
    CHECK(acc == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("periodic trapezoid is spectrally accurate on trig functions") {
    QuadRule1D r = periodic_trapezoid(32, kTwoPi);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::cos(3.0 * r.nodes[i]) *
                                                            std::cos(3.0 * r.nodes[i]);
    CHECK(acc == doctest::Approx(kPi).epsilon(1e-13));
}

TEST_CASE("motion terms evaluate and differentiate in closed form") {
    ScalarLaw law;
    law.terms.push_back(MotionTerm::constant(2.0));
    law.terms.push_back(MotionTerm::polynomial({0.0, 1.0, 3.0}));  // t + 3t^2
    law.terms.push_back(MotionTerm::sine(0.5, 2.0, 0.25));

    double t = 0.7;
    double expect = 2.0 + t + 3.0 * t * t + 0.5 * std::sin(2.0 * t + 0.25);
    double expect_d = 1.0 + 6.0 * t + std::cos(2.0 * t + 0.25);
    CHECK(law.eval(t) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(law.deriv(t) == doctest::Approx(expect_d).epsilon(1e-15));

    // finite-difference cross-check of the derivative
    double h = 1e-6;
    double fd = (law.eval(t + h) - law.eval(t - h)) / (2.0 * h);
    CHECK(law.deriv(t) == doctest::Approx(fd).epsilon(1e-8));
}
