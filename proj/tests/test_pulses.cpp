// test_pulses.cpp — phase schedule and modified kernels
#include "doctest.h"
#include "qbo/pulses.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace qbo::pulses;
using std::numbers::pi;

TEST_CASE("square-wave schedule") {
    const auto p = pi_train(0.2);
    CHECK(theta_at(0.1, p) == pi);
    CHECK(theta_at(0.3, p) == 0.0);
    CHECK(modulation_at(0.1, p) == -1.0);
    CHECK(modulation_at(0.3, p) == 1.0);
    CHECK(theta_at(0.7, disabled()) == 0.0);
    CHECK(modulation_at(0.7, disabled()) == 1.0);
    auto p3 = p;
    p3.kick_angle = 3.0 * pi;
    for (double t : {0.05, 0.19, 0.21, 0.55, 1.13}) CHECK(modulation_at(t, p3) == modulation_at(t, p));
    for (double t = 0.0; t < 3.0; t += 0.0137) CHECK(theta_at(t + 0.4, p) == theta_at(t, p));
}

TEST_CASE("modified kernels") {
    auto base = [](double x) { return x * std::exp(-x * x); };
    CHECK(modified_kernel(0.3, 0.1, base, disabled()) == doctest::Approx(base(0.2)));
    const auto p = pi_train(0.2);
    CHECK(modified_kernel(0.05, 0.15, base, p) == doctest::Approx(base(-0.1)));
    CHECK(modified_kernel(0.05, 0.25, base, p) == doctest::Approx(-base(-0.2)));
    CHECK(modified_kernel(0.25, 0.05, base, p) == -modified_kernel(0.05, 0.25, base, p));
}

TEST_CASE("eta parameter") {
    CHECK(eta_parameter(100.0, pi / 100.0) == doctest::Approx(1.0));
    CHECK(eta_parameter(100.0, 1.5 * pi / 100.0) == doctest::Approx(1.5));
    CHECK(eta_parameter(100.0, 0.05 * pi / 100.0) == doctest::Approx(0.05));
    CHECK(interval_for_eta(50.0, 0.5) == doctest::Approx(pi / 100.0));
}

TEST_CASE("angle validation") {
    CHECK(is_odd_pi(pi));
    CHECK(is_odd_pi(5.0 * pi));
    CHECK_FALSE(is_odd_pi(2.0 * pi));
    CHECK_FALSE(is_odd_pi(0.5 * pi));
    auto p = pi_train(0.1);
    p.kick_angle = 2.0 * pi;
    CHECK_THROWS_AS(require_bang_bang(p), std::invalid_argument);
    PulseTrain bad;
    bad.enabled = true;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    auto cells = cell_modulation(pi_train(0.25), 0.125, 8);
    CHECK(cells == std::vector<double>{-1, -1, 1, 1, -1, -1, 1, 1});
}
