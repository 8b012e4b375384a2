// test_propagator.cpp — boundary solutions, coefficients, free limits
#include "doctest.h"
#include "qbo/oracle.hpp"
#include "qbo/propagator.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qbo;
using prop::Mat2;
using std::numbers::pi;

namespace {

env::SpectralDensity ohmic(double T = 0.0) { return {1.0, 0.1, 10.0, 0.0, 1.0, T}; }
env::SpectralDensity silent() { auto s = ohmic(); s.coupling = 0.0; return s; }

double rel(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("free boundary solutions follow the closed form") {
    const prop::TimeGrid g{1.0, 2048};
    auto sol = prop::solve_homogeneous({1.0, 1.0}, env::Bath::continuum(silent()), pulses::disabled(), g);
    REQUIRE(sol.u1.size() == 2049);
    CHECK(std::abs(sol.u1.front() - 1.0) < 1e-8);
    CHECK(std::abs(sol.u1.back()) < 1e-8);
    CHECK(std::abs(sol.u2.front()) < 1e-8);
    CHECK(std::abs(sol.u2.back() - 1.0) < 1e-8);
    CHECK(std::abs(sol.v1.front() - 1.0) < 1e-8);
    CHECK(std::abs(sol.v1.back()) < 1e-8);
    CHECK(std::abs(sol.v2.front()) < 1e-8);
    CHECK(std::abs(sol.v2.back() - 1.0) < 1e-8);
    double worst = 0.0;
    for (std::size_t i = 0; i <= g.steps; ++i) {
        const double s = g.time(i);
        worst = std::max({worst, std::abs(sol.u1[i] - std::sin(1.0 - s) / std::sin(1.0)),
                          std::abs(sol.u2[i] - std::sin(s) / std::sin(1.0)),
                          std::abs(sol.v1[i] - std::sin(1.0 - s) / std::sin(1.0))});
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("caustic detection") {
    CHECK_THROWS_AS(prop::Solver({1.0, 1.0}, env::Bath::continuum(silent()), pulses::disabled(), {pi, 1024}).final(),
                    prop::CausticError);
}

TEST_CASE("free propagator is a rotation") {
    prop::Solver s({1.0, 1.0}, env::Bath::continuum(silent()), pulses::disabled(), {pi / 2, 2048});
    const auto sol = s.final();
    Mat2 expect;
    expect << 0.0, 1.0, -1.0, 0.0;
    CHECK((sol.C - expect).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(sol.a.isZero(0.0));
    CHECK(sol.Sigma.isZero(0.0));

    // general Ω, M: C = [[cos, sin/(MΩ)], [−MΩ sin, cos]]
    prop::Solver s2({2.3, 0.7}, env::Bath::continuum(silent()), pulses::disabled(), {0.9, 2048});
    const auto c = s2.final().C;
    const double w = 2.3 * 0.9;
    CHECK(c(0, 0) == doctest::Approx(std::cos(w)).epsilon(1e-9));
    CHECK(c(0, 1) == doctest::Approx(std::sin(w) / (0.7 * 2.3)).epsilon(1e-9));
    CHECK(c(1, 0) == doctest::Approx(-0.7 * 2.3 * std::sin(w)).epsilon(1e-9));
    CHECK(c.determinant() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gaussian propagation in the free case") {
    prop::Solver s({1.3, 1.0}, env::Bath::continuum(silent()), pulses::disabled(), {0.8, 1024});
    const auto sol = s.final();
    prop::GaussianState vac;
    vac.cov << 1.0 / (2 * 1.3), 0.0, 0.0, 1.3 / 2;
    auto out = prop::propagate_gaussian(vac, sol);
    CHECK((out.cov - vac.cov).cwiseAbs().maxCoeff() < 1e-10);
    prop::GaussianState cl;
    cl.mean << 1.0, 0.0;
    cl.cov = vac.cov;
    out = prop::propagate_gaussian(cl, sol);
    CHECK(out.mean(0) == doctest::Approx(std::cos(1.3 * 0.8)).epsilon(1e-9));
    CHECK(out.mean(1) == doctest::Approx(-1.3 * std::sin(1.3 * 0.8)).epsilon(1e-9));
}

TEST_CASE("free-function pipeline matches the reusable solver") {
    const auto bath = env::Bath::continuum(ohmic(1.9));
    const prop::SystemParams sys{1.0, 1.0, true, 0.0};
    const auto p = pulses::pi_train(1.0 / 16);
    const prop::TimeGrid g{1.0, 256};
    auto sol = prop::assemble_coefficients(prop::solve_homogeneous(sys, bath, p, g), bath, p, g);
    const auto ref = prop::Solver(sys, bath, p, g).final();
    CHECK(rel(sol.C, ref.C) < 1e-12);
    CHECK(rel(sol.Sigma, ref.Sigma) < 1e-10);
    CHECK(rel(sol.a, ref.a) < 1e-10);
}

TEST_CASE("coefficients are symmetric and positive") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (bool pulsed : {false, true}) {
        const auto p = pulsed ? pulses::pi_train(1.0 / 32) : pulses::disabled();
        const auto sol = prop::Solver({1.0, 1.0, true}, env::Bath::continuum(ohmic(1.9)), p, {1.0, 1024}).final();
        CHECK(sol.Sigma(0, 1) == sol.Sigma(1, 0));
        CHECK(sol.a(0, 1) == sol.a(1, 0));
        for (int i = 0; i < 50; ++i) {
            prop::Vec2 x(n(rng), n(rng));
            CHECK(x.dot(sol.Sigma * x) >= -1e-8 * x.squaredNorm() * sol.Sigma.trace());
            CHECK(x.dot(sol.a * x) >= -1e-8 * x.squaredNorm());
        }
    }
}

TEST_CASE("pulse validation on the solver path") {
    auto p = pulses::pi_train(1.0 / 16);
    p.kick_angle = 2.0 * pi;
    CHECK_THROWS_AS(prop::Solver({1, 1}, env::Bath::continuum(ohmic()), p, {1.0, 256}), std::invalid_argument);
    CHECK_THROWS_AS(prop::Solver({1, 1}, env::Bath::continuum(ohmic()), pulses::pi_train(0.01), {1.0, 256}),
                    std::invalid_argument);
    CHECK_THROWS_AS(prop::Solver({1, 1}, env::Bath::continuum(ohmic()), pulses::disabled(), {1.0, 8}),
                    std::invalid_argument);
    pulses::PulseTrain off = pulses::pi_train(1.0 / 16);
    off.enabled = false;
    const auto a = prop::Solver({1, 1, true}, env::Bath::continuum(ohmic()), off, {1.0, 256}).final();
    const auto b = prop::Solver({1, 1, true}, env::Bath::continuum(ohmic()), pulses::disabled(), {1.0, 256}).final();
    CHECK(a.C == b.C);
    CHECK(a.Sigma == b.Sigma);
}

TEST_CASE("constant field transform") {
    const auto id = prop::constant_field_transform({1.0, 1.0, false, 0.0});
    CHECK(id.frequency == 1.0);
    CHECK(id.mass == 1.0);
    const auto t = prop::constant_field_transform({1.0, 1.0, false, 1.0});
    CHECK(t.mass == doctest::Approx(0.5));
    CHECK(t.frequency == doctest::Approx(2.0));
    CHECK(t.mass * t.frequency * t.frequency == doctest::Approx(2.0));
    const auto c = prop::constant_field_transform({1.0, 2.0, true, 3.0}, 5.0);
    CHECK(c.frequency == doctest::Approx(std::sqrt(16.0 + 5.0)));
    CHECK(c.mass == doctest::Approx(0.5));
}

TEST_CASE("time series reuse matches independent solves") {
    const auto bath = env::Bath::continuum(ohmic(1.9));
    const prop::SystemParams sys{1.0, 1.0, true};
    const auto p = pulses::pi_train(1.0 / 16);
    prop::Solver full(sys, bath, p, {1.0, 512});
    for (std::size_t n : {96u, 256u, 300u}) {  // 300 is not on a pulse boundary
        const auto a = full.at_step(n);
        const auto b = prop::Solver(sys, bath, p, {full.grid().time(n), n}).final();
        CHECK(rel(a.C, b.C) < 1e-10);
        CHECK(rel(a.Sigma, b.Sigma) < 1e-8);
    }
}

TEST_CASE("decoupling pulses shrink the fluctuation matrix") {
    const auto bath = env::Bath::continuum(ohmic());
    const prop::SystemParams sys{1.0, 1.0, true};
    const auto free_norm = prop::Solver(sys, bath, pulses::disabled(), {1.0, 2048}).final().Sigma.norm();
    double prev = 1e300;
    for (std::size_t pairs : {64u, 128u, 256u, 512u, 1024u}) {
        const auto s = prop::Solver(sys, bath, pulses::pi_train(1.0 / pairs), {1.0, 2048}).final().Sigma.norm();
        CHECK(s < prev);
        prev = s;
    }
    CHECK(prev < 0.1 * free_norm);
}
