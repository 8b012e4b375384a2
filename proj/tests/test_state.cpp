// test_state.cpp — Fock reconstruction against direct phase-space quadrature
#include "doctest.h"
#include "phase_space_oracle.hpp"
#include "qbo/state.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qbo::state;
using Eigen::Matrix2d;
using Eigen::Vector2d;

using namespace oracle;

TEST_CASE("moment conversions") {
    const auto vac = moments_from_gaussian(Vector2d::Zero(), cov_of(0.5 / 2.0, 0.5 * 2.0, 0.0), 2.0);
    CHECK(std::abs(vac.m_aa) < 1e-15);
    CHECK(vac.m_aad.real() == doctest::Approx(1.0));
    const double nbar = 0.7;
    const auto th = moments_from_gaussian(Vector2d::Zero(), (2 * nbar + 1) * vacuum_covariance(1.5), 1.5);
    CHECK(th.m_aad.real() == doctest::Approx(nbar + 1.0));
    CHECK_THROWS_AS(moments_from_gaussian(Vector2d::Zero(), cov_of(0.1, 0.1, 0.0), 1.0), std::invalid_argument);
}

TEST_CASE("Fock elements of simple states") {
    const auto vac = moments_from_gaussian(Vector2d::Zero(), vacuum_covariance(1.0), 1.0);
    const auto rv = fock_density(vac, 4);
    CHECK(rv.rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rv.rho.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));

    const auto th = moments_from_gaussian(Vector2d::Zero(), 1.5 * vacuum_covariance(1.0), 1.0);
    CHECK(th.m_aad.real() == doctest::Approx(1.25));
    const auto rt = fock_density(th, 6);
    CHECK(std::abs(rt.rho(0, 0).real() - 0.8) < 1e-8);
    CHECK(std::abs(rt.rho(1, 1).real() - 0.16) < 1e-10);
    const auto p = pauli_expectations(rt);
    CHECK(p.sz == doctest::Approx(-0.64));
    CHECK(leakage(rt) == doctest::Approx(0.04));
    for (double nbar : {0.01, 0.3, 2.0}) {
        const auto t = moments_from_gaussian(Vector2d::Zero(), (2 * nbar + 1) * vacuum_covariance(0.8), 0.8);
        CHECK(std::abs(fock_element(t, 0, 0).real() - 1.0 / (1.0 + nbar)) < 1e-8);
    }

    // coherent state: ρ_kl = e^{−|β|²} β^k β̄^l / √(k! l!)
    const double kappa = 1.7;
    Vector2d mean(0.4, -0.9);
    const auto coh = moments_from_gaussian(mean, vacuum_covariance(kappa), kappa);
    const cplx beta = std::sqrt(kappa / 2) * mean(0) + I * mean(1) / std::sqrt(2 * kappa);
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; l <= 4; ++l) {
            const cplx expect = std::exp(-std::norm(beta)) * std::pow(beta, k) * std::pow(std::conj(beta), l) /
                                std::sqrt(std::tgamma(k + 1.0) * std::tgamma(l + 1.0));
            CHECK(std::abs(fock_element(coh, k, l) - expect) < 1e-12);
        }
}

TEST_CASE("analytic Fock elements equal phase-space quadrature") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double kappa = 0.5 + 1.5 * u(rng);
        const Matrix2d cov = random_cov(rng, kappa);
        Vector2d mean(0.0, 0.0);
        if (trial % 2) mean << 0.6 * (u(rng) - 0.5), 0.6 * (u(rng) - 0.5);
        const auto g = moments_from_gaussian(mean, cov, kappa);
        const auto ref = quadrature_rho(g, 4);
        const auto ana = fock_density(g, 4);
        worst = std::max(worst, (ana.rho - ref).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("density matrix bounds for random Gaussians") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double kappa = 0.5 + 1.5 * u(rng);
        const auto g = moments_from_gaussian(Vector2d(0.5 * (u(rng) - 0.5), 0.5 * (u(rng) - 0.5)),
                                             random_cov(rng, kappa), kappa);
        const auto d = fock_density(g, 6);
        CHECK((d.rho - d.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
        for (int k = 0; k <= 6; ++k) {
            CHECK(d.rho(k, k).real() >= -1e-9);
            CHECK(d.rho(k, k).real() <= 1.0 + 1e-9);
        }
        CHECK(d.trace_deficit() >= -1e-6);
    }
}

TEST_CASE("uncertainty function and its ladder identity") {
    const auto vac = moments_from_gaussian(Vector2d::Zero(), vacuum_covariance(3.0), 3.0);
    CHECK(uncertainty(vac).A == doctest::Approx(0.5));
    Matrix2d sq;
    sq << 0.5 * std::exp(-1.2), 0.0, 0.0, 0.5 * std::exp(1.2);
    CHECK(uncertainty(moments_from_gaussian(Vector2d::Zero(), sq, 1.0)).A == doctest::Approx(0.5));
    const auto th = moments_from_gaussian(Vector2d::Zero(), 2.4 * vacuum_covariance(1.0), 1.0);
    CHECK(uncertainty(th).A == doctest::Approx(0.7 + 0.5));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double kappa = 0.5 + u(rng);
        const auto g = moments_from_gaussian(Vector2d::Zero(), random_cov(rng, kappa), kappa);
        CHECK(std::abs(uncertainty_identity_residual(g)) < 1e-10);
        CHECK(uncertainty(g).A >= 0.5 - 1e-9);
    }
}

TEST_CASE("Fock superpositions through a loss channel") {
    const double kappa = 1.3, eta = 0.64;
    const Matrix2d C = std::sqrt(eta) * Matrix2d::Identity();
    const Matrix2d Sigma = 2.0 * (1.0 - eta) * vacuum_covariance(kappa);

    const auto one = fock_superposition({0.0, 1.0}, kappa);
    const auto d1 = fock_density(one, 4);
    CHECK(d1.rho(1, 1).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d1.rho(0, 0)) < 1e-12);
    CHECK(uncertainty(moments_of(one)).A == doctest::Approx(1.5));
    const auto out = fock_density(evolve(one, C, Sigma), 4);
    CHECK(out.rho(1, 1).real() == doctest::Approx(eta).epsilon(1e-12));
    CHECK(out.rho(0, 0).real() == doctest::Approx(1.0 - eta).epsilon(1e-12));
    CHECK(decay_factor(out) == doctest::Approx(-std::log(eta)));

    const auto sup = fock_superposition({1.0, 1.0}, kappa);
    const auto ds = fock_density(sup, 3);
    CHECK(pauli_expectations(ds).sx == doctest::Approx(1.0).epsilon(1e-12));
    const auto outs = fock_density(evolve(sup, C, Sigma), 3);
    CHECK(std::abs(outs.rho(0, 1)) == doctest::Approx(std::sqrt(eta) / 2).epsilon(1e-12));

    // free rotation by ωt multiplies the coherence by a phase only
    const double wt = 0.7;
    Matrix2d R;
    R << std::cos(wt), std::sin(wt) / kappa, -kappa * std::sin(wt), std::cos(wt);
    const auto rot = fock_density(evolve(sup, R, Matrix2d::Zero()), 3);
    CHECK(std::abs(rot.rho(0, 1)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rot.rho(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("observable guards") {
    FockDensity d;
    d.cap = 2;
    d.rho = Eigen::MatrixXcd::Zero(3, 3);
    d.rho(0, 0) = 1.0;
    CHECK_THROWS_AS(decay_factor(d), std::domain_error);
    CHECK(leakage(d) == 0.0);
    const auto p = pauli_expectations(d);
    CHECK(p.sz == -1.0);
    CHECK(p.sx == 0.0);
    d.rho(1, 1) = 1.0;
    d.rho(0, 0) = 0.0;
    CHECK(decay_factor(d) == 0.0);
    d.rho(1, 1) = std::exp(-2.0);
    CHECK(decay_factor(d) == doctest::Approx(2.0));
}

TEST_CASE("trajectory split recombines to the second moment") {
    Matrix2d C;
    C << 0.8, 0.5, -0.6, 0.9;
    Matrix2d S;
    S << 0.3, 0.05, 0.05, 0.2;
    const Matrix2d cov = C * vacuum_covariance(1.0) * C.transpose() + 0.5 * S;
    const auto m = moments_from_gaussian(Vector2d::Zero(), cov, 1.0);
    const auto sp = trajectory_split(C, S);
    CHECK(std::abs(sp.c + sp.sigma - m.m_aa) < 1e-8);
}
