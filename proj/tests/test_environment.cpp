// test_environment.cpp — kernels against closed-form Laplace transforms
#include "doctest.h"
#include "qbo/environment.hpp"
#include "qbo/quadrature.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace qbo::env;
using std::numbers::pi;

namespace {

SpectralDensity ohmic() { return {1.0, 0.1, 10.0, 0.0, 1.0, 0.0}; }

// ∫₀^∞ ω^n e^{−ω/Λ} e^{iωt} dω = n!/(1/Λ − it)^{n+1} for integer n ≥ 0
std::complex<double> laplace(int n, double lam, double t) {
    return std::tgamma(n + 1.0) / std::pow(std::complex<double>(1.0 / lam, -t), n + 1);
}

double closed_mu(int n, const SpectralDensity& sd, double t) {
    return -(2.0 * sd.mass * sd.coupling / pi) * laplace(n, sd.uv_cutoff, t).imag();
}
double closed_nu(int n, const SpectralDensity& sd, double t) {
    return (2.0 * sd.mass * sd.coupling / pi) * laplace(n, sd.uv_cutoff, t).real();
}

} // namespace

TEST_CASE("quadrature integrates smooth and oscillatory functions") {
    auto r = qbo::quad::integrate([](double x) { return std::exp(-x); }, 0.0, 5.0);
    CHECK(r.value == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-12));
    auto s = qbo::quad::integrate([](double x) { return std::cos(200.0 * x); }, 0.0, 1.0, {}, 40);
    CHECK(s.value == doctest::Approx(std::sin(200.0) / 200.0).epsilon(1e-9));
    CHECK_THROWS_AS(qbo::quad::integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, {1e-12, 1e-12, 200}),
                    qbo::quad::QuadratureError);
}

TEST_CASE("spectral density values and cutoffs") {
    CHECK(spectral_density(0.0, ohmic()) == 0.0);
    CHECK(spectral_density(10.0, ohmic()) == doctest::Approx(2.0 * 0.1 * 10.0 * std::exp(-1.0)));
    SpectralDensity f{-1.0, 0.1, 100.0, 1.0, 1.0, 0.0};
    CHECK(spectral_density(0.5, f) == 0.0);
    CHECK(spectral_density(2.0, f) == doctest::Approx(2.0 * 0.1 / 2.0 * std::exp(-0.02)));
    CHECK_THROWS_AS(spectral_density(-1.0, ohmic()), std::invalid_argument);
    SpectralDensity bad{-1.0, 0.1, 100.0, 0.0, 1.0, 0.0};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("kernels match closed forms at zero temperature") {
    const auto sd = ohmic();
    CHECK(dissipation_kernel(0.0, sd) == 0.0);
    CHECK(dissipation_kernel(0.1, sd) == doctest::Approx(-10.0 / pi).epsilon(1e-8));
    CHECK(noise_kernel(0.0, sd) == doctest::Approx(20.0 / pi).epsilon(1e-8));
    for (double t : {0.013, 0.2, 0.7, 1.9}) {
        CHECK(dissipation_kernel(t, sd) == doctest::Approx(closed_mu(1, sd, t)).epsilon(1e-7));
        CHECK(noise_kernel(t, sd) == doctest::Approx(closed_nu(1, sd, t)).scale(20.0 / pi).epsilon(1e-8));
    }
    SpectralDensity sup{3.0, 0.01, 30.0, 0.0, 1.0, 0.0};
    for (double t : {0.0, 0.01, 0.3}) {
        CHECK(dissipation_kernel(t, sup) == doctest::Approx(closed_mu(3, sup, t)).scale(1e4).epsilon(1e-8));
        CHECK(noise_kernel(t, sup) == doctest::Approx(closed_nu(3, sup, t)).scale(1e4).epsilon(1e-8));
    }
    SpectralDensity zero = sd;
    zero.coupling = 0.0;
    CHECK(noise_kernel(0.4, zero) == 0.0);
    CHECK(dissipation_kernel(0.4, zero) == 0.0);
}

TEST_CASE("kernel parity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    SpectralDensity sd = ohmic();
    sd.temperature = 1.9;
    for (int i = 0; i < 200; ++i) {
        const double t = u(rng);
        const double m = dissipation_kernel(t, sd), n = noise_kernel(t, sd);
        CHECK(std::abs(dissipation_kernel(-t, sd) + m) <= 1e-9 * std::max(1.0, std::abs(m)));
        CHECK(std::abs(noise_kernel(-t, sd) - n) <= 1e-9 * std::max(1.0, std::abs(n)));
    }
}

TEST_CASE("high temperature noise follows the classical limit") {
    SpectralDensity sd = ohmic();
    sd.temperature = 100.0 * sd.uv_cutoff;
    // (1/π)∫ I/ω dω = (1/π)·2Mγ Λ for Ohmic
    const double classical = 2.0 * sd.temperature * (2.0 * sd.coupling * sd.uv_cutoff) / pi;
    CHECK(std::abs(noise_kernel(0.0, sd) / classical - 1.0) < 0.01);
}

TEST_CASE("noise kernel is a positive semidefinite function") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    for (double T : {0.0, 1.9}) {
        SpectralDensity sd{1.0, 0.1, 10.0, 0.0, 1.0, T};
        const double nu0 = noise_kernel(0.0, sd);
        for (int trial = 0; trial < 3; ++trial) {
            const int n = 24 + 20 * trial;
            std::vector<double> t(n), f(n);
            for (int i = 0; i < n; ++i) { t[i] = 2.0 * u(rng); f[i] = g(rng); }
            double q = 0.0, norm = 0.0;
            for (int i = 0; i < n; ++i) {
                norm += f[i] * f[i];
                for (int j = 0; j < n; ++j) q += f[i] * noise_kernel(t[i] - t[j], sd) * f[j];
            }
            CHECK(q >= -1e-8 * norm * nu0);
        }
    }
}

TEST_CASE("noise grows with temperature") {
    double prev = 0.0;
    for (double T : {0.0, 0.5, 1.9, 5.0, 20.0}) {
        SpectralDensity sd = ohmic();
        sd.temperature = T;
        const double v = noise_kernel(0.0, sd);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("discrete sampling carries the exact cell weights") {
    const auto sd = ohmic();
    auto one = sample_discrete_bath(sd, 1, Sampling::linear, 50.0);
    REQUIRE(one.size() == 1);
    // ∫₀^50 0.2 ω e^{−ω/10} dω = 0.2·100·(1 − 6e^{−5})
    const double w = 20.0 * (1.0 - 6.0 * std::exp(-5.0));
    CHECK(one[0].coupling * one[0].coupling * pi / (2.0 * one[0].frequency) == doctest::Approx(w).epsilon(1e-10));

    SpectralDensity zero = sd;
    zero.coupling = 0.0;
    for (const auto& m : sample_discrete_bath(zero, 8)) CHECK(m.coupling == 0.0);

    auto lg = sample_discrete_bath(sd, 32, Sampling::log);
    CHECK(lg.front().frequency > 1e-3 * sd.uv_cutoff);
    CHECK(lg.back().frequency < default_band_factor * sd.uv_cutoff);
    SpectralDensity bad{-1.0, 0.1, 10.0, 0.0, 1.0, 0.0};
    CHECK_THROWS_AS(sample_discrete_bath(bad, 8), std::invalid_argument);
}

TEST_CASE("mode sums reconstruct the continuum kernels") {
    const auto sd = ohmic();
    auto error_for = [&](std::size_t n) {
        auto modes = sample_discrete_bath(sd, n);
        double worst = 0.0, scale = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double t = k / 200.0;
            const double ref = closed_mu(1, sd, t);
            scale = std::max(scale, std::abs(ref));
            worst = std::max(worst, std::abs(mode_dissipation_kernel(t, modes) - ref));
        }
        return worst / scale;
    };
    CHECK(error_for(256) < 1e-3);
    double prev = error_for(64);
    for (std::size_t n : {128u, 256u, 512u}) {
        const double e = error_for(n);
        CHECK(e <= 0.6 * prev);
        prev = e;
    }
}

TEST_CASE("counterterm shifts") {
    CHECK(counterterm_frequency(ohmic()) == doctest::Approx(4.0 / pi).epsilon(1e-9));
    SpectralDensity sup{3.0, 0.01, 30.0, 0.0, 1.0, 0.0};
    // (2/π)·2γ·Λ³·Γ(3)
    CHECK(counterterm_frequency(sup) == doctest::Approx(2.0 / pi * 2.0 * 0.01 * 27000.0 * 2.0).epsilon(1e-9));
    SpectralDensity zero = ohmic();
    zero.coupling = 0.0;
    CHECK(counterterm_frequency(zero) == 0.0);
    auto modes = sample_discrete_bath(ohmic(), 400, Sampling::linear, 400.0);
    CHECK(Bath::discrete(modes, 0.0).counterterm() == doctest::Approx(4.0 / pi).epsilon(2e-2));
}

TEST_CASE("tabulated kernels agree with pointwise quadrature") {
    for (SpectralDensity sd : {SpectralDensity{1.0, 0.1, 100.0, 0.0, 1.0, 1.9},
                               SpectralDensity{-1.0, 0.5, 100.0, 1.0, 1.0, 0.0},
                               SpectralDensity{3.0, 0.01, 30.0, 0.0, 1.0, 0.0}}) {
        const auto tab = Bath::continuum(sd).tabulate(1e-3, 1501);
        const double scale = noise_kernel(0.0, sd);
        for (std::size_t k : {0u, 1u, 17u, 400u, 999u, 1500u}) {
            const double t = 1e-3 * static_cast<double>(k);
            CHECK(std::abs(tab.mu[k] - dissipation_kernel(t, sd)) <= 1e-8 * scale);
            CHECK(std::abs(tab.nu[k] - noise_kernel(t, sd)) <= 1e-8 * scale);
        }
    }
    auto modes = sample_discrete_bath(ohmic(), 16);
    const auto tab = Bath::discrete(modes, 1.9).tabulate(0.01, 300);
    for (std::size_t k : {0u, 5u, 299u}) {
        CHECK(tab.mu[k] == doctest::Approx(mode_dissipation_kernel(0.01 * k, modes)).scale(1.0).epsilon(1e-11));
        CHECK(tab.nu[k] == doctest::Approx(mode_noise_kernel(0.01 * k, modes, 1.9)).scale(1.0).epsilon(1e-11));
    }
}
