// dephasing.hpp — pure-dephasing comparison model with the pulse filter factor
#pragma once

#include "qbo/environment.hpp"

#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace qbo::dephasing {

enum class Mode { continuum, discrete };

struct DephasingConfig {
    env::SpectralDensity sd;
    double interval = 0.01;       // Δt
    double t_final = 0.02;        // = 2𝒩Δt
    Mode mode = Mode::continuum;
    std::size_t mode_count = 256; // sampled on [Λ_IR, Λ_UV] when `modes` is empty
    std::vector<env::BathMode> modes;
    double prefactor = 2.0 / std::numbers::pi;
};

struct Exponent {
    double value = 0.0;
    bool divergent = false;  // a filter pole (2j+1)π/Δt lies in [Λ_IR, Λ_UV]
};

void validate(const DephasingConfig& cfg);
std::size_t pair_count(const DephasingConfig& cfg);

// D_P = prefactor ∫ I coth(ω/2T) (1 − cos ωt)/ω² tan²(ωΔt/2) dω over [Λ_IR, Λ_UV]
Exponent dephasing_exponent(const DephasingConfig& cfg);
// same integral without the filter factor
double free_exponent(const DephasingConfig& cfg);

std::complex<double> coherence(const Exponent& d, std::complex<double> rho01_initial);
std::complex<double> coherence(const DephasingConfig& cfg, std::complex<double> rho01_initial);

// Config at a requested time: 𝒩 = max(1, round(t/(2Δt))), t_final = 2𝒩Δt.
DephasingConfig at_time(const env::SpectralDensity& sd, double interval, double t);

enum class Regime { suppression, accentuation };

struct ScanRow {
    double eta = 0.0;
    double interval = 0.0;
    double t_final = 0.0;
    Exponent pulsed;
    double free = 0.0;
    Regime regime = Regime::suppression;
    // frequency windows in [Λ_IR, Λ_UV] where (4l+1)π/2 < ωΔt < (4l+3)π/2
    std::vector<std::pair<double, double>> enhanced_bands;
};

struct Scan {
    std::vector<ScanRow> rows;
    bool has_crossover = false;
    double crossover_eta = 0.0;  // first η labelled accentuation after a suppression row
};

// `intervals` must be increasing.
Scan crossover_scan(const env::SpectralDensity& sd, double t, const std::vector<double>& intervals,
                    Mode mode = Mode::continuum);

} // namespace qbo::dephasing
