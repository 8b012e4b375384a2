// environment.hpp — bath spectral densities, influence kernels, mode sampling
#pragma once

#include <cstddef>
#include <vector>

namespace qbo::env {

// I(ω) = 2Mγ ω^ν exp(−ω/Λ_UV) above a hard IR cutoff. ħ = k_B = 1,
// frequencies in GHz (angular), times in ns.
struct SpectralDensity {
    double exponent = 1.0;     // ν: 1 Ohmic, 3 super-Ohmic, −1 for 1/f
    double coupling = 0.1;     // γ
    double uv_cutoff = 10.0;   // Λ_UV
    double ir_cutoff = 0.0;    // Λ_IR, I = 0 below
    double mass = 1.0;         // M
    double temperature = 0.0;  // T, 0 means zero temperature

    bool operator==(const SpectralDensity&) const = default;
};

struct BathMode {
    double frequency = 1.0;  // ω_n
    double mass = 1.0;       // m_n
    double coupling = 0.0;   // c_n
};

enum class Sampling { linear, log };

// Throws std::invalid_argument naming the first violated field.
void validate(const SpectralDensity& sd);

double spectral_density(double omega, const SpectralDensity& sd);

// coth(ω/2T), 1 at T = 0; series below ω/2T < 1e-4
double coth_factor(double omega, double temperature);

// μ(t) = −(1/π)∫ I(ω) sin ωt dω
double dissipation_kernel(double t, const SpectralDensity& sd);
// ν(t) = (1/π)∫ I(ω) coth(ω/2T) cos ωt dω
double noise_kernel(double t, const SpectralDensity& sd);

// Default upper frequency of the sampled band, in units of Λ_UV.
inline constexpr double default_band_factor = 20.0;

// Cell-wise discretization: each mode carries the exact weight ∫_cell I dω,
// so c_n² = (2 m_n ω_n / π)·∫_cell I dω. omega_max <= 0 selects the default.
std::vector<BathMode> sample_discrete_bath(const SpectralDensity& sd, std::size_t count,
                                           Sampling scheme = Sampling::linear,
                                           double omega_max = 0.0);

double mode_dissipation_kernel(double t, const std::vector<BathMode>& modes);
double mode_noise_kernel(double t, const std::vector<BathMode>& modes, double temperature);

// δΩ² = (2/(πM))∫ I(ω)/ω dω; std::domain_error when IR-divergent.
double counterterm_frequency(const SpectralDensity& sd);

// μ and ν on the uniform grid t_k = k·step, k = 0..count−1.
struct KernelTable {
    double step = 0.0;
    std::vector<double> mu;
    std::vector<double> nu;
};

// What the solver needs from a bath: either the continuum density or an
// explicit finite mode set (the latter shares modes with the exact oracle).
class Bath {
public:
    static Bath continuum(const SpectralDensity& sd);
    static Bath discrete(std::vector<BathMode> modes, double temperature, double system_mass = 1.0);

    bool is_discrete() const noexcept { return discrete_; }
    bool is_silent() const noexcept;  // no coupling at all
    const SpectralDensity& density() const noexcept { return sd_; }
    const std::vector<BathMode>& modes() const noexcept { return modes_; }
    double temperature() const noexcept { return discrete_ ? temperature_ : sd_.temperature; }
    double system_mass() const noexcept { return discrete_ ? mass_ : sd_.mass; }

    double counterterm() const;
    KernelTable tabulate(double step, std::size_t count) const;

private:
    bool discrete_ = false;
    SpectralDensity sd_{};
    std::vector<BathMode> modes_;
    double temperature_ = 0.0;
    double mass_ = 1.0;
};

} // namespace qbo::env
