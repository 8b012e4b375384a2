// oracle.hpp — exact finite-bath evolution by symplectic matrix exponentials
#pragma once

#include "qbo/environment.hpp"
#include "qbo/propagator.hpp"
#include "qbo/pulses.hpp"

#include <vector>

namespace qbo::prop {

// Reduced linear map of the system: mean_t = C·mean₀, cov_t = C·cov₀·Cᵀ + noise.
struct ReducedMap {
    Mat2 C = Mat2::Identity();
    Mat2 noise = Mat2::Zero();
};

// Full (2N+2)-dimensional evolution from system Gaussian ⊗ thermal bath.
// Pulses enter in the toggling frame: on kicked segments the coupling reads
// (cos θ x + sin θ p/(MΩ))·Σ c_n q_n. For odd-π trains this agrees with the
// lab frame up to a parity flip of the system.
ReducedMap oracle_reduced_map(const SystemParams& sys, const std::vector<env::BathMode>& modes,
                              const pulses::PulseTrain& p, double temperature, double t_final);

GaussianState discrete_oracle_evolve(const SystemParams& sys, const std::vector<env::BathMode>& modes,
                                     const pulses::PulseTrain& p, double temperature, double t_final,
                                     const GaussianState& initial);

} // namespace qbo::prop
