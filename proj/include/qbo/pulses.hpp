// pulses.hpp — bang-bang decoupling trains and pulse-modified kernels
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qbo::pulses {

// Instantaneous kicks: θ(t) = θ_kick on [0,Δt) mod 2Δt, 0 on [Δt,2Δt).
struct PulseTrain {
    double strength = 0.0;     // V
    double duration = 0.0;     // τ
    double interval = 0.0;     // Δt
    double kick_angle = 0.0;   // θ_kick = ΩVτ, stored explicitly
    bool enabled = false;

    bool operator==(const PulseTrain&) const = default;
};

PulseTrain pi_train(double interval);
PulseTrain disabled();

void validate(const PulseTrain& p);
// odd multiple of π (within 1e-9 rad)
bool is_odd_pi(double angle);
// Throws unless the train can be handled by the influence-functional solver.
void require_bang_bang(const PulseTrain& p);

double theta_at(double t, const PulseTrain& p);
double modulation_at(double t, const PulseTrain& p);

double modified_kernel(double s, double s_prime, const std::function<double(double)>& base,
                       const PulseTrain& p);

double eta_parameter(double uv_cutoff, double interval);
double interval_for_eta(double uv_cutoff, double eta);

// cos θ on each grid cell [j·dt, (j+1)·dt), j = 0..steps−1, sampled at cell centres.
std::vector<double> cell_modulation(const PulseTrain& p, double dt, std::size_t steps);

} // namespace qbo::pulses
