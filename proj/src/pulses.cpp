// pulses.cpp — square-wave phase schedule
#include "qbo/pulses.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbo::pulses {

PulseTrain pi_train(double interval) {
    PulseTrain p;
    p.interval = interval;
    p.kick_angle = std::numbers::pi;
    p.enabled = true;
    validate(p);
    return p;
}

PulseTrain disabled() { return {}; }

void validate(const PulseTrain& p) {
    if (!p.enabled) return;
    if (!(p.interval > 0.0) || !std::isfinite(p.interval))
        throw std::invalid_argument("pulse_interval: must be positive when pulses are enabled");
    if (!(p.kick_angle >= 0.0) || !std::isfinite(p.kick_angle))
        throw std::invalid_argument("kick_angle: must be nonnegative");
}

bool is_odd_pi(double angle) {
    const double k = angle / std::numbers::pi;
    const double r = std::round(k);
    return std::abs(k - r) * std::numbers::pi < 1e-9 && std::fmod(std::abs(r), 2.0) == 1.0;
}

void require_bang_bang(const PulseTrain& p) {
    validate(p);
    if (p.enabled && !is_odd_pi(p.kick_angle))
        throw std::invalid_argument("kick_angle: only odd multiples of pi are supported here");
}

double theta_at(double t, const PulseTrain& p) {
    if (!p.enabled) return 0.0;
    if (t < 0.0) throw std::invalid_argument("theta_at: negative time");
    const double phase = std::fmod(t, 2.0 * p.interval);
    return phase < p.interval ? p.kick_angle : 0.0;
}

double modulation_at(double t, const PulseTrain& p) {
    if (!p.enabled) return 1.0;
    const double th = theta_at(t, p);
    if (th == 0.0) return 1.0;
    if (is_odd_pi(th)) return -1.0;  // exact ±1 rather than cos rounding
    return std::cos(th);
}

double modified_kernel(double s, double s_prime, const std::function<double(double)>& base,
                       const PulseTrain& p) {
    return modulation_at(s, p) * base(s - s_prime) * modulation_at(s_prime, p);
}

double eta_parameter(double uv_cutoff, double interval) {
    if (!(interval > 0.0)) throw std::invalid_argument("pulse_interval: must be positive");
    return uv_cutoff * interval / std::numbers::pi;
}

double interval_for_eta(double uv_cutoff, double eta) {
    return eta * std::numbers::pi / uv_cutoff;
}

std::vector<double> cell_modulation(const PulseTrain& p, double dt, std::size_t steps) {
    std::vector<double> f(steps, 1.0);
    if (!p.enabled) return f;
    for (std::size_t j = 0; j < steps; ++j)
        f[j] = modulation_at((static_cast<double>(j) + 0.5) * dt, p);
    return f;
}

} // namespace qbo::pulses
