// dephasing.cpp — filter-function decoherence exponent
#include "qbo/dephasing.hpp"
#include "qbo/pulses.hpp"
#include "qbo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbo::dephasing {

namespace {

constexpr double pi = std::numbers::pi;

// (1 − cos ωt)·tan²(ωΔt/2) with t = 2𝒩Δt, continued through the poles where
// the numerator vanishes to second order: limit 8𝒩².
double filtered(double omega, double interval, double t, std::size_t pairs) {
    const double x = omega * interval;
    const double c = std::cos(0.5 * x);
    const double n = static_cast<double>(pairs);
    if (std::abs(c) < 1e-7) return 8.0 * n * n;
    const double s = std::sin(0.5 * x);
    const double st = std::sin(0.5 * omega * t);
    return 2.0 * st * st * s * s / (c * c);
}

double unfiltered(double omega, double t) {
    const double st = std::sin(0.5 * omega * t);
    return 2.0 * st * st;
}

std::vector<env::BathMode> modes_for(const DephasingConfig& cfg) {
    if (!cfg.modes.empty()) return cfg.modes;
    return env::sample_discrete_bath(cfg.sd, cfg.mode_count, env::Sampling::linear, cfg.sd.uv_cutoff);
}

template <class F>
double band_integral(const DephasingConfig& cfg, F shape, bool split_poles) {
    const auto& sd = cfg.sd;
    if (sd.coupling == 0.0) return 0.0;
    const double lo = sd.ir_cutoff, hi = sd.uv_cutoff;
    auto f = [&](double w) {
        if (w <= 0.0) return 0.0;
        return env::spectral_density(w, sd) * env::coth_factor(w, sd.temperature) * shape(w) / (w * w);
    };
    std::vector<double> cuts{lo};
    if (split_poles) {
        for (double j = 0;; ++j) {
            const double p = (2.0 * j + 1.0) * pi / cfg.interval;
            if (p >= hi) break;
            if (p > lo) cuts.push_back(p);
        }
    }
    cuts.push_back(hi);
    double total = 0.0;
    const double osc = std::max(cfg.t_final, cfg.interval);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const auto panels = static_cast<std::size_t>(std::ceil((b - a) * osc / (2.0 * pi))) + 4;
        total += quad::integrate(f, a, b, {1e-12, 1e-9}, panels).value;
    }
    return cfg.prefactor * total;
}

} // namespace

void validate(const DephasingConfig& cfg) {
    env::validate(cfg.sd);
    if (!(cfg.interval > 0.0)) throw std::invalid_argument("pulse_interval: must be positive");
    if (!(cfg.t_final >= 0.0)) throw std::invalid_argument("tfinal: must be nonnegative");
    if (cfg.t_final > 0.0) {
        const double n = cfg.t_final / (2.0 * cfg.interval);
        if (std::round(n) < 1.0 || std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
            throw std::invalid_argument("tfinal: must be a positive multiple of twice the pulse interval");
    }
    if (cfg.mode == Mode::discrete && cfg.modes.empty() && cfg.mode_count == 0)
        throw std::invalid_argument("nbath: must be positive in discrete mode");
}

std::size_t pair_count(const DephasingConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.t_final / (2.0 * cfg.interval)));
}

Exponent dephasing_exponent(const DephasingConfig& cfg) {
    validate(cfg);
    Exponent out;
    if (cfg.t_final == 0.0) return out;
    const std::size_t pairs = pair_count(cfg);
    auto shape = [&](double w) { return filtered(w, cfg.interval, cfg.t_final, pairs); };

    if (cfg.mode == Mode::discrete) {
        double s = 0.0;
        for (const auto& m : modes_for(cfg)) {
            const double w = pi * m.coupling * m.coupling / (2.0 * m.mass * m.frequency);
            s += w * env::coth_factor(m.frequency, cfg.sd.temperature) * shape(m.frequency) /
                 (m.frequency * m.frequency);
        }
        out.value = cfg.prefactor * s;
        return out;
    }

    // first pole at or above Λ_IR
    const double lo = cfg.sd.ir_cutoff, hi = cfg.sd.uv_cutoff;
    const double tol = 1e-12 * hi;
    const double first = std::max(0.0, std::ceil((lo * cfg.interval / pi - 1.0) / 2.0 - 1e-12));
    const double pole = (2.0 * first + 1.0) * pi / cfg.interval;
    out.divergent = pole >= lo - tol && pole <= hi + tol;
    out.value = band_integral(cfg, shape, true);
    return out;
}

double free_exponent(const DephasingConfig& cfg) {
    validate(cfg);
    if (cfg.t_final == 0.0) return 0.0;
    if (cfg.mode == Mode::discrete) {
        double s = 0.0;
        for (const auto& m : modes_for(cfg)) {
            const double w = pi * m.coupling * m.coupling / (2.0 * m.mass * m.frequency);
            s += w * env::coth_factor(m.frequency, cfg.sd.temperature) * unfiltered(m.frequency, cfg.t_final) /
                 (m.frequency * m.frequency);
        }
        return cfg.prefactor * s;
    }
    return band_integral(cfg, [&](double w) { return unfiltered(w, cfg.t_final); }, false);
}

std::complex<double> coherence(const Exponent& d, std::complex<double> rho01_initial) {
    if (d.divergent) return {0.0, 0.0};
    return std::exp(-d.value) * rho01_initial;
}

std::complex<double> coherence(const DephasingConfig& cfg, std::complex<double> rho01_initial) {
    return coherence(dephasing_exponent(cfg), rho01_initial);
}

DephasingConfig at_time(const env::SpectralDensity& sd, double interval, double t) {
    DephasingConfig cfg;
    cfg.sd = sd;
    cfg.interval = interval;
    const double n = std::max(1.0, std::round(t / (2.0 * interval)));
    cfg.t_final = 2.0 * n * interval;
    return cfg;
}

Scan crossover_scan(const env::SpectralDensity& sd, double t, const std::vector<double>& intervals,
                    Mode mode) {
    if (!std::is_sorted(intervals.begin(), intervals.end()))
        throw std::invalid_argument("crossover_scan: intervals must be increasing");
    Scan scan;
    bool seen_suppression = false;
    for (double dt : intervals) {
        DephasingConfig cfg = at_time(sd, dt, t);
        cfg.mode = mode;
        ScanRow row;
        row.interval = dt;
        row.eta = pulses::eta_parameter(sd.uv_cutoff, dt);
        row.t_final = cfg.t_final;
        row.pulsed = dephasing_exponent(cfg);
        row.free = free_exponent(cfg);
        const bool suppressed = !row.pulsed.divergent && row.pulsed.value < row.free;
        row.regime = suppressed ? Regime::suppression : Regime::accentuation;
        if (sd.coupling == 0.0) row.regime = Regime::suppression;
        for (int l = 0;; ++l) {
            const double a = (4.0 * l + 1.0) * pi / (2.0 * dt), b = (4.0 * l + 3.0) * pi / (2.0 * dt);
            if (a >= sd.uv_cutoff) break;
            const double lo = std::max(a, sd.ir_cutoff), hi = std::min(b, sd.uv_cutoff);
            if (lo < hi) row.enhanced_bands.emplace_back(lo, hi);
        }
        if (row.regime == Regime::suppression) seen_suppression = true;
        if (row.regime == Regime::accentuation && seen_suppression && !scan.has_crossover && sd.coupling > 0.0) {
            scan.has_crossover = true;
            scan.crossover_eta = row.eta;
        }
        scan.rows.push_back(std::move(row));
    }
    return scan;
}

} // namespace qbo::dephasing
