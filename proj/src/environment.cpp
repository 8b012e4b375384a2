// environment.cpp — spectral densities, kernels and their tabulation
#include "qbo/environment.hpp"
#include "qbo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qbo::env {

namespace {

constexpr double pi = std::numbers::pi;

// upper end of the substituted variable u = ω/Λ_UV; the tail beyond is < 1e-13 relative
double u_upper(const SpectralDensity& sd) { return 36.0 + 2.0 * std::max(sd.exponent, 0.0); }
double u_lower(const SpectralDensity& sd) { return sd.ir_cutoff / sd.uv_cutoff; }

[[noreturn]] void bad(const char* field, const std::string& why) {
    throw std::invalid_argument(std::string(field) + ": " + why);
}

std::size_t oscillation_panels(double lam, double t, double span) {
    return static_cast<std::size_t>(std::ceil(lam * std::abs(t) * span / (2.0 * pi))) + 8;
}

// ∫ I(ω) w(ω) g(ωt) dω in u = ω/Λ; `weight` multiplies I (coth or 1)
template <class G>
double kernel_integral(const SpectralDensity& sd, double t, bool thermal, G g) {
    validate(sd);
    if (sd.coupling == 0.0) return 0.0;
    const double lam = sd.uv_cutoff;
    const double lo = u_lower(sd), hi = u_upper(sd);
    auto f = [&](double u) {
        const double w = lam * u;
        double v = spectral_density(w, sd);
        if (v == 0.0) return 0.0;
        if (thermal) v *= coth_factor(w, sd.temperature);
        return v * g(w * t);
    };
    const auto r = quad::integrate(f, lo, hi, {}, oscillation_panels(lam, t, hi - lo));
    return lam * r.value / pi;
}

} // namespace

void validate(const SpectralDensity& sd) {
    if (!(sd.uv_cutoff > 0.0) || !std::isfinite(sd.uv_cutoff)) bad("uv_cutoff", "must be positive");
    if (!(sd.ir_cutoff >= 0.0)) bad("ir_cutoff", "must be nonnegative");
    if (!(sd.ir_cutoff < sd.uv_cutoff)) bad("ir_cutoff", "must be below uv_cutoff");
    if (!(sd.coupling >= 0.0) || !std::isfinite(sd.coupling)) bad("gamma", "must be nonnegative");
    if (!(sd.mass > 0.0) || !std::isfinite(sd.mass)) bad("mass", "must be positive");
    if (!(sd.temperature >= 0.0) || !std::isfinite(sd.temperature)) bad("temperature", "must be nonnegative");
    if (!std::isfinite(sd.exponent)) bad("exponent", "must be finite");
    if (sd.exponent <= 0.0 && sd.ir_cutoff <= 0.0)
        bad("ir_cutoff", "must be positive for exponent <= 0 (IR divergence)");
}

double spectral_density(double omega, const SpectralDensity& sd) {
    if (!(omega >= 0.0)) throw std::invalid_argument("spectral_density: negative frequency");
    if (omega < sd.ir_cutoff || omega == 0.0) return 0.0;
    return 2.0 * sd.mass * sd.coupling * std::pow(omega, sd.exponent) * std::exp(-omega / sd.uv_cutoff);
}

double coth_factor(double omega, double temperature) {
    if (temperature <= 0.0) return 1.0;
    const double x = omega / (2.0 * temperature);
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    if (x > 20.0) return 1.0;
    return 1.0 / std::tanh(x);
}

double dissipation_kernel(double t, const SpectralDensity& sd) {
    if (!std::isfinite(t)) throw std::invalid_argument("dissipation_kernel: non-finite time");
    if (t == 0.0) return 0.0;
    return -kernel_integral(sd, t, false, [](double x) { return std::sin(x); });
}

double noise_kernel(double t, const SpectralDensity& sd) {
    if (!std::isfinite(t)) throw std::invalid_argument("noise_kernel: non-finite time");
    return kernel_integral(sd, std::abs(t), true, [](double x) { return std::cos(x); });
}

std::vector<BathMode> sample_discrete_bath(const SpectralDensity& sd, std::size_t count,
                                           Sampling scheme, double omega_max) {
    validate(sd);
    if (count == 0) throw std::invalid_argument("nbath: must be at least 1");
    if (omega_max <= 0.0) omega_max = default_band_factor * sd.uv_cutoff;
    double lo = sd.ir_cutoff;
    if (scheme == Sampling::log && lo <= 0.0) lo = 1e-3 * sd.uv_cutoff;
    if (!(omega_max > lo)) throw std::invalid_argument("omega_max: must exceed the lower band edge");

    std::vector<double> edges(count + 1);
    for (std::size_t n = 0; n <= count; ++n) {
        const double s = static_cast<double>(n) / static_cast<double>(count);
        edges[n] = scheme == Sampling::linear ? lo + s * (omega_max - lo)
                                              : lo * std::pow(omega_max / lo, s);
    }
    std::vector<BathMode> modes(count);
    for (std::size_t n = 0; n < count; ++n) {
        const double a = edges[n], b = edges[n + 1];
        BathMode& m = modes[n];
        m.frequency = scheme == Sampling::linear ? 0.5 * (a + b) : std::sqrt(a * b);
        m.mass = 1.0;
        double weight = 0.0;
        if (sd.coupling > 0.0) {
            auto f = [&](double w) { return spectral_density(w, sd); };
            weight = quad::integrate(f, a, b, {1e-14, 1e-12}, 4).value;
        }
        m.coupling = std::sqrt(2.0 * m.mass * m.frequency * weight / pi);
    }
    return modes;
}

double mode_dissipation_kernel(double t, const std::vector<BathMode>& modes) {
    double s = 0.0;
    for (const auto& m : modes)
        s -= m.coupling * m.coupling / (2.0 * m.mass * m.frequency) * std::sin(m.frequency * t);
    return s;
}

double mode_noise_kernel(double t, const std::vector<BathMode>& modes, double temperature) {
    double s = 0.0;
    for (const auto& m : modes)
        s += m.coupling * m.coupling / (2.0 * m.mass * m.frequency) *
             coth_factor(m.frequency, temperature) * std::cos(m.frequency * t);
    return s;
}

double counterterm_frequency(const SpectralDensity& sd) {
    validate(sd);
    if (sd.coupling == 0.0) return 0.0;
    const double lam = sd.uv_cutoff;
    // ∫ I/ω dω = Λ ∫ I(Λu)/(Λu) du
    auto f = [&](double u) {
        const double w = lam * u;
        return w > 0.0 ? spectral_density(w, sd) / w : 0.0;
    };
    const auto r = quad::integrate(f, u_lower(sd), u_upper(sd), {}, 16);
    return 2.0 / (pi * sd.mass) * lam * r.value;
}

// ---------------------------------------------------------------------------

Bath Bath::continuum(const SpectralDensity& sd) {
    validate(sd);
    Bath b;
    b.sd_ = sd;
    return b;
}

Bath Bath::discrete(std::vector<BathMode> modes, double temperature, double system_mass) {
    for (const auto& m : modes)
        if (!(m.frequency > 0.0) || !(m.mass > 0.0))
            throw std::invalid_argument("bath mode: frequency and mass must be positive");
    if (!(temperature >= 0.0)) throw std::invalid_argument("temperature: must be nonnegative");
    if (!(system_mass > 0.0)) throw std::invalid_argument("mass: must be positive");
    Bath b;
    b.discrete_ = true;
    b.modes_ = std::move(modes);
    b.temperature_ = temperature;
    b.mass_ = system_mass;
    b.sd_.coupling = 0.0;
    return b;
}

bool Bath::is_silent() const noexcept {
    if (!discrete_) return sd_.coupling == 0.0;
    return std::all_of(modes_.begin(), modes_.end(), [](const BathMode& m) { return m.coupling == 0.0; });
}

double Bath::counterterm() const {
    if (!discrete_) return counterterm_frequency(sd_);
    double s = 0.0;
    for (const auto& m : modes_) s += m.coupling * m.coupling / (m.mass * m.frequency * m.frequency);
    return s / mass_;
}

namespace {

struct Nodes {
    std::vector<double> omega, w_mu, w_nu;  // weights already include envelopes and 1/π
};

// Evaluates μ_k = −Σ w_mu sin(ω t_k), ν_k = Σ w_nu cos(ω t_k) by phase rotation,
// re-seeding the phasors exactly every block to bound drift.
void sum_nodes(const Nodes& nd, double step, std::size_t count, KernelTable& out) {
    const std::size_t n = nd.omega.size();
    std::vector<double> c(n), s(n), rc(n), rs(n);
    for (std::size_t j = 0; j < n; ++j) {
        rc[j] = std::cos(nd.omega[j] * step);
        rs[j] = std::sin(nd.omega[j] * step);
    }
    constexpr std::size_t reseed = 64;
    for (std::size_t k = 0; k < count; ++k) {
        if (k % reseed == 0) {
            const double t = step * static_cast<double>(k);
            for (std::size_t j = 0; j < n; ++j) {
                c[j] = std::cos(nd.omega[j] * t);
                s[j] = std::sin(nd.omega[j] * t);
            }
        }
        double mu0 = 0, mu1 = 0, nu0 = 0, nu1 = 0;
        std::size_t j = 0;
        for (; j + 1 < n; j += 2) {
            mu0 += nd.w_mu[j] * s[j];
            mu1 += nd.w_mu[j + 1] * s[j + 1];
            nu0 += nd.w_nu[j] * c[j];
            nu1 += nd.w_nu[j + 1] * c[j + 1];
        }
        if (j < n) {
            mu0 += nd.w_mu[j] * s[j];
            nu0 += nd.w_nu[j] * c[j];
        }
        out.mu[k] = -(mu0 + mu1);
        out.nu[k] = nu0 + nu1;
        for (std::size_t i = 0; i < n; ++i) {
            const double cn = c[i] * rc[i] - s[i] * rs[i];
            s[i] = s[i] * rc[i] + c[i] * rs[i];
            c[i] = cn;
        }
    }
    if (count > 0) out.mu[0] = 0.0;
}

// Fixed Kronrod panels in u, fine enough that one panel spans at most
// `phase` radians of oscillation at the longest tabulated time.
Nodes continuum_nodes(const SpectralDensity& sd, double t_max, double phase) {
    const auto& rule = quad::kronrod15();
    const double lam = sd.uv_cutoff;
    const double lo = u_lower(sd), hi = u_upper(sd);
    const double w_osc = t_max > 0.0 ? phase / (lam * t_max) : hi - lo;

    std::vector<double> edges{lo};
    double u = lo;
    if (lo == 0.0) {  // geometric grading towards a possible power-law endpoint
        for (double e = 1e-7; e < std::min(0.25, w_osc); e *= 2.0) edges.push_back(e);
        u = edges.back();
    }
    while (u < hi) {
        double w = std::min({w_osc, 0.5, u > 0.0 ? 0.5 * u : 0.5});
        u = std::min(hi, u + w);
        edges.push_back(u);
    }

    Nodes nd;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double c = 0.5 * (edges[p] + edges[p + 1]);
        const double h = 0.5 * (edges[p + 1] - edges[p]);
        for (std::size_t i = 0; i < 15; ++i) {
            const double om = lam * (c + h * rule.nodes[i]);
            const double I = spectral_density(om, sd);
            if (I == 0.0) continue;
            const double base = rule.kronrod[i] * h * lam / pi * I;
            nd.omega.push_back(om);
            nd.w_mu.push_back(base);
            nd.w_nu.push_back(base * coth_factor(om, sd.temperature));
        }
    }
    return nd;
}

} // namespace

KernelTable Bath::tabulate(double step, std::size_t count) const {
    KernelTable tab;
    tab.step = step;
    tab.mu.assign(count, 0.0);
    tab.nu.assign(count, 0.0);
    if (count == 0 || is_silent()) return tab;

    if (discrete_) {
        Nodes nd;
        for (const auto& m : modes_) {
            const double w = m.coupling * m.coupling / (2.0 * m.mass * m.frequency);
            nd.omega.push_back(m.frequency);
            nd.w_mu.push_back(w);
            nd.w_nu.push_back(w * coth_factor(m.frequency, temperature_));
        }
        sum_nodes(nd, step, count, tab);
        return tab;
    }

    // The panel rule is least accurate at the longest time; verify there (and at an
    // interior time) against the adaptive integrator and refine until it agrees.
    const double t_max = step * static_cast<double>(count - 1);
    const std::vector<double> probes{t_max, 0.37 * t_max};
    std::vector<double> ref_mu, ref_nu;
    for (double t : probes) {
        ref_mu.push_back(dissipation_kernel(t, sd_));
        ref_nu.push_back(noise_kernel(t, sd_));
    }
    const double scale = std::abs(noise_kernel(0.0, sd_));
    double phase = 1.5 * pi;
    for (int attempt = 0; attempt < 4; ++attempt, phase *= 0.5) {
        const Nodes nd = continuum_nodes(sd_, t_max, phase);
        double worst = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const Nodes& n = nd;
            double m = 0.0, v = 0.0;
            for (std::size_t j = 0; j < n.omega.size(); ++j) {
                m -= n.w_mu[j] * std::sin(n.omega[j] * probes[i]);
                v += n.w_nu[j] * std::cos(n.omega[j] * probes[i]);
            }
            worst = std::max({worst, std::abs(m - ref_mu[i]), std::abs(v - ref_nu[i])});
        }
        if (worst <= std::max(1e-9, 1e-8 * scale)) {
            sum_nodes(nd, step, count, tab);
            return tab;
        }
        if (attempt == 3) {
            std::ostringstream os;
            os << "kernel tabulation did not reach tolerance: deviation " << worst;
            throw quad::QuadratureError(os.str(), 0.0, worst);
        }
    }
    return tab;
}

} // namespace qbo::env
