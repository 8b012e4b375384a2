// propagator.cpp — Volterra march, boundary matching, Gaussian propagator
#include "qbo/propagator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qbo::prop {

void validate(const SystemParams& sys) {
    if (!(sys.frequency > 0.0) || !std::isfinite(sys.frequency))
        throw std::invalid_argument("omega: must be positive");
    if (!(sys.mass > 0.0) || !std::isfinite(sys.mass)) throw std::invalid_argument("mass: must be positive");
    if (!(sys.field >= 0.0) || !std::isfinite(sys.field)) throw std::invalid_argument("field: must be nonnegative");
}

void validate(const TimeGrid& g) {
    if (!(g.t_final > 0.0) || !std::isfinite(g.t_final)) throw std::invalid_argument("tfinal: must be positive");
    if (g.steps < 16) throw std::invalid_argument("steps: must be at least 16");
}

// H_S → (1+V)H_S: Ω → Ω(1+V), M → M/(1+V). `shift` is added to Ω² in that
// frame; a counterterm cancels the bath-induced shift exactly, so the
// renormalized frequency stays Ω(1+V).
SystemParams constant_field_transform(const SystemParams& sys, double shift) {
    validate(sys);
    SystemParams out;
    const double w = sys.frequency * (1.0 + sys.field);
    const double w2 = w * w + shift;
    if (!(w2 > 0.0)) throw std::invalid_argument("omega: renormalized frequency must be positive");
    out.frequency = std::sqrt(w2);
    out.mass = sys.mass / (1.0 + sys.field);
    return out;
}

// The memory term enters as (2/M_eff)·μ with μ ∝ the bath's reference mass.
SystemParams effective_system(const SystemParams& sys, const env::Bath& bath) {
    if (!sys.counterterms) return constant_field_transform(sys, 0.0);
    const double m_eff = sys.mass / (1.0 + sys.field);
    return constant_field_transform(sys, bath.counterterm() * bath.system_mass() / m_eff);
}

namespace {

void check_grid(const pulses::PulseTrain& p, const TimeGrid& g) {
    validate(g);
    pulses::require_bang_bang(p);
    if (!p.enabled) return;
    const double ratio = p.interval / g.dt();
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || std::round(ratio) < 1.0)
        throw std::invalid_argument("pulse_interval: must be an integer multiple of tfinal/steps");
}

void check_caustic(double omega, double y1, double y2, const char* which) {
    if (std::abs(omega * y2) / std::max(1.0, std::abs(y1)) < 1e-8) {
        std::ostringstream os;
        os << "caustic: " << which << " endpoint matrix is singular (phi2 = " << y2 << ")";
        throw CausticError(os.str());
    }
}

} // namespace

Solver::Solver(const SystemParams& sys, const env::Bath& bath, const pulses::PulseTrain& p,
               const TimeGrid& g)
    : eff_(effective_system(sys, bath)), grid_(g), pulses_(p) {
    check_grid(p, g);
    silent_ = bath.is_silent();
    cells_ = pulses::cell_modulation(p, g.dt(), g.steps);
    if (!silent_) load(bath.tabulate(0.5 * g.dt(), 2 * g.steps + 2));
    forward_ = march(cells_, g.steps);
}

Solver::Solver(const SystemParams& sys, const env::Bath& bath, const pulses::PulseTrain& p,
               const TimeGrid& g, const env::KernelTable& tab)
    : eff_(effective_system(sys, bath)), grid_(g), pulses_(p) {
    check_grid(p, g);
    silent_ = bath.is_silent();
    cells_ = pulses::cell_modulation(p, g.dt(), g.steps);
    if (!silent_) {
        if (std::abs(tab.step - 0.5 * g.dt()) > 1e-12 * tab.step || tab.mu.size() < 2 * g.steps + 2)
            throw std::invalid_argument("kernel table: does not match the time grid");
        load(tab);
    }
    forward_ = march(cells_, g.steps);
}

void Solver::load(const env::KernelTable& tab) {
    const std::size_t n = grid_.steps;
    mu_int_.resize(n + 1);
    mu_odd_.resize(n + 1);
    nu_int_.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        mu_int_[k] = tab.mu[2 * k];
        mu_odd_[k] = tab.mu[2 * k + 1];
        nu_int_[k] = tab.nu[2 * k];
    }
}

// Two initial-value problems, (φ,φ̇)(0) = (1,0) and (0,1), marched by RK4 with
// the memory integral G(t) = ∫₀ᵗ μ(t−s) f(s) φ(s) ds done by the trapezoid rule.
// μ(0) = 0 removes the unknown newest node, so every stage is explicit.
Solver::Paths Solver::march(const std::vector<double>& f, std::size_t n) const {
    const double dt = grid_.dt(), h = 0.5 * dt;
    const double w2 = eff_.frequency * eff_.frequency;
    const double coef = -2.0 / eff_.mass;
    Paths P;
    P.y1.assign(n + 1, 0.0); P.dy1.assign(n + 1, 0.0);
    P.y2.assign(n + 1, 0.0); P.dy2.assign(n + 1, 0.0);
    P.y1[0] = 1.0;
    P.dy2[0] = 1.0;
    std::vector<double> wy1(n + 1, 0.0), wy2(n + 1, 0.0);

    double g1_start = 0.0, g2_start = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double g1_mid = 0.0, g2_mid = 0.0, g1_end = 0.0, g2_end = 0.0;
        const double fk = f[k];
        const double fprev = k > 0 ? f[k - 1] : 0.0;
        if (!silent_) {
            // finalized nodes i < k
            double a1 = 0, a2 = 0, b1 = 0, b2 = 0;
            const double* mo = mu_odd_.data() + k;   // mo[-i] = μ((k−i+½)dt)
            const double* mi = mu_int_.data() + k + 1; // mi[-i] = μ((k+1−i)dt)
            for (std::size_t i = 0; i < k; ++i) {
                const double m_odd = *(mo - i), m_int = *(mi - i);
                a1 += wy1[i] * m_odd;
                a2 += wy2[i] * m_odd;
                b1 += wy1[i] * m_int;
                b2 += wy2[i] * m_int;
            }
            const double w_mid = h * fprev + 0.5 * h * fk;
            const double w_end = h * (fprev + fk);
            g1_mid = a1 + w_mid * P.y1[k] * mu_odd_[0];
            g2_mid = a2 + w_mid * P.y2[k] * mu_odd_[0];
            g1_end = b1 + w_end * P.y1[k] * mu_int_[1];
            g2_end = b2 + w_end * P.y2[k] * mu_int_[1];
        }
        const double c = coef * fk;
        auto step = [&](double y, double v, double g0, double gm, double ge, double& yn, double& vn) {
            const double k1y = v, k1v = -w2 * y + c * g0;
            const double k2y = v + h * k1v, k2v = -w2 * (y + h * k1y) + c * gm;
            const double k3y = v + h * k2v, k3v = -w2 * (y + h * k2y) + c * gm;
            const double k4y = v + dt * k3v, k4v = -w2 * (y + dt * k3y) + c * ge;
            yn = y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            vn = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        };
        step(P.y1[k], P.dy1[k], g1_start, g1_mid, g1_end, P.y1[k + 1], P.dy1[k + 1]);
        step(P.y2[k], P.dy2[k], g2_start, g2_mid, g2_end, P.y2[k + 1], P.dy2[k + 1]);
        wy1[k] = h * (fprev + fk) * P.y1[k];
        wy2[k] = h * (fprev + fk) * P.y2[k];
        g1_start = g1_end;
        g2_start = g2_end;
    }
    return P;
}

PropagatorSolution Solver::at_step(std::size_t n, bool keep_paths) const {
    if (n > grid_.steps) throw std::out_of_range("at_step: beyond the grid");
    PropagatorSolution s;
    s.grid = {grid_.time(n), n};
    s.frequency = eff_.frequency;
    s.mass = eff_.mass;
    if (n == 0) return s;
    const double M = eff_.mass;

    const double p1 = forward_.y1[n], dp1 = forward_.dy1[n];
    const double p2 = forward_.y2[n], dp2 = forward_.dy2[n];
    s.phi1 = p1; s.dphi1 = dp1; s.phi2 = p2; s.dphi2 = dp2;
    check_caustic(eff_.frequency, p1, p2, "retarded");

    // boundary matrix from endpoint velocities of u₁ = φ₁ − (φ₁(t)/φ₂(t))φ₂, u₂ = φ₂/φ₂(t)
    s.u << M * p1 / p2, M * (dp1 - p1 * dp2 / p2),
           -M / p2, M * dp2 / p2;
    const double u21 = s.u(1, 0);
    s.C << s.u(0, 0), 1.0,
           s.u.determinant(), s.u(1, 1);
    s.C *= -1.0 / u21;

    // advanced solutions: same equation with the modulation reversed in time
    std::vector<double> rev(n);
    bool same = true, flipped = true;
    for (std::size_t j = 0; j < n; ++j) {
        rev[j] = cells_[n - 1 - j];
        same = same && rev[j] == cells_[j];
        flipped = flipped && rev[j] == -cells_[j];
    }
    const bool reuse = silent_ || same || flipped;
    Paths back;
    if (!reuse) back = march(rev, n);
    const Paths& psi = reuse ? forward_ : back;
    const double q1 = psi.y1[n], q2 = psi.y2[n];
    check_caustic(eff_.frequency, q1, q2, "advanced");

    std::vector<double> v1(n + 1), v2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        v1[i] = psi.y2[n - i] / q2;
        v2[i] = psi.y1[n - i] - (q1 / q2) * psi.y2[n - i];
    }

    if (!silent_) {
        // a_kl = ½ ΣΣ W_i v_k(i) ν(|i−j|dt) W_j v_l(j), W_i = (dt/2)(f_{i−1}+f_i)
        const double h = 0.5 * grid_.dt();
        std::vector<double> z1(n + 1), z2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double w = h * ((i > 0 ? cells_[i - 1] : 0.0) + (i < n ? cells_[i] : 0.0));
            z1[i] = w * v1[i];
            z2[i] = w * v2[i];
        }
        double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            double y1 = nu_int_[0] * z1[i], y2 = nu_int_[0] * z2[i];
            for (std::size_t j = 0; j < i; ++j) {
                y1 += nu_int_[i - j] * z1[j];
                y2 += nu_int_[i - j] * z2[j];
            }
            for (std::size_t j = i + 1; j <= n; ++j) {
                y1 += nu_int_[j - i] * z1[j];
                y2 += nu_int_[j - i] * z2[j];
            }
            a11 += z1[i] * y1;
            a12 += z1[i] * y2;
            a21 += z2[i] * y1;
            a22 += z2[i] * y2;
        }
        const double sym = 0.25 * (a12 + a21);
        s.a << 0.5 * a11, sym, sym, 0.5 * a22;

        const double u22 = s.u(1, 1);
        const double A11 = s.a(0, 0), A12 = s.a(0, 1), A22 = s.a(1, 1);
        const double pre = 4.0 / (u21 * u21);
        s.Sigma << A11, A11 * u22 - A12 * u21,
                   A11 * u22 - A12 * u21, A11 * u22 * u22 - 2.0 * A12 * u21 * u22 + A22 * u21 * u21;
        s.Sigma *= pre;
    }

    if (keep_paths) {
        s.u1.resize(n + 1);
        s.u2.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s.u1[i] = forward_.y1[i] - (p1 / p2) * forward_.y2[i];
            s.u2[i] = forward_.y2[i] / p2;
        }
        s.v1 = std::move(v1);
        s.v2 = std::move(v2);
    }
    return s;
}

PropagatorSolution solve_homogeneous(const SystemParams& sys, const env::Bath& bath,
                                     const pulses::PulseTrain& p, const TimeGrid& g) {
    Solver solver(sys, bath, p, g);
    auto s = solver.final(true);
    s.a.setZero();
    s.Sigma.setZero();
    return s;
}

PropagatorSolution assemble_coefficients(PropagatorSolution sol, const env::Bath& bath,
                                         const pulses::PulseTrain& p, const TimeGrid& g) {
    check_grid(p, g);
    const std::size_t n = g.steps;
    if (sol.v1.size() != n + 1 || sol.v2.size() != n + 1)
        throw std::invalid_argument("assemble_coefficients: boundary solutions missing");
    const double M = sol.mass;
    const double p1 = sol.phi1, dp1 = sol.dphi1, p2 = sol.phi2, dp2 = sol.dphi2;
    check_caustic(sol.frequency, p1, p2, "retarded");
    sol.u << M * p1 / p2, M * (dp1 - p1 * dp2 / p2), -M / p2, M * dp2 / p2;
    const double u21 = sol.u(1, 0), u22 = sol.u(1, 1);
    sol.C << sol.u(0, 0), 1.0, sol.u.determinant(), u22;
    sol.C *= -1.0 / u21;
    sol.a.setZero();
    sol.Sigma.setZero();
    if (bath.is_silent()) return sol;

    const auto tab = bath.tabulate(g.dt(), n + 1);
    const auto cells = pulses::cell_modulation(p, g.dt(), n);
    const double h = 0.5 * g.dt();
    std::vector<double> z1(n + 1), z2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = h * ((i > 0 ? cells[i - 1] : 0.0) + (i < n ? cells[i] : 0.0));
        z1[i] = w * sol.v1[i];
        z2[i] = w * sol.v2[i];
    }
    Mat2 a = Mat2::Zero();
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) {
            const double nu = tab.nu[i > j ? i - j : j - i];
            a(0, 0) += z1[i] * nu * z1[j];
            a(0, 1) += z1[i] * nu * z2[j];
            a(1, 1) += z2[i] * nu * z2[j];
        }
    a *= 0.5;
    a(1, 0) = a(0, 1);
    sol.a = a;
    sol.Sigma << a(0, 0), a(0, 0) * u22 - a(0, 1) * u21,
                 a(0, 0) * u22 - a(0, 1) * u21, a(0, 0) * u22 * u22 - 2.0 * a(0, 1) * u21 * u22 + a(1, 1) * u21 * u21;
    sol.Sigma *= 4.0 / (u21 * u21);
    return sol;
}

GaussianState propagate_gaussian(const GaussianState& in, const PropagatorSolution& sol) {
    GaussianState out;
    out.mean = sol.C * in.mean;
    out.cov = sol.C * in.cov * sol.C.transpose() + 0.5 * sol.Sigma;
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

} // namespace qbo::prop
