// oracle.cpp — piecewise-constant quadratic Hamiltonian, exponentiated exactly
#include "qbo/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>

namespace qbo::prop {

namespace {

using MatX = Eigen::MatrixXd;

// Ordering z = (x, q₁..q_N, p, π₁..π_N); ż = J·H·z with H the Hessian of the Hamiltonian.
struct Model {
    std::size_t n;
    double M, W;
    const std::vector<env::BathMode>& modes;

    std::size_t dim() const { return 2 * n + 2; }
    std::size_t xi() const { return 0; }
    std::size_t pi() const { return n + 1; }

    MatX generator(double theta) const {
        const std::size_t d = dim();
        MatX H = MatX::Zero(d, d);
        H(xi(), xi()) = M * W * W;
        H(pi(), pi()) = 1.0 / M;
        const double cx = std::cos(theta), cp = std::sin(theta) / (M * W);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& m = modes[k];
            const std::size_t q = 1 + k, pk = n + 2 + k;
            H(q, q) = m.mass * m.frequency * m.frequency;
            H(pk, pk) = 1.0 / m.mass;
            H(xi(), q) = H(q, xi()) = m.coupling * cx;
            H(pi(), q) = H(q, pi()) = m.coupling * cp;
        }
        MatX JH(d, d);
        const std::size_t h = n + 1;
        JH.topRows(h) = H.bottomRows(h);
        JH.bottomRows(h) = -H.topRows(h);
        return JH;
    }
};

MatX power(MatX base, std::size_t e) {
    MatX out = MatX::Identity(base.rows(), base.cols());
    while (e > 0) {
        if (e & 1u) out = base * out;
        e >>= 1u;
        if (e) base = base * base;
    }
    return out;
}

MatX total_map(const Model& m, const pulses::PulseTrain& p, double t) {
    std::map<std::pair<double, double>, MatX> cache;
    auto seg = [&](double theta, double tau) -> MatX {
        auto key = std::make_pair(theta, tau);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        MatX e = (m.generator(theta) * tau).exp();
        cache.emplace(key, e);
        return e;
    };
    const std::size_t d = m.dim();
    if (t <= 0.0) return MatX::Identity(d, d);
    if (!p.enabled) return seg(0.0, t);

    const double dt = p.interval;
    const auto pairs = static_cast<std::size_t>(std::floor(t / (2.0 * dt) + 1e-12));
    MatX S = MatX::Identity(d, d);
    if (pairs > 0) S = power(seg(0.0, dt) * seg(p.kick_angle, dt), pairs);
    const double rest = t - 2.0 * dt * static_cast<double>(pairs);
    if (rest > 1e-12 * t) {
        if (rest <= dt * (1.0 + 1e-12)) {
            S = seg(p.kick_angle, rest) * S;
        } else {
            S = seg(0.0, rest - dt) * seg(p.kick_angle, dt) * S;
        }
    }
    return S;
}

Model make_model(const SystemParams& eff, const std::vector<env::BathMode>& modes) {
    return {modes.size(), eff.mass, eff.frequency, modes};
}

MatX bath_covariance(const std::vector<env::BathMode>& modes, double T) {
    const std::size_t n = modes.size();
    MatX B = MatX::Zero(2 * n, 2 * n);  // (q₁..q_N, π₁..π_N)
    for (std::size_t k = 0; k < n; ++k) {
        const auto& m = modes[k];
        const double c = env::coth_factor(m.frequency, T);
        B(k, k) = c / (2.0 * m.mass * m.frequency);
        B(n + k, n + k) = 0.5 * m.mass * m.frequency * c;
    }
    return B;
}

} // namespace

ReducedMap oracle_reduced_map(const SystemParams& sys, const std::vector<env::BathMode>& modes,
                              const pulses::PulseTrain& p, double temperature, double t_final) {
    pulses::validate(p);
    const auto eff = effective_system(sys, env::Bath::discrete(modes, temperature, sys.mass));
    const Model m = make_model(eff, modes);
    const MatX S = total_map(m, p, t_final);
    const std::size_t n = modes.size();
    const std::size_t sysidx[2] = {m.xi(), m.pi()};

    ReducedMap out;
    MatX Sb(2, 2 * n);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) out.C(r, c) = S(sysidx[r], sysidx[c]);
        for (std::size_t k = 0; k < n; ++k) {
            Sb(r, k) = S(sysidx[r], 1 + k);
            Sb(r, n + k) = S(sysidx[r], n + 2 + k);
        }
    }
    if (n > 0) {
        const MatX noise = Sb * bath_covariance(modes, temperature) * Sb.transpose();
        out.noise = noise;
        out.noise = 0.5 * (out.noise + out.noise.transpose()).eval();
    }
    return out;
}

GaussianState discrete_oracle_evolve(const SystemParams& sys, const std::vector<env::BathMode>& modes,
                                     const pulses::PulseTrain& p, double temperature, double t_final,
                                     const GaussianState& initial) {
    const auto map = oracle_reduced_map(sys, modes, p, temperature, t_final);
    GaussianState out;
    out.mean = map.C * initial.mean;
    out.cov = map.C * initial.cov * map.C.transpose() + map.noise;
    return out;
}

} // namespace qbo::prop
