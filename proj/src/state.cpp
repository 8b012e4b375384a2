// state.cpp — phase-space states to Fock-basis observables
#include "qbo/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbo::state {

namespace {

constexpr cplx I{0.0, 1.0};

double factorial(int n) { return std::tgamma(n + 1.0); }
double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// ξ(k) with D(ξ) = exp(−i(k_R R + k_P P))
cplx xi_r(double kappa) { return -I / std::sqrt(2.0 * kappa); }
cplx xi_p(double kappa) { return cplx{std::sqrt(0.5 * kappa), 0.0}; }

// Polynomial factor of ⟨n|D(s·ξ(k))|m⟩ (the Gaussian e^{−|ξ|²/2} is left out).
Poly2 displacement_poly(int n, int m, double kappa, double s) {
    const cplx ar = s * xi_r(kappa), ap = s * xi_p(kappa);
    const Poly2 xi = Poly2::linear(ar, ap);
    const Poly2 xib = Poly2::linear(std::conj(ar), std::conj(ap));
    const Poly2 x = xi * xib;  // |ξ|²
    const int lo = std::min(n, m), d = std::abs(n - m);
    Poly2 lag;  // L_lo^{(d)}(|ξ|²)
    Poly2 xp(cplx{1.0, 0.0});
    for (int j = 0; j <= lo; ++j) {
        lag = lag + xp * cplx{(j % 2 ? -1.0 : 1.0) * binom(lo + d, lo - j) / factorial(j), 0.0};
        xp = xp * x;
    }
    const double norm = std::sqrt(factorial(lo) / factorial(lo + d));
    const Poly2 lead = m >= n ? (xib * cplx{-1.0, 0.0}).pow(d) : xi.pow(d);
    return lead * lag * cplx{norm, 0.0};
}

void check_physical(const Eigen::Matrix2d& cov) {
    if (!(cov(0, 0) > 0.0) || !(cov(1, 1) > 0.0) ||
        cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(0, 1) < 0.25 - 1e-9)
        throw std::invalid_argument("covariance violates the uncertainty bound");
}

// Gaussian-weighted expectation table E[k_R^a k_P^b], k ~ N(μ, S) with complex μ.
struct MomentTable {
    std::vector<std::vector<cplx>> e;
    MomentTable(const Eigen::Vector2cd& mu, const Eigen::Matrix2d& S, int deg) : e(deg + 1) {
        for (int a = 0; a <= deg; ++a) e[a].assign(deg + 1 - a, cplx{});
        e[0][0] = 1.0;
        for (int total = 1; total <= deg; ++total)
            for (int a = 0; a <= total; ++a) {
                const int b = total - a;
                if (a > 0) {
                    const int a0 = a - 1;
                    cplx v = mu(0) * e[a0][b];
                    if (a0 > 0) v += double(a0) * S(0, 0) * e[a0 - 1][b];
                    if (b > 0) v += double(b) * S(0, 1) * e[a0][b - 1];
                    e[a][b] = v;
                } else {
                    const int b0 = b - 1;
                    cplx v = mu(1) * e[0][b0];
                    if (b0 > 0) v += double(b0) * S(1, 1) * e[0][b0 - 1];
                    e[0][b] = v;
                }
            }
    }
    cplx expect(const Poly2& p) const {
        cplx s{};
        for (int a = 0; a <= p.degree(); ++a)
            for (int b = 0; a + b <= p.degree(); ++b) s += p.coeff(a, b) * e[a][b];
        return s;
    }
};

// ρ_nm = (1/2π)∫ d²k χ_W(k) ⟨n|D(ξ(k))|m⟩, done as a Gaussian expectation
class FockIntegrator {
public:
    FockIntegrator(const PhaseSpaceState& s, int max_level)
        : s_(s), table_(init(s, max_level)) {}

    cplx element(int n, int m) const {
        return pref_ * table_.expect(s_.poly * displacement_poly(n, m, s_.kappa, 1.0));
    }

private:
    MomentTable init(const PhaseSpaceState& s, int max_level) {
        const Eigen::Matrix2d A = s.cov + vacuum_covariance(s.kappa);
        const double det = A.determinant();
        if (!(det > 0.0) || !(A(0, 0) > 0.0)) throw std::invalid_argument("non-normalizable phase-space state");
        const Eigen::Matrix2d Ainv = A.inverse();
        pref_ = std::exp(-0.5 * s.mean.dot(Ainv * s.mean)) / std::sqrt(det);
        const Eigen::Vector2cd mu = I * (Ainv * s.mean).cast<cplx>();
        return MomentTable(mu, Ainv, std::max(s.poly.degree(), 0) + 2 * max_level);
    }

    const PhaseSpaceState& s_;
    double pref_ = 1.0;
    MomentTable table_;
};

} // namespace

Eigen::Matrix2d vacuum_covariance(double kappa) {
    Eigen::Matrix2d v;
    v << 0.5 / kappa, 0.0, 0.0, 0.5 * kappa;
    return v;
}

PhaseSpaceState gaussian_state(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa: must be positive");
    check_physical(cov);
    PhaseSpaceState s;
    s.mean = mean;
    s.cov = 0.5 * (cov + cov.transpose());
    s.kappa = kappa;
    return s;
}

PhaseSpaceState fock_superposition(const std::vector<cplx>& amplitudes, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa: must be positive");
    double norm = 0.0;
    for (const auto& c : amplitudes) norm += std::norm(c);
    if (!(norm > 0.0)) throw std::invalid_argument("initial state: amplitudes must not all vanish");
    PhaseSpaceState s;
    s.kappa = kappa;
    s.cov = vacuum_covariance(kappa);
    s.poly = Poly2();
    // χ_W(k) = Tr ρ D(−ξ(k)) = Σ c_n c̄_m ⟨m|D(−ξ)|n⟩
    const int n_max = static_cast<int>(amplitudes.size());
    for (int n = 0; n < n_max; ++n)
        for (int m = 0; m < n_max; ++m) {
            const cplx w = amplitudes[n] * std::conj(amplitudes[m]) / norm;
            if (w == cplx{}) continue;
            s.poly = s.poly + displacement_poly(m, n, kappa, -1.0) * w;
        }
    return s;
}

PhaseSpaceState evolve(const PhaseSpaceState& s, const Eigen::Matrix2d& C, const Eigen::Matrix2d& Sigma) {
    PhaseSpaceState out = s;
    out.poly = s.poly.substitute(C(0, 0), C(1, 0), C(0, 1), C(1, 1));  // poly(Cᵀk)
    out.mean = C * s.mean;
    out.cov = C * s.cov * C.transpose() + 0.5 * Sigma;
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

void moments(const PhaseSpaceState& s, Eigen::Vector2d& mean, Eigen::Matrix2d& cov) {
    const auto& P = s.poly;
    const double mr = s.mean(0), mp = s.mean(1);
    const cplx g10 = I * mr, g01 = I * mp;
    const double g20 = -0.5 * (s.cov(0, 0) + mr * mr);
    const double g11 = -(s.cov(0, 1) + mr * mp);
    const double g02 = -0.5 * (s.cov(1, 1) + mp * mp);
    const cplx c00 = P.coeff(0, 0);
    const cplx c10 = P.coeff(1, 0) + c00 * g10;
    const cplx c01 = P.coeff(0, 1) + c00 * g01;
    const cplx c20 = P.coeff(2, 0) + P.coeff(1, 0) * g10 + c00 * g20;
    const cplx c02 = P.coeff(0, 2) + P.coeff(0, 1) * g01 + c00 * g02;
    const cplx c11 = P.coeff(1, 1) + P.coeff(1, 0) * g01 + P.coeff(0, 1) * g10 + c00 * g11;
    mean << (-I * c10 / c00).real(), (-I * c01 / c00).real();
    const double rr = (-2.0 * c20 / c00).real(), pp = (-2.0 * c02 / c00).real();
    const double rp = (-c11 / c00).real();
    cov << rr - mean(0) * mean(0), rp - mean(0) * mean(1),
           rp - mean(0) * mean(1), pp - mean(1) * mean(1);
}

GaussianMoments moments_from_gaussian(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov, double kappa) {
    check_physical(cov);
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa: must be positive");
    GaussianMoments m;
    m.mean_R = mean(0);
    m.mean_P = mean(1);
    m.cov_RR = cov(0, 0);
    m.cov_PP = cov(1, 1);
    m.cov_RP = 0.5 * (cov(0, 1) + cov(1, 0));
    m.kappa = kappa;
    const double rr = m.cov_RR + m.mean_R * m.mean_R;
    const double pp = m.cov_PP + m.mean_P * m.mean_P;
    const double rp = m.cov_RP + m.mean_R * m.mean_P;
    m.m_aa = cplx{0.5 * kappa * rr - pp / (2.0 * kappa), rp};
    m.m_aad = cplx{0.5 * kappa * rr + pp / (2.0 * kappa) + 0.5, 0.0};
    return m;
}

GaussianMoments moments_of(const PhaseSpaceState& s) {
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
    moments(s, mean, cov);
    return moments_from_gaussian(mean, cov, s.kappa);
}

namespace {
PhaseSpaceState as_state(const GaussianMoments& m) {
    Eigen::Vector2d mean(m.mean_R, m.mean_P);
    Eigen::Matrix2d cov;
    cov << m.cov_RR, m.cov_RP, m.cov_RP, m.cov_PP;
    return gaussian_state(mean, cov, m.kappa);
}
} // namespace

cplx fock_element(const PhaseSpaceState& s, int k, int l) {
    if (k < 0 || l < 0) throw std::invalid_argument("fock_element: negative level");
    return FockIntegrator(s, std::max(k, l)).element(k, l);
}

cplx fock_element(const GaussianMoments& m, int k, int l) { return fock_element(as_state(m), k, l); }

FockDensity fock_density(const PhaseSpaceState& s, int cap) {
    if (cap < 1) throw std::invalid_argument("level_cap: must be at least 1");
    FockIntegrator fi(s, cap);
    FockDensity d;
    d.cap = cap;
    d.rho.resize(cap + 1, cap + 1);
    for (int k = 0; k <= cap; ++k)
        for (int l = k; l <= cap; ++l) {
            d.rho(k, l) = fi.element(k, l);
            d.rho(l, k) = std::conj(d.rho(k, l));
        }
    for (int k = 0; k <= cap; ++k) d.rho(k, k) = d.rho(k, k).real();
    return d;
}

FockDensity fock_density(const GaussianMoments& m, int cap) { return fock_density(as_state(m), cap); }

PauliExpectations pauli_expectations(const FockDensity& rho) {
    if (rho.cap < 1) throw std::invalid_argument("pauli: level cap must be at least 1");
    PauliExpectations p;
    const cplx r01 = rho.rho(0, 1), r10 = rho.rho(1, 0);
    p.sx = (r01 + r10).real();
    p.sy = (I * (r10 - r01)).real();
    p.sz = (rho.rho(1, 1) - rho.rho(0, 0)).real();
    return p;
}

double leakage(const FockDensity& rho) {
    if (rho.cap < 2) throw std::invalid_argument("leakage: level cap must be at least 2");
    return std::clamp(1.0 - rho.rho(0, 0).real() - rho.rho(1, 1).real(), 0.0, 1.0);
}

double decay_factor(const FockDensity& rho) {
    const double p1 = rho.rho(1, 1).real();
    if (!(p1 > 0.0)) throw std::domain_error("decay_factor: first excited population is not positive");
    return -std::log(p1);
}

UncertaintyReport uncertainty(const GaussianMoments& m) {
    UncertaintyReport r;
    r.var_R = m.cov_RR;
    r.var_P = m.cov_PP;
    r.cov_RP = m.cov_RP;
    r.A = std::sqrt(std::max(0.0, m.cov_RR * m.cov_PP - m.cov_RP * m.cov_RP));
    return r;
}

double uncertainty_identity_residual(const GaussianMoments& m) {
    const double a2 = m.cov_RR * m.cov_PP - m.cov_RP * m.cov_RP;
    const double rr = m.cov_RR + m.mean_R * m.mean_R, pp = m.cov_PP + m.mean_P * m.mean_P;
    const double lhs = std::norm(m.m_aad) - std::norm(m.m_aa);
    return lhs - (a2 + 0.5 * (m.kappa * rr + pp / m.kappa) + 0.25);
}

TrajectorySplit trajectory_split(const Eigen::Matrix2d& C, const Eigen::Matrix2d& Sigma) {
    TrajectorySplit s;
    s.c = cplx{0.25 * ((C(0, 0) * C(0, 0) + C(0, 1) * C(0, 1)) - (C(1, 0) * C(1, 0) + C(1, 1) * C(1, 1))),
               0.5 * (C(0, 0) * C(1, 0) + C(0, 1) * C(1, 1))};
    s.sigma = cplx{0.25 * (Sigma(0, 0) - Sigma(1, 1)), 0.5 * Sigma(0, 1)};
    return s;
}

} // namespace qbo::state
