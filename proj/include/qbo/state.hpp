// state.hpp — Gaussian moments, Fock-basis reconstruction and qubit observables
#pragma once

#include "qbo/poly2.hpp"
#include "qbo/propagator.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qbo::state {

// a = √(κ/2) R + i P/√(2κ) with κ = MΩ of the reference oscillator.
struct GaussianMoments {
    double mean_R = 0.0, mean_P = 0.0;
    double cov_RR = 0.5, cov_PP = 0.5, cov_RP = 0.0;
    double kappa = 1.0;
    cplx m_aa{0.0, 0.0};    // ⟨a²⟩
    cplx m_aad{1.0, 0.0};   // ⟨a a†⟩
};

struct FockDensity {
    int cap = 6;
    Eigen::MatrixXcd rho;
    double trace_deficit() const { return 1.0 - rho.diagonal().real().sum(); }
};

struct UncertaintyReport {
    double A = 0.5;
    double var_R = 0.5, var_P = 0.5, cov_RP = 0.0;
};

struct PauliExpectations {
    double sx = 0.0, sy = 0.0, sz = -1.0;
};

// Characteristic function χ_W(k) = ⟨exp(i(k_R R + k_P P))⟩ of the form
// poly(k)·exp(i kᵀX̄ − ½ kᵀVk). Gaussian states have poly ≡ 1; finite Fock
// superpositions are exactly of this form with V the vacuum covariance.
struct PhaseSpaceState {
    Poly2 poly{cplx{1.0, 0.0}};
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Identity() * 0.5;
    double kappa = 1.0;
};

Eigen::Matrix2d vacuum_covariance(double kappa);

PhaseSpaceState gaussian_state(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov, double kappa);
// Σ c_n |n⟩ (normalized internally)
PhaseSpaceState fock_superposition(const std::vector<cplx>& amplitudes, double kappa);

// X → C X + noise with noise covariance Σ/2.
PhaseSpaceState evolve(const PhaseSpaceState& s, const Eigen::Matrix2d& C, const Eigen::Matrix2d& Sigma);

// First and (symmetrized) second moments of any PhaseSpaceState.
void moments(const PhaseSpaceState& s, Eigen::Vector2d& mean, Eigen::Matrix2d& cov);

GaussianMoments moments_from_gaussian(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov, double kappa);
GaussianMoments moments_of(const PhaseSpaceState& s);

cplx fock_element(const GaussianMoments& m, int k, int l);
cplx fock_element(const PhaseSpaceState& s, int k, int l);
FockDensity fock_density(const PhaseSpaceState& s, int cap = 6);
FockDensity fock_density(const GaussianMoments& m, int cap = 6);

PauliExpectations pauli_expectations(const FockDensity& rho);
double leakage(const FockDensity& rho);
double decay_factor(const FockDensity& rho);

UncertaintyReport uncertainty(const GaussianMoments& m);
// m_aad² − |m_aa|² − [A² + (κ⟨R²⟩ + ⟨P²⟩/κ)/2 + ¼]; zero for mean-zero states
double uncertainty_identity_residual(const GaussianMoments& m);

// Split of ⟨a²⟩ (κ = 1, vacuum start) into the part carried by the mean
// transport C and the part induced by the fluctuation matrix Σ.
struct TrajectorySplit {
    cplx c;
    cplx sigma;
};
TrajectorySplit trajectory_split(const Eigen::Matrix2d& C, const Eigen::Matrix2d& Sigma);

} // namespace qbo::state
