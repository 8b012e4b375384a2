// propagator.hpp — nonlocal Euler–Lagrange solver and Gaussian Wigner propagator
#pragma once

#include "qbo/environment.hpp"
#include "qbo/pulses.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbo::prop {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

struct SystemParams {
    double frequency = 1.0;      // Ω (physical, before counterterms)
    double mass = 1.0;           // M
    bool counterterms = false;   // add δΩ² to Ω² before anything else
    double field = 0.0;          // constant field V, 0 = off

    bool operator==(const SystemParams&) const = default;
};

struct TimeGrid {
    double t_final = 1.0;
    std::size_t steps = 1024;

    double dt() const { return t_final / static_cast<double>(steps); }
    double time(std::size_t n) const { return t_final * static_cast<double>(n) / static_cast<double>(steps); }
    bool operator==(const TimeGrid&) const = default;
};

// The endpoint combination of the two initial-value solutions is singular.
class CausticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PropagatorSolution {
    TimeGrid grid;
    double frequency = 1.0;  // effective Ω used by the solver
    double mass = 1.0;       // effective M used by the solver
    // initial-value solutions at the final time: φ₁, φ̇₁, φ₂, φ̇₂
    double phi1 = 1.0, dphi1 = 0.0, phi2 = 0.0, dphi2 = 1.0;
    std::vector<double> u1, u2;  // retarded boundary solutions on the grid
    std::vector<double> v1, v2;  // advanced boundary solutions on the grid
    Mat2 a = Mat2::Zero();
    Mat2 u = Mat2::Zero();
    Mat2 C = Mat2::Identity();
    Mat2 Sigma = Mat2::Zero();
};

struct GaussianState {
    Vec2 mean = Vec2::Zero();
    Mat2 cov = Mat2::Identity();
};

void validate(const SystemParams& sys);
void validate(const TimeGrid& g);

// H_S → (1+V)H_S: M → M/(1+V), Ω → Ω(1+V); `shift` is then added to Ω²
// (the counterterm in that frame). The result has counterterms/field cleared.
SystemParams constant_field_transform(const SystemParams& sys, double shift = 0.0);

// Parameters the solver actually integrates with (counterterm + field applied).
SystemParams effective_system(const SystemParams& sys, const env::Bath& bath);

// Solves the pulse-modified Euler–Lagrange equations on the whole grid.
PropagatorSolution solve_homogeneous(const SystemParams& sys, const env::Bath& bath,
                                     const pulses::PulseTrain& p, const TimeGrid& g);
// Fills a, u, C and Σ from the boundary solutions.
PropagatorSolution assemble_coefficients(PropagatorSolution sol, const env::Bath& bath,
                                         const pulses::PulseTrain& p, const TimeGrid& g);

GaussianState propagate_gaussian(const GaussianState& in, const PropagatorSolution& sol);

// Reusable solver: kernels tabulated and the forward march done once, then
// propagators for any grid time are assembled on demand.
class Solver {
public:
    Solver(const SystemParams& sys, const env::Bath& bath, const pulses::PulseTrain& p,
           const TimeGrid& g);
    // Reuses a kernel table tabulated at step dt/2 with at least 2·steps+2
    // entries (sweeps over pulses or fields on a fixed grid share one).
    Solver(const SystemParams& sys, const env::Bath& bath, const pulses::PulseTrain& p,
           const TimeGrid& g, const env::KernelTable& half_step_table);

    const TimeGrid& grid() const noexcept { return grid_; }
    const SystemParams& effective() const noexcept { return eff_; }

    // Propagator from 0 to grid time n·dt (n ≥ 1). With `keep_paths` the
    // boundary solutions are stored in the result.
    PropagatorSolution at_step(std::size_t n, bool keep_paths = false) const;
    PropagatorSolution final(bool keep_paths = true) const { return at_step(grid_.steps, keep_paths); }

    struct Paths {
        std::vector<double> y1, dy1, y2, dy2;
    };

private:
    void load(const env::KernelTable& tab);
    Paths march(const std::vector<double>& cells, std::size_t n) const;

    SystemParams eff_;
    TimeGrid grid_;
    pulses::PulseTrain pulses_;
    bool silent_ = true;
    std::vector<double> mu_int_, mu_odd_, nu_int_;
    std::vector<double> cells_;
    Paths forward_;
};

} // namespace qbo::prop
