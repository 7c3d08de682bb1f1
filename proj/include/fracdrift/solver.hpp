#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracdrift/drift.hpp"
#include "fracdrift/field.hpp"
#include "fracdrift/levy.hpp"

namespace fracdrift::solver {

using field::Grid;
using field::ScalarField;
using field::VectorField;

enum class Scheme { etd_rk4, picard_mild };

struct SolveConfig {
    levy::LevySpec levy_spec;
    drift::DriftSpec drift_spec;
    bool drift_enabled = true;
    double t_final = 1.0;
    double dt = 1e-3;
    double eps_viscosity = 0.0;
    Scheme scheme = Scheme::etd_rk4;
    int checkpoint_stride = 10;
    double cfl_constant = 1.0;
    double symbol_tol = 1e-8;
    std::vector<double> lp_track = {2.0, 4.0, 8.0,
                                    std::numeric_limits<double>::infinity()};
    std::vector<double> dissipation_track = {2.0, 4.0};
    double besov_p = 6.0;      // per-step Besov index pair (alpha/p, p)
    double besov_s = 8.0 / 42.0;
};

/// Raised on CFL violation or non-finite state; carries the offending step.
struct SolverAbort : std::runtime_error {
    explicit SolverAbort(const std::string& what, long step_) : std::runtime_error(what), step(step_) {}
    long step;
};

struct StepNorms {
    double t = 0;
    std::vector<double> lp;           // aligned with config.lp_track
    double besov = 0;                 // dyadic estimate at (besov_s, besov_p)
    std::vector<double> dissipation;  // aligned with config.dissipation_track
    double grad_sq = 0;               // ||grad theta||_2^2 for the viscous term
    double max_drift = 0;
};

/// Checkpointed history of one forward solve; the backward dual solve reads
/// the frozen drift from here.
struct Trajectory {
    Grid grid;
    SolveConfig config;
    std::vector<double> times;                 // checkpoint times, times[0] = 0
    std::vector<ScalarField> theta_snapshots;  // at checkpoints
    std::vector<VectorField> drift_snapshots;  // at checkpoints
    std::vector<StepNorms> norms_series;       // every step, including t = 0

    ScalarField theta_at(double t) const;   // linear interpolation
    VectorField drift_at(double t) const;
    std::size_t checkpoint_index(double t, double tol = 1e-9) const;  // exact match
};

levy::SymbolTable make_symbol(const levy::LevySpec& spec, const Grid& g, double tol = 1e-8);

/// Integrating-factor RK4 advance of
///   d theta/dt = div(A_[theta] theta) - L theta + eps Delta theta,
/// nonlinear term dealiased, linear factor exact. The zero mode is conserved.
Trajectory solve(const ScalarField& theta0, const SolveConfig& config,
                 const levy::SymbolTable& symbol);

struct PicardResult {
    ScalarField theta_end;
    int iterations = 0;
    double contraction_factor = 0;  // >= 1 signals a non-contracting window
    bool converged = false;
};

/// One Picard pass of the mild formulation on [0, t_window] with trapezoid
/// quadrature over iterate snapshots. Requires eps_viscosity > 0.
PicardResult picard_mild_step(const ScalarField& theta_guess, const ScalarField& theta0,
                              const SolveConfig& config, const levy::SymbolTable& symbol,
                              double t_window, int quad_points = 17);

struct BalanceReport {
    double lhs = 0, rhs = 0, relative_error = 0;
};

/// L^p energy balance ||theta(T)||_p^p + p int D_p dt (+ viscous term at
/// p = 2) against ||theta0||_p^p, Simpson quadrature over the step series.
BalanceReport dissipation_balance(const Trajectory& traj, double p);

}  // namespace fracdrift::solver
