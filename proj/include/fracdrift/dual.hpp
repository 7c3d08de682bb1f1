#pragma once

#include <array>
#include <string>
#include <vector>

#include "fracdrift/solver.hpp"

namespace fracdrift::dual {

using field::Grid;
using field::ScalarField;
using field::VectorField;

/// Hardy-space test particle: mean-zero radial bump (positive core, negative
/// annulus) whose concentration and height obey the (zeta r)-scaled bounds.
struct Molecule {
    double r = 0;
    std::array<double, 2> x0{0, 0};
    double zeta = 4.0;
    double omega = 0.2;
    double gamma = 0.1;
    ScalarField psi;
};

struct MoleculeCheck {
    bool ok = false;
    std::vector<std::string> violated;
    double concentration = 0, concentration_bound = 0;
    double height = 0, height_bound = 0;
    double l1 = 0;
    double moment = 0;  // |int psi dx|, enforced only for r < 1
};

/// Builds the bump and re-validates every bound by grid quadrature. Throws
/// std::invalid_argument naming the violated bound when the grid cannot
/// resolve the support or the quadrature check fails.
Molecule make_molecule(double r, std::array<double, 2> x0, double zeta, double omega,
                       double gamma, const Grid& g);

MoleculeCheck validate_molecule(const Molecule& mol);

struct DualConfig {
    double dt = 1e-3;
    int checkpoint_stride = 1;
    double rho = 0;     // center-transport mollification radius, zeta^beta1 * r
    double s_end = -1;  // backward span; defaults to t_pivot
};

/// Backward solve of the frozen-drift dual equation together with the center
/// transport ODE.
struct DualRun {
    double t_pivot = 0;
    DualConfig config;
    std::vector<double> s_times;
    std::vector<ScalarField> psi_snapshots;
    std::vector<std::array<double, 2>> center_path;
};

/// Integrates d psi/ds = -div(A(t-s) psi) - L psi with the drift read
/// time-reversed from the trajectory checkpoints.
DualRun evolve_dual(const Molecule& mol, const solver::Trajectory& traj, double t_pivot,
                    const levy::SymbolTable& symbol, const DualConfig& config);

/// Center ODE x'(s) = (A(t-s) * phi_rho)(x(s)) by RK4 with spectral
/// mollification and trigonometric off-grid evaluation.
std::vector<std::array<double, 2>> transport_center(std::array<double, 2> x0,
                                                    const solver::Trajectory& traj,
                                                    double t_pivot, double rho, double dt,
                                                    double s_end);

struct BoundRow {
    double s = 0;
    double conc_lhs = 0, conc_env = 0;
    double height_lhs = 0, height_env = 0;
    double l1_lhs = 0, l1_env = 0;
    bool ok = false;
};

/// Evaluates the three molecule-evolution left sides against their envelopes
/// ((zeta r)^alpha + K s)^{...} at every checkpoint. Violations are recorded,
/// not thrown.
std::vector<BoundRow> molecule_bound_report(const DualRun& run, const Molecule& mol,
                                            double alpha, double K);

/// Duality bracket B(s) = int theta(t-s) psi(s) dx at aligned checkpoints.
struct BracketSeries {
    std::vector<double> s;
    std::vector<double> value;
    double max_relative_drift = 0;
};
BracketSeries transfer_bracket(const solver::Trajectory& traj, const DualRun& run);

/// Empirical envelope constants fitted from a bound report: the smallest K
/// the concentration rows require and the largest K the height and L1 rows
/// tolerate. The analytic ceiling is reported alongside, never replaced.
struct EmpiricalK {
    double k_min_concentration = 0;
    double k_max_height = 0;
    double k_max_l1 = 0;
    bool window_nonempty = false;
};
EmpiricalK fit_empirical_k(const std::vector<BoundRow>& rows, const Molecule& mol,
                           double alpha);

struct IterationPlan {
    long n_iterations = 0;
    double predicted_bound = 0;
};

/// N(r) = ceil(T0 / (epsilon r^alpha)) iterations to reach T0, with the
/// predicted terminal bound T0^{-n + n/p' - gamma}.
IterationPlan iterate_lp_control(double r, double T0, double epsilon, double alpha,
                                 int n, double pprime, double gamma);

/// Envelope drift constant (alpha/(n+gamma)) cbar1 frak_c with
/// frak_c = (v_n (5^n - 1) - sqrt(2 v_n) 5^{n-omega}) / (2 * 5^{n+alpha}).
double drift_constant_ceiling(int n, double alpha, double gamma, double omega, double cbar1);

}  // namespace fracdrift::dual
