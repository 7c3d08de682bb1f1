#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracdrift/dual.hpp"
#include "fracdrift/exponents.hpp"
#include "fracdrift/solver.hpp"

namespace fracdrift::harness {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AdmissibilityError : std::runtime_error {
    AdmissibilityError(const std::string& msg, std::vector<std::string> violated_)
        : std::runtime_error(msg), violated(std::move(violated_)) {}
    std::vector<std::string> violated;
};

enum class InitKind { gaussian, zero, cosine };

/// Parsed scenario configuration (flat-sectioned key = value text).
struct RunConfig {
    // [grid]
    int resolution = 64;
    double period = 2.0 * M_PI;
    // [levy]
    levy::LevySpec levy_spec;
    bool alpha_given = false;
    bool delta_given = false;
    // [drift]
    drift::DriftSpec drift_spec;
    bool drift_enabled = true;
    // [exponents]
    int theorem = 1;
    Rational exp_n{2}, exp_q{6}, exp_a{0}, exp_eta{0}, exp_p{0};
    Rational exp_gamma{1, 10}, exp_omega{1, 5};
    // [run]
    double t_final = 1.0;
    double dt = 1e-3;
    int checkpoint_stride = 10;
    double eps_viscosity = 0.0;
    solver::Scheme scheme = solver::Scheme::etd_rk4;
    // [init]
    InitKind init_kind = InitKind::gaussian;
    std::uint64_t seed = 1;
    int init_kmax = 8;
    double init_slope = 2.0;
    double init_sup = 1.0;
    int cosine_k1 = 1, cosine_k2 = 0;
    double cosine_amplitude = 1.0;
    // [norms]
    std::vector<double> lp_track = {2, 4, 8, std::numeric_limits<double>::infinity()};
    double mc_q = 6, mc_a = 0;
    double holder_gamma = 0.1;
    // [dual] optional post-solve molecule diagnostic
    bool dual_enabled = false;
    double dual_r = 0.0625;
    double dual_zeta = 8.0;
    double dual_s0 = -1;  // defaults to 0.1 r^alpha
    double dual_omega = 0.2, dual_gamma = 0.1;
    double dual_dt = -1;  // defaults to the forward dt

    std::string raw_text;                 // config echo for the manifest
    exponents::ExponentSet plan;          // filled by cross_validate
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Exponent-module gate run before any solve; throws AdmissibilityError with
/// the violated constraints.
void cross_validate(RunConfig& cfg);

field::ScalarField make_initial_field(const RunConfig& cfg);
solver::SolveConfig to_solve_config(const RunConfig& cfg);

/// Executes the scenario into out_dir: manifest.json, norms.csv, fields/,
/// plots/. Returns the process exit code contract:
/// 0 ok, 2 config parse error, 3 admissibility rejection, 4 solver abort,
/// 1 invariant check failure.
int run_scenario(const std::string& config_path, const std::string& out_dir,
                 std::string* message = nullptr);

/// Rebuilds a trajectory from a run directory written by run_scenario.
solver::Trajectory load_trajectory(const std::string& run_dir);

struct DualParams {
    double t_pivot = -1;  // defaults to the trajectory end
    double r = 0.0625;
    double zeta = 8.0;
    double s0 = -1;  // defaults to 0.1 r^alpha
    double omega = 0.2, gamma = 0.1;
    double dt = -1;  // defaults to the forward dt
};

struct DualOutcome {
    bool envelopes_hold = false;
    double bracket_drift = -1;  // -1 when checkpoints do not align
    double K = 0;
    double s0 = 0;
    dual::EmpiricalK fitted;
};

/// Backward molecule run against a trajectory; writes bounds.csv and
/// verdict.json under out_dir. Shared by the dual subcommand and the
/// optional [dual] scenario section.
DualOutcome run_dual_diagnostic(const solver::Trajectory& traj, const DualParams& params,
                                const std::string& out_dir);

struct CheckLine {
    std::string name;
    bool pass = false;
    double measured = 0;
    double bound = 0;
};

struct VerifyReport {
    std::string suite;
    std::vector<CheckLine> checks;
    bool pass = true;

    void add(const std::string& name, bool ok, double measured, double bound);
    std::string to_json() const;
};

std::vector<std::string> verify_suite_names();
VerifyReport verify_suite(const std::string& name);

}  // namespace fracdrift::harness
