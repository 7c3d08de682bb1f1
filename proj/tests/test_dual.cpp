#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fracdrift/dual.hpp"
#include "fracdrift/random_field.hpp"
#include "fracdrift/spaces.hpp"
#include "oracles.hpp"

using namespace fracdrift;
using field::Grid;
using field::ScalarField;
using field::VectorField;

namespace {

solver::SolveConfig sqg_config(double t_final, double dt, int stride) {
    solver::SolveConfig cfg;
    cfg.levy_spec.kind = levy::KernelKind::pure_fractional;
    cfg.levy_spec.alpha = 8.0 / 7.0;
    cfg.levy_spec.delta = 0.8;
    cfg.t_final = t_final;
    cfg.dt = dt;
    cfg.checkpoint_stride = stride;
    return cfg;
}

// synthetic trajectory with a frozen drift field, for transport tests
solver::Trajectory frozen_drift_trajectory(const Grid& g, const VectorField& A, double t_end,
                                           int snapshots) {
    solver::Trajectory traj;
    traj.grid = g;
    traj.config = sqg_config(t_end, 1e-3, 1);
    for (int i = 0; i < snapshots; ++i) {
        traj.times.push_back(t_end * i / (snapshots - 1));
        traj.theta_snapshots.push_back(ScalarField(g));
        traj.drift_snapshots.push_back(A);
    }
    return traj;
}

}  // namespace

TEST_CASE("make_molecule constructs a valid small molecule") {
    Grid g(128);
    dual::Molecule mol = dual::make_molecule(0.125, {M_PI, M_PI}, 4.0, 0.2, 0.1, g);
    auto check = dual::validate_molecule(mol);
    CHECK(check.ok);
    CHECK(check.concentration <= 0.95 * check.concentration_bound);
    CHECK(check.height <= 0.95 * check.height_bound);
    CHECK(check.moment < 1e-10);
    // height saturates its 95% target
    CHECK(check.height == doctest::Approx(0.95 * check.height_bound).epsilon(1e-9));
}

TEST_CASE("doubled molecule fails the height bound") {
    Grid g(128);
    dual::Molecule mol = dual::make_molecule(0.125, {M_PI, M_PI}, 4.0, 0.2, 0.1, g);
    mol.psi = field::scaled(mol.psi, 2.0);
    auto check = dual::validate_molecule(mol);
    CHECK_FALSE(check.ok);
    bool names_height = false;
    for (const auto& v : check.violated) names_height |= (v == "height bound");
    CHECK(names_height);
}

TEST_CASE("large molecules drop the moment condition") {
    Grid g(64);
    // positive bump: nonzero moment, r >= 1 keeps it legal
    dual::Molecule mol;
    mol.r = 1.0;
    mol.x0 = {M_PI, M_PI};
    mol.zeta = 2.0;
    mol.omega = 0.2;
    mol.gamma = 0.1;
    ScalarField bump = field::bump_kernel(g, 1.0);
    mol.psi = field::scaled(bump, 1e-3 / field::max_abs(bump));
    auto check = dual::validate_molecule(mol);
    CHECK(check.moment > 1e-6);
    for (const auto& v : check.violated) CHECK(v != "zero moment");

    mol.r = 0.5;  // small molecule: same field now violates the moment
    auto check_small = dual::validate_molecule(mol);
    bool names_moment = false;
    for (const auto& v : check_small.violated) names_moment |= (v == "zero moment");
    CHECK(names_moment);
}

TEST_CASE("unresolvable molecule is rejected with the named constraint") {
    Grid g(64);
    CHECK_THROWS_WITH_AS(dual::make_molecule(1.0 / 64.0, {M_PI, M_PI}, 2.0, 0.2, 0.1, g),
                         doctest::Contains("resolve"), std::invalid_argument);
    CHECK_THROWS_AS(dual::make_molecule(0.125, {M_PI, M_PI}, 0.9, 0.2, 0.1, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(dual::make_molecule(0.125, {M_PI, M_PI}, 4.0, 0.05, 0.1, g),
                    std::invalid_argument);
}

TEST_CASE("dual evolution with zero drift is the levy semigroup") {
    Grid g(64);
    auto cfg = sqg_config(0.1, 1e-3, 10);
    cfg.drift_enabled = false;
    auto symbol = solver::make_symbol(cfg.levy_spec, g);
    ScalarField theta0 = field::make_bandlimited_gaussian(g, 3, 6, 1.5, 0.5);
    auto traj = solver::solve(theta0, cfg, symbol);

    dual::Molecule probe;
    probe.r = 0.25;
    probe.x0 = {M_PI, M_PI};
    probe.zeta = 2.0;
    probe.omega = 0.2;
    probe.gamma = 0.1;
    probe.psi = oracles::modes_to_field(g, {{3, 1, 1.0, 0.4}});

    dual::DualConfig dc;
    dc.dt = 1e-3;
    dc.checkpoint_stride = 10;
    dc.rho = 0.5;
    auto run = dual::evolve_dual(probe, traj, 0.1, symbol, dc);

    const double decay = std::exp(-symbol.value(3, 1) * 0.1);
    const auto& end = run.psi_snapshots.back().samples();
    const auto& ref = probe.psi.samples();
    double err = 0.0;
    for (std::size_t i = 0; i < end.size(); ++i)
        err = std::max(err, std::abs(end[i] - decay * ref[i]));
    CHECK(err < 1e-8);
    // center stays put without drift
    CHECK(run.center_path.back()[0] == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(run.center_path.back()[1] == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("dual maximum principle and interpolation bound under sqg drift") {
    Grid g(64);
    auto cfg = sqg_config(0.2, 1e-3, 10);
    auto symbol = solver::make_symbol(cfg.levy_spec, g);
    ScalarField theta0 = field::make_bandlimited_gaussian(g, 1, 8, 2.0, 1.0);
    auto traj = solver::solve(theta0, cfg, symbol);

    dual::Molecule mol = dual::make_molecule(0.25, {M_PI, M_PI}, 2.0, 0.2, 0.1, g);
    dual::DualConfig dc;
    dc.dt = 1e-3;
    dc.checkpoint_stride = 10;
    dc.rho = 0.5;
    auto run = dual::evolve_dual(mol, traj, 0.2, symbol, dc);

    for (double pprime : {1.0, 4.0 / 3.0, 2.0}) {
        const double initial = spaces::lp_norm(run.psi_snapshots.front(), pprime);
        for (std::size_t i = 1; i < run.psi_snapshots.size(); ++i)
            CHECK(spaces::lp_norm(run.psi_snapshots[i], pprime) <= initial * (1.0 + 1e-6));
    }
    // Hoelder interpolation between L^1 and L^inf at every checkpoint
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& psi : run.psi_snapshots) {
        const double p1 = spaces::lp_norm(psi, 1.0);
        const double pinf = spaces::lp_norm(psi, inf);
        for (double pprime : {4.0 / 3.0, 2.0}) {
            const double lhs = spaces::lp_norm(psi, pprime);
            const double rhs = std::pow(p1, 1.0 / pprime) * std::pow(pinf, 1.0 - 1.0 / pprime);
            CHECK(lhs <= rhs * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("positivity is preserved for a nonnegative initial bump") {
    Grid g(64);
    // |sum of low modes|^2: nonnegative pointwise and exactly band-limited
    ScalarField probe_field(g);
    {
        const int N = g.resolution;
        const double h = g.spacing();
        std::vector<double> s(g.size());
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                double re = 1.0, im = 0.0;
                for (int k = 1; k <= 5; ++k) {
                    re += std::cos(k * (i * h - M_PI)) + std::cos(k * (j * h - M_PI));
                    im += std::sin(k * (i * h - M_PI)) + std::sin(k * (j * h - M_PI));
                }
                s[std::size_t(i) * N + j] = re * re + im * im;
            }
        probe_field = ScalarField::from_samples(g, std::move(s));
    }
    dual::Molecule probe;
    probe.r = 0.5;
    probe.x0 = {M_PI, M_PI};
    probe.zeta = 2.0;
    probe.omega = 0.2;
    probe.gamma = 0.1;
    probe.psi = field::scaled(probe_field, 1.0 / field::max_abs(probe_field));

    dual::DualConfig dc;
    dc.dt = 1e-3;
    dc.checkpoint_stride = 20;
    dc.rho = 1.0;

    SUBCASE("levy semigroup alone keeps it nonnegative to rounding") {
        auto cfg = sqg_config(0.1, 1e-3, 10);
        cfg.drift_enabled = false;
        auto symbol = solver::make_symbol(cfg.levy_spec, g);
        auto traj = solver::solve(ScalarField(g), cfg, symbol);
        auto run = dual::evolve_dual(probe, traj, 0.1, symbol, dc);
        double min_val = 0.0;
        for (const auto& psi : run.psi_snapshots)
            for (double v : psi.samples()) min_val = std::min(min_val, v);
        CHECK(min_val >= -1e-8);
    }
    SUBCASE("sqg transport stays nonnegative within the truncation noise") {
        auto cfg = sqg_config(0.1, 1e-3, 10);
        auto symbol = solver::make_symbol(cfg.levy_spec, g);
        ScalarField theta0 = field::make_bandlimited_gaussian(g, 1, 8, 2.0, 1.0);
        auto traj = solver::solve(theta0, cfg, symbol);
        auto run = dual::evolve_dual(probe, traj, 0.1, symbol, dc);
        double min_val = 0.0;
        for (const auto& psi : run.psi_snapshots)
            for (double v : psi.samples()) min_val = std::min(min_val, v);
        CHECK(min_val >= -1e-6);
    }
}

TEST_CASE("dual flow is linear: split evolution matches") {
    Grid g(64);
    auto cfg = sqg_config(0.05, 1e-3, 10);
    auto symbol = solver::make_symbol(cfg.levy_spec, g);
    ScalarField theta0 = field::make_bandlimited_gaussian(g, 2, 8, 2.0, 1.0);
    auto traj = solver::solve(theta0, cfg, symbol);

    dual::Molecule mol = dual::make_molecule(0.25, {M_PI, M_PI}, 2.0, 0.2, 0.1, g);
    // split into the positive and negative parts
    dual::Molecule plus = mol, minus = mol;
    {
        std::vector<double> p(mol.psi.samples()), n(mol.psi.samples());
        for (auto& v : p) v = std::max(v, 0.0);
        for (auto& v : n) v = std::max(-v, 0.0);
        plus.psi = ScalarField::from_samples(g, std::move(p));
        minus.psi = ScalarField::from_samples(g, std::move(n));
    }
    dual::DualConfig dc;
    dc.dt = 1e-3;
    dc.checkpoint_stride = 50;
    dc.rho = 0.5;
    auto run = dual::evolve_dual(mol, traj, 0.05, symbol, dc);
    auto run_p = dual::evolve_dual(plus, traj, 0.05, symbol, dc);
    auto run_m = dual::evolve_dual(minus, traj, 0.05, symbol, dc);

    const auto& whole = run.psi_snapshots.back().samples();
    const auto& part_p = run_p.psi_snapshots.back().samples();
    const auto& part_m = run_m.psi_snapshots.back().samples();
    double err = 0.0;
    for (std::size_t i = 0; i < whole.size(); ++i)
        err = std::max(err, std::abs(whole[i] - (part_p[i] - part_m[i])));
    CHECK(err < 1e-8);
}

TEST_CASE("center transport") {
    Grid g(64);
    SUBCASE("zero drift keeps the center fixed") {
        VectorField zero(g);
        auto traj = frozen_drift_trajectory(g, zero, 0.5, 6);
        auto path = dual::transport_center({1.0, 2.0}, traj, 0.5, 0.5, 1e-2, 0.5);
        CHECK(path.back()[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(path.back()[1] == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("uniform translation drift moves the center linearly") {
        const double c = 0.7;
        VectorField uniform(g);
        uniform.x = ScalarField::from_samples(g, std::vector<double>(g.size(), c));
        uniform.y = ScalarField(g);
        auto traj = frozen_drift_trajectory(g, uniform, 0.5, 6);
        auto path = dual::transport_center({1.0, 2.0}, traj, 0.5, 0.5, 1e-2, 0.5);
        CHECK(std::abs(path.back()[0] - (1.0 + 0.5 * c)) < 1e-8);
        CHECK(std::abs(path.back()[1] - 2.0) < 1e-8);
    }
    SUBCASE("sqg transport stays within the advective displacement bound") {
        auto cfg = sqg_config(0.2, 1e-3, 10);
        auto symbol = solver::make_symbol(cfg.levy_spec, g);
        ScalarField theta0 = field::make_bandlimited_gaussian(g, 1, 8, 2.0, 1.0);
        auto traj = solver::solve(theta0, cfg, symbol);
        double sup_drift = 0.0;
        for (const auto& A : traj.drift_snapshots)
            sup_drift = std::max({sup_drift, field::max_abs(A.x), field::max_abs(A.y)});
        auto path = dual::transport_center({M_PI, M_PI}, traj, 0.2, 0.5, 1e-3, 0.2);
        const double disp = std::hypot(path.back()[0] - M_PI, path.back()[1] - M_PI);
        CHECK(disp <= 0.2 * std::sqrt(2.0) * sup_drift * 1.01);
    }
}

TEST_CASE("molecule bound report holds its envelopes for a drift-off run") {
    Grid g(64);
    auto cfg = sqg_config(0.01, 2e-4, 5);
    cfg.drift_enabled = false;
    auto symbol = solver::make_symbol(cfg.levy_spec, g);
    auto traj = solver::solve(ScalarField(g), cfg, symbol);

    dual::Molecule mol = dual::make_molecule(0.125, {M_PI, M_PI}, 4.0, 0.2, 0.1, g);
    const double alpha = cfg.levy_spec.alpha;
    const double s0 = 0.1 * std::pow(mol.r, alpha);
    REQUIRE(s0 < 0.01);
    dual::DualConfig dc;
    dc.dt = 2e-4;
    dc.checkpoint_stride = 5;
    dc.rho = 0.5;
    dc.s_end = s0;
    auto run = dual::evolve_dual(mol, traj, 0.01, symbol, dc);
    const double K = dual::drift_constant_ceiling(2, alpha, mol.gamma, mol.omega, 1.0);
    CHECK(K > 0.0);
    auto rows = dual::molecule_bound_report(run, mol, alpha, K);
    REQUIRE(rows.size() >= 3);
    // the s = 0 row reproduces the validator quantities
    auto check = dual::validate_molecule(mol);
    CHECK(rows.front().conc_lhs == doctest::Approx(check.concentration).epsilon(1e-9));
    CHECK(rows.front().height_lhs == doctest::Approx(check.height).epsilon(1e-12));
    for (const auto& row : rows) {
        CHECK(row.conc_lhs <= row.conc_env);
        CHECK(row.height_lhs <= row.height_env);
        CHECK(row.l1_lhs <= row.l1_env);
        CHECK(row.ok);
    }

    // the fitted empirical window contains the analytic ceiling
    auto fitted = dual::fit_empirical_k(rows, mol, alpha);
    CHECK(fitted.window_nonempty);
    CHECK(fitted.k_min_concentration >= 0.0);
    CHECK(fitted.k_min_concentration <= K);
    CHECK(fitted.k_max_height >= K);
    CHECK(fitted.k_max_l1 >= K);
}

TEST_CASE("transfer bracket is constant for pure diffusion") {
    Grid g(64);
    auto cfg = sqg_config(0.1, 1e-3, 10);
    cfg.drift_enabled = false;
    auto symbol = solver::make_symbol(cfg.levy_spec, g);
    ScalarField theta0 = field::make_bandlimited_gaussian(g, 5, 8, 1.5, 1.0);
    auto traj = solver::solve(theta0, cfg, symbol);

    dual::Molecule mol = dual::make_molecule(0.25, {M_PI + 0.5, M_PI}, 2.0, 0.2, 0.1, g);
    dual::DualConfig dc;
    dc.dt = 1e-3;
    dc.checkpoint_stride = 10;
    dc.rho = 0.5;
    auto run = dual::evolve_dual(mol, traj, 0.1, symbol, dc);
    auto bracket = dual::transfer_bracket(traj, run);
    REQUIRE(bracket.value.size() == run.s_times.size());
    CHECK(std::abs(bracket.value.front()) > 1e-8);
    CHECK(bracket.max_relative_drift < 1e-6);
    // half-pivot value is the bracket at s = t/2 by definition
    const std::size_t mid = bracket.s.size() / 2;
    CHECK(bracket.value[mid] == doctest::Approx(bracket.value.front())
                                    .epsilon(1e-5));
}

TEST_CASE("transfer bracket misalignment is reported") {
    Grid g(64);
    auto cfg = sqg_config(0.1, 1e-3, 10);
    cfg.drift_enabled = false;
    auto symbol = solver::make_symbol(cfg.levy_spec, g);
    auto traj = solver::solve(field::make_bandlimited_gaussian(g, 5, 8, 1.5, 1.0), cfg, symbol);
    dual::Molecule mol = dual::make_molecule(0.25, {M_PI, M_PI}, 2.0, 0.2, 0.1, g);
    dual::DualConfig dc;
    dc.dt = 1e-3;
    dc.checkpoint_stride = 10;
    dc.rho = 0.5;
    auto run = dual::evolve_dual(mol, traj, 0.0975, symbol, dc);  // off-lattice pivot
    CHECK_THROWS_AS(dual::transfer_bracket(traj, run), std::runtime_error);
}

TEST_CASE("iteration count follows the r^alpha budget") {
    const double alpha = 8.0 / 7.0;
    auto plan = dual::iterate_lp_control(0.125, 0.25, 0.1, alpha, 2, 6.0 / 5.0, 0.1);
    CHECK(plan.n_iterations == 27);  // ceil(0.25 / (0.1 * 8^(-8/7)))
    CHECK(plan.predicted_bound ==
          doctest::Approx(std::pow(0.25, -2.0 + 2.0 / (6.0 / 5.0) - 0.1)).epsilon(1e-12));

    // halving r multiplies the count by 2^alpha within rounding
    auto finer = dual::iterate_lp_control(0.0625, 0.25, 0.1, alpha, 2, 6.0 / 5.0, 0.1);
    CHECK(std::abs(double(finer.n_iterations) - std::pow(2.0, alpha) * plan.n_iterations) <= 2.0);

    // big molecules need a single hop
    auto coarse = dual::iterate_lp_control(0.9, 0.25, 1.0, alpha, 2, 6.0 / 5.0, 0.1);
    CHECK(coarse.n_iterations == 1);

    CHECK_THROWS_AS(dual::iterate_lp_control(1.5, 0.25, 0.1, alpha, 2, 6.0 / 5.0, 0.1),
                    std::invalid_argument);
}
