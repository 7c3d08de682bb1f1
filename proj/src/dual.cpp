#include "fracdrift/dual.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fracdrift/spaces.hpp"

namespace fracdrift::dual {

namespace {

constexpr int kDim = 2;

double smooth_bump(double u) {  // C-infinity, support |u| < 1, peak 1 at 0
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

// Quadrature of int |psi| |x - c|^omega dx over the grid.
double concentration_integral(const ScalarField& psi, std::array<double, 2> c, double omega) {
    const Grid& g = psi.grid();
    const int N = g.resolution;
    const double h = g.spacing();
    const auto& v = psi.samples();
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const double d = field::torus_distance(g, i * h, j * h, c[0], c[1]);
            acc += std::abs(v[std::size_t(i) * N + j]) * std::pow(d, omega);
        }
    }
    return acc * h * h;
}

}  // namespace

Molecule make_molecule(double r, std::array<double, 2> x0, double zeta, double omega,
                       double gamma, const Grid& g) {
    if (!(r > 0)) throw std::invalid_argument("make_molecule: r > 0 required");
    if (!(zeta > 1)) throw std::invalid_argument("make_molecule: zeta > 1 required");
    if (!(gamma > 0 && gamma < omega && omega < 0.25))
        throw std::invalid_argument("make_molecule: 0 < gamma < omega < 1/4 required");

    // Feature width scales with zeta r: the bounds are (zeta r)-normalized and
    // a support of radius r alone would be invisible to the grid for small r.
    const double support = std::min(zeta * r, 0.45 * g.period);
    const double h = g.spacing();
    if (support < 4.0 * h) {
        std::ostringstream os;
        os << "make_molecule: zeta too small for the grid to resolve r (support "
           << support << " < 4h = " << 4.0 * h << ")";
        throw std::invalid_argument(os.str());
    }

    const int N = g.resolution;
    std::vector<double> core(g.size(), 0.0), ring(g.size(), 0.0);
    double core_sum = 0.0, ring_sum = 0.0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const double d = field::torus_distance(g, i * h, j * h, x0[0], x0[1]);
            const double u = d / support;
            if (u < 1.0) {
                const std::size_t idx = std::size_t(i) * N + j;
                core[idx] = smooth_bump(u / 0.42);
                ring[idx] = smooth_bump((u - 0.71) / 0.28);
                core_sum += core[idx];
                ring_sum += ring[idx];
            }
        }
    }
    if (ring_sum <= 0.0 || core_sum <= 0.0)
        throw std::invalid_argument("make_molecule: support below grid resolution");

    // exact discrete zero mean: scale the negative annulus to cancel the core
    const double lambda = core_sum / ring_sum;
    std::vector<double> shape(g.size());
    for (std::size_t i = 0; i < shape.size(); ++i) shape[i] = core[i] - lambda * ring[i];

    // band-limit the realization up front so the dual solve starts from the
    // validated field itself; truncation keeps the zero mode, so the exact
    // zero mean survives
    ScalarField raw = ScalarField::from_samples(g, std::move(shape));
    field::dealias_inplace(raw);
    const double shape_max = field::max_abs(raw);

    // height saturated at 95% of its bound; the concentration bound then holds
    // with a zeta^-(n+omega) margin
    const double height_bound = std::pow(zeta * r, -(kDim + gamma));
    Molecule mol;
    mol.r = r;
    mol.x0 = x0;
    mol.zeta = zeta;
    mol.omega = omega;
    mol.gamma = gamma;
    mol.psi = field::scaled(raw, 0.95 * height_bound / shape_max);
    mol.psi.ensure_both();

    MoleculeCheck check = validate_molecule(mol);
    if (!check.ok) {
        std::string msg = "make_molecule: validator rejected the bump:";
        for (const auto& v : check.violated) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }
    return mol;
}

MoleculeCheck validate_molecule(const Molecule& mol) {
    MoleculeCheck out;
    const double zr = mol.zeta * mol.r;
    out.concentration = concentration_integral(mol.psi, mol.x0, mol.omega);
    out.concentration_bound = std::pow(zr, mol.omega - mol.gamma);
    out.height = field::max_abs(mol.psi);
    out.height_bound = std::pow(zr, -(kDim + mol.gamma));
    out.l1 = spaces::lp_norm(mol.psi, 1.0);
    out.moment = std::abs(field::mean(mol.psi)) * mol.psi.grid().period * mol.psi.grid().period;

    const double slack = 0.95;
    if (!(out.concentration <= slack * out.concentration_bound))
        out.violated.push_back("concentration bound");
    if (!(out.height <= slack * out.height_bound)) out.violated.push_back("height bound");
    if (mol.r < 1.0 && !(out.moment < 1e-10)) out.violated.push_back("zero moment");
    out.ok = out.violated.empty();
    return out;
}

DualRun evolve_dual(const Molecule& mol, const solver::Trajectory& traj, double t_pivot,
                    const levy::SymbolTable& symbol, const DualConfig& config) {
    const Grid& g = traj.grid;
    if (!(mol.psi.grid() == g)) throw std::invalid_argument("evolve_dual: grid mismatch");
    if (traj.drift_snapshots.empty())
        throw std::invalid_argument("evolve_dual: trajectory has no drift snapshots");
    if (t_pivot > traj.times.back() + 1e-12)
        throw std::invalid_argument("evolve_dual: t_pivot beyond trajectory end");
    if (!(config.dt > 0)) throw std::invalid_argument("evolve_dual: dt > 0 required");

    const int N = g.resolution;
    std::vector<double> e_full(g.size()), e_half(g.size());
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const std::size_t idx = std::size_t(i) * N + j;
            e_full[idx] = std::exp(-symbol.value(i, j) * config.dt);
            e_half[idx] = std::exp(-symbol.value(i, j) * config.dt * 0.5);
        }

    using Spectrum = std::vector<std::complex<double>>;
    auto nonlinear = [&](const Spectrum& state, double s) {
        ScalarField psi = ScalarField::from_spectrum(g, state);
        VectorField A = traj.drift_at(t_pivot - s);
        ScalarField fx = field::product_dealiased(A.x, psi);
        ScalarField fy = field::product_dealiased(A.y, psi);
        ScalarField div = field::divergence({fx, fy});
        Spectrum out = div.spectrum();
        for (auto& c : out) c = -c;  // d psi/ds = -div(A psi) - L psi
        return out;
    };
    auto axpy = [](Spectrum& y, double a, const Spectrum& x) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
    };
    auto hadamard = [](const std::vector<double>& d, const Spectrum& x) {
        Spectrum out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = d[i] * x[i];
        return out;
    };

    DualRun run;
    run.t_pivot = t_pivot;
    run.config = config;

    ScalarField psi0 = mol.psi;
    field::dealias_inplace(psi0);
    Spectrum state = psi0.spectrum();

    const double span = config.s_end > 0 ? std::min(config.s_end, t_pivot) : t_pivot;
    const long n_steps = std::lround(span / config.dt);
    const double dt = config.dt;

    // advective CFL proxy against the frozen drift
    double max_drift = 0.0;
    for (const auto& A : traj.drift_snapshots)
        max_drift = std::max({max_drift, field::max_abs(A.x), field::max_abs(A.y)});
    const double kmax = 2.0 * M_PI / g.period * g.dealias_limit();
    const double cfl_bound = 1.0 / (kmax * max_drift + 1.0);
    if (dt > cfl_bound) {
        std::ostringstream os;
        os << "evolve_dual: dt = " << dt << " exceeds the CFL bound " << cfl_bound;
        throw solver::SolverAbort(os.str(), 0);
    }

    run.s_times.push_back(0.0);
    run.psi_snapshots.push_back(ScalarField::from_spectrum(g, state));
    run.psi_snapshots.back().ensure_both();

    // center transported alongside with the same time step
    const double rho = config.rho > 0 ? config.rho : mol.zeta * mol.r;
    auto center_full = transport_center(mol.x0, traj, t_pivot, rho, dt, n_steps * dt);
    run.center_path.push_back(mol.x0);

    for (long step = 1; step <= n_steps; ++step) {
        const double s = (step - 1) * dt;
        Spectrum k1 = nonlinear(state, s);
        Spectrum u1 = state;
        axpy(u1, 0.5 * dt, k1);
        Spectrum k2 = nonlinear(hadamard(e_half, u1), s + 0.5 * dt);
        Spectrum u2 = hadamard(e_half, state);
        axpy(u2, 0.5 * dt, k2);
        Spectrum k3 = nonlinear(u2, s + 0.5 * dt);
        Spectrum u3 = hadamard(e_full, state);
        {
            Spectrum t3 = hadamard(e_half, k3);
            axpy(u3, dt, t3);
        }
        Spectrum k4 = nonlinear(u3, s + dt);

        Spectrum next = hadamard(e_full, state);
        {
            Spectrum acc = hadamard(e_full, k1);
            Spectrum mid = k2;
            axpy(mid, 1.0, k3);
            Spectrum midh = hadamard(e_half, mid);
            axpy(acc, 2.0, midh);
            axpy(acc, 1.0, k4);
            axpy(next, dt / 6.0, acc);
        }
        state = std::move(next);

        if (step % config.checkpoint_stride == 0 || step == n_steps) {
            run.s_times.push_back(step * dt);
            run.psi_snapshots.push_back(ScalarField::from_spectrum(g, state));
            run.psi_snapshots.back().ensure_both();
            run.center_path.push_back(center_full[std::size_t(step)]);
        }
    }
    return run;
}

std::vector<std::array<double, 2>> transport_center(std::array<double, 2> x0,
                                                    const solver::Trajectory& traj,
                                                    double t_pivot, double rho, double dt,
                                                    double s_end) {
    const Grid& g = traj.grid;
    ScalarField kernel = field::bump_kernel(g, rho);

    // mollified drift snapshots, interpolated linearly in time
    std::vector<VectorField> smoothed;
    smoothed.reserve(traj.drift_snapshots.size());
    for (const auto& A : traj.drift_snapshots) {
        VectorField m;
        m.x = field::convolve(A.x, kernel);
        m.y = field::convolve(A.y, kernel);
        m.x.ensure_both();
        m.y.ensure_both();
        smoothed.push_back(std::move(m));
    }
    auto velocity = [&](double s, const std::array<double, 2>& x) -> std::array<double, 2> {
        const double t = t_pivot - s;
        const auto& times = traj.times;
        std::size_t lo = 0, hi = 0;
        double w = 0.0;
        if (t <= times.front()) {
            lo = hi = 0;
        } else if (t >= times.back()) {
            lo = hi = times.size() - 1;
        } else {
            auto it = std::upper_bound(times.begin(), times.end(), t);
            hi = std::size_t(it - times.begin());
            lo = hi - 1;
            w = (t - times[lo]) / (times[hi] - times[lo]);
        }
        auto eval = [&](const VectorField& A) -> std::array<double, 2> {
            return {field::eval_fourier(A.x, x[0], x[1]), field::eval_fourier(A.y, x[0], x[1])};
        };
        auto a = eval(smoothed[lo]);
        if (hi == lo) return a;
        auto b = eval(smoothed[hi]);
        return {(1.0 - w) * a[0] + w * b[0], (1.0 - w) * a[1] + w * b[1]};
    };

    const long n_steps = std::lround(s_end / dt);
    std::vector<std::array<double, 2>> path;
    path.reserve(n_steps + 1);
    std::array<double, 2> x = x0;
    path.push_back(x);
    for (long step = 0; step < n_steps; ++step) {
        const double s = step * dt;
        auto k1 = velocity(s, x);
        auto k2 = velocity(s + 0.5 * dt, {x[0] + 0.5 * dt * k1[0], x[1] + 0.5 * dt * k1[1]});
        auto k3 = velocity(s + 0.5 * dt, {x[0] + 0.5 * dt * k2[0], x[1] + 0.5 * dt * k2[1]});
        auto k4 = velocity(s + dt, {x[0] + dt * k3[0], x[1] + dt * k3[1]});
        x[0] += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        x[1] += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        path.push_back(x);
    }
    return path;
}

std::vector<BoundRow> molecule_bound_report(const DualRun& run, const Molecule& mol,
                                            double alpha, double K) {
    const double zr_alpha = std::pow(mol.zeta * mol.r, alpha);
    const double v_n = M_PI;  // n = 2 unit-ball volume
    std::vector<BoundRow> rows;
    rows.reserve(run.s_times.size());
    for (std::size_t i = 0; i < run.s_times.size(); ++i) {
        BoundRow row;
        row.s = run.s_times[i];
        const double F = zr_alpha + K * row.s;
        row.conc_lhs = concentration_integral(run.psi_snapshots[i], run.center_path[i], mol.omega);
        row.conc_env = std::pow(F, (mol.omega - mol.gamma) / alpha);
        row.height_lhs = field::max_abs(run.psi_snapshots[i]);
        row.height_env = std::pow(F, -(kDim + mol.gamma) / alpha);
        row.l1_lhs = spaces::lp_norm(run.psi_snapshots[i], 1.0);
        row.l1_env = 2.0 * std::pow(v_n, mol.omega / (kDim + mol.omega)) *
                     std::pow(F, -mol.gamma / alpha);
        row.ok = row.conc_lhs <= row.conc_env && row.height_lhs <= row.height_env &&
                 row.l1_lhs <= row.l1_env;
        rows.push_back(row);
    }
    return rows;
}

EmpiricalK fit_empirical_k(const std::vector<BoundRow>& rows, const Molecule& mol,
                           double alpha) {
    EmpiricalK out;
    const double zr_alpha = std::pow(mol.zeta * mol.r, alpha);
    const double v_n = M_PI;
    out.k_max_height = std::numeric_limits<double>::infinity();
    out.k_max_l1 = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        if (row.s <= 0) continue;
        // concentration: lhs <= ((zr)^alpha + K s)^{(omega-gamma)/alpha}
        const double need_conc =
            (std::pow(row.conc_lhs, alpha / (mol.omega - mol.gamma)) - zr_alpha) / row.s;
        out.k_min_concentration = std::max(out.k_min_concentration, need_conc);
        // height: lhs <= F^{-(n+gamma)/alpha} caps K from above
        const double cap_height =
            (std::pow(row.height_lhs, -alpha / (kDim + mol.gamma)) - zr_alpha) / row.s;
        out.k_max_height = std::min(out.k_max_height, cap_height);
        // L1: lhs <= 2 v_n^{omega/(n+omega)} F^{-gamma/alpha}
        const double l1_scale = 2.0 * std::pow(v_n, mol.omega / (kDim + mol.omega));
        const double cap_l1 =
            (std::pow(l1_scale / row.l1_lhs, alpha / mol.gamma) - zr_alpha) / row.s;
        out.k_max_l1 = std::min(out.k_max_l1, cap_l1);
    }
    out.k_min_concentration = std::max(out.k_min_concentration, 0.0);
    out.window_nonempty = out.k_min_concentration <= out.k_max_height &&
                          out.k_min_concentration <= out.k_max_l1;
    return out;
}

BracketSeries transfer_bracket(const solver::Trajectory& traj, const DualRun& run) {
    BracketSeries out;
    const Grid& g = traj.grid;
    const double h2 = g.spacing() * g.spacing();
    for (std::size_t i = 0; i < run.s_times.size(); ++i) {
        const double s = run.s_times[i];
        const double t = run.t_pivot - s;
        std::size_t ci;
        try {
            ci = traj.checkpoint_index(t);
        } catch (const std::runtime_error&) {
            throw std::runtime_error("transfer_bracket: checkpoint misalignment at s = " +
                                     std::to_string(s));
        }
        const auto& th = traj.theta_snapshots[ci].samples();
        const auto& ps = run.psi_snapshots[i].samples();
        double acc = 0.0;
        for (std::size_t k = 0; k < th.size(); ++k) acc += th[k] * ps[k];
        out.s.push_back(s);
        out.value.push_back(acc * h2);
    }
    if (!out.value.empty() && out.value.front() != 0.0) {
        const double b0 = out.value.front();
        for (double v : out.value)
            out.max_relative_drift = std::max(out.max_relative_drift, std::abs(v - b0) / std::abs(b0));
    }
    return out;
}

double drift_constant_ceiling(int n, double alpha, double gamma, double omega, double cbar1) {
    const double v_n = M_PI;  // n = 2
    const double frak_c =
        (v_n * (std::pow(5.0, n) - 1.0) - std::sqrt(2.0 * v_n) * std::pow(5.0, n - omega)) /
        (2.0 * std::pow(5.0, n + alpha));
    return alpha / (n + gamma) * cbar1 * frak_c;
}

IterationPlan iterate_lp_control(double r, double T0, double epsilon, double alpha, int n,
                                 double pprime, double gamma) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("iterate_lp_control: 0 < r < 1 required");
    if (!(T0 > 0 && epsilon > 0))
        throw std::invalid_argument("iterate_lp_control: T0, epsilon > 0 required");
    IterationPlan plan;
    plan.n_iterations = long(std::ceil(T0 / (epsilon * std::pow(r, alpha))));
    if (plan.n_iterations < 1) plan.n_iterations = 1;
    plan.predicted_bound = std::pow(T0, -double(n) + double(n) / pprime - gamma);
    return plan;
}

}  // namespace fracdrift::dual
