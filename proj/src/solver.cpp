#include "fracdrift/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracdrift/spaces.hpp"

namespace fracdrift::solver {

namespace {

using Spectrum = std::vector<std::complex<double>>;

struct Workspace {
    Grid grid;
    const SolveConfig* config;
    const levy::SymbolTable* symbol;
    std::vector<double> lambda;   // a(k) + eps |k|^2
    std::vector<double> e_full;   // exp(-lambda dt)
    std::vector<double> e_half;
    double last_max_drift = 0.0;

    Workspace(const Grid& g, const SolveConfig& c, const levy::SymbolTable& s)
        : grid(g), config(&c), symbol(&s) {
        const int N = g.resolution;
        lambda.resize(g.size());
        for (int i = 0; i < N; ++i) {
            const double k1 = g.wavenumber(i);
            for (int j = 0; j < N; ++j) {
                const double k2 = g.wavenumber(j);
                lambda[std::size_t(i) * N + j] =
                    s.value(i, j) + c.eps_viscosity * (k1 * k1 + k2 * k2);
            }
        }
        e_full.resize(lambda.size());
        e_half.resize(lambda.size());
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            e_full[i] = std::exp(-lambda[i] * c.dt);
            e_half[i] = std::exp(-lambda[i] * c.dt * 0.5);
        }
    }

    // div(A_[theta] theta), dealiased, as a spectrum
    Spectrum nonlinear(const Spectrum& state) {
        ScalarField theta = ScalarField::from_spectrum(grid, state);
        VectorField A = drift::evaluate_drift(config->drift_spec, theta);
        last_max_drift = std::max(field::max_abs(A.x), field::max_abs(A.y));
        ScalarField fx = field::product_dealiased(A.x, theta);
        ScalarField fy = field::product_dealiased(A.y, theta);
        ScalarField div = field::divergence({fx, fy});
        return div.spectrum();
    }
};

void axpy(Spectrum& y, double a, const Spectrum& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

Spectrum hadamard(const std::vector<double>& d, const Spectrum& x) {
    Spectrum out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = d[i] * x[i];
    return out;
}

}  // namespace

levy::SymbolTable make_symbol(const levy::LevySpec& spec, const Grid& g, double tol) {
    spec.validate();
    if (spec.kind == levy::KernelKind::pure_fractional)
        return levy::symbol_fractional(spec.alpha, g);
    return levy::symbol_levy_khinchin(spec, g, tol);
}

ScalarField Trajectory::theta_at(double t) const {
    if (times.empty()) throw std::runtime_error("Trajectory: empty");
    if (t <= times.front()) return theta_snapshots.front();
    if (t >= times.back()) return theta_snapshots.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t hi = std::size_t(it - times.begin());
    std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return field::linear_combination(1.0 - w, theta_snapshots[lo], w, theta_snapshots[hi]);
}

VectorField Trajectory::drift_at(double t) const {
    if (drift_snapshots.empty()) throw std::runtime_error("Trajectory: no drift snapshots");
    if (t <= times.front()) return drift_snapshots.front();
    if (t >= times.back()) return drift_snapshots.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t hi = std::size_t(it - times.begin());
    std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    VectorField out;
    out.x = field::linear_combination(1.0 - w, drift_snapshots[lo].x, w, drift_snapshots[hi].x);
    out.y = field::linear_combination(1.0 - w, drift_snapshots[lo].y, w, drift_snapshots[hi].y);
    return out;
}

std::size_t Trajectory::checkpoint_index(double t, double tol) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= tol) return i;
    throw std::runtime_error("Trajectory: no checkpoint at requested time");
}

Trajectory solve(const ScalarField& theta0, const SolveConfig& config,
                 const levy::SymbolTable& symbol) {
    const Grid& g = theta0.grid();
    if (!(symbol.grid() == g)) throw std::invalid_argument("solve: symbol grid mismatch");
    if (!(config.dt > 0 && config.t_final > 0)) throw std::invalid_argument("solve: dt, t_final > 0");
    if (config.checkpoint_stride < 1) throw std::invalid_argument("solve: checkpoint_stride >= 1");
    config.drift_spec.validate();

    Workspace ws(g, config, symbol);
    Trajectory traj;
    traj.grid = g;
    traj.config = config;

    ScalarField state_f = theta0;
    {
        ScalarField tmp = theta0;
        field::dealias_inplace(tmp);
        state_f = tmp;
    }
    Spectrum state = state_f.spectrum();

    const long n_steps = std::lround(config.t_final / config.dt);
    const double kmax = 2.0 * M_PI / g.period * g.dealias_limit();

    auto record_norms = [&](double t, const ScalarField& theta, double max_drift) {
        StepNorms n;
        n.t = t;
        for (double p : config.lp_track) n.lp.push_back(spaces::lp_norm(theta, p));
        n.besov = spaces::besov_dyadic_blocks(theta, config.besov_s, config.besov_p);
        for (double p : config.dissipation_track)
            n.dissipation.push_back(levy::dissipation_functional(theta, symbol, p));
        double gsq = 0.0;
        const int N = g.resolution;
        const auto& sp = theta.spectrum();
        for (int i = 0; i < N; ++i) {
            const double k1 = g.wavenumber(i);
            for (int j = 0; j < N; ++j) {
                const double k2 = g.wavenumber(j);
                gsq += (k1 * k1 + k2 * k2) * std::norm(sp[std::size_t(i) * N + j]);
            }
        }
        n.grad_sq = gsq * g.period * g.period;
        n.max_drift = max_drift;
        traj.norms_series.push_back(std::move(n));
    };

    auto checkpoint = [&](double t, const ScalarField& theta) {
        traj.times.push_back(t);
        traj.theta_snapshots.push_back(theta);
        if (config.drift_enabled)
            traj.drift_snapshots.push_back(drift::evaluate_drift(config.drift_spec, theta));
        else
            traj.drift_snapshots.push_back(VectorField(g));
        traj.theta_snapshots.back().ensure_both();
    };

    record_norms(0.0, state_f, 0.0);
    checkpoint(0.0, state_f);

    if (config.scheme == Scheme::picard_mild && !(config.eps_viscosity > 0))
        throw std::invalid_argument("solve: picard_mild scheme requires eps_viscosity > 0");

    Spectrum zero(state.size(), {0.0, 0.0});
    for (long step = 1; step <= n_steps; ++step) {
        if (config.scheme == Scheme::picard_mild) {
            ScalarField theta = ScalarField::from_spectrum(g, state);
            PicardResult pr = picard_mild_step(theta, theta, config, symbol, config.dt, 9);
            if (!pr.converged) {
                std::ostringstream os;
                os << "picard iteration did not contract at step " << step
                   << " (factor " << pr.contraction_factor << ")";
                throw SolverAbort(os.str(), step);
            }
            state = pr.theta_end.spectrum();
            const double t = step * config.dt;
            ScalarField out = ScalarField::from_spectrum(g, state);
            out.ensure_both();
            if (!std::isfinite(field::max_abs(out)))
                throw SolverAbort("non-finite state", step);
            record_norms(t, out, 0.0);
            if (step % config.checkpoint_stride == 0 || step == n_steps) checkpoint(t, out);
            continue;
        }

        Spectrum k1 = config.drift_enabled ? ws.nonlinear(state) : zero;
        const double max_drift = ws.last_max_drift;

        if (config.drift_enabled) {
            const double bound = config.cfl_constant / (kmax * max_drift + 1.0);
            if (config.dt > bound) {
                std::ostringstream os;
                os << "CFL violation at step " << step << ": dt = " << config.dt
                   << " exceeds bound " << bound;
                throw SolverAbort(os.str(), step);
            }
        }

        Spectrum u1 = state;
        axpy(u1, 0.5 * config.dt, k1);
        Spectrum k2 = config.drift_enabled ? ws.nonlinear(hadamard(ws.e_half, u1)) : zero;

        Spectrum u2 = hadamard(ws.e_half, state);
        axpy(u2, 0.5 * config.dt, k2);
        Spectrum k3 = config.drift_enabled ? ws.nonlinear(u2) : zero;

        Spectrum u3 = hadamard(ws.e_full, state);
        {
            Spectrum t3 = hadamard(ws.e_half, k3);
            axpy(u3, config.dt, t3);
        }
        Spectrum k4 = config.drift_enabled ? ws.nonlinear(u3) : zero;

        Spectrum next = hadamard(ws.e_full, state);
        {
            Spectrum acc = hadamard(ws.e_full, k1);
            Spectrum mid = k2;
            axpy(mid, 1.0, k3);
            Spectrum midh = hadamard(ws.e_half, mid);
            axpy(acc, 2.0, midh);
            axpy(acc, 1.0, k4);
            axpy(next, config.dt / 6.0, acc);
        }
        state = std::move(next);

        const double t = step * config.dt;
        ScalarField theta = ScalarField::from_spectrum(g, state);
        theta.ensure_both();
        if (!std::isfinite(field::max_abs(theta))) {
            std::ostringstream os;
            os << "non-finite state at step " << step;
            throw SolverAbort(os.str(), step);
        }
        record_norms(t, theta, max_drift);
        if (step % config.checkpoint_stride == 0 || step == n_steps) checkpoint(t, theta);
    }
    return traj;
}

PicardResult picard_mild_step(const ScalarField& theta_guess, const ScalarField& theta0,
                              const SolveConfig& config, const levy::SymbolTable& symbol,
                              double t_window, int quad_points) {
    if (!(config.eps_viscosity > 0))
        throw std::invalid_argument("picard_mild_step: eps_viscosity > 0 required");
    if (quad_points < 3) throw std::invalid_argument("picard_mild_step: quad_points >= 3");
    const Grid& g = theta0.grid();
    const int M = quad_points;
    const double ds = t_window / (M - 1);
    const double eps = config.eps_viscosity;
    const double moll_eps =
        config.drift_spec.mollify_eps > 0 ? config.drift_spec.mollify_eps : eps;
    const int N = g.resolution;

    auto heat = [&](const ScalarField& f, double tau) {
        return field::apply_multiplier(f, [&](double kx, double ky) {
            return std::complex<double>(std::exp(-eps * tau * (kx * kx + ky * ky)), 0.0);
        });
    };

    // integrand F(theta) = div(A^eps_[theta] theta) - L theta at one time slice
    auto rhs_slice = [&](const ScalarField& th) {
        ScalarField out(g);
        if (config.drift_enabled) {
            VectorField A = drift::evaluate_drift(config.drift_spec, th);
            A = drift::mollify_drift(A, moll_eps);
            ScalarField fx = field::product_dealiased(A.x, th);
            ScalarField fy = field::product_dealiased(A.y, th);
            out = field::divergence({fx, fy});
        }
        ScalarField lf = levy::apply_operator(symbol, th);
        return field::linear_combination(1.0, out, -1.0, lf);
    };
    (void)N;

    std::vector<ScalarField> iterate(M, theta_guess);
    double prev_diff = -1.0;
    PicardResult result;
    result.contraction_factor = std::numeric_limits<double>::infinity();
    const int max_iters = 50;
    for (int it = 1; it <= max_iters; ++it) {
        std::vector<ScalarField> slices(M);
        for (int j = 0; j < M; ++j) slices[j] = rhs_slice(iterate[j]);

        std::vector<ScalarField> next(M);
        next[0] = theta0;
        for (int i = 1; i < M; ++i) {
            const double t = i * ds;
            ScalarField acc = heat(theta0, t);
            // trapezoid in s of e^{eps (t-s) Delta} F(theta(s))
            for (int j = 0; j <= i; ++j) {
                const double w = (j == 0 || j == i) ? 0.5 * ds : ds;
                ScalarField term = heat(slices[j], t - j * ds);
                acc = field::linear_combination(1.0, acc, w, term);
            }
            next[i] = acc;
        }

        // contraction measured in L^infty(L^p) with the initial-data index
        const double p_norm = config.besov_p >= 1 ? config.besov_p : 2.0;
        double diff = 0.0;
        for (int j = 0; j < M; ++j) {
            ScalarField d = field::linear_combination(1.0, next[j], -1.0, iterate[j]);
            diff = std::max(diff, spaces::lp_norm(d, p_norm));
        }
        iterate = std::move(next);
        result.iterations = it;
        if (prev_diff > 0) result.contraction_factor = diff / prev_diff;
        if (diff < 1e-9) {
            result.converged = true;
            if (prev_diff < 0) result.contraction_factor = 0.0;
            break;
        }
        if (prev_diff > 0 && diff / prev_diff >= 1.0 && it >= 3) break;  // non-contracting window
        prev_diff = diff;
    }
    result.theta_end = iterate.back();
    return result;
}

BalanceReport dissipation_balance(const Trajectory& traj, double p) {
    if (p < 2 || std::rint(p) != p || std::lround(p) % 2 != 0)
        throw std::invalid_argument("dissipation_balance: even integer p >= 2 required");
    const auto& cfg = traj.config;
    std::size_t pi = cfg.dissipation_track.size();
    for (std::size_t i = 0; i < cfg.dissipation_track.size(); ++i)
        if (cfg.dissipation_track[i] == p) pi = i;
    if (pi == cfg.dissipation_track.size())
        throw std::invalid_argument("dissipation_balance: p was not tracked by the solve");

    const auto& series = traj.norms_series;
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("dissipation_balance: empty series");
    const double dt = series[1].t - series[0].t;

    // composite Simpson over the per-step dissipation values
    auto integrate = [&](auto&& value) {
        double acc = 0.0;
        std::size_t i = 0;
        while (i + 2 < n) {
            acc += dt / 3.0 * (value(i) + 4.0 * value(i + 1) + value(i + 2));
            i += 2;
        }
        if (i + 1 < n) acc += 0.5 * dt * (value(i) + value(i + 1));
        return acc;
    };

    const double diss_int = integrate([&](std::size_t i) { return series[i].dissipation[pi]; });
    double visc_int = 0.0;
    if (cfg.eps_viscosity > 0 && p == 2.0)
        visc_int = cfg.eps_viscosity * integrate([&](std::size_t i) { return series[i].grad_sq; });

    auto lp_at = [&](std::size_t i) {
        for (std::size_t k = 0; k < cfg.lp_track.size(); ++k)
            if (cfg.lp_track[k] == p) return series[i].lp[k];
        throw std::invalid_argument("dissipation_balance: p missing from lp_track");
    };

    BalanceReport rep;
    rep.rhs = std::pow(lp_at(0), p);
    rep.lhs = std::pow(lp_at(n - 1), p) + p * diss_int + p * visc_int;
    rep.relative_error = std::abs(rep.lhs - rep.rhs) / (rep.rhs > 0 ? rep.rhs : 1.0);
    return rep;
}

}  // namespace fracdrift::solver
