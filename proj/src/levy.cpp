#include "fracdrift/levy.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fracdrift/parallel.hpp"

namespace fracdrift::levy {

namespace {

constexpr int kDim = 2;

// Adaptive Simpson with absolute tolerance and an eval budget.
struct Simpson {
    const std::function<double(double)>& f;
    long evals = 0;
    long budget = 2'000'000;
    bool exhausted = false;

    double run(double a, double b, double tol) {
        double fa = eval(a), fb = eval(b), fm = eval(0.5 * (a + b));
        double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole, tol, 40);
    }

    double eval(double x) {
        ++evals;
        if (evals > budget) exhausted = true;
        return f(x);
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
        if (exhausted) return whole;
        double m = 0.5 * (a + b);
        double fl = eval(0.5 * (a + m)), fr = eval(0.5 * (m + b));
        double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
        double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
        double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return recurse(a, m, fa, fl, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, fr, fb, right, 0.5 * tol, depth - 1);
    }
};

// Radial reduction of the Levy-Khinchin integral:
//   a(u) = 2 pi int_0^inf rho pi(rho) (1 - J0(u rho)) d rho.
double symbol_radial(const LevySpec& spec, double u, double tol, bool& converged) {
    if (u == 0.0) return 0.0;
    const double alpha = spec.alpha;
    const double c1 = spec.cbar1;
    double total = 0.0;
    converged = true;

    // Taylor regime: 1 - J0(t) = t^2/4 - t^4/64 + O(t^6), integrated against
    // the exact r^(-n-alpha) power law.
    const double r_t = std::min(0.01 / u, 1.0);
    total += 2.0 * M_PI * c1 *
             (u * u / 4.0 * std::pow(r_t, 2.0 - alpha) / (2.0 - alpha) -
              std::pow(u, 4.0) / 64.0 * std::pow(r_t, 4.0 - alpha) / (4.0 - alpha));

    auto integrand = [&](double rho) {
        return 2.0 * M_PI * rho * spec.kernel(rho) * (1.0 - std::cyl_bessel_j(0.0, u * rho));
    };
    std::function<double(double)> fn = integrand;

    if (r_t < 1.0) {
        Simpson s{fn};
        total += s.run(r_t, 1.0, tol / 4.0);
        if (s.exhausted) converged = false;
    }

    if (spec.kind == KernelKind::truncated_stable) {
        // exponential tail: everything beyond R is below machine noise
        const double R = 1.0 + 60.0;
        Simpson s{fn};
        total += s.run(1.0, R, tol / 4.0);
        if (s.exhausted) converged = false;
    } else {
        // pure power tail: integrate to R, then add the non-oscillatory part
        // 2 pi c1 R^(-alpha)/alpha; the remaining J0 tail is enveloped by
        // sqrt(2/(pi u rho)) and R grows until that bound clears tol/4.
        double R = std::max(4.0, 40.0 / u);
        auto osc_tail_bound = [&](double r0) {
            return 2.0 * M_PI * c1 * std::sqrt(2.0 / (M_PI * u)) *
                   std::pow(r0, -alpha - 0.5) / (alpha + 0.5);
        };
        while (osc_tail_bound(R) > tol / 4.0 && R < 1e9) R *= 2.0;
        Simpson s{fn};
        total += s.run(1.0, R, tol / 4.0);
        if (s.exhausted) converged = false;
        total += 2.0 * M_PI * c1 * std::pow(R, -alpha) / alpha;
    }
    return total;
}

}  // namespace

void LevySpec::validate() const {
    if (!(alpha > 0 && alpha < 2)) throw std::invalid_argument("LevySpec: 0 < alpha < 2 required");
    if (!(delta > 0 && delta < alpha))
        throw std::invalid_argument("LevySpec: 0 < delta < alpha required");
    if (!(cbar1 > 0 && cbar1 <= cbar2))
        throw std::invalid_argument("LevySpec: 0 < cbar1 <= cbar2 required");
}

double LevySpec::kernel(double r) const {
    if (r <= 0) return 0.0;
    if (kind == KernelKind::pure_fractional || r <= 1.0)
        return cbar1 * std::pow(r, -double(kDim) - alpha);
    return cbar1 * std::exp(-(r - 1.0)) * std::pow(r, -double(kDim) - delta);
}

SymbolTable::SymbolTable(const Grid& g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
    if (values_.size() != g.size()) throw std::invalid_argument("SymbolTable: size mismatch");
}

ScalarField SymbolTable::as_field() const {
    return ScalarField::from_samples(grid_, values_);
}

SymbolTable symbol_fractional(double alpha, const Grid& g) {
    if (!(alpha > 0 && alpha < 2))
        throw std::invalid_argument("symbol_fractional: 0 < alpha < 2 required");
    const int N = g.resolution;
    std::vector<double> vals(g.size());
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const double k1 = g.wavenumber(i), k2 = g.wavenumber(j);
            const double kk = std::sqrt(k1 * k1 + k2 * k2);
            vals[std::size_t(i) * N + j] = kk == 0.0 ? 0.0 : std::pow(kk, alpha);
        }
    }
    return SymbolTable(g, std::move(vals));
}

SymbolTable symbol_levy_khinchin(const LevySpec& spec, const Grid& g, double tol) {
    spec.validate();
    if (!(tol > 0)) throw std::invalid_argument("symbol_levy_khinchin: tol > 0 required");
    const int N = g.resolution;

    // the symbol is radial: collect distinct |xi|^2 keys first
    std::map<long, double> by_radius2;
    for (int i = 0; i < N; ++i) {
        long wi = g.wave_index(i);
        for (int j = 0; j < N; ++j) {
            long wj = g.wave_index(j);
            by_radius2.emplace(wi * wi + wj * wj, 0.0);
        }
    }
    std::vector<long> keys;
    keys.reserve(by_radius2.size());
    for (auto& [k, v] : by_radius2) keys.push_back(k);

    const double kb = 2.0 * M_PI / g.period;
    std::vector<double> results(keys.size(), 0.0);
    std::vector<char> bad(keys.size(), 0);
    parallel_chunks(keys.size(), 64, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t idx = b; idx < e; ++idx) {
            bool ok = true;
            double u = kb * std::sqrt(double(keys[idx]));
            results[idx] = symbol_radial(spec, u, tol, ok);
            if (!ok) bad[idx] = 1;
        }
    });
    for (std::size_t idx = 0; idx < keys.size(); ++idx) {
        if (bad[idx]) {
            std::ostringstream os;
            os << "symbol_levy_khinchin: quadrature did not converge at |xi| = "
               << kb * std::sqrt(double(keys[idx]));
            throw std::runtime_error(os.str());
        }
        by_radius2[keys[idx]] = results[idx];
    }

    std::vector<double> vals(g.size());
    for (int i = 0; i < N; ++i) {
        long wi = g.wave_index(i);
        for (int j = 0; j < N; ++j) {
            long wj = g.wave_index(j);
            vals[std::size_t(i) * N + j] = by_radius2[wi * wi + wj * wj];
        }
    }
    return SymbolTable(g, std::move(vals));
}

ScalarField apply_operator(const SymbolTable& symbol, const ScalarField& f) {
    if (!(symbol.grid() == f.grid()))
        throw std::invalid_argument("apply_operator: grid mismatch");
    const int N = f.grid().resolution;
    std::vector<std::complex<double>> spec = f.spectrum();
    const auto& a = symbol.values();
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= a[i];
    (void)N;
    return ScalarField::from_spectrum(f.grid(), std::move(spec));
}

double dissipation_functional(const ScalarField& f, const SymbolTable& symbol, double p) {
    if (p < 2) throw std::invalid_argument("dissipation_functional: p >= 2 required");
    ScalarField lf = apply_operator(symbol, f);
    const auto& fs = f.samples();
    const auto& ls = lf.samples();
    const double h2 = f.grid().spacing() * f.grid().spacing();
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < fs.size(); ++i) acc += fs[i] * ls[i];
    } else {
        for (std::size_t i = 0; i < fs.size(); ++i)
            acc += std::pow(std::abs(fs[i]), p - 2.0) * fs[i] * ls[i];
    }
    return acc * h2;
}

}  // namespace fracdrift::levy
