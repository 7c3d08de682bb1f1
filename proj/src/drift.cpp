#include "fracdrift/drift.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fracdrift::drift {

namespace {

// Scalar part of the divergence-free multiplier M(xi) = i m(xi) xi_perp/|xi|,
// with xi_perp = (xi2, -xi1). m == 1 reproduces the SQG pair (-R2, R1).
double multiplier_scalar(const DriftSpec& spec, double k1, double k2) {
    switch (spec.kind) {
        case DriftKind::sqg_riesz:
            return 1.0;
        case DriftKind::fv_mhd:
            return (k1 * k1 - k2 * k2) / (k1 * k1 + k2 * k2);
        case DriftKind::multiplier_matrix: {
            if (spec.multiplier_preset == "riesz_perp") return 1.0;
            if (spec.multiplier_preset == "cz_anisotropic")
                return (k1 * k1 - k2 * k2) / (k1 * k1 + k2 * k2);
            if (spec.multiplier_preset == "cz_phase")
                return 2.0 * k1 * k2 / (k1 * k1 + k2 * k2);
            throw std::invalid_argument("unknown multiplier preset '" + spec.multiplier_preset + "'");
        }
    }
    return 1.0;
}

}  // namespace

void DriftSpec::validate() const {
    if (eta_smooth > 0 && eta_rough > 0)
        throw std::invalid_argument("DriftSpec: eta_smooth and eta_rough are mutually exclusive");
    if (eta_smooth < 0 || eta_rough < 0)
        throw std::invalid_argument("DriftSpec: eta exponents must be >= 0");
    if (mollify_eps < 0) throw std::invalid_argument("DriftSpec: mollify_eps must be >= 0");
}

DriftKind drift_kind_from_string(const std::string& s) {
    if (s == "sqg_riesz" || s == "sqg") return DriftKind::sqg_riesz;
    if (s == "multiplier_matrix") return DriftKind::multiplier_matrix;
    if (s == "fv_mhd") return DriftKind::fv_mhd;
    throw std::invalid_argument("unknown drift kind '" + s + "'");
}

std::string to_string(DriftKind k) {
    switch (k) {
        case DriftKind::sqg_riesz: return "sqg_riesz";
        case DriftKind::multiplier_matrix: return "multiplier_matrix";
        case DriftKind::fv_mhd: return "fv_mhd";
    }
    return "?";
}

VectorField evaluate_drift(const DriftSpec& spec, const ScalarField& theta) {
    spec.validate();
    const Grid& g = theta.grid();
    const int N = g.resolution;
    const auto& spec_in = theta.spectrum();
    std::vector<std::complex<double>> s1(g.size()), s2(g.size());
    const double eta = spec.eta_smooth > 0 ? -spec.eta_smooth : spec.eta_rough;
    for (int i = 0; i < N; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < N; ++j) {
            const double k2 = g.wavenumber(j);
            const std::size_t idx = std::size_t(i) * N + j;
            const double kk = std::sqrt(k1 * k1 + k2 * k2);
            if (kk == 0.0) {
                s1[idx] = s2[idx] = 0.0;
                continue;
            }
            double m = multiplier_scalar(spec, k1, k2);
            if (eta != 0.0) m *= std::pow(kk, eta);
            const std::complex<double> base = std::complex<double>(0.0, m / kk) * spec_in[idx];
            s1[idx] = base * k2;    // i m xi2/|xi|
            s2[idx] = base * (-k1); // -i m xi1/|xi|
        }
    }
    VectorField A;
    A.x = ScalarField::from_spectrum(g, std::move(s1));
    A.y = ScalarField::from_spectrum(g, std::move(s2));
    if (spec.mollify_eps > 0) A = mollify_drift(A, spec.mollify_eps);
    return A;
}

ScalarField mollify_scalar(const ScalarField& f, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("mollify: eps > 0 required");
    // flat-top taper: unit to high order near zero so that eps below
    // 2 pi / (10 bandwidth) leaves band-limited fields intact to 1e-6
    return field::apply_multiplier(f, [eps](double k1, double k2) {
        const double t = eps * std::sqrt(k1 * k1 + k2 * k2) / 4.0;
        const double t2 = t * t;
        const double t8 = t2 * t2 * t2 * t2;
        return std::complex<double>(std::exp(-t8), 0.0);
    });
}

VectorField mollify_drift(const VectorField& A, double eps) {
    VectorField out;
    out.x = mollify_scalar(A.x, eps);
    out.y = mollify_scalar(A.y, eps);
    return out;
}

std::vector<VectorField> mollify_drift_time(const std::vector<VectorField>& series,
                                            double snapshot_dt, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("mollify_drift_time: eps > 0 required");
    if (series.empty()) return {};
    // psi(t) = c exp(-1/(1-t^2)) on (-1,1), unit mass after discretization
    const int half = std::max(1, int(std::ceil(eps / snapshot_dt)));
    std::vector<double> w(2 * half + 1, 0.0);
    double wsum = 0.0;
    for (int j = -half; j <= half; ++j) {
        double t = j * snapshot_dt / eps;
        if (std::abs(t) < 1.0) w[j + half] = std::exp(-1.0 / (1.0 - t * t));
        wsum += w[j + half];
    }
    for (auto& v : w) v /= wsum;

    std::vector<VectorField> out;
    out.reserve(series.size());
    const int n = int(series.size());
    for (int i = 0; i < n; ++i) {
        VectorField acc(series[0].grid());
        for (int j = -half; j <= half; ++j) {
            const int src = i - j;
            if (src < 0 || src >= n) continue;  // zero extension
            acc.x = field::linear_combination(1.0, acc.x, w[j + half], series[src].x);
            acc.y = field::linear_combination(1.0, acc.y, w[j + half], series[src].y);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

double check_divergence_free(const VectorField& A) {
    return field::max_abs(field::divergence(A));
}

}  // namespace fracdrift::drift
