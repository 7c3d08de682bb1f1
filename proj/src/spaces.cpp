#include "fracdrift/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fracdrift/parallel.hpp"

namespace fracdrift::spaces {

namespace {

constexpr int kDim = 2;

struct Offset {
    int di, dj;
    double dist;
};

// All lattice offset classes with minimum-image distance in (0, radius],
// each class listed exactly once.
std::vector<Offset> offsets_within(const Grid& g, double radius) {
    const int N = g.resolution;
    const double h = g.spacing();
    std::vector<Offset> out;
    for (int di = 0; di < N; ++di) {
        const double dx = std::remainder(di * h, g.period);
        for (int dj = 0; dj < N; ++dj) {
            if (di == 0 && dj == 0) continue;
            const double dy = std::remainder(dj * h, g.period);
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d <= radius) out.push_back({di, dj, d});
        }
    }
    return out;
}

double integer_pow(double base, long e) {
    double out = 1.0;
    for (long i = 0; i < e; ++i) out *= base;
    return out;
}

// |x|^p, exact product chain for small integer p
double pow_p(double x, double p) {
    x = std::abs(x);
    double r = std::rint(p);
    if (r == p && r >= 1 && r <= 16) return integer_pow(x, long(r));
    return std::pow(x, p);
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
    if (p < 1) throw std::invalid_argument("lp_norm: p >= 1 required");
    const auto& s = f.samples();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : s) m = std::max(m, std::abs(v));
        return m;
    }
    const double h2 = f.grid().spacing() * f.grid().spacing();
    double acc = 0.0;
    for (double v : s) acc += pow_p(v, p);
    return std::pow(acc * h2, 1.0 / p);
}

double besov_double_integral(const ScalarField& f, double s, double p) {
    if (!(s > 0 && s < 1)) throw std::invalid_argument("besov_double_integral: 0 < s < 1");
    if (!(p >= 1)) throw std::invalid_argument("besov_double_integral: p >= 1");
    const Grid& g = f.grid();
    const int N = g.resolution;
    const auto& v = f.samples();

    auto offs = offsets_within(g, 1.0);
    std::vector<double> weight(offs.size());
    for (std::size_t i = 0; i < offs.size(); ++i)
        weight[i] = std::pow(offs[i].dist, -double(kDim) - s * p);

    const std::size_t chunks = 64;
    std::vector<double> partial(chunks, 0.0);
    parallel_chunks(std::size_t(N), chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
        double acc = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            const double* row = v.data() + i * N;
            for (std::size_t o = 0; o < offs.size(); ++o) {
                const std::size_t i2 = (i + offs[o].di) % N;
                const double* row2 = v.data() + i2 * N;
                const int dj = offs[o].dj;
                double w = weight[o];
                for (int j = 0; j < N; ++j) {
                    int j2 = j + dj;
                    if (j2 >= N) j2 -= N;
                    acc += pow_p(row[j] - row2[j2], p) * w;
                }
            }
        }
        partial[c] = acc;
    });
    double acc = 0.0;
    for (double x : partial) acc += x;
    const double h = g.spacing();
    acc *= h * h * h * h;

    // analytic tail over |x-y| > 1 on the mean-removed field:
    // 2^p ||f - mean||_p^p * int_{|z|>1} |z|^{-n-sp} dz
    ScalarField centered = field::linear_combination(1.0, f, 0.0, f);
    {
        auto& sp = centered.spectrum_mut();
        sp[0] = 0.0;
    }
    const double tail_geom = 2.0 * M_PI / (s * p);
    double osc = lp_norm(centered, p);
    acc += std::pow(2.0, p) * std::pow(osc, p) * tail_geom;
    return std::pow(acc, 1.0 / p);
}

double besov_dyadic_blocks(const ScalarField& f, double s, double p) {
    if (!(s > 0 && s < 2)) throw std::invalid_argument("besov_dyadic_blocks: 0 < s < 2");
    const Grid& g = f.grid();
    const int N = g.resolution;
    const double kb = 2.0 * M_PI / g.period;
    const double kmax = kb * (N / 2) * std::sqrt(2.0);

    // phi = 1 on [0,1], cos^2 taper on [1,2], 0 beyond; blocks telescope.
    auto phi = [](double u) {
        if (u <= 1.0) return 1.0;
        if (u >= 2.0) return 0.0;
        double c = std::cos(0.5 * M_PI * (u - 1.0));
        return c * c;
    };

    const int jmin = std::min(0, int(std::floor(std::log2(kb))) - 1);
    const int jmax = int(std::ceil(std::log2(kmax))) + 1;
    double acc = 0.0;
    for (int j = jmin; j <= jmax; ++j) {
        const double twoj = std::pow(2.0, j);
        ScalarField block = field::apply_multiplier(f, [&](double k1, double k2) {
            const double kk = std::sqrt(k1 * k1 + k2 * k2);
            return std::complex<double>(phi(kk / twoj) - phi(2.0 * kk / twoj), 0.0);
        });
        const double bn = lp_norm(block, p);
        acc += std::pow(twoj, s * p) * std::pow(bn, p);
    }
    // calibration aligning the block normalization with the double-integral
    // estimator mid-window on the reference corpus
    const double kNormalization = 2.0;
    return kNormalization * std::pow(acc, 1.0 / p);
}

double morrey_campanato_norm(const ScalarField& f, double q, double a, bool small_radii_only) {
    if (!(q >= 1)) throw std::invalid_argument("morrey_campanato_norm: q >= 1 required");
    if (!(a >= 0 && a < kDim + q))
        throw std::invalid_argument("morrey_campanato_norm: 0 <= a < n+q required");
    const Grid& g = f.grid();
    const int N = g.resolution;
    const double h = g.spacing();
    const double h2 = h * h;
    const auto& v = f.samples();

    const double half_diameter = g.period / std::sqrt(2.0);
    std::vector<double> small_radii, large_radii;
    for (int k = 1; (1 << k) <= N; ++k) small_radii.push_back(std::pow(2.0, -k));
    if (!small_radii_only)
        for (double r = 1.0; r <= half_diameter; r *= 2.0) large_radii.push_back(r);

    struct RadiusSet {
        double r;
        bool centered;
        std::vector<Offset> offs;
    };
    std::vector<RadiusSet> sets;
    for (double r : small_radii) {
        auto o = offsets_within(g, r);
        if (!o.empty()) sets.push_back({r, true, std::move(o)});
    }
    for (double r : large_radii) sets.push_back({r, false, offsets_within(g, r)});

    std::vector<std::size_t> centers;
    for (int i = 0; i < N; i += 2)
        for (int j = 0; j < N; j += 2) centers.push_back(std::size_t(i) * N + j);

    const std::size_t chunks = 64;
    std::vector<double> partial(chunks, 0.0);
    parallel_chunks(centers.size(), chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
        double best = 0.0;
        for (std::size_t ci = b; ci < e; ++ci) {
            const std::size_t base = centers[ci];
            const int i0 = int(base / N), j0 = int(base % N);
            for (const auto& rs : sets) {
                double center_val = 0.0;
                const std::size_t count = rs.offs.size() + 1;
                if (rs.centered) {
                    double sum = v[base];
                    for (const auto& o : rs.offs)
                        sum += v[std::size_t((i0 + o.di) % N) * N + (j0 + o.dj) % N];
                    center_val = sum / double(count);
                }
                double qsum = pow_p(v[base] - center_val, q);
                for (const auto& o : rs.offs)
                    qsum += pow_p(v[std::size_t((i0 + o.di) % N) * N + (j0 + o.dj) % N] - center_val, q);
                const double val = std::pow(std::pow(rs.r, -a) * qsum * h2, 1.0 / q);
                best = std::max(best, val);
            }
        }
        partial[c] = best;
    });
    double best = 0.0;
    for (double x : partial) best = std::max(best, x);
    return best;
}

double holder_seminorm(const ScalarField& f, double gamma) {
    if (!(gamma > 0 && gamma < 1))
        throw std::invalid_argument("holder_seminorm: 0 < gamma < 1 required");
    const Grid& g = f.grid();
    const int N = g.resolution;
    const auto& v = f.samples();
    auto offs = offsets_within(g, 1.0);
    std::vector<double> weight(offs.size());
    for (std::size_t i = 0; i < offs.size(); ++i) weight[i] = std::pow(offs[i].dist, -gamma);

    const std::size_t chunks = 64;
    std::vector<double> partial(chunks, 0.0);
    parallel_chunks(std::size_t(N), chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
        double best = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            const double* row = v.data() + i * N;
            for (std::size_t o = 0; o < offs.size(); ++o) {
                const double* row2 = v.data() + ((i + offs[o].di) % N) * N;
                const int dj = offs[o].dj;
                const double w = weight[o];
                for (int j = 0; j < N; ++j) {
                    int j2 = j + dj;
                    if (j2 >= N) j2 -= N;
                    best = std::max(best, std::abs(row[j] - row2[j2]) * w);
                }
            }
        }
        partial[c] = best;
    });
    double best = 0.0;
    for (double x : partial) best = std::max(best, x);
    return best;
}

LemmaCheck mean_oscillation_lemma_check(const ScalarField& A, double rho,
                                        std::array<double, 2> center, double s, double p,
                                        double besov_norm) {
    if (!(s > 0 && s < 1))
        throw std::invalid_argument("mean_oscillation_lemma_check: 0 < s < 1 required");
    const Grid& g = A.grid();
    const int N = g.resolution;
    const double h = g.spacing();

    ScalarField smoothed = field::convolve(A, field::bump_kernel(g, rho));
    const double abar = field::eval_fourier(smoothed, center[0], center[1]);

    const auto& v = A.samples();
    double qsum = 0.0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (field::torus_distance(g, i * h, j * h, center[0], center[1]) <= rho)
                qsum += pow_p(v[std::size_t(i) * N + j] - abar, p);
        }
    }
    LemmaCheck out;
    out.lhs = std::pow(qsum * h * h, 1.0 / p);
    if (besov_norm <= 0) besov_norm = besov_double_integral(A, s, p);
    out.rhs = std::pow(rho, s) * besov_norm;
    out.ratio = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
    return out;
}

LemmaCheck annulus_oscillation_check(const ScalarField& A, double rho,
                                     std::array<double, 2> center, double s, double p, int k,
                                     double besov_norm) {
    if (k < 1) throw std::invalid_argument("annulus_oscillation_check: k >= 1 required");
    const Grid& g = A.grid();
    const int N = g.resolution;
    const double h = g.spacing();
    const double R = std::pow(2.0, k) * rho;

    ScalarField smoothed = field::convolve(A, field::bump_kernel(g, rho));
    const double abar = field::eval_fourier(smoothed, center[0], center[1]);

    const auto& v = A.samples();
    double qsum = 0.0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (field::torus_distance(g, i * h, j * h, center[0], center[1]) <= R)
                qsum += pow_p(v[std::size_t(i) * N + j] - abar, p);
        }
    }
    LemmaCheck out;
    out.lhs = std::pow(qsum * h * h, 1.0 / p);
    if (besov_norm <= 0) besov_norm = besov_double_integral(A, s, p);
    out.rhs = std::pow(R, s) * std::pow(2.0, double(k) * kDim / p) * besov_norm;
    out.ratio = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
    return out;
}

LemmaCheck besov_vs_dissipation(const ScalarField& f, const levy::SymbolTable& symbol,
                                double p, double s) {
    LemmaCheck out;
    out.lhs = std::pow(besov_double_integral(f, s, p), p);
    const double lp = lp_norm(f, p);
    out.rhs = std::pow(lp, p) + levy::dissipation_functional(f, symbol, p);
    out.ratio = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
    return out;
}

std::string NormReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"grid\": {\"resolution\": " << resolution << ", \"period\": " << period
       << ", \"truncation_radius\": " << truncation_radius << "},\n";
    os << "  \"lp\": {";
    bool first = true;
    for (auto& [p, v] : lp) {
        os << (first ? "" : ", ") << "\"" << p << "\": " << v;
        first = false;
    }
    os << "},\n  \"besov\": {";
    first = true;
    for (auto& [sp, v] : besov) {
        os << (first ? "" : ", ") << "\"s=" << sp.first << ",p=" << sp.second << "\": " << v;
        first = false;
    }
    os << "},\n  \"besov_method\": \"" << besov_method << "\",\n  \"morrey\": {";
    first = true;
    for (auto& [qa, v] : morrey) {
        os << (first ? "" : ", ") << "\"q=" << qa.first << ",a=" << qa.second << "\": " << v;
        first = false;
    }
    os << "},\n  \"holder\": {";
    first = true;
    for (auto& [gm, v] : holder) {
        os << (first ? "" : ", ") << "\"" << gm << "\": " << v;
        first = false;
    }
    os << "}\n}\n";
    return os.str();
}

}  // namespace fracdrift::spaces
