#include "fracdrift/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracdrift::field {

namespace {

// Plan cache keyed by (N, direction). Plans are created with FFTW_UNALIGNED
// so fftw_execute_dft may run on any caller buffer; FFTW_ESTIMATE keeps the
// planning deterministic.
class FftEngine {
public:
    static FftEngine& instance() {
        static FftEngine e;
        return e;
    }

    void execute(int N, int sign, std::complex<double>* in, std::complex<double>* out) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_pair(N, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<std::complex<double>> scratch(std::size_t(N) * N);
                fftw_plan p = fftw_plan_dft_2d(
                    N, N, reinterpret_cast<fftw_complex*>(scratch.data()),
                    reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                    FFTW_ESTIMATE | FFTW_UNALIGNED);
                it = plans_.emplace(key, p).first;
            }
            plan = it->second;
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }

private:
    ~FftEngine() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int N, double L) : resolution(N), period(L) {
    if (!is_power_of_two(N) || N < 16)
        throw std::invalid_argument("Grid: resolution must be a power of two >= 16");
    if (!(L > 0)) throw std::invalid_argument("Grid: period must be positive");
}

Grid::Grid(int N) : Grid(N, 2.0 * M_PI) {}

ScalarField::ScalarField(const Grid& g)
    : grid_(g), samples_(g.size(), 0.0), spectrum_(g.size(), {0.0, 0.0}),
      samples_valid_(true), spectrum_valid_(true) {}

ScalarField ScalarField::from_samples(const Grid& g, std::vector<double> samples) {
    if (samples.size() != g.size()) throw std::invalid_argument("from_samples: size mismatch");
    ScalarField f;
    f.grid_ = g;
    f.samples_ = std::move(samples);
    f.samples_valid_ = true;
    f.spectrum_valid_ = false;
    return f;
}

ScalarField ScalarField::from_spectrum(const Grid& g, std::vector<std::complex<double>> spec) {
    if (spec.size() != g.size()) throw std::invalid_argument("from_spectrum: size mismatch");
    ScalarField f;
    f.grid_ = g;
    f.spectrum_ = std::move(spec);
    f.spectrum_valid_ = true;
    f.samples_valid_ = false;
    return f;
}

const std::vector<double>& ScalarField::samples() const {
    if (!samples_valid_) {
        const int N = grid_.resolution;
        std::vector<std::complex<double>> work(spectrum_);
        FftEngine::instance().execute(N, FFTW_BACKWARD, work.data(), work.data());
        samples_.resize(grid_.size());
        for (std::size_t i = 0; i < work.size(); ++i) samples_[i] = work[i].real();
        samples_valid_ = true;
    }
    return samples_;
}

const std::vector<std::complex<double>>& ScalarField::spectrum() const {
    if (!spectrum_valid_) {
        const int N = grid_.resolution;
        std::vector<std::complex<double>> work(grid_.size());
        for (std::size_t i = 0; i < work.size(); ++i) work[i] = samples_[i];
        FftEngine::instance().execute(N, FFTW_FORWARD, work.data(), work.data());
        const double scale = 1.0 / double(grid_.size());
        for (auto& c : work) c *= scale;
        spectrum_ = std::move(work);
        spectrum_valid_ = true;
    }
    return spectrum_;
}

std::vector<double>& ScalarField::samples_mut() {
    samples();
    spectrum_valid_ = false;
    return samples_;
}

std::vector<std::complex<double>>& ScalarField::spectrum_mut() {
    spectrum();
    samples_valid_ = false;
    return spectrum_;
}

ScalarField transform_roundtrip(const ScalarField& f) {
    ScalarField g = ScalarField::from_samples(f.grid(), f.samples());
    g.spectrum();
    std::vector<std::complex<double>> spec = g.spectrum();
    return ScalarField::from_spectrum(f.grid(), std::move(spec));
}

ScalarField derivative(const ScalarField& f, int axis) {
    const Grid& g = f.grid();
    const int N = g.resolution;
    std::vector<std::complex<double>> spec = f.spectrum();
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const int widx = axis == 0 ? g.wave_index(i) : g.wave_index(j);
            double k = 2.0 * M_PI / g.period * widx;
            if (std::abs(widx) == N / 2) k = 0.0;  // odd derivative of Nyquist mode
            spec[std::size_t(i) * N + j] *= std::complex<double>(0.0, k);
        }
    }
    return ScalarField::from_spectrum(g, std::move(spec));
}

VectorField gradient(const ScalarField& f) {
    VectorField v;
    v.x = derivative(f, 0);
    v.y = derivative(f, 1);
    return v;
}

ScalarField divergence(const VectorField& v) {
    if (!(v.x.grid() == v.y.grid())) throw std::invalid_argument("divergence: grid mismatch");
    return linear_combination(1.0, derivative(v.x, 0), 1.0, derivative(v.y, 1));
}

void dealias_inplace(ScalarField& f) {
    const Grid& g = f.grid();
    const int N = g.resolution;
    const int cut = g.dealias_limit();
    auto& spec = f.spectrum_mut();
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (std::abs(g.wave_index(i)) > cut || std::abs(g.wave_index(j)) > cut)
                spec[std::size_t(i) * N + j] = 0.0;
        }
    }
}

ScalarField product_dealiased(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("product_dealiased: grid mismatch");
    const auto& a = f.samples();
    const auto& b = g.samples();
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    ScalarField out = ScalarField::from_samples(f.grid(), std::move(prod));
    dealias_inplace(out);
    return out;
}

ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<std::complex<double>(double, double)>& m) {
    const Grid& g = f.grid();
    const int N = g.resolution;
    std::vector<std::complex<double>> spec = f.spectrum();
    for (int i = 0; i < N; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < N; ++j) {
            const double k2 = g.wavenumber(j);
            spec[std::size_t(i) * N + j] *= m(k1, k2);
        }
    }
    return ScalarField::from_spectrum(g, std::move(spec));
}

ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g) {
    if (!(f.grid() == g.grid()))
        throw std::invalid_argument("linear_combination: grid mismatch");
    const auto& fs = f.spectrum();
    const auto& gs = g.spectrum();
    std::vector<std::complex<double>> out(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) out[i] = a * fs[i] + b * gs[i];
    return ScalarField::from_spectrum(f.grid(), std::move(out));
}

ScalarField scaled(const ScalarField& f, double a) {
    std::vector<double> out = f.samples();
    for (auto& v : out) v *= a;
    return ScalarField::from_samples(f.grid(), std::move(out));
}

double mean(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.samples()) s += v;
    return s / double(f.grid().size());
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.samples()) m = std::max(m, std::abs(v));
    return m;
}

double eval_fourier(const ScalarField& f, double x1, double x2) {
    const Grid& g = f.grid();
    const int N = g.resolution;
    const auto& spec = f.spectrum();
    std::vector<std::complex<double>> ph1(N), ph2(N);
    for (int j = 0; j < N; ++j) {
        ph1[j] = std::polar(1.0, g.wavenumber(j) * x1);
        ph2[j] = std::polar(1.0, g.wavenumber(j) * x2);
    }
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < N; ++i) {
        std::complex<double> row{0.0, 0.0};
        const std::complex<double>* s = spec.data() + std::size_t(i) * N;
        for (int j = 0; j < N; ++j) row += s[j] * ph2[j];
        acc += row * ph1[i];
    }
    return acc.real();
}

double torus_distance(const Grid& g, double ax, double ay, double bx, double by) {
    const double L = g.period;
    double dx = std::remainder(ax - bx, L);
    double dy = std::remainder(ay - by, L);
    return std::sqrt(dx * dx + dy * dy);
}

ScalarField bump_kernel(const Grid& g, double radius) {
    if (!(radius > 0)) throw std::invalid_argument("bump_kernel: radius > 0 required");
    const int N = g.resolution;
    const double h = g.spacing();
    std::vector<double> samples(g.size(), 0.0);
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const double d = torus_distance(g, i * h, j * h, 0.0, 0.0);
            const double u = d / radius;
            if (u < 1.0) {
                const double v = std::exp(-1.0 / (1.0 - u * u));
                samples[std::size_t(i) * N + j] = v;
                sum += v;
            }
        }
    }
    if (sum == 0.0) throw std::invalid_argument("bump_kernel: radius below grid resolution");
    const double scale = 1.0 / (sum * h * h);
    for (auto& v : samples) v *= scale;
    return ScalarField::from_samples(g, std::move(samples));
}

ScalarField convolve(const ScalarField& f, const ScalarField& kernel) {
    if (!(f.grid() == kernel.grid())) throw std::invalid_argument("convolve: grid mismatch");
    const double L2 = f.grid().period * f.grid().period;
    const auto& fs = f.spectrum();
    const auto& ks = kernel.spectrum();
    std::vector<std::complex<double>> out(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) out[i] = L2 * fs[i] * ks[i];
    return ScalarField::from_spectrum(f.grid(), std::move(out));
}

}  // namespace fracdrift::field
