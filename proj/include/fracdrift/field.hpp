#pragma once
#include <utility>

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace fracdrift::field {

/// Uniform periodic lattice on the 2-D torus [0,L)^2.
struct Grid {
    int resolution = 0;  // N points per axis, power of two >= 16
    double period = 0;   // box length L

    Grid() = default;
    Grid(int N, double L);
    explicit Grid(int N);

    int n_dim() const { return 2; }
    double spacing() const { return period / resolution; }
    std::size_t size() const { return std::size_t(resolution) * resolution; }

    /// Signed integer wavenumber for storage index j.
    int wave_index(int j) const { return j <= resolution / 2 ? j : j - resolution; }
    /// Physical wavenumber (2 pi / L) * wave_index.
    double wavenumber(int j) const { return 2.0 * M_PI / period * wave_index(j); }
    /// Largest index kept by the 2/3 dealiasing rule.
    int dealias_limit() const { return resolution / 3; }

    bool operator==(const Grid& o) const {
        return resolution == o.resolution && period == o.period;
    }
};

/// Real scalar field with lazily synchronized sample and spectral views.
/// Mutation through the *_mut accessors invalidates the twin view; reads are
/// safe to share across threads once both views have been materialized.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g);
    static ScalarField from_samples(const Grid& g, std::vector<double> samples);
    static ScalarField from_spectrum(const Grid& g, std::vector<std::complex<double>> spec);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& samples() const;
    const std::vector<std::complex<double>>& spectrum() const;
    std::vector<double>& samples_mut();
    std::vector<std::complex<double>>& spectrum_mut();

    double sample(int i, int j) const { return samples()[std::size_t(i) * grid_.resolution + j]; }
    void ensure_both() const { samples(); spectrum(); }

private:
    Grid grid_;
    mutable std::vector<double> samples_;
    mutable std::vector<std::complex<double>> spectrum_;
    mutable bool samples_valid_ = false;
    mutable bool spectrum_valid_ = false;
};

/// Pair of scalar components on a shared grid.
struct VectorField {
    ScalarField x, y;

    VectorField() = default;
    explicit VectorField(const Grid& g) : x(g), y(g) {}
    VectorField(ScalarField x_, ScalarField y_) : x(std::move(x_)), y(std::move(y_)) {}
    const Grid& grid() const { return x.grid(); }
    const ScalarField& component(int axis) const { return axis == 0 ? x : y; }
    ScalarField& component(int axis) { return axis == 0 ? x : y; }
};

ScalarField transform_roundtrip(const ScalarField& f);

/// Spectral derivative along one axis (ik multiplier, Nyquist row zeroed).
ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);

/// Pointwise product with the 2/3-rule truncation applied to the result.
ScalarField product_dealiased(const ScalarField& f, const ScalarField& g);
void dealias_inplace(ScalarField& f);

/// Multiplier m(k1,k2) acting on the spectrum; m(0,0) is applied as given.
ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<std::complex<double>(double, double)>& m);

ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g);
ScalarField scaled(const ScalarField& f, double a);

double mean(const ScalarField& f);
double max_abs(const ScalarField& f);

/// Trigonometric interpolation at an off-grid point; exact for band-limited
/// fields.
double eval_fourier(const ScalarField& f, double x1, double x2);

/// Smooth bump exp(-1/(1-(d/radius)^2)) centered at the origin, sampled on
/// the grid and normalized to unit discrete mass.
ScalarField bump_kernel(const Grid& g, double radius);

/// Periodic convolution f * kernel computed spectrally; a unit-mass kernel
/// leaves the mean intact.
ScalarField convolve(const ScalarField& f, const ScalarField& kernel);

/// Torus distance between points (shortest lift).
double torus_distance(const Grid& g, double ax, double ay, double bx, double by);

}  // namespace fracdrift::field
