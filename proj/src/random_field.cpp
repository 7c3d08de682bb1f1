#include "fracdrift/random_field.hpp"

#include <cmath>

namespace fracdrift::field {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t bits) {
    return double(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// One complex Gaussian per canonical mode, keyed by (seed, k1, k2).
std::complex<double> mode_gaussian(std::uint64_t seed, int k1, int k2) {
    std::uint64_t key = (std::uint64_t(std::uint32_t(k1)) << 32) | std::uint32_t(k2);
    std::uint64_t s = splitmix64(seed ^ splitmix64(key));
    double u1 = uniform01(s);
    double u2 = uniform01(splitmix64(s));
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

}  // namespace

ScalarField make_bandlimited_gaussian(const Grid& g, std::uint64_t seed, int kmax,
                                      double spectral_slope, double target_sup) {
    const int N = g.resolution;
    std::vector<std::complex<double>> spec(g.size(), {0.0, 0.0});
    auto store = [&](int k1, int k2, std::complex<double> c) {
        int i = k1 >= 0 ? k1 : k1 + N;
        int j = k2 >= 0 ? k2 : k2 + N;
        spec[std::size_t(i) * N + j] = c;
    };
    const int cap = std::min(kmax, N / 2 - 1);
    for (int k1 = 0; k1 <= cap; ++k1) {
        for (int k2 = -cap; k2 <= cap; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;  // canonical half-lattice
            double kk = std::sqrt(double(k1) * k1 + double(k2) * k2);
            if (kk > kmax) continue;
            double amp = std::pow(kk, -spectral_slope);
            std::complex<double> c = amp * mode_gaussian(seed, k1, k2) / std::sqrt(2.0);
            store(k1, k2, c);
            store(-k1, -k2, std::conj(c));
        }
    }
    ScalarField f = ScalarField::from_spectrum(g, std::move(spec));
    if (target_sup > 0) {
        double sup = max_abs(f);
        if (sup > 0) f = scaled(f, target_sup / sup);
    }
    f.ensure_both();
    return f;
}

}  // namespace fracdrift::field
