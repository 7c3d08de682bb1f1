#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fracdrift/levy.hpp"
#include "fracdrift/random_field.hpp"
#include "fracdrift/spaces.hpp"
#include "oracles.hpp"

using namespace fracdrift;
using field::Grid;
using field::ScalarField;

TEST_CASE("levy spec validation") {
    levy::LevySpec spec;
    spec.alpha = 1.0;
    spec.delta = 0.75;
    CHECK_NOTHROW(spec.validate());
    spec.alpha = 2.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.alpha = 1.0;
    spec.delta = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.delta = 0.75;
    spec.cbar2 = 0.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("truncated kernel sits inside its envelope") {
    levy::LevySpec spec;
    spec.kind = levy::KernelKind::truncated_stable;
    spec.alpha = 1.2;
    spec.delta = 0.7;
    spec.cbar1 = 0.8;
    spec.cbar2 = 1.0;
    for (double r : {0.01, 0.3, 0.9, 1.0}) {
        const double pi_r = spec.kernel(r);
        CHECK(pi_r >= spec.cbar1 * std::pow(r, -2.0 - spec.alpha) * (1.0 - 1e-12));
        CHECK(pi_r <= spec.cbar2 * std::pow(r, -2.0 - spec.alpha) * (1.0 + 1e-12));
    }
    for (double r : {1.1, 2.0, 5.0, 20.0}) {
        CHECK(spec.kernel(r) >= 0.0);
        CHECK(spec.kernel(r) <= spec.cbar2 * std::pow(r, -2.0 - spec.delta) * (1.0 + 1e-12));
    }
}

TEST_CASE("fractional symbol lattice values") {
    Grid g(32);
    auto sym1 = levy::symbol_fractional(1.0, g);
    CHECK(sym1.value(2, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sym1.value(0, 0) == 0.0);
    auto sym15 = levy::symbol_fractional(1.5, g);
    CHECK(sym15.value(0, 2) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-15));
    CHECK_THROWS_AS(levy::symbol_fractional(2.0, g), std::invalid_argument);
}

TEST_CASE("levy-khinchin symbol against the dense quadrature reference") {
    Grid g(16);
    levy::LevySpec spec;
    spec.kind = levy::KernelKind::truncated_stable;
    spec.alpha = 1.0;
    spec.delta = 0.6;
    auto sym = levy::symbol_levy_khinchin(spec, g, 1e-8);

    CHECK(sym.value(0, 0) == 0.0);
    // symmetry over the whole lattice
    const int N = g.resolution;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            CHECK(sym.value(i, j) == doctest::Approx(sym.value((N - i) % N, (N - j) % N)));

    // spot-check the worked lattice point and a few others against the oracle
    const double ref40 = oracles::symbol_reference(spec, 4.0);
    CHECK(std::abs(sym.value(4, 0) - ref40) < 1e-6);
    const double ref11 = oracles::symbol_reference(spec, std::sqrt(2.0));
    CHECK(std::abs(sym.value(1, 1) - ref11) < 1e-6);
    const double ref70 = oracles::symbol_reference(spec, 7.0);
    CHECK(std::abs(sym.value(7, 0) - ref70) < 1e-6);
}

TEST_CASE("pure fractional levy-khinchin symbol is a clean power law") {
    Grid g(16);
    levy::LevySpec spec;
    spec.kind = levy::KernelKind::pure_fractional;
    spec.alpha = 1.0;
    spec.delta = 0.75;
    auto sym = levy::symbol_levy_khinchin(spec, g, 1e-8);
    // a(xi) = C |xi| with C = 2 pi for the |y|^-3 kernel in 2-D
    for (int k : {1, 2, 4, 6}) {
        CHECK(sym.value(k, 0) == doctest::Approx(2.0 * M_PI * k).epsilon(1e-6));
    }
    // homogeneity across directions
    CHECK(sym.value(3, 4) == doctest::Approx(2.0 * M_PI * 5.0).epsilon(1e-6));
}

TEST_CASE("apply_operator") {
    Grid g(32);
    auto sym = levy::symbol_fractional(1.0, g);
    SUBCASE("constant maps to zero") {
        ScalarField c = ScalarField::from_samples(g, std::vector<double>(g.size(), 2.5));
        CHECK(field::max_abs(levy::apply_operator(sym, c)) < 1e-13);
    }
    SUBCASE("cosine is an eigenfunction") {
        std::vector<oracles::Mode> modes = {{3, 4, 1.0, 0.2}};
        ScalarField f = oracles::modes_to_field(g, modes);
        ScalarField lf = levy::apply_operator(sym, f);
        const auto& fs = f.samples();
        const auto& ls = lf.samples();
        double err = 0.0;
        for (std::size_t i = 0; i < fs.size(); ++i)
            err = std::max(err, std::abs(ls[i] - 5.0 * fs[i]));
        CHECK(err < 1e-10);
    }
    SUBCASE("translation equivariance on the lattice") {
        ScalarField f = field::make_bandlimited_gaussian(g, 21, 9, 1.0, 1.0);
        ScalarField lf = levy::apply_operator(sym, f);
        // shift f by (5, 3) lattice cells, apply, then compare to shifted lf
        const int N = g.resolution;
        std::vector<double> shifted(g.size());
        const auto& fs = f.samples();
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                shifted[std::size_t(i) * N + j] = fs[std::size_t((i + 5) % N) * N + (j + 3) % N];
        ScalarField lf_shift =
            levy::apply_operator(sym, ScalarField::from_samples(g, std::move(shifted)));
        const auto& a = lf.samples();
        const auto& b = lf_shift.samples();
        double err = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                err = std::max(err, std::abs(b[std::size_t(i) * N + j] -
                                             a[std::size_t((i + 5) % N) * N + (j + 3) % N]));
        CHECK(err < 1e-11);
    }
}

TEST_CASE("apply_operator matches the real-space singular integral") {
    // normalized fractional Laplacian: symbol |xi| versus the periodized
    // kernel |y|^-3/(2 pi) quadrature
    Grid g(32);
    auto sym = levy::symbol_fractional(1.0, g);
    std::vector<oracles::Mode> modes = {
        {1, 0, 0.9, 0.1}, {0, 2, -0.6, 1.2}, {2, 1, 0.4, -0.7}, {3, 2, 0.25, 2.1}};
    ScalarField f = oracles::modes_to_field(g, modes);
    ScalarField lf = levy::apply_operator(sym, f);

    oracles::FractionalKernelReference reference;
    const double h = g.spacing();
    double max_err = 0.0, max_val = 0.0;
    for (auto [i, j] : {std::pair{0, 0}, {5, 9}, {16, 3}, {23, 27}}) {
        const double spectral = lf.sample(i, j);
        const double real_space = reference.apply(modes, i * h, j * h);
        max_err = std::max(max_err, std::abs(spectral - real_space));
        max_val = std::max(max_val, std::abs(spectral));
    }
    CHECK(max_err / max_val < 1e-4);
}

TEST_CASE("dissipation functional") {
    Grid g(32);
    levy::LevySpec spec;
    spec.kind = levy::KernelKind::truncated_stable;
    spec.alpha = 1.0;
    spec.delta = 0.6;
    auto sym = levy::symbol_levy_khinchin(spec, g, 1e-8);

    SUBCASE("constant gives zero") {
        ScalarField c = ScalarField::from_samples(g, std::vector<double>(g.size(), 1.7));
        CHECK(std::abs(levy::dissipation_functional(c, sym, 4.0)) < 1e-12);
    }
    SUBCASE("p = 2 equals the spectral sum") {
        ScalarField f = field::make_bandlimited_gaussian(g, 31, 8, 1.0, 1.0);
        const double d2 = levy::dissipation_functional(f, sym, 2.0);
        double spectral = 0.0;
        const auto& sp = f.spectrum();
        const int N = g.resolution;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                spectral += sym.value(i, j) * std::norm(sp[std::size_t(i) * N + j]);
        spectral *= g.period * g.period;
        CHECK(d2 == doctest::Approx(spectral).epsilon(1e-10));
    }
    SUBCASE("positivity over random fields") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            ScalarField f = field::make_bandlimited_gaussian(g, seed, 9, 1.0, 1.0);
            CHECK(levy::dissipation_functional(f, sym, 2.0) >= -1e-10);
            CHECK(levy::dissipation_functional(f, sym, 4.0) >= -1e-10);
        }
    }
    SUBCASE("p-homogeneity for even p") {
        ScalarField f = field::make_bandlimited_gaussian(g, 8, 7, 1.0, 1.0);
        const double d4 = levy::dissipation_functional(f, sym, 4.0);
        const double d4_scaled = levy::dissipation_functional(field::scaled(f, 2.0), sym, 4.0);
        CHECK(d4_scaled == doctest::Approx(16.0 * d4).epsilon(1e-10));
    }
    SUBCASE("p < 2 rejected") {
        ScalarField f(g);
        CHECK_THROWS_AS(levy::dissipation_functional(f, sym, 1.5), std::invalid_argument);
    }
}

TEST_CASE("symbol sandwich near low modes for the truncated kernel") {
    Grid g(32);
    levy::LevySpec spec;
    spec.kind = levy::KernelKind::truncated_stable;
    spec.alpha = 1.3;
    spec.delta = 0.8;
    auto sym = levy::symbol_levy_khinchin(spec, g, 1e-8);
    double c_lo = 1e300, c_hi = 0.0;
    const int N = g.resolution;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double k1 = g.wavenumber(i), k2 = g.wavenumber(j);
            const double kk = std::sqrt(k1 * k1 + k2 * k2);
            if (kk == 0.0 || kk > 8.0) continue;
            const double ratio = sym.value(i, j) / std::pow(kk, spec.alpha);
            c_lo = std::min(c_lo, ratio);
            c_hi = std::max(c_hi, ratio);
        }
    CHECK(c_lo > 0.0);
    CHECK(c_hi / c_lo < 4.0);

    // same physical lattice points at the finer resolution give the same
    // constants (the symbol is resolution independent)
    Grid g2(64);
    auto sym2 = levy::symbol_levy_khinchin(spec, g2, 1e-8);
    CHECK(sym2.value(3, 2) == doctest::Approx(sym.value(3, 2)).epsilon(1e-9));
}

TEST_CASE("symbol table exports as a field") {
    Grid g(16);
    auto sym = levy::symbol_fractional(0.9, g);
    ScalarField f = sym.as_field();
    CHECK(f.sample(2, 0) == doctest::Approx(std::pow(2.0, 0.9)));
}
