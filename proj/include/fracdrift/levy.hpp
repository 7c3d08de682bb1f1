#pragma once

#include <string>
#include <vector>

#include "fracdrift/field.hpp"

namespace fracdrift::levy {

using field::Grid;
using field::ScalarField;

enum class KernelKind { pure_fractional, truncated_stable };

/// Levy operator parameters. The radial kernel is
///   pi(r) = cbar1 r^(-n-alpha)                    for r <= 1,
///   pi(r) = cbar1 e^(-(r-1)) r^(-n-delta)         for r > 1 (truncated_stable),
/// which sits inside the admissible kernel envelope for any cbar2 >= cbar1.
struct LevySpec {
    double alpha = 1.0;
    double delta = 0.75;
    double cbar1 = 1.0;
    double cbar2 = 1.0;
    KernelKind kind = KernelKind::pure_fractional;

    void validate() const;
    double kernel(double r) const;
};

/// Nonnegative symbol a(xi) tabulated on the spectral lattice of a grid.
class SymbolTable {
public:
    SymbolTable() = default;
    SymbolTable(const Grid& g, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(int i, int j) const { return values_[std::size_t(i) * grid_.resolution + j]; }

    /// Symbol laid out as a real field over the lattice, for file export.
    ScalarField as_field() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// a(xi) = |xi|^alpha exactly on the lattice.
SymbolTable symbol_fractional(double alpha, const Grid& g);

/// Levy-Khinchin quadrature a(xi) = int (1-cos(xi.y)) pi(y) dy with absolute
/// error <= tol per lattice point. Throws std::runtime_error naming the worst
/// lattice point when the quadrature fails to converge.
SymbolTable symbol_levy_khinchin(const LevySpec& spec, const Grid& g, double tol = 1e-8);

ScalarField apply_operator(const SymbolTable& symbol, const ScalarField& f);

/// D_p(f) = int |f|^(p-2) f (L f) dx by grid quadrature; nonnegative up to
/// quadrature error.
double dissipation_functional(const ScalarField& f, const SymbolTable& symbol, double p);

}  // namespace fracdrift::levy
