#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fracdrift/field.hpp"
#include "fracdrift/levy.hpp"

namespace fracdrift::spaces {

using field::Grid;
using field::ScalarField;

/// Grid L^p norm; p = infinity gives the sample maximum.
double lp_norm(const ScalarField& f, double p);

/// Double-integral Besov estimator restricted to torus distance <= 1, plus an
/// analytic far-tail bound evaluated on the mean-removed field.
double besov_double_integral(const ScalarField& f, double s, double p);

/// Littlewood-Paley estimator (sum_j 2^{jsp} ||block_j f||_p^p)^{1/p}; the
/// cross-validation oracle for the double integral.
double besov_dyadic_blocks(const ScalarField& f, double s, double p);

/// Local Morrey-Campanato estimator: sup over every 2nd grid point and dyadic
/// radii of the scaled mean oscillation (radii < 1), plus the un-centered
/// large-radius part capped at the torus half-diameter. small_radii_only
/// restricts to the oscillation part.
double morrey_campanato_norm(const ScalarField& f, double q, double a,
                             bool small_radii_only = false);

/// sup |f(x)-f(y)| / d(x,y)^gamma over pairs with torus distance in (0, 1].
double holder_seminorm(const ScalarField& f, double gamma);

struct LemmaCheck {
    double lhs = 0;
    double rhs = 0;
    double ratio = 0;  // lhs / rhs, 0 when rhs vanishes
};

/// Mean-oscillation bound: || A - Abar_rho(center) ||_{L^p(B_rho)} against
/// rho^s ||A||_{B^{s,p}_p}, with Abar the bump-mollified value at the center.
/// Pass a positive besov_norm to reuse a precomputed ||A||_{B^{s,p}_p}.
LemmaCheck mean_oscillation_lemma_check(const ScalarField& A, double rho,
                                        std::array<double, 2> center, double s, double p,
                                        double besov_norm = -1.0);

/// Dyadic annulus variant on B(center, 2^k rho) against
/// (2^k rho)^s 2^{kn/p} ||A||_{B^{s,p}_p}.
LemmaCheck annulus_oscillation_check(const ScalarField& A, double rho,
                                     std::array<double, 2> center, double s, double p, int k,
                                     double besov_norm = -1.0);

/// || f ||^p_{B^{s,p}_p} against || |f|^{p/2} ||_2^2 + D_p(f).
LemmaCheck besov_vs_dissipation(const ScalarField& f, const levy::SymbolTable& symbol,
                                double p, double s);

/// Norm bundle emitted by the `norms` subcommand.
struct NormReport {
    std::map<double, double> lp;
    std::map<std::pair<double, double>, double> besov;  // (s, p) -> value
    std::string besov_method = "double_integral";
    std::map<std::pair<double, double>, double> morrey;  // (q, a) -> value
    std::map<double, double> holder;
    int resolution = 0;
    double period = 0;
    double truncation_radius = 1.0;

    std::string to_json() const;
};

}  // namespace fracdrift::spaces
