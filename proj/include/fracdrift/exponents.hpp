#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracdrift/rational.hpp"

namespace fracdrift::exponents {

/// Full parameter tuple for one admissible configuration. All entries are
/// exact rationals except the transcendental molecule constants, which live
/// in MoleculeParams.
struct ExponentSet {
    int n = 2;           // space dimension
    Rational p;          // Lebesgue index of the initial data
    Rational q;          // Morrey-Campanato integrability
    Rational a;          // Morrey-Campanato scale, 0 <= a < n+q
    Rational eta{0};     // drift regularization exponent
    int eta_sign = 0;    // +1 smoothing (index alpha/p+eta), -1 roughening, 0 none
    Rational alpha;      // Levy smoothness degree
    Rational alpha0;     // homogeneity degree from the Morrey-Campanato relation
    Rational gamma{1, 10};   // Hoelder target
    Rational omega{1, 5};    // molecule concentration exponent
    Rational sigma;          // Hardy index, gamma = n(1/sigma - 1)
    Rational delta;          // Levy tail exponent, delta < alpha
    bool subcritical = false;  // theorem 3 regime alpha < 1

    void set_holder_targets(const Rational& gamma_, const Rational& omega_);
};

/// Outcome carrying either a value or the violated constraints by name.
template <class T>
struct Checked {
    std::optional<T> value;
    std::vector<std::string> violated;

    bool ok() const { return value.has_value(); }
    const T& operator*() const { return *value; }
    const T* operator->() const { return &*value; }
};

enum class Verdict { besov_wins, besov_useless };

struct CompetitionVerdict {
    Verdict verdict;
    Rational alpha;
    Rational alpha0;      // homogeneity degree for the same data
    Rational threshold;   // scale a at which the verdict flips
};

/// alpha0 = 1 - (a - n)/q, the smoothness degree forced by homogeneity.
Rational alpha0_homogeneous(int n, const Rational& q, const Rational& a);

/// General-framework plan: p = qn/(n-a), alpha = (p+n)/(p+1); admissible only
/// when p clears n(n-1) v 2n and 1 < alpha < alpha0 < 2.
Checked<ExponentSet> theorem1_plan(int n, const Rational& q, const Rational& a);

/// Competition verdict for the M^{p,a} drift control: Besov wins iff a < alpha.
Checked<CompetitionVerdict> theorem2_verdict(int n, const Rational& p, const Rational& a);

/// Regularized drift: alpha = (n+p(1-eta))/(p+1), a recovered from
/// p = qn/(q eta + n - a); flags the sub-critical regime alpha < 1.
Checked<ExponentSet> theorem3_plan(int n, const Rational& p, const Rational& q,
                                   const Rational& eta);

/// Roughened drift: alpha = (n+p(1+eta))/(p+1), Besov wins iff
/// a < (n+p(1-p eta))/(p+1).
Checked<CompetitionVerdict> theorem4_verdict(int n, const Rational& p, const Rational& eta,
                                             const Rational& a);

/// Constants of the molecule-evolution machinery for one exponent set.
struct MoleculeParams {
    Rational zeta;
    Rational nu0, nu1;
    Rational beta0, beta1;     // 1 - nu0, 1 + nu1
    Rational m, z, pprime;     // Hoelder triple, 1/m + 1/p + 1/z = 1
    double epsilon_geom = 0;   // positive by m(omega-1)+n < 0
    double frak_c = 0;
    double K = 0;              // drift-constant ceiling
    Rational exponent_ball;      // zeta-exponent of the concentration ball term
    double exponent_annulus = 0; // zeta-exponent of the rho0..rho annulus term
};

/// Derives every molecule constant and verifies the sign conditions that make
/// the concentration estimate absorb its constants. Rejections name the first
/// failed condition.
Checked<MoleculeParams> molecule_params(const ExponentSet& exps, const Rational& zeta,
                                        const Rational& nu0, const Rational& nu1,
                                        const Rational& m, double cbar1 = 1.0);

/// Smallest power of ten for zeta whose concentration exponents fall at or
/// below `ceiling` (both must stay negative regardless). Returns nullopt when
/// no power of ten up to 10^18 works.
std::optional<Rational> choose_zeta(const ExponentSet& exps, const Rational& nu0,
                                    const Rational& nu1, const Rational& m,
                                    const Rational& ceiling = Rational(-1, 200));

/// JSON verdict record shared by the CLI and the harness cross-validation.
std::string verdict_json(const std::string& op, const std::vector<std::pair<std::string, Rational>>& inputs,
                         const std::vector<std::pair<std::string, Rational>>& derived,
                         const std::string& verdict,
                         const std::vector<std::string>& violated);

}  // namespace fracdrift::exponents
