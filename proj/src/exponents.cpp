#include "fracdrift/exponents.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fracdrift {

Rational parse_rational(const std::string& text) {
    std::string s = text;
    // strip spaces
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return num / den;
    }

    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        neg = (s[i] == '-');
        ++i;
    }
    BigInt mantissa = 0;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    long exp10 = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_dot) ++frac_digits;
            seen_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            exp10 = std::stol(s.substr(i + 1));
            break;
        } else {
            throw std::invalid_argument("parse_rational: bad literal '" + text + "'");
        }
    }
    if (!seen_digit) throw std::invalid_argument("parse_rational: bad literal '" + text + "'");
    Rational r(mantissa, 1);
    r *= rational_pow(Rational(10), exp10 - frac_digits);
    return neg ? -r : r;
}

}  // namespace fracdrift

namespace fracdrift::exponents {

namespace {

Rational max_rational(const Rational& a, const Rational& b) { return a > b ? a : b; }

// n(n-1) v 2n, the initial-data lower bound common to all four theorems.
Rational p_lower_bound(int n) {
    return max_rational(Rational(n) * Rational(n - 1), Rational(2 * n));
}

}  // namespace

void ExponentSet::set_holder_targets(const Rational& gamma_, const Rational& omega_) {
    gamma = gamma_;
    omega = omega_;
    sigma = Rational(n) / (Rational(n) + gamma);  // inverts gamma = n(1/sigma - 1)
}

Rational alpha0_homogeneous(int n, const Rational& q, const Rational& a) {
    if (q <= 0) throw std::domain_error("alpha0_homogeneous: q > 0 required");
    if (a < 0 || a >= Rational(n) + q)
        throw std::domain_error("alpha0_homogeneous: 0 <= a < n+q required (space reduces to constants)");
    return Rational(1) - (a - Rational(n)) / q;
}

Checked<ExponentSet> theorem1_plan(int n, const Rational& q, const Rational& a) {
    Checked<ExponentSet> out;
    if (n < 2) out.violated.push_back("n >= 2");
    if (a < 0) out.violated.push_back("a >= 0");
    if (a >= n) out.violated.push_back("a < n");
    if (q < max_rational((Rational(n) - a) * Rational(n - 1), Rational(2 * n)))
        out.violated.push_back("q >= (n-a)(n-1) v 2n");
    if (!out.violated.empty()) return out;

    ExponentSet e;
    e.n = n;
    e.q = q;
    e.a = a;
    e.p = q * Rational(n) / (Rational(n) - a);
    if (e.p <= p_lower_bound(n)) {
        out.violated.push_back("p > n(n-1) v 2n");
        return out;
    }
    e.alpha = (e.p + Rational(n)) / (e.p + 1);
    e.alpha0 = alpha0_homogeneous(n, q, a);
    if (!(Rational(1) < e.alpha && e.alpha < 2)) {
        out.violated.push_back("1 < alpha < 2");
        return out;
    }
    if (!(e.alpha < e.alpha0 && e.alpha0 < 2)) {
        out.violated.push_back("alpha < alpha0 < 2");
        return out;
    }
    e.set_holder_targets(e.gamma, e.omega);
    e.delta = (Rational(1, 2) + e.alpha) / 2;  // 1/2 < delta < alpha
    out.value = e;
    return out;
}

Checked<CompetitionVerdict> theorem2_verdict(int n, const Rational& p, const Rational& a) {
    Checked<CompetitionVerdict> out;
    if (n < 2) out.violated.push_back("n >= 2");
    if (p <= p_lower_bound(n)) out.violated.push_back("p > n(n-1) v 2n");
    if (a < 0) out.violated.push_back("a >= 0");
    if (a >= n) out.violated.push_back("a < n");
    if (!out.violated.empty()) return out;

    CompetitionVerdict v;
    v.alpha = (p + Rational(n)) / (p + 1);
    v.threshold = v.alpha;
    // drift control lives in M^{p,a}, so the homogeneity relation uses q = p
    v.alpha0 = alpha0_homogeneous(n, p, a);
    v.verdict = (a < v.alpha) ? Verdict::besov_wins : Verdict::besov_useless;
    out.value = v;
    return out;
}

Checked<ExponentSet> theorem3_plan(int n, const Rational& p, const Rational& q,
                                   const Rational& eta) {
    Checked<ExponentSet> out;
    if (n < 2) out.violated.push_back("n >= 2");
    if (p <= p_lower_bound(n)) out.violated.push_back("p > n(n-1) v 2n");
    if (q < 2 * n) out.violated.push_back("q >= 2n");
    if (!(eta > 0 && eta < 1)) out.violated.push_back("0 < eta < 1");
    if (!out.violated.empty()) return out;

    ExponentSet e;
    e.n = n;
    e.p = p;
    e.q = q;
    e.eta = eta;
    e.eta_sign = +1;
    e.alpha = (Rational(n) + p * (Rational(1) - eta)) / (p + 1);
    e.a = q * eta + Rational(n) - q * Rational(n) / p;  // inverts p = qn/(q eta + n - a)
    if (!(Rational(1, 2) < e.alpha && e.alpha < 2)) out.violated.push_back("1/2 < alpha < 2");
    Rational drift_index = e.alpha / p + eta;
    if (!(drift_index > 0 && drift_index < 1)) out.violated.push_back("0 < alpha/p + eta < 1");
    if (e.a < 0) out.violated.push_back("a >= 0");
    if (e.a >= n) out.violated.push_back("a < n");
    if (!out.violated.empty()) return out;

    e.alpha0 = alpha0_homogeneous(n, q, e.a);
    e.subcritical = (eta > Rational(n - 1) / p);  // equivalent to alpha < 1
    e.set_holder_targets(e.gamma, e.omega);
    e.delta = (Rational(1, 2) + e.alpha) / 2;  // 1/2 < delta < alpha since alpha > 1/2
    out.value = e;
    return out;
}

Checked<CompetitionVerdict> theorem4_verdict(int n, const Rational& p, const Rational& eta,
                                             const Rational& a) {
    Checked<CompetitionVerdict> out;
    if (n < 2) out.violated.push_back("n >= 2");
    if (!(eta > 0)) out.violated.push_back("eta > 0");
    if (!(eta < Rational(1, 2 * (n - 1)))) out.violated.push_back("eta < 1/(2(n-1))");
    if (p <= p_lower_bound(n)) out.violated.push_back("p > n(n-1) v 2n");
    if (a < 0) out.violated.push_back("a >= 0");
    if (a >= n) out.violated.push_back("a < n");
    if (!out.violated.empty()) return out;

    CompetitionVerdict v;
    v.alpha = (Rational(n) + p * (Rational(1) + eta)) / (p + 1);
    Rational drift_index = v.alpha / p - eta;
    if (!(drift_index > 0 && drift_index < 1)) {
        out.violated.push_back("0 < alpha/p - eta < 1");
        return out;
    }
    v.threshold = (Rational(n) + p * (Rational(1) - p * eta)) / (p + 1);
    v.alpha0 = alpha0_homogeneous(n, p, a);
    v.verdict = (a < v.threshold) ? Verdict::besov_wins : Verdict::besov_useless;
    out.value = v;
    return out;
}

Checked<MoleculeParams> molecule_params(const ExponentSet& exps, const Rational& zeta,
                                        const Rational& nu0, const Rational& nu1,
                                        const Rational& m, double cbar1) {
    Checked<MoleculeParams> out;
    const int n = exps.n;
    const Rational& p = exps.p;
    const Rational& omega = exps.omega;
    const Rational& gamma = exps.gamma;
    const Rational& alpha = exps.alpha;

    if (!(zeta > 1)) out.violated.push_back("zeta > 1");
    if (!(nu1 > 0 && nu1 < nu0 && nu0 < 1)) out.violated.push_back("0 < nu1 < nu0 < 1");
    Rational holder_pivot = Rational(n) / (Rational(1) - omega);
    if (!(m > holder_pivot)) out.violated.push_back("m > n/(1-omega)");
    if (!out.violated.empty()) return out;

    MoleculeParams mp;
    mp.zeta = zeta;
    mp.nu0 = nu0;
    mp.nu1 = nu1;
    mp.beta0 = Rational(1) - nu0;
    mp.beta1 = Rational(1) + nu1;
    mp.m = m;
    mp.pprime = p / (p - 1);
    if (!(mp.pprime > 1 && mp.pprime < holder_pivot))
        out.violated.push_back("1 < p' < n/(1-omega)");

    Rational inv_z = Rational(1) - Rational(1) / p - Rational(1) / m;
    if (!(inv_z > 0)) {
        out.violated.push_back("1/m + 1/p < 1");
        return out;
    }
    mp.z = Rational(1) / inv_z;

    // E = m(omega-1)+n < 0 makes the DefEpsilon logarithm well defined.
    Rational E = m * (omega - 1) + Rational(n);
    if (!(E < 0)) {
        out.violated.push_back("m(omega-1)+n < 0");
        return out;
    }

    const double zeta_d = to_double(zeta);
    const double E_d = to_double(E);
    const double log_zeta = std::log(zeta_d);
    const double inner = 1.0 - std::pow(zeta_d, to_double(nu0 + nu1) * E_d);
    mp.epsilon_geom = std::log(inner) / (E_d * to_double(mp.beta0) * log_zeta);
    if (!(mp.epsilon_geom > 0)) out.violated.push_back("epsilon_geom > 0");

    // Besov index carried by the drift: alpha/p for the plain theorems,
    // alpha/p +- eta for the smoothed / roughened variants.
    Rational s_drift = alpha / p + Rational(exps.eta_sign) * exps.eta;

    // zeta-exponent of the rho0-ball contribution; exact since eps is absent.
    mp.exponent_ball =
        mp.beta0 * (omega - 1 + Rational(n) / mp.pprime) + mp.beta1 * s_drift - Rational(n) - omega + alpha;
    if (!(mp.exponent_ball < 0)) out.violated.push_back("concentration ball exponent < 0");

    // zeta-exponent of the rho0..rho annulus contribution; needs epsilon_geom.
    mp.exponent_annulus = to_double(mp.beta0) * (1.0 + mp.epsilon_geom) * to_double(omega - 1 + Rational(n) / m) +
                          to_double(mp.beta1 * s_drift - Rational(n) + Rational(n) / mp.z - omega + alpha);
    if (!(mp.exponent_annulus < 0)) out.violated.push_back("concentration annulus exponent < 0");

    // dyadic-ring sum absorbs its constant iff omega + n/p < alpha
    if (!(omega + Rational(n) / p < alpha)) out.violated.push_back("omega + n/p < alpha");

    // geometric decay of the ring sum
    if (!(omega - 1 + (alpha + Rational(n)) / p + Rational(exps.eta_sign) * exps.eta < 0))
        out.violated.push_back("omega - 1 + (alpha+n)/p < 0");

    // Levy tail condition feeding the kernel-side estimate
    if (!(omega - exps.delta + Rational(n) / p < 0))
        out.violated.push_back("omega - delta + n/p < 0");

    // K ceiling with frak_c from the height-condition constant.
    const double v_n = M_PI;  // unit-ball volume, n = 2
    const double n_d = n, omega_d = to_double(omega), alpha_d = to_double(alpha);
    mp.frak_c = (v_n * (std::pow(5.0, n_d) - 1.0) - std::sqrt(2.0 * v_n) * std::pow(5.0, n_d - omega_d)) /
                (2.0 * std::pow(5.0, n_d + alpha_d));
    if (!(mp.frak_c > 0)) out.violated.push_back("frak_c > 0");
    mp.K = alpha_d / (n_d + to_double(gamma)) * cbar1 * mp.frak_c;

    if (!out.violated.empty()) return out;
    out.value = mp;
    return out;
}

std::optional<Rational> choose_zeta(const ExponentSet& exps, const Rational& nu0,
                                    const Rational& nu1, const Rational& m,
                                    const Rational& ceiling) {
    Rational zeta{10};
    for (int k = 1; k <= 18; ++k) {
        auto mp = molecule_params(exps, zeta, nu0, nu1, m);
        if (mp.ok() && mp->exponent_ball <= ceiling && mp->exponent_annulus <= to_double(ceiling))
            return zeta;
        zeta *= 10;
    }
    return std::nullopt;
}

std::string verdict_json(const std::string& op,
                         const std::vector<std::pair<std::string, Rational>>& inputs,
                         const std::vector<std::pair<std::string, Rational>>& derived,
                         const std::string& verdict, const std::vector<std::string>& violated) {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"op\": \"" << op << "\",\n  \"inputs\": {";
    bool first = true;
    for (auto& [k, v] : inputs) {
        os << (first ? "" : ", ") << "\"" << k << "\": \"" << fraction_string(v) << "\"";
        first = false;
    }
    os << "},\n  \"derived\": {";
    first = true;
    for (auto& [k, v] : derived) {
        os << (first ? "" : ", ") << "\"" << k << "\": {\"fraction\": \"" << fraction_string(v)
           << "\", \"value\": " << to_double(v) << "}";
        first = false;
    }
    os << "},\n  \"verdict\": \"" << verdict << "\",\n  \"violated_constraints\": [";
    first = true;
    for (auto& c : violated) {
        os << (first ? "" : ", ") << "\"" << c << "\"";
        first = false;
    }
    os << "]\n}\n";
    return os.str();
}

}  // namespace fracdrift::exponents
