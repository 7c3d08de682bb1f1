#include "fracdrift/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fracdrift/io.hpp"
#include "fracdrift/plots.hpp"
#include "fracdrift/random_field.hpp"
#include "fracdrift/spaces.hpp"
#include "json.hpp"

namespace fracdrift::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap parse_sections(const std::string& text) {
    SectionMap out;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
        out[section][key] = value;
    }
    return out;
}

struct Reader {
    const SectionMap& sections;
    std::set<std::pair<std::string, std::string>> consumed;

    bool has(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    }
    std::string get(const std::string& sec, const std::string& key) {
        consumed.insert({sec, key});
        return sections.at(sec).at(key);
    }
    double number(const std::string& sec, const std::string& key, double fallback) {
        if (!has(sec, key)) return fallback;
        const std::string v = get(sec, key);
        if (v == "inf") return std::numeric_limits<double>::infinity();
        try {
            return to_double(parse_rational(v));
        } catch (const std::exception&) {
            throw ConfigError("config [" + sec + "] " + key + ": bad number '" + v + "'");
        }
    }
    Rational rational(const std::string& sec, const std::string& key, const Rational& fallback) {
        if (!has(sec, key)) return fallback;
        const std::string v = get(sec, key);
        try {
            return parse_rational(v);
        } catch (const std::exception&) {
            throw ConfigError("config [" + sec + "] " + key + ": bad rational '" + v + "'");
        }
    }
    long integer(const std::string& sec, const std::string& key, long fallback) {
        double d = number(sec, key, double(fallback));
        if (std::rint(d) != d) throw ConfigError("config [" + sec + "] " + key + ": integer required");
        return long(d);
    }
    std::string text(const std::string& sec, const std::string& key, const std::string& fallback) {
        if (!has(sec, key)) return fallback;
        return get(sec, key);
    }
    bool boolean(const std::string& sec, const std::string& key, bool fallback) {
        if (!has(sec, key)) return fallback;
        const std::string v = get(sec, key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("config [" + sec + "] " + key + ": bad boolean '" + v + "'");
    }
    void check_all_consumed() const {
        for (const auto& [sec, kv] : sections)
            for (const auto& [key, value] : kv)
                if (!consumed.count({sec, key}))
                    throw ConfigError("config [" + sec + "] " + key + ": unknown key");
    }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
    SectionMap sections = parse_sections(text);
    Reader r{sections, {}};
    RunConfig cfg;
    cfg.raw_text = text;

    cfg.resolution = int(r.integer("grid", "resolution", cfg.resolution));
    cfg.period = r.number("grid", "period", cfg.period);

    {
        const std::string kind = r.text("levy", "kind", "pure_fractional");
        if (kind == "pure_fractional")
            cfg.levy_spec.kind = levy::KernelKind::pure_fractional;
        else if (kind == "truncated_stable")
            cfg.levy_spec.kind = levy::KernelKind::truncated_stable;
        else
            throw ConfigError("config [levy] kind: unknown kernel '" + kind + "'");
        cfg.alpha_given = r.has("levy", "alpha");
        cfg.levy_spec.alpha = r.number("levy", "alpha", cfg.levy_spec.alpha);
        cfg.delta_given = r.has("levy", "delta");
        cfg.levy_spec.delta = r.number("levy", "delta", cfg.levy_spec.delta);
        cfg.levy_spec.cbar1 = r.number("levy", "cbar1", 1.0);
        cfg.levy_spec.cbar2 = r.number("levy", "cbar2", 1.0);
    }

    {
        cfg.drift_enabled = r.boolean("drift", "enabled", true);
        cfg.drift_spec.kind = drift::drift_kind_from_string(r.text("drift", "kind", "sqg_riesz"));
        cfg.drift_spec.eta_smooth = r.number("drift", "eta_smooth", 0.0);
        cfg.drift_spec.eta_rough = r.number("drift", "eta_rough", 0.0);
        cfg.drift_spec.mollify_eps = r.number("drift", "mollify_eps", 0.0);
        cfg.drift_spec.multiplier_preset = r.text("drift", "preset", "riesz_perp");
    }

    {
        cfg.theorem = int(r.integer("exponents", "theorem", 1));
        cfg.exp_n = r.rational("exponents", "n", cfg.exp_n);
        cfg.exp_q = r.rational("exponents", "q", cfg.exp_q);
        cfg.exp_a = r.rational("exponents", "a", cfg.exp_a);
        cfg.exp_p = r.rational("exponents", "p", cfg.exp_p);
        cfg.exp_eta = r.rational("exponents", "eta", cfg.exp_eta);
        cfg.exp_gamma = r.rational("exponents", "gamma", cfg.exp_gamma);
        cfg.exp_omega = r.rational("exponents", "omega", cfg.exp_omega);
    }

    {
        cfg.t_final = r.number("run", "t_final", cfg.t_final);
        cfg.dt = r.number("run", "dt", cfg.dt);
        cfg.checkpoint_stride = int(r.integer("run", "checkpoint_stride", cfg.checkpoint_stride));
        cfg.eps_viscosity = r.number("run", "eps_viscosity", 0.0);
        const std::string scheme = r.text("run", "scheme", "etd_rk4");
        if (scheme == "etd_rk4")
            cfg.scheme = solver::Scheme::etd_rk4;
        else if (scheme == "picard_mild")
            cfg.scheme = solver::Scheme::picard_mild;
        else
            throw ConfigError("config [run] scheme: unknown scheme '" + scheme + "'");
    }

    {
        const std::string kind = r.text("init", "kind", "gaussian");
        if (kind == "gaussian")
            cfg.init_kind = InitKind::gaussian;
        else if (kind == "zero")
            cfg.init_kind = InitKind::zero;
        else if (kind == "cosine")
            cfg.init_kind = InitKind::cosine;
        else
            throw ConfigError("config [init] kind: unknown init '" + kind + "'");
        cfg.seed = std::uint64_t(r.integer("init", "seed", long(cfg.seed)));
        cfg.init_kmax = int(r.integer("init", "kmax", cfg.init_kmax));
        cfg.init_slope = r.number("init", "slope", cfg.init_slope);
        cfg.init_sup = r.number("init", "sup", cfg.init_sup);
        cfg.cosine_k1 = int(r.integer("init", "k1", cfg.cosine_k1));
        cfg.cosine_k2 = int(r.integer("init", "k2", cfg.cosine_k2));
        cfg.cosine_amplitude = r.number("init", "amplitude", cfg.cosine_amplitude);
    }

    {
        if (r.has("norms", "lp")) {
            cfg.lp_track.clear();
            std::istringstream ls(r.get("norms", "lp"));
            std::string tok;
            while (std::getline(ls, tok, ',')) {
                tok = trim(tok);
                cfg.lp_track.push_back(tok == "inf" ? std::numeric_limits<double>::infinity()
                                                    : to_double(parse_rational(tok)));
            }
        }
        cfg.mc_q = r.number("norms", "mc_q", cfg.mc_q);
        cfg.mc_a = r.number("norms", "mc_a", cfg.mc_a);
        cfg.holder_gamma = r.number("norms", "holder_gamma", cfg.holder_gamma);
    }

    {
        cfg.dual_enabled = r.boolean("dual", "enabled", false);
        cfg.dual_r = r.number("dual", "r", cfg.dual_r);
        cfg.dual_zeta = r.number("dual", "zeta", cfg.dual_zeta);
        cfg.dual_s0 = r.number("dual", "s0", cfg.dual_s0);
        cfg.dual_omega = r.number("dual", "omega", cfg.dual_omega);
        cfg.dual_gamma = r.number("dual", "gamma", cfg.dual_gamma);
        cfg.dual_dt = r.number("dual", "dt", cfg.dual_dt);
    }

    r.check_all_consumed();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    return parse_config(io::read_text_file(path));
}

void cross_validate(RunConfig& cfg) {
    const int n = int(to_double(cfg.exp_n));
    if (Rational(n) != cfg.exp_n || n != 2)
        throw AdmissibilityError("n == 2 (v1 torus)", {"n == 2 (v1 torus)"});

    exponents::Checked<exponents::ExponentSet> plan;
    if (cfg.theorem == 1) {
        plan = exponents::theorem1_plan(n, cfg.exp_q, cfg.exp_a);
    } else if (cfg.theorem == 3) {
        plan = exponents::theorem3_plan(n, cfg.exp_p, cfg.exp_q, cfg.exp_eta);
    } else {
        throw AdmissibilityError("theorem must be 1 or 3 for scenarios",
                                 {"theorem in {1, 3}"});
    }
    if (!plan.ok()) {
        std::string msg = "inadmissible exponent set:";
        for (const auto& v : plan.violated) msg += " " + v + ";";
        throw AdmissibilityError(msg, plan.violated);
    }
    cfg.plan = *plan;
    cfg.plan.set_holder_targets(cfg.exp_gamma, cfg.exp_omega);

    const double alpha_plan = to_double(cfg.plan.alpha);
    if (cfg.alpha_given) {
        if (std::abs(cfg.levy_spec.alpha - alpha_plan) > 1e-12)
            throw AdmissibilityError("alpha must equal the exponent-plan value",
                                     {"alpha == plan alpha"});
    } else {
        cfg.levy_spec.alpha = alpha_plan;
    }
    if (!cfg.delta_given) cfg.levy_spec.delta = to_double(cfg.plan.delta);
    try {
        cfg.levy_spec.validate();
        cfg.drift_spec.validate();
    } catch (const std::invalid_argument& e) {
        throw AdmissibilityError(e.what(), {e.what()});
    }
    if (cfg.theorem == 3 && cfg.drift_spec.eta_smooth == 0.0 && cfg.drift_enabled)
        cfg.drift_spec.eta_smooth = to_double(cfg.exp_eta);
}

field::ScalarField make_initial_field(const RunConfig& cfg) {
    field::Grid g(cfg.resolution, cfg.period);
    switch (cfg.init_kind) {
        case InitKind::zero:
            return field::ScalarField(g);
        case InitKind::cosine: {
            const int N = g.resolution;
            std::vector<double> samples(g.size());
            const double h = g.spacing();
            const double kb = 2.0 * M_PI / g.period;
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    samples[std::size_t(i) * N + j] =
                        cfg.cosine_amplitude *
                        std::cos(kb * (cfg.cosine_k1 * i * h + cfg.cosine_k2 * j * h));
            return field::ScalarField::from_samples(g, std::move(samples));
        }
        case InitKind::gaussian:
        default: {
            const int kmax = cfg.init_kmax > 0 ? cfg.init_kmax : g.dealias_limit();
            return field::make_bandlimited_gaussian(g, cfg.seed, kmax, cfg.init_slope,
                                                    cfg.init_sup);
        }
    }
}

solver::SolveConfig to_solve_config(const RunConfig& cfg) {
    solver::SolveConfig sc;
    sc.levy_spec = cfg.levy_spec;
    sc.drift_spec = cfg.drift_spec;
    sc.drift_enabled = cfg.drift_enabled;
    sc.t_final = cfg.t_final;
    sc.dt = cfg.dt;
    sc.eps_viscosity = cfg.eps_viscosity;
    sc.scheme = cfg.scheme;
    sc.checkpoint_stride = cfg.checkpoint_stride;
    sc.lp_track = cfg.lp_track;
    sc.besov_p = to_double(cfg.plan.p);
    sc.besov_s = to_double(cfg.plan.alpha / cfg.plan.p);
    return sc;
}

namespace {

std::string snapshot_name(const char* prefix, std::size_t idx) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06zu.fdf", prefix, idx);
    return buf;
}

std::string norms_csv(const solver::Trajectory& traj, const RunConfig& cfg) {
    std::ostringstream os;
    os << "t,l2,l4,l8,linf,besov_alpha_over_p_p,mc_q_a,holder_gamma\n";
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& th = traj.theta_snapshots[i];
        os << io::format_double(traj.times[i]) << "," << io::format_double(spaces::lp_norm(th, 2))
           << "," << io::format_double(spaces::lp_norm(th, 4)) << ","
           << io::format_double(spaces::lp_norm(th, 8)) << ","
           << io::format_double(spaces::lp_norm(th, inf)) << ","
           << io::format_double(
                  spaces::besov_dyadic_blocks(th, traj.config.besov_s, traj.config.besov_p))
           << "," << io::format_double(spaces::morrey_campanato_norm(th, cfg.mc_q, cfg.mc_a))
           << "," << io::format_double(spaces::holder_seminorm(th, cfg.holder_gamma)) << "\n";
    }
    return os.str();
}

}  // namespace

int run_scenario(const std::string& config_path, const std::string& out_dir, std::string* message) {
    auto fail = [&](int code, const std::string& msg) {
        if (message) *message = msg;
        return code;
    };
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        return fail(2, e.what());
    } catch (const std::exception& e) {
        return fail(2, e.what());
    }
    try {
        cross_validate(cfg);
    } catch (const AdmissibilityError& e) {
        return fail(3, e.what());
    }

    solver::Trajectory traj;
    try {
        field::Grid g(cfg.resolution, cfg.period);
        field::ScalarField theta0 = make_initial_field(cfg);
        solver::SolveConfig sc = to_solve_config(cfg);
        levy::SymbolTable symbol = solver::make_symbol(sc.levy_spec, g, sc.symbol_tol);
        traj = solver::solve(theta0, sc, symbol);
    } catch (const solver::SolverAbort& e) {
        return fail(4, e.what());
    } catch (const std::exception& e) {
        return fail(4, e.what());
    }

    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/fields");

    const std::string csv = norms_csv(traj, cfg);
    io::write_text_file(out_dir + "/norms.csv", csv);

    json fields_json = json::array();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const std::string theta_name = snapshot_name("theta", i);
        const std::string d0_name = snapshot_name("drift0", i);
        const std::string d1_name = snapshot_name("drift1", i);
        io::write_field(out_dir + "/fields/" + theta_name, traj.theta_snapshots[i]);
        io::write_field(out_dir + "/fields/" + d0_name, traj.drift_snapshots[i].x);
        io::write_field(out_dir + "/fields/" + d1_name, traj.drift_snapshots[i].y);
        fields_json.push_back({{"t", traj.times[i]},
                               {"theta", "fields/" + theta_name},
                               {"drift0", "fields/" + d0_name},
                               {"drift1", "fields/" + d1_name}});
    }

    plots::emit_plots(out_dir + "/norms.csv", out_dir + "/plots");

    json manifest;
    manifest["config_echo"] = cfg.raw_text;
    manifest["grid"] = {{"resolution", cfg.resolution}, {"period", cfg.period}};
    manifest["alpha"] = cfg.levy_spec.alpha;
    manifest["besov_s"] = traj.config.besov_s;
    manifest["besov_p"] = traj.config.besov_p;
    manifest["times"] = traj.times;
    manifest["fields"] = fields_json;
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                  static_cast<unsigned long long>(io::fnv1a_file(out_dir + "/norms.csv")));
    manifest["hashes"] = {{"norms.csv", hash_buf}};
    io::write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");

    if (cfg.dual_enabled) {
        DualParams dp;
        dp.r = cfg.dual_r;
        dp.zeta = cfg.dual_zeta;
        dp.s0 = cfg.dual_s0;
        dp.omega = cfg.dual_omega;
        dp.gamma = cfg.dual_gamma;
        dp.dt = cfg.dual_dt;
        run_dual_diagnostic(traj, dp, out_dir + "/dual");
    }

    // configured invariant gates: per-checkpoint maximum principle and mean
    // conservation
    const auto& series = traj.norms_series;
    bool ok = true;
    std::string why;
    for (std::size_t pi = 0; pi < cfg.lp_track.size() && ok; ++pi) {
        for (std::size_t i = 1; i < series.size(); ++i) {
            const double prev = series[i - 1].lp[pi], cur = series[i].lp[pi];
            if (cur > prev * (1.0 + 1e-6)) {
                ok = false;
                why = "maximum principle violated at t = " + std::to_string(series[i].t) +
                      " for p index " + std::to_string(pi);
                break;
            }
        }
    }
    const double mean0 = field::mean(traj.theta_snapshots.front());
    const double meanT = field::mean(traj.theta_snapshots.back());
    if (ok && std::abs(meanT - mean0) >= 1e-10) {
        ok = false;
        why = "mean conservation violated";
    }
    if (!ok) return fail(1, why);
    if (message) *message = "ok";
    return 0;
}

DualOutcome run_dual_diagnostic(const solver::Trajectory& traj, const DualParams& params,
                                const std::string& out_dir) {
    const field::Grid& g = traj.grid;
    levy::SymbolTable symbol = solver::make_symbol(traj.config.levy_spec, g);
    const double alpha = traj.config.levy_spec.alpha;
    const double t_pivot = params.t_pivot > 0 ? params.t_pivot : traj.times.back();

    DualOutcome out;
    out.s0 = params.s0 > 0 ? params.s0 : 0.1 * std::pow(params.r, alpha);
    out.K = dual::drift_constant_ceiling(2, alpha, params.gamma, params.omega,
                                         traj.config.levy_spec.cbar1);

    const double cx = 0.5 * g.period, cy = 0.5 * g.period;
    dual::Molecule mol =
        dual::make_molecule(params.r, {cx, cy}, params.zeta, params.omega, params.gamma, g);
    dual::DualConfig dc;
    dc.dt = params.dt > 0 ? params.dt : traj.config.dt;
    dc.checkpoint_stride = traj.config.checkpoint_stride;
    dc.rho = params.zeta * params.r;
    dc.s_end = out.s0;
    dual::DualRun run = dual::evolve_dual(mol, traj, t_pivot, symbol, dc);
    auto rows = dual::molecule_bound_report(run, mol, alpha, out.K);
    out.fitted = dual::fit_empirical_k(rows, mol, alpha);

    dual::BracketSeries bracket;
    bool bracket_ok = true;
    try {
        bracket = dual::transfer_bracket(traj, run);
        out.bracket_drift = bracket.max_relative_drift;
    } catch (const std::exception&) {
        bracket_ok = false;
        out.bracket_drift = -1;
    }

    fs::create_directories(out_dir);
    std::ostringstream csv;
    csv << "s,conc_lhs,conc_env,height_lhs,height_env,l1_lhs,l1_env,bracket\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        csv << io::format_double(row.s) << "," << io::format_double(row.conc_lhs) << ","
            << io::format_double(row.conc_env) << "," << io::format_double(row.height_lhs) << ","
            << io::format_double(row.height_env) << "," << io::format_double(row.l1_lhs) << ","
            << io::format_double(row.l1_env) << ","
            << (bracket_ok && i < bracket.value.size() ? io::format_double(bracket.value[i])
                                                       : std::string("nan"))
            << "\n";
    }
    io::write_text_file(out_dir + "/bounds.csv", csv.str());

    out.envelopes_hold = !rows.empty();
    for (const auto& row : rows) out.envelopes_hold = out.envelopes_hold && row.ok;

    auto finite_or = [](double v, double fallback) { return std::isfinite(v) ? v : fallback; };
    json verdict;
    verdict["t_pivot"] = t_pivot;
    verdict["r"] = params.r;
    verdict["zeta"] = params.zeta;
    verdict["s0"] = out.s0;
    verdict["K"] = out.K;
    verdict["envelopes_hold"] = out.envelopes_hold;
    verdict["bracket_drift"] = out.bracket_drift;
    verdict["empirical_K"] = {{"min_concentration", out.fitted.k_min_concentration},
                              {"max_height", finite_or(out.fitted.k_max_height, -1.0)},
                              {"max_l1", finite_or(out.fitted.k_max_l1, -1.0)},
                              {"window_nonempty", out.fitted.window_nonempty}};
    io::write_text_file(out_dir + "/verdict.json", verdict.dump(2) + "\n");
    return out;
}

solver::Trajectory load_trajectory(const std::string& run_dir) {
    json manifest = json::parse(io::read_text_file(run_dir + "/manifest.json"));
    RunConfig cfg = parse_config(manifest.at("config_echo").get<std::string>());
    cross_validate(cfg);

    solver::Trajectory traj;
    traj.config = to_solve_config(cfg);
    traj.grid = field::Grid(cfg.resolution, cfg.period);
    for (const auto& entry : manifest.at("fields")) {
        traj.times.push_back(entry.at("t").get<double>());
        traj.theta_snapshots.push_back(
            io::read_field(run_dir + "/" + entry.at("theta").get<std::string>()));
        field::VectorField A;
        A.x = io::read_field(run_dir + "/" + entry.at("drift0").get<std::string>());
        A.y = io::read_field(run_dir + "/" + entry.at("drift1").get<std::string>());
        traj.drift_snapshots.push_back(std::move(A));
    }
    return traj;
}

void VerifyReport::add(const std::string& name, bool ok, double measured, double bound) {
    checks.push_back({name, ok, measured, bound});
    pass = pass && ok;
}

std::string VerifyReport::to_json() const {
    json j;
    j["suite"] = suite;
    j["pass"] = pass;
    j["checks"] = json::array();
    for (const auto& c : checks)
        j["checks"].push_back(
            {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"bound", c.bound}});
    return j.dump(2) + "\n";
}

namespace {

RunConfig pinned_sqg_config(int resolution, double t_final, double dt, int stride,
                            std::uint64_t seed) {
    std::ostringstream os;
    os << "[grid]\nresolution = " << resolution << "\n[exponents]\ntheorem = 1\nq = 6\na = 0\n"
       << "[run]\nt_final = " << t_final << "\ndt = " << dt << "\ncheckpoint_stride = " << stride
       << "\n[init]\nkind = gaussian\nseed = " << seed << "\nkmax = 8\nslope = 2\nsup = 1\n";
    RunConfig cfg = parse_config(os.str());
    cross_validate(cfg);
    return cfg;
}

VerifyReport verify_exponents() {
    using namespace fracdrift::exponents;
    VerifyReport rep;
    rep.suite = "exponents";

    rep.add("alpha0(2,6,0) == 4/3",
            alpha0_homogeneous(2, Rational(6), Rational(0)) == Rational(4, 3),
            to_double(alpha0_homogeneous(2, Rational(6), Rational(0))), 4.0 / 3.0);
    rep.add("alpha0(2,q,n) == 1",
            alpha0_homogeneous(2, Rational(7), Rational(2)) == Rational(1) &&
                alpha0_homogeneous(2, Rational(17, 2), Rational(2)) == Rational(1),
            1.0, 1.0);
    rep.add("alpha0(2,6,3/2) == 13/12",
            alpha0_homogeneous(2, Rational(6), Rational(3, 2)) == Rational(13, 12),
            to_double(alpha0_homogeneous(2, Rational(6), Rational(3, 2))), 13.0 / 12.0);

    auto t1 = theorem1_plan(2, Rational(6), Rational(0));
    rep.add("theorem1(2,6,0): p = 6, alpha = 8/7, alpha0 = 4/3",
            t1.ok() && t1->p == Rational(6) && t1->alpha == Rational(8, 7) &&
                t1->alpha0 == Rational(4, 3) && t1->alpha < t1->alpha0,
            t1.ok() ? to_double(t1->alpha) : 0.0, 8.0 / 7.0);
    auto t1r = theorem1_plan(2, Rational(4), Rational(0));
    rep.add("theorem1(2,4,0) rejected (p = 4 fails p > 4)", !t1r.ok(), t1r.ok() ? 1.0 : 0.0, 0.0);

    bool monotone = true;
    Rational prev{2};
    for (long e = 1; e <= 8; ++e) {
        auto plan = theorem1_plan(2, rational_pow(Rational(10), e), Rational(0));
        if (!plan.ok() || plan->alpha >= prev) monotone = false;
        if (plan.ok()) prev = plan->alpha;
    }
    rep.add("theorem1 alpha decreases to 1 as q grows", monotone && prev > 1, to_double(prev), 1.0);

    auto t2a = theorem2_verdict(2, Rational(6), Rational(1));
    rep.add("theorem2(2,6,1): besov_wins, alpha0 = 7/6",
            t2a.ok() && t2a->verdict == Verdict::besov_wins && t2a->alpha == Rational(8, 7) &&
                t2a->alpha0 == Rational(7, 6),
            t2a.ok() ? to_double(t2a->alpha0) : 0.0, 7.0 / 6.0);
    auto t2b = theorem2_verdict(2, Rational(6), Rational(8, 7));
    rep.add("theorem2(2,6,8/7): boundary a = alpha, besov_useless, alpha0 = alpha",
            t2b.ok() && t2b->verdict == Verdict::besov_useless && t2b->alpha0 == t2b->alpha,
            t2b.ok() ? to_double(t2b->alpha0) : 0.0, 8.0 / 7.0);
    auto t2c = theorem2_verdict(2, Rational(6), Rational(0));
    rep.add("theorem2(2,6,0): besov_wins", t2c.ok() && t2c->verdict == Verdict::besov_wins, 0.0,
            0.0);

    auto t3 = theorem3_plan(2, Rational(8), Rational(8), Rational(1, 5));
    rep.add("theorem3(2,8,8,1/5): alpha = 14/15, a = 8/5, sub-critical",
            t3.ok() && t3->alpha == Rational(14, 15) && t3->a == Rational(8, 5) && t3->subcritical,
            t3.ok() ? to_double(t3->alpha) : 0.0, 14.0 / 15.0);
    auto t3b = theorem3_plan(2, Rational(8), Rational(8), Rational(1, 8));
    rep.add("theorem3(2,8,8,1/8): alpha = 1 boundary",
            t3b.ok() && t3b->alpha == Rational(1) && !t3b->subcritical,
            t3b.ok() ? to_double(t3b->alpha) : 0.0, 1.0);
    auto t3c = theorem3_plan(2, Rational(8), Rational(8), Rational(3, 10));
    rep.add("theorem3(2,8,8,3/10): rejected, a = 12/5 >= n", !t3c.ok(), t3c.ok() ? 1.0 : 0.0, 0.0);

    auto t4 = theorem4_verdict(2, Rational(6), Rational(1, 20), Rational(1, 2));
    rep.add("theorem4(2,6,1/20,1/2): alpha = 83/70, threshold = 31/35, besov_wins",
            t4.ok() && t4->alpha == Rational(83, 70) && t4->threshold == Rational(31, 35) &&
                t4->verdict == Verdict::besov_wins,
            t4.ok() ? to_double(t4->threshold) : 0.0, 31.0 / 35.0);
    auto t4b = theorem4_verdict(2, Rational(6), Rational(1, 20), Rational(9, 10));
    rep.add("theorem4(2,6,1/20,9/10): besov_useless",
            t4b.ok() && t4b->verdict == Verdict::besov_useless, 0.0, 0.0);
    // eta -> 0 recovers the theorem-2 threshold
    auto t4c = theorem4_verdict(2, Rational(6), Rational(1, 1000000000), Rational(1));
    auto t2d = theorem2_verdict(2, Rational(6), Rational(1));
    rep.add("theorem4(eta -> 0) matches theorem2 verdict",
            t4c.ok() && t2d.ok() && t4c->verdict == t2d->verdict &&
                abs(t4c->threshold - t2d->threshold) < Rational(1, 1000000),
            t4c.ok() ? to_double(t4c->threshold) : 0.0, to_double(t2d->threshold));

    // molecule constants: the published example constants fail the annulus
    // sign check; the smaller-nu0 set passes
    ExponentSet base = *theorem1_plan(2, Rational(6), Rational(0));
    base.set_holder_targets(Rational(1, 10), Rational(1, 5));
    auto reject = molecule_params(base, rational_pow(Rational(10), 4), Rational(1, 20),
                                  Rational(1, 10000), Rational(5));
    rep.add("molecule_params(nu0 = 1/20) rejected on the annulus exponent",
            !reject.ok() && !reject.violated.empty() &&
                reject.violated.front() == "concentration annulus exponent < 0",
            reject.ok() ? 1.0 : 0.0, 0.0);
    auto accept = molecule_params(base, rational_pow(Rational(10), 4), Rational(1, 100),
                                  Rational(1, 1000000), Rational(5));
    rep.add("molecule_params(nu0 = 1/100): accepted, epsilon > 0",
            accept.ok() && accept->epsilon_geom > 0,
            accept.ok() ? accept->epsilon_geom : -1.0, 0.0);
    auto badm = molecule_params(base, Rational(10), Rational(1, 100), Rational(1, 1000000),
                                Rational(2));
    rep.add("molecule_params(m <= n/(1-omega)) rejected",
            !badm.ok() && badm.violated.front() == "m > n/(1-omega)", badm.ok() ? 1.0 : 0.0, 0.0);

    // alpha < alpha0 across a (q, a) grid
    bool grid_ok = true;
    for (int qi = 6; qi <= 30; qi += 4) {
        for (int ai = 0; ai < 8; ++ai) {
            Rational a(ai, 4);
            if (a >= 2) continue;
            auto plan = theorem1_plan(2, Rational(qi), a);
            if (plan.ok() && !(plan->alpha < plan->alpha0)) grid_ok = false;
        }
    }
    rep.add("alpha < alpha0 over the sampled (q, a) grid", grid_ok, grid_ok ? 1.0 : 0.0, 1.0);
    return rep;
}

VerifyReport verify_symbols() {
    VerifyReport rep;
    rep.suite = "symbols";
    field::Grid g(32);

    auto frac = levy::symbol_fractional(1.0, g);
    rep.add("fractional a((2,0)) == 2", std::abs(frac.value(2, 0) - 2.0) < 1e-14,
            frac.value(2, 0), 2.0);
    auto frac15 = levy::symbol_fractional(1.5, g);
    rep.add("fractional a((0,2)) == 2^1.5",
            std::abs(frac15.value(0, 2) - std::pow(2.0, 1.5)) < 1e-12, frac15.value(0, 2),
            std::pow(2.0, 1.5));
    rep.add("fractional a(0) == 0", frac.value(0, 0) == 0.0, frac.value(0, 0), 0.0);

    levy::LevySpec spec;
    spec.kind = levy::KernelKind::truncated_stable;
    spec.alpha = 1.0;
    spec.delta = 0.6;
    auto sym = levy::symbol_levy_khinchin(spec, g, 1e-8);
    rep.add("levy-khinchin a(0) == 0", sym.value(0, 0) == 0.0, sym.value(0, 0), 0.0);
    bool symmetric = true, nonneg = true;
    const int N = g.resolution;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (sym.value(i, j) < 0) nonneg = false;
            if (std::abs(sym.value(i, j) - sym.value((N - i) % N, (N - j) % N)) > 1e-12)
                symmetric = false;
        }
    rep.add("levy-khinchin symbol symmetric", symmetric, symmetric ? 1.0 : 0.0, 1.0);
    rep.add("levy-khinchin symbol nonnegative", nonneg, nonneg ? 1.0 : 0.0, 1.0);

    // Blumenthal-Getoor sandwich on |xi| <= 8
    double c_lo = std::numeric_limits<double>::infinity(), c_hi = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double k1 = g.wavenumber(i), k2 = g.wavenumber(j);
            const double kk = std::sqrt(k1 * k1 + k2 * k2);
            if (kk == 0.0 || kk > 8.0) continue;
            const double ratio = sym.value(i, j) / std::pow(kk, spec.alpha);
            c_lo = std::min(c_lo, ratio);
            c_hi = std::max(c_hi, ratio);
        }
    rep.add("symbol sandwich c2'/c1' <= 4 on |xi| <= 8", c_hi / c_lo <= 4.0 && c_lo > 0,
            c_hi / c_lo, 4.0);

    // D_2 equals the spectral sum; D_4 positivity and homogeneity
    field::ScalarField f = field::make_bandlimited_gaussian(g, 7, 6, 1.5, 1.0);
    const double d2 = levy::dissipation_functional(f, sym, 2.0);
    double spectral = 0.0;
    const auto& fsp = f.spectrum();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            spectral += sym.value(i, j) * std::norm(fsp[std::size_t(i) * N + j]);
    spectral *= g.period * g.period;
    rep.add("D_2 matches the Parseval sum", std::abs(d2 - spectral) <= 1e-8 * std::abs(spectral),
            d2, spectral);
    const double d4 = levy::dissipation_functional(f, sym, 4.0);
    rep.add("D_4 >= 0", d4 >= -1e-10, d4, 0.0);
    const double d4s = levy::dissipation_functional(field::scaled(f, 2.0), sym, 4.0);
    rep.add("D_4(2f) == 16 D_4(f)", std::abs(d4s - 16.0 * d4) <= 1e-8 * std::abs(d4s), d4s,
            16.0 * d4);
    return rep;
}

VerifyReport verify_maxprinciple() {
    VerifyReport rep;
    rep.suite = "maxprinciple";
    RunConfig cfg = pinned_sqg_config(64, 0.1, 1e-3, 10, 1);
    field::Grid g(cfg.resolution, cfg.period);
    auto sc = to_solve_config(cfg);
    auto symbol = solver::make_symbol(sc.levy_spec, g);
    auto traj = solver::solve(make_initial_field(cfg), sc, symbol);

    double worst = 0.0;
    for (std::size_t pi = 0; pi < sc.lp_track.size(); ++pi)
        for (std::size_t i = 1; i < traj.norms_series.size(); ++i) {
            const double growth = traj.norms_series[i].lp[pi] /
                                      std::max(traj.norms_series[i - 1].lp[pi], 1e-300) -
                                  1.0;
            worst = std::max(worst, growth);
        }
    rep.add("L^p non-increasing per step (slack 1e-6)", worst <= 1e-6, worst, 1e-6);

    const double mean_drift = std::abs(field::mean(traj.theta_snapshots.back()) -
                                       field::mean(traj.theta_snapshots.front()));
    rep.add("mean conserved", mean_drift < 1e-10, mean_drift, 1e-10);

    // drift-off single-mode decay
    RunConfig dcfg = parse_config(
        "[grid]\nresolution = 64\n[exponents]\ntheorem = 1\nq = 6\na = 0\n"
        "[drift]\nenabled = false\n[run]\nt_final = 1.0\ndt = 0.001\n"
        "[init]\nkind = cosine\nk1 = 2\nk2 = 0\namplitude = 1\n");
    cross_validate(dcfg);
    auto dsc = to_solve_config(dcfg);
    auto dsym = solver::make_symbol(dsc.levy_spec, g);
    auto dtraj = solver::solve(make_initial_field(dcfg), dsc, dsym);
    const double expected = std::exp(-dsym.value(2, 0) * dcfg.t_final);
    field::ScalarField ref = make_initial_field(dcfg);
    double err = 0.0;
    const auto& endf = dtraj.theta_snapshots.back().samples();
    const auto& reff = ref.samples();
    for (std::size_t i = 0; i < endf.size(); ++i)
        err = std::max(err, std::abs(endf[i] - expected * reff[i]));
    rep.add("single-mode decay error < 1e-8", err < 1e-8, err, 1e-8);
    return rep;
}

VerifyReport verify_besov_energy() {
    VerifyReport rep;
    rep.suite = "besov_energy";
    RunConfig cfg = pinned_sqg_config(64, 0.1, 1e-3, 10, 3);
    field::Grid g(cfg.resolution, cfg.period);
    auto sc = to_solve_config(cfg);
    auto symbol = solver::make_symbol(sc.levy_spec, g);
    auto traj = solver::solve(make_initial_field(cfg), sc, symbol);

    const double p = sc.besov_p;
    double integral = 0.0;
    for (std::size_t i = 1; i < traj.norms_series.size(); ++i)
        integral += sc.dt * std::pow(traj.norms_series[i].besov, p);
    const double lp0 = spaces::lp_norm(traj.theta_snapshots.front(), p);
    const double C = integral / std::pow(lp0, p);
    rep.add("besov energy constant finite", std::isfinite(C) && C > 0, C, 0.0);

    field::Grid g32(32);
    auto sym32 = solver::make_symbol(sc.levy_spec, g32);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        field::ScalarField f = field::make_bandlimited_gaussian(g32, seed, 6, 1.0, 1.0);
        for (double pp : {2.0, 4.0}) {
            auto chk = spaces::besov_vs_dissipation(f, sym32, pp, sc.levy_spec.alpha / pp);
            worst = std::max(worst, chk.ratio);
        }
    }
    rep.add("besov vs dissipation ratio bounded (<= 300)", worst <= 300.0, worst, 300.0);
    return rep;
}

VerifyReport verify_lemmas() {
    VerifyReport rep;
    rep.suite = "lemmas";
    field::Grid g(64);
    const double alpha = 8.0 / 7.0, p = 6.0;
    const double s = alpha / p;
    double worst_ball = 0.0, worst_annulus = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        field::ScalarField theta = field::make_bandlimited_gaussian(g, seed, 10, 1.0, 1.0);
        drift::DriftSpec spec;
        field::VectorField A = drift::evaluate_drift(spec, theta);
        for (double rho : {0.5, 0.25, 0.125}) {
            auto chk = spaces::mean_oscillation_lemma_check(A.x, rho, {M_PI, M_PI}, s, p);
            worst_ball = std::max(worst_ball, chk.ratio);
            for (int k = 1; k <= 4; ++k) {
                auto ann = spaces::annulus_oscillation_check(A.x, rho, {M_PI, M_PI}, s, p, k);
                worst_annulus = std::max(worst_annulus, ann.ratio);
            }
        }
    }
    rep.add("mean-oscillation ratio <= 2", worst_ball <= 2.0, worst_ball, 2.0);
    rep.add("annulus ratio <= 2", worst_annulus <= 2.0, worst_annulus, 2.0);
    return rep;
}

VerifyReport verify_transfer() {
    VerifyReport rep;
    rep.suite = "transfer";
    RunConfig cfg = pinned_sqg_config(64, 0.2, 1e-3, 10, 5);
    field::Grid g(cfg.resolution, cfg.period);
    auto sc = to_solve_config(cfg);
    auto symbol = solver::make_symbol(sc.levy_spec, g);
    auto traj = solver::solve(make_initial_field(cfg), sc, symbol);

    dual::Molecule mol = dual::make_molecule(0.25, {M_PI, M_PI}, 2.0, 0.2, 0.1, g);
    dual::DualConfig dc;
    dc.dt = sc.dt;
    dc.checkpoint_stride = sc.checkpoint_stride;
    dc.rho = mol.zeta * mol.r;
    auto run = dual::evolve_dual(mol, traj, 0.2, symbol, dc);
    auto bracket = dual::transfer_bracket(traj, run);
    rep.add("bracket drift < 1e-3", bracket.max_relative_drift < 1e-3,
            bracket.max_relative_drift, 1e-3);
    return rep;
}

VerifyReport verify_molecules() {
    VerifyReport rep;
    rep.suite = "molecules";
    field::Grid g(64);
    dual::Molecule mol = dual::make_molecule(0.125, {M_PI, M_PI}, 4.0, 0.2, 0.1, g);
    auto check = dual::validate_molecule(mol);
    rep.add("constructor passes the validator", check.ok, check.ok ? 1.0 : 0.0, 1.0);

    dual::Molecule doubled = mol;
    doubled.psi = field::scaled(mol.psi, 2.0);
    auto dcheck = dual::validate_molecule(doubled);
    bool height_caught = !dcheck.ok;
    rep.add("doubled copy fails the height bound", height_caught, dcheck.height,
            dcheck.height_bound);

    // drift-off envelope run
    RunConfig cfg = parse_config(
        "[grid]\nresolution = 64\n[exponents]\ntheorem = 1\nq = 6\na = 0\n"
        "[drift]\nenabled = false\n[run]\nt_final = 0.02\ndt = 0.0002\ncheckpoint_stride = 10\n"
        "[init]\nkind = zero\n");
    cross_validate(cfg);
    auto sc = to_solve_config(cfg);
    auto symbol = solver::make_symbol(sc.levy_spec, g);
    auto traj = solver::solve(make_initial_field(cfg), sc, symbol);

    auto plan = exponents::theorem1_plan(2, Rational(6), Rational(0));
    auto mp = exponents::molecule_params(*plan, Rational(10), Rational(1, 100),
                                         Rational(1, 1000000), Rational(5));
    const double alpha = to_double(plan->alpha);
    const double eps_iter = 0.1;
    const double s0 = eps_iter * std::pow(mol.r, alpha);
    dual::DualConfig dc;
    dc.dt = 2e-4;
    dc.checkpoint_stride = 10;
    dc.rho = mol.zeta * mol.r;
    dc.s_end = s0;
    auto run = dual::evolve_dual(mol, traj, traj.times.back(), symbol, dc);
    auto rows = dual::molecule_bound_report(run, mol, alpha, mp.ok() ? mp->K : 0.05);
    bool all_ok = true;
    for (const auto& row : rows) all_ok = all_ok && row.ok;
    rep.add("drift-off envelopes hold at every checkpoint", all_ok, all_ok ? 1.0 : 0.0, 1.0);
    return rep;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
    return {"symbols", "maxprinciple", "besov_energy", "lemmas",
            "transfer", "molecules", "exponents"};
}

VerifyReport verify_suite(const std::string& name) {
    if (name == "exponents") return verify_exponents();
    if (name == "symbols") return verify_symbols();
    if (name == "maxprinciple") return verify_maxprinciple();
    if (name == "besov_energy") return verify_besov_energy();
    if (name == "lemmas") return verify_lemmas();
    if (name == "transfer") return verify_transfer();
    if (name == "molecules") return verify_molecules();
    throw std::invalid_argument("unknown verify suite '" + name + "'");
}

}  // namespace fracdrift::harness
