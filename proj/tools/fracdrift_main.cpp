#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fracdrift/harness.hpp"
#include "fracdrift/io.hpp"
#include "fracdrift/plots.hpp"
#include "fracdrift/random_field.hpp"
#include "fracdrift/spaces.hpp"

namespace fs = std::filesystem;
using namespace fracdrift;

namespace {

int cmd_exponents(int theorem, const std::string& n_s, const std::string& q_s,
                  const std::string& a_s, const std::string& p_s, const std::string& eta_s,
                  const std::string& out_path) {
    using namespace exponents;
    const int n = int(to_double(parse_rational(n_s)));
    std::string verdict = "accepted";
    std::vector<std::string> violated;
    std::vector<std::pair<std::string, Rational>> inputs, derived;
    std::string op = "theorem" + std::to_string(theorem) + "_plan";

    if (theorem == 1) {
        Rational q = parse_rational(q_s), a = parse_rational(a_s);
        inputs = {{"n", Rational(n)}, {"q", q}, {"a", a}};
        auto plan = theorem1_plan(n, q, a);
        if (plan.ok()) {
            derived = {{"p", plan->p}, {"alpha", plan->alpha}, {"alpha0", plan->alpha0}};
            verdict = "alpha < alpha0";
        } else {
            verdict = "rejected";
            violated = plan.violated;
        }
    } else if (theorem == 2) {
        op = "theorem2_verdict";
        Rational p = parse_rational(p_s), a = parse_rational(a_s);
        inputs = {{"n", Rational(n)}, {"p", p}, {"a", a}};
        auto v = theorem2_verdict(n, p, a);
        if (v.ok()) {
            derived = {{"alpha", v->alpha}, {"alpha0", v->alpha0}, {"threshold", v->threshold}};
            verdict = v->verdict == Verdict::besov_wins ? "besov_wins" : "besov_useless";
        } else {
            verdict = "rejected";
            violated = v.violated;
        }
    } else if (theorem == 3) {
        Rational p = parse_rational(p_s), q = parse_rational(q_s), eta = parse_rational(eta_s);
        inputs = {{"n", Rational(n)}, {"p", p}, {"q", q}, {"eta", eta}};
        auto plan = theorem3_plan(n, p, q, eta);
        if (plan.ok()) {
            derived = {{"alpha", plan->alpha}, {"a", plan->a}, {"alpha0", plan->alpha0}};
            verdict = plan->subcritical ? "accepted (sub-critical alpha < 1)" : "accepted";
        } else {
            verdict = "rejected";
            violated = plan.violated;
        }
    } else if (theorem == 4) {
        op = "theorem4_verdict";
        Rational p = parse_rational(p_s), eta = parse_rational(eta_s), a = parse_rational(a_s);
        inputs = {{"n", Rational(n)}, {"p", p}, {"eta", eta}, {"a", a}};
        auto v = theorem4_verdict(n, p, eta, a);
        if (v.ok()) {
            derived = {{"alpha", v->alpha}, {"threshold", v->threshold}, {"alpha0", v->alpha0}};
            verdict = v->verdict == Verdict::besov_wins ? "besov_wins" : "besov_useless";
        } else {
            verdict = "rejected";
            violated = v.violated;
        }
    } else {
        std::cerr << "theorem must be 1..4\n";
        return 2;
    }

    const std::string json = verdict_json(op, inputs, derived, verdict, violated);
    if (!out_path.empty())
        io::write_text_file(out_path, json);
    else
        std::cout << json;
    return verdict == "rejected" ? 3 : 0;
}

int cmd_dual(const std::string& traj_dir, double t_pivot, double r, double zeta, double s0,
             double omega, double gamma, double dt, const std::string& out_dir) {
    solver::Trajectory traj = harness::load_trajectory(traj_dir);
    harness::DualParams params;
    params.t_pivot = t_pivot;
    params.r = r;
    params.zeta = zeta;
    params.s0 = s0;
    params.omega = omega;
    params.gamma = gamma;
    params.dt = dt;
    harness::DualOutcome outcome = harness::run_dual_diagnostic(traj, params, out_dir);
    std::cout << io::read_text_file(out_dir + "/verdict.json");
    return outcome.envelopes_hold ? 0 : 1;
}

int cmd_norms(const std::string& field_path, const std::string& out_path,
              const std::string& csv_path, double besov_s, double besov_p, double mc_q,
              double mc_a, double holder_gamma, const std::string& method) {
    field::ScalarField f = io::read_field(field_path);
    spaces::NormReport rep;
    rep.resolution = f.grid().resolution;
    rep.period = f.grid().period;
    for (double p : {2.0, 4.0, 8.0, std::numeric_limits<double>::infinity()})
        rep.lp[p] = spaces::lp_norm(f, p);
    rep.besov_method = method;
    rep.besov[{besov_s, besov_p}] = method == "dyadic_blocks"
                                        ? spaces::besov_dyadic_blocks(f, besov_s, besov_p)
                                        : spaces::besov_double_integral(f, besov_s, besov_p);
    rep.morrey[{mc_q, mc_a}] = spaces::morrey_campanato_norm(f, mc_q, mc_a);
    rep.holder[holder_gamma] = spaces::holder_seminorm(f, holder_gamma);

    const std::string json = rep.to_json();
    if (!out_path.empty())
        io::write_text_file(out_path, json);
    else
        std::cout << json;

    if (!csv_path.empty()) {
        std::ostringstream row;
        row << field_path << "," << io::format_double(rep.lp[2.0]) << ","
            << io::format_double(rep.lp[std::numeric_limits<double>::infinity()]) << ","
            << io::format_double(rep.besov[{besov_s, besov_p}]) << ","
            << io::format_double(rep.morrey[{mc_q, mc_a}]) << ","
            << io::format_double(rep.holder[holder_gamma]) << "\n";
        bool fresh = !fs::exists(csv_path);
        std::ofstream os(csv_path, std::ios::app);
        if (fresh) os << "field,l2,linf,besov,mc,holder\n";
        os << row.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracdrift: transport-diffusion laboratory with Levy dissipation"};
    app.require_subcommand(1);

    // exponents
    auto* exp_cmd = app.add_subcommand("exponents", "exponent algebra verdicts");
    int theorem = 1;
    std::string n_s = "2", q_s = "6", a_s = "0", p_s = "6", eta_s = "0", exp_out;
    exp_cmd->add_option("--theorem", theorem, "theorem number 1..4");
    exp_cmd->add_option("--n", n_s, "dimension");
    exp_cmd->add_option("--q", q_s, "Morrey-Campanato integrability (rational)");
    exp_cmd->add_option("--a", a_s, "Morrey-Campanato scale (rational)");
    exp_cmd->add_option("--p", p_s, "Lebesgue index (rational)");
    exp_cmd->add_option("--eta", eta_s, "drift regularization exponent (rational)");
    exp_cmd->add_option("--out", exp_out, "write the JSON verdict here");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "forward solve from a config file");
    std::string sim_config, sim_out = "run";
    sim_cmd->add_option("-c,--config", sim_config, "config file")->required();
    sim_cmd->add_option("--out", sim_out, "output run directory");

    // dual
    auto* dual_cmd = app.add_subcommand("dual", "backward molecule run against a trajectory");
    std::string dual_traj, dual_out = "dual_run";
    double dual_tpivot = -1, dual_r = 0.0625, dual_zeta = 8.0, dual_s0 = -1;
    double dual_omega = 0.2, dual_gamma = 0.1, dual_dt = -1;
    dual_cmd->add_option("--trajectory", dual_traj, "run directory from simulate")->required();
    dual_cmd->add_option("--t-pivot", dual_tpivot, "pivot time (default: trajectory end)");
    dual_cmd->add_option("--r", dual_r, "molecule size");
    dual_cmd->add_option("--zeta", dual_zeta, "molecule dilation constant");
    dual_cmd->add_option("--s0", dual_s0, "backward span (default 0.1 r^alpha)");
    dual_cmd->add_option("--omega", dual_omega, "concentration exponent");
    dual_cmd->add_option("--gamma", dual_gamma, "Hoelder target");
    dual_cmd->add_option("--dt", dual_dt, "dual time step (default: forward dt)");
    dual_cmd->add_option("--out", dual_out, "output directory");

    // norms
    auto* norms_cmd = app.add_subcommand("norms", "norm report for a field file");
    std::string norms_field, norms_out, norms_csv, norms_method = "double_integral";
    double nb_s = 0.5, nb_p = 2.0, nm_q = 6.0, nm_a = 0.0, nh_g = 0.1;
    norms_cmd->add_option("--field", norms_field, "input .fdf file")->required();
    norms_cmd->add_option("--out", norms_out, "write the JSON report here");
    norms_cmd->add_option("--csv", norms_csv, "append one CSV row here");
    norms_cmd->add_option("--besov-s", nb_s, "Besov smoothness");
    norms_cmd->add_option("--besov-p", nb_p, "Besov integrability");
    norms_cmd->add_option("--besov-method", norms_method, "double_integral | dyadic_blocks");
    norms_cmd->add_option("--mc-q", nm_q, "Morrey-Campanato q");
    norms_cmd->add_option("--mc-a", nm_a, "Morrey-Campanato a");
    norms_cmd->add_option("--holder-gamma", nh_g, "Hoelder exponent");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run a named invariant battery");
    std::string verify_name, verify_out;
    verify_cmd->add_option("--suite", verify_name, "suite name or 'all'")->required();
    verify_cmd->add_option("--out", verify_out, "write the JSON report here");

    // plots
    auto* plots_cmd = app.add_subcommand("plots", "render norm plots for a run directory");
    std::string plots_run;
    plots_cmd->add_option("--run", plots_run, "run directory containing norms.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*exp_cmd) return cmd_exponents(theorem, n_s, q_s, a_s, p_s, eta_s, exp_out);
        if (*sim_cmd) {
            std::string msg;
            int code = harness::run_scenario(sim_config, sim_out, &msg);
            if (code != 0) std::cerr << "simulate: " << msg << "\n";
            else std::cout << "run written to " << sim_out << "\n";
            return code;
        }
        if (*dual_cmd)
            return cmd_dual(dual_traj, dual_tpivot, dual_r, dual_zeta, dual_s0, dual_omega,
                            dual_gamma, dual_dt, dual_out);
        if (*norms_cmd)
            return cmd_norms(norms_field, norms_out, norms_csv, nb_s, nb_p, nm_q, nm_a, nh_g,
                             norms_method);
        if (*verify_cmd) {
            std::vector<std::string> names = verify_name == "all"
                                                 ? harness::verify_suite_names()
                                                 : std::vector<std::string>{verify_name};
            bool all = true;
            std::string combined;
            for (const auto& name : names) {
                harness::VerifyReport rep = harness::verify_suite(name);
                for (const auto& c : rep.checks)
                    std::cout << (c.pass ? "PASS" : "FAIL") << "  [" << name << "] " << c.name
                              << "  (measured " << c.measured << ", bound " << c.bound << ")\n";
                all = all && rep.pass;
                combined += rep.to_json();
            }
            if (!verify_out.empty()) io::write_text_file(verify_out, combined);
            return all ? 0 : 1;
        }
        if (*plots_cmd) {
            auto files = plots::emit_plots(plots_run + "/norms.csv", plots_run + "/plots");
            std::cout << files.size() << " plots written\n";
            return 0;
        }
    } catch (const harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const harness::AdmissibilityError& e) {
        std::cerr << "inadmissible: " << e.what() << "\n";
        return 3;
    } catch (const solver::SolverAbort& e) {
        std::cerr << "solver abort: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
