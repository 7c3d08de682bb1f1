#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "fracdrift/harness.hpp"
#include "fracdrift/io.hpp"
#include "fracdrift/plots.hpp"

using namespace fracdrift;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

const char* kSqgPreset =
    "[grid]\n"
    "resolution = 64\n"
    "[exponents]\n"
    "theorem = 1\n"
    "q = 6\n"
    "a = 0\n"
    "[run]\n"
    "t_final = 0.02\n"
    "dt = 0.001\n"
    "checkpoint_stride = 5\n"
    "[init]\n"
    "kind = gaussian\n"
    "seed = 7\n"
    "kmax = 8\n"
    "slope = 2\n"
    "sup = 1\n";

}  // namespace

TEST_CASE("config parser") {
    SUBCASE("valid preset parses and cross-validates") {
        harness::RunConfig cfg = harness::parse_config(kSqgPreset);
        harness::cross_validate(cfg);
        CHECK(cfg.resolution == 64);
        CHECK(cfg.plan.p == Rational(6));
        CHECK(cfg.levy_spec.alpha == doctest::Approx(8.0 / 7.0));
        CHECK(to_double(cfg.plan.alpha / cfg.plan.p) == doctest::Approx((8.0 / 7.0) / 6.0));
    }
    SUBCASE("unknown key rejected") {
        CHECK_THROWS_AS(harness::parse_config("[grid]\nresolutio = 64\n"), harness::ConfigError);
    }
    SUBCASE("bad syntax rejected") {
        CHECK_THROWS_AS(harness::parse_config("[grid\nresolution = 64\n"), harness::ConfigError);
        CHECK_THROWS_AS(harness::parse_config("resolution = 64\n"), harness::ConfigError);
        CHECK_THROWS_AS(harness::parse_config("[grid]\nresolution = abc\n"),
                        harness::ConfigError);
    }
    SUBCASE("rationals accepted in exponent fields") {
        harness::RunConfig cfg =
            harness::parse_config("[exponents]\ntheorem = 1\nq = 13/2\na = 1/4\n");
        CHECK(cfg.exp_q == Rational(13, 2));
        CHECK(cfg.exp_a == Rational(1, 4));
    }
    SUBCASE("inadmissible exponents abort with the named constraint") {
        harness::RunConfig cfg =
            harness::parse_config("[exponents]\ntheorem = 1\nq = 6\na = 3\n");
        try {
            harness::cross_validate(cfg);
            CHECK(false);
        } catch (const harness::AdmissibilityError& e) {
            REQUIRE_FALSE(e.violated.empty());
            CHECK(e.violated.front() == "a < n");
        }
    }
    SUBCASE("explicit alpha must match the plan") {
        harness::RunConfig cfg = harness::parse_config(
            "[levy]\nalpha = 1.2\n[exponents]\ntheorem = 1\nq = 6\na = 0\n");
        CHECK_THROWS_AS(harness::cross_validate(cfg), harness::AdmissibilityError);
    }
}

TEST_CASE("run_scenario exit codes") {
    TempDir tmp("fracdrift_harness_codes");
    SUBCASE("ok run returns 0 and writes the full layout") {
        const std::string cfg_path = tmp.str() + "/ok.cfg";
        io::write_text_file(cfg_path, kSqgPreset);
        std::string msg;
        const int code = harness::run_scenario(cfg_path, tmp.str() + "/run", &msg);
        CHECK(code == 0);
        CHECK(fs::exists(tmp.path / "run/manifest.json"));
        CHECK(fs::exists(tmp.path / "run/norms.csv"));
        CHECK(fs::exists(tmp.path / "run/fields/theta_000000.fdf"));
        CHECK(fs::exists(tmp.path / "run/plots/l2.svg"));
    }
    SUBCASE("config parse error returns 2") {
        const std::string cfg_path = tmp.str() + "/bad.cfg";
        io::write_text_file(cfg_path, "[grid]\nresolution == 64\n");
        CHECK(harness::run_scenario(cfg_path, tmp.str() + "/run2") == 2);
        CHECK(harness::run_scenario(tmp.str() + "/missing.cfg", tmp.str() + "/run2") == 2);
    }
    SUBCASE("admissibility rejection returns 3") {
        const std::string cfg_path = tmp.str() + "/inadmissible.cfg";
        io::write_text_file(cfg_path, "[exponents]\ntheorem = 1\nq = 6\na = 3\n");
        std::string msg;
        CHECK(harness::run_scenario(cfg_path, tmp.str() + "/run3", &msg) == 3);
        CHECK(msg.find("a < n") != std::string::npos);
    }
    SUBCASE("solver abort returns 4") {
        // CFL-hostile: large dt with a strong drift
        const std::string cfg_path = tmp.str() + "/cfl.cfg";
        io::write_text_file(cfg_path,
                            "[grid]\nresolution = 64\n[exponents]\ntheorem = 1\nq = 6\na = 0\n"
                            "[run]\nt_final = 1.0\ndt = 0.05\n[init]\nkind = gaussian\nseed = 2\n"
                            "kmax = 8\nslope = 2\nsup = 40\n");
        CHECK(harness::run_scenario(cfg_path, tmp.str() + "/run4") == 4);
    }
}

TEST_CASE("zero initial field produces identically zero norm rows") {
    TempDir tmp("fracdrift_harness_zero");
    const std::string cfg_path = tmp.str() + "/zero.cfg";
    io::write_text_file(cfg_path,
                        "[grid]\nresolution = 64\n[exponents]\ntheorem = 1\nq = 6\na = 0\n"
                        "[run]\nt_final = 0.01\ndt = 0.001\n[init]\nkind = zero\n");
    REQUIRE(harness::run_scenario(cfg_path, tmp.str() + "/run") == 0);
    std::ifstream is(tmp.path / "run/norms.csv");
    std::string header, line;
    std::getline(is, header);
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        // every column after t must be exactly 0
        auto pos = line.find(',');
        CHECK(line.substr(pos) == ",0,0,0,0,0,0,0");
    }
    CHECK(rows >= 2);
}

TEST_CASE("reruns are byte identical at a fixed seed") {
    TempDir tmp("fracdrift_harness_repro");
    const std::string cfg_path = tmp.str() + "/cfg.cfg";
    io::write_text_file(cfg_path, kSqgPreset);
    REQUIRE(harness::run_scenario(cfg_path, tmp.str() + "/run_a") == 0);
    REQUIRE(harness::run_scenario(cfg_path, tmp.str() + "/run_b") == 0);
    CHECK(io::fnv1a_file(tmp.str() + "/run_a/norms.csv") ==
          io::fnv1a_file(tmp.str() + "/run_b/norms.csv"));
    CHECK(io::fnv1a_file(tmp.str() + "/run_a/plots/l2.svg") ==
          io::fnv1a_file(tmp.str() + "/run_b/plots/l2.svg"));
    CHECK(io::fnv1a_file(tmp.str() + "/run_a/fields/theta_000000.fdf") ==
          io::fnv1a_file(tmp.str() + "/run_b/fields/theta_000000.fdf"));
}

TEST_CASE("a run directory is self-describing: the manifest echo reproduces it") {
    TempDir tmp("fracdrift_harness_manifest");
    const std::string cfg_path = tmp.str() + "/cfg.cfg";
    io::write_text_file(cfg_path, kSqgPreset);
    REQUIRE(harness::run_scenario(cfg_path, tmp.str() + "/run_a") == 0);

    // extract the config echo from the manifest and re-run from it alone
    const std::string manifest = io::read_text_file(tmp.str() + "/run_a/manifest.json");
    auto at = manifest.find("\"config_echo\": \"");
    REQUIRE(at != std::string::npos);
    at += 16;
    const auto end = manifest.find("\",\n", at);
    std::string echo = manifest.substr(at, end - at);
    // unescape the JSON string payload
    std::string text;
    for (std::size_t i = 0; i < echo.size(); ++i) {
        if (echo[i] == '\\' && i + 1 < echo.size()) {
            ++i;
            text += echo[i] == 'n' ? '\n' : echo[i];
        } else {
            text += echo[i];
        }
    }
    io::write_text_file(tmp.str() + "/echo.cfg", text);
    REQUIRE(harness::run_scenario(tmp.str() + "/echo.cfg", tmp.str() + "/run_b") == 0);
    CHECK(io::fnv1a_file(tmp.str() + "/run_a/norms.csv") ==
          io::fnv1a_file(tmp.str() + "/run_b/norms.csv"));
}

TEST_CASE("norm rows are independent of the thread budget") {
    TempDir tmp("fracdrift_harness_threads");
    const std::string cfg_path = tmp.str() + "/cfg.cfg";
    io::write_text_file(cfg_path, kSqgPreset);
    setenv("FRACDRIFT_THREADS", "1", 1);
    REQUIRE(harness::run_scenario(cfg_path, tmp.str() + "/run_1") == 0);
    setenv("FRACDRIFT_THREADS", "5", 1);
    REQUIRE(harness::run_scenario(cfg_path, tmp.str() + "/run_5") == 0);
    unsetenv("FRACDRIFT_THREADS");
    CHECK(io::fnv1a_file(tmp.str() + "/run_1/norms.csv") ==
          io::fnv1a_file(tmp.str() + "/run_5/norms.csv"));
}

TEST_CASE("trajectory round trips through a run directory") {
    TempDir tmp("fracdrift_harness_traj");
    const std::string cfg_path = tmp.str() + "/cfg.cfg";
    io::write_text_file(cfg_path, kSqgPreset);
    REQUIRE(harness::run_scenario(cfg_path, tmp.str() + "/run") == 0);
    solver::Trajectory traj = harness::load_trajectory(tmp.str() + "/run");
    CHECK(traj.grid.resolution == 64);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(0.02));
    CHECK(traj.theta_snapshots.size() == traj.times.size());
    CHECK(traj.drift_snapshots.size() == traj.times.size());
    CHECK(traj.config.besov_p == doctest::Approx(6.0));
}

TEST_CASE("plots") {
    TempDir tmp("fracdrift_plots");
    SUBCASE("header-only csv yields empty axes") {
        io::write_text_file(tmp.str() + "/norms.csv", "t,l2\n");
        auto files = plots::emit_plots(tmp.str() + "/norms.csv", tmp.str() + "/plots");
        REQUIRE(files.size() == 1);
        const std::string svg = io::read_text_file(files[0]);
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("polyline") == std::string::npos);
    }
    SUBCASE("monotone series renders a monotone polyline") {
        io::write_text_file(tmp.str() + "/norms.csv", "t,l2\n0,4\n1,3\n2,2.5\n3,1\n");
        auto files = plots::emit_plots(tmp.str() + "/norms.csv", tmp.str() + "/plots");
        const std::string svg = io::read_text_file(files[0]);
        auto at = svg.find("points=\"");
        REQUIRE(at != std::string::npos);
        at += 8;
        const auto end = svg.find('"', at);
        std::istringstream pts(svg.substr(at, end - at));
        std::string pair;
        double prev_y = -1e300;
        int count = 0;
        while (pts >> pair) {
            const auto comma = pair.find(',');
            const double y = std::stod(pair.substr(comma + 1));
            CHECK(y >= prev_y);  // svg y grows downward, norms decrease
            prev_y = y;
            ++count;
        }
        CHECK(count == 4);
    }
    SUBCASE("missing csv throws") {
        CHECK_THROWS(plots::emit_plots(tmp.str() + "/nope.csv", tmp.str() + "/plots"));
    }
}

TEST_CASE("verify suites: exponents battery replays exactly") {
    auto rep = harness::verify_suite("exponents");
    CHECK(rep.pass);
    for (const auto& line : rep.checks) CHECK(line.pass);
    CHECK(rep.to_json().find("\"pass\": true") != std::string::npos);
    CHECK_THROWS_AS(harness::verify_suite("nonsense"), std::invalid_argument);
}

TEST_CASE("verify suites: symbols battery") {
    auto rep = harness::verify_suite("symbols");
    CHECK(rep.pass);
}

TEST_CASE("verify suite names stay a stable contract") {
    auto names = harness::verify_suite_names();
    REQUIRE(names.size() == 7);
    CHECK(names[0] == "symbols");
    CHECK(names[6] == "exponents");
}

TEST_CASE("shipped presets are admissible and run end to end when shortened") {
    const std::string preset_dir = std::string(FRACDRIFT_SOURCE_DIR) + "/presets";

    harness::RunConfig thm1 =
        harness::load_config(preset_dir + "/sqg_thm1.cfg");
    harness::cross_validate(thm1);
    CHECK(thm1.plan.alpha == Rational(8, 7));
    CHECK(thm1.plan.alpha0 == Rational(4, 3));

    harness::RunConfig thm3 =
        harness::load_config(preset_dir + "/sqg_thm3_subcritical.cfg");
    harness::cross_validate(thm3);
    CHECK(thm3.plan.alpha == Rational(14, 15));
    CHECK(thm3.plan.subcritical);
    CHECK(thm3.drift_spec.eta_smooth == doctest::Approx(0.2));

    // run desk-scale copies of both presets to completion
    TempDir tmp("fracdrift_preset_run");
    auto run_shortened = [&](const std::string& name, const std::string& t_line) {
        std::string text = io::read_text_file(preset_dir + "/" + name);
        auto patch = [&](const std::string& from, const std::string& to) {
            auto at = text.find(from);
            REQUIRE(at != std::string::npos);
            text.replace(at, from.size(), to);
        };
        patch("resolution = 128", "resolution = 64");
        patch(t_line, "t_final = 0.02");
        const std::string cfg_path = tmp.str() + "/" + name;
        io::write_text_file(cfg_path, text);
        std::string msg;
        const int code = harness::run_scenario(cfg_path, tmp.str() + "/run_" + name, &msg);
        INFO(msg);
        CHECK(code == 0);
    };
    run_shortened("sqg_thm1.cfg", "t_final = 1.0");
    run_shortened("sqg_thm3_subcritical.cfg", "t_final = 0.5");
}

TEST_CASE("optional dual section runs the molecule diagnostic inside the run dir") {
    TempDir tmp("fracdrift_harness_dual");
    const std::string cfg_path = tmp.str() + "/cfg.cfg";
    io::write_text_file(cfg_path,
                        std::string(kSqgPreset) +
                            "[dual]\nenabled = true\nr = 0.125\nzeta = 4\nomega = 0.2\n"
                            "gamma = 0.1\n");
    REQUIRE(harness::run_scenario(cfg_path, tmp.str() + "/run") == 0);
    CHECK(fs::exists(tmp.path / "run/dual/bounds.csv"));
    const std::string verdict = io::read_text_file(tmp.str() + "/run/dual/verdict.json");
    CHECK(verdict.find("\"envelopes_hold\": true") != std::string::npos);
    CHECK(verdict.find("empirical_K") != std::string::npos);
}

TEST_CASE("picard scheme runs through the scenario path") {
    TempDir tmp("fracdrift_picard_cfg");
    const std::string cfg_path = tmp.str() + "/picard.cfg";
    io::write_text_file(cfg_path,
                        "[grid]\nresolution = 32\n[exponents]\ntheorem = 1\nq = 6\na = 0\n"
                        "[run]\nt_final = 0.01\ndt = 0.002\neps_viscosity = 0.5\n"
                        "scheme = picard_mild\ncheckpoint_stride = 1\n"
                        "[init]\nkind = gaussian\nseed = 4\nkmax = 6\nslope = 1.5\nsup = 0.5\n");
    std::string msg;
    CHECK(harness::run_scenario(cfg_path, tmp.str() + "/run", &msg) == 0);
}
