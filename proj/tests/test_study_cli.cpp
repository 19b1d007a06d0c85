#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geonorm/geonorm.hpp"
#include "study.hpp"

using namespace geonorm;
namespace study = geonorm::study;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string& cli_path() {
    static std::string path;
    return path;
}

fs::path tmp_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::current_path() / "study_cli_scratch";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

int run_cli(const std::string& args) {
    REQUIRE(!cli_path().empty());
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        out.push_back(line);
    }
    return out;
}

} // namespace

TEST_CASE("sample runs are byte-identical and header-only at n=0") {
    study::SampleConfig cfg;
    cfg.mu = 1.25;
    cfg.gamma = 3.0;
    cfg.n = 200;
    cfg.seed = 99;
    cfg.out = (tmp_dir() / "a.csv").string();
    study::cmd_sample(cfg);
    const std::string first = slurp(cfg.out);

    cfg.out = (tmp_dir() / "b.csv").string();
    study::cmd_sample(cfg);
    CHECK(first == slurp(cfg.out));

    const auto ls = lines_of(first);
    REQUIRE(ls.size() == 201);
    CHECK(ls[0] == "index,theta");
    CHECK(first.find('\r') == std::string::npos); // LF only

    cfg.n = 0;
    cfg.out = (tmp_dir() / "empty.csv").string();
    study::cmd_sample(cfg);
    CHECK(slurp(cfg.out) == "index,theta\n");
}

TEST_CASE("sample then fit round-trips close to the generating parameters") {
    study::SampleConfig sc;
    sc.mu = 3.0 * pi / 4.0;
    sc.gamma = 1.0;
    sc.n = 500;
    sc.seed = 20260818;
    sc.out = (tmp_dir() / "roundtrip.csv").string();
    study::cmd_sample(sc);

    study::FitConfig fc;
    fc.input = sc.out;
    fc.out = (tmp_dir() / "roundtrip.json").string();
    study::cmd_fit(fc);

    const json j = slurp_json(fc.out);
    const double err = geodesic_distance(Angle(j.at("mu_hat").get<double>()),
                                         Angle(3.0 * pi / 4.0));
    CHECK(err * err <= 0.02);
    CHECK(j.at("gamma_hat").get<double>() > 0.5);
    CHECK(j.at("gamma_hat").get<double>() < 2.0);
    CHECK(j.at("n").get<std::size_t>() == 500);
    CHECK(j.at("mean_set_multiplicity").get<std::size_t>() == 1);
    // interval plumbing: level and finite, ordered gamma bounds
    CHECK(j.at("level").get<double>() == doctest::Approx(0.95));
    CHECK(j.at("ci_gamma_lower").get<double>() <
          j.at("ci_gamma_upper").get<double>());
    // the reference fit is present for a well-behaved sample
    CHECK(j.contains("vm_kappa_hat"));
}

TEST_CASE("fit reports the antipodal tie and errors on degenerate files") {
    const fs::path anti = tmp_dir() / "antipodal.csv";
    {
        std::ofstream out(anti, std::ios::binary);
        out << "index,theta\n0,0\n1," << study::fmt17(pi) << "\n";
    }
    study::FitConfig fc;
    fc.input = anti.string();
    fc.out = (tmp_dir() / "antipodal.json").string();
    study::cmd_fit(fc);
    const json j = slurp_json(fc.out);
    CHECK(j.at("mean_set_multiplicity").get<std::size_t>() == 2);
    // no mean direction exists for this sample, so the reference fit reports
    // its error instead of parameters
    CHECK(j.contains("vm_error"));

    const fs::path same = tmp_dir() / "identical.csv";
    {
        std::ofstream out(same, std::ios::binary);
        out << "index,theta\n0,2\n1,2\n2,2\n";
    }
    study::FitConfig bad;
    bad.input = same.string();
    bad.out = (tmp_dir() / "identical.json").string();
    CHECK_THROWS_AS(study::cmd_fit(bad), DegenerateSample);
}

TEST_CASE("angle CSV parse errors carry file and line") {
    const fs::path bad = tmp_dir() / "bad.csv";
    {
        std::ofstream out(bad, std::ios::binary);
        out << "index,theta\n0,1.5\n1,oops\n";
    }
    try {
        study::read_angles_csv(bad.string());
        FAIL("expected IoError");
    } catch (const study::IoError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.csv:3") != std::string::npos);
    }
    CHECK_THROWS_AS(study::read_angles_csv((tmp_dir() / "nope.csv").string()),
                    study::IoError);
}

TEST_CASE("moments command emits one row per order matching the library") {
    study::MomentsConfig mc;
    mc.mu = 0.7;
    mc.gamma = 2.0;
    mc.max_order = 6;
    mc.out = (tmp_dir() / "moments.csv").string();
    study::cmd_moments(mc);

    const auto ls = lines_of(slurp(mc.out));
    REQUIRE(ls.size() == 7);
    CHECK(ls[0] == "p,re,im,resultant_length,direction");
    const GnParams params(Angle(0.7), 2.0);
    for (int p = 1; p <= 6; ++p) {
        const TrigMoment m = trig_moment(p, params);
        std::ostringstream want;
        want << p << ',' << study::fmt17(m.re) << ',' << study::fmt17(m.im)
             << ',' << study::fmt17(m.resultant_length) << ','
             << study::fmt17(m.direction.radians());
        CHECK(ls[static_cast<std::size_t>(p)] == want.str());
    }

    mc.max_order = 9;
    CHECK_THROWS_AS(study::cmd_moments(mc), DomainError);
}

TEST_CASE("curves command starts at the flat limits and decreases") {
    study::CurvesConfig cc;
    cc.grid_min = 1e-4;
    cc.grid_max = 1e4;
    cc.grid_points = 25;
    cc.out = (tmp_dir() / "curves.csv").string();
    study::cmd_curves(cc);

    const auto ls = lines_of(slurp(cc.out));
    REQUIRE(ls.size() == 26);
    CHECK(ls[0] == "concentration,gn_var_I,gn_var_E,vm_var_I,vm_var_E");

    std::vector<std::array<double, 5>> rows;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        std::array<double, 5> row{};
        std::istringstream ss(ls[i]);
        std::string cell;
        for (double& v : row) {
            REQUIRE(std::getline(ss, cell, ','));
            v = std::stod(cell);
        }
        rows.push_back(row);
    }
    CHECK(rows.front()[0] == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(rows.back()[0] == doctest::Approx(1e4).epsilon(1e-12));
    CHECK(rows.front()[1] == doctest::Approx(pi * pi / 3.0).epsilon(1e-3));
    CHECK(rows.front()[2] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rows.front()[3] == doctest::Approx(pi * pi / 3.0).epsilon(1e-3));
    CHECK(rows.front()[4] == doctest::Approx(1.0).epsilon(1e-3));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t c = 1; c < 5; ++c) {
            CHECK(rows[i][c] < rows[i - 1][c]);
        }
    }

    cc.grid_points = 1;
    CHECK_THROWS_AS(study::cmd_curves(cc), DomainError);
}

TEST_CASE("mse study: serial and threaded runs produce identical bodies") {
    study::MseConfig mc;
    mc.truth = {{3.0 * pi / 4.0, 1.0}, {7.0 * pi / 4.0, 10.0}};
    mc.sizes = {10, 50};
    mc.reps = 40;
    mc.seed = 1234;
    mc.threads = 1;
    mc.out = (tmp_dir() / "mse_serial.csv").string();
    study::cmd_mse_study(mc);

    mc.threads = 3;
    mc.out = (tmp_dir() / "mse_threads.csv").string();
    study::cmd_mse_study(mc);

    const std::string serial = slurp(tmp_dir() / "mse_serial.csv");
    CHECK(serial == slurp(tmp_dir() / "mse_threads.csv"));

    const auto ls = lines_of(serial);
    REQUIRE(ls.size() == 5); // header + 2 pairs x 2 sizes
    CHECK(ls[0] == "mu_star,gamma_star,n,m,mse_mu,mse_gamma,failures");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        CHECK(ls[i].back() == '0'); // no non-identifiable replications
    }
}

TEST_CASE("clt study sidecar carries the asymptotic variance and KS") {
    study::CltConfig cc;
    cc.mu = 3.0 * pi / 4.0;
    cc.gamma = 1.0;
    cc.n = 100;
    cc.reps = 60;
    cc.seed = 777;
    cc.out = (tmp_dir() / "clt.csv").string();
    cc.sidecar = (tmp_dir() / "clt_meta.json").string();
    study::cmd_clt_study(cc);

    const auto ls = lines_of(slurp(cc.out));
    REQUIRE(ls.size() == 61);
    CHECK(ls[0] == "replication,sqrt_n_error");

    const json meta = slurp_json(cc.sidecar);
    const FisherInfo info = fisher_info(1.0);
    CHECK(meta.at("asymptotic_variance").get<double>() ==
          doctest::Approx(1.0 / info.j1).epsilon(1e-15));
    CHECK(meta.at("ks_statistic").get<double>() > 0.0);
    CHECK(meta.at("ks_statistic").get<double>() < 0.25);
    CHECK(meta.at("reps").get<std::size_t>() == 60);
}

TEST_CASE("ks_statistic detects fit and misfit") {
    std::vector<double> u(1000);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = (static_cast<double>(i) + 0.5) / 1000.0;
    }
    const auto ident = [](double x) { return x; };
    CHECK(study::ks_statistic(u, ident) < 0.002);
    const auto shifted = [](double x) { return std::min(1.0, x + 0.2); };
    CHECK(study::ks_statistic(u, shifted) > 0.15);
    CHECK_THROWS_AS(study::ks_statistic({}, ident), EmptySample);
}

TEST_CASE("command line: exit codes and config overrides") {
    const fs::path dir = tmp_dir();
    const std::string sample_out = (dir / "cli_sample.csv").string();
    CHECK(run_cli("sample --n 50 --mu 2.356 --gamma 1 --seed 5 --out " +
                  sample_out) == 0);
    CHECK(fs::exists(sample_out));

    // identical-angle file: an estimation failure, not a usage failure
    const fs::path same = dir / "cli_identical.csv";
    {
        std::ofstream out(same, std::ios::binary);
        out << "index,theta\n0,2\n1,2\n";
    }
    CHECK(run_cli("fit " + same.string() + " --out " +
                  (dir / "cli_fit.json").string()) == 2);

    // unreadable input and unknown flags are IO/usage failures
    CHECK(run_cli("fit " + (dir / "missing.csv").string()) == 1);
    CHECK(run_cli("sample --definitely-not-a-flag 1") == 1);
    CHECK(run_cli("") == 1); // a subcommand is required

    // a config file overrides conflicting flags
    const fs::path cfg = dir / "cli_config.json";
    const std::string cfg_out = (dir / "cli_config_sample.csv").string();
    {
        std::ofstream out(cfg, std::ios::binary);
        out << json{{"n", 3}, {"out", cfg_out}}.dump();
    }
    CHECK(run_cli("sample --n 50 --seed 5 --config " + cfg.string()) == 0);
    CHECK(lines_of(slurp(cfg_out)).size() == 4);

    // malformed config JSON is an IO failure
    const fs::path broken = dir / "broken.json";
    {
        std::ofstream out(broken, std::ios::binary);
        out << "{not json";
    }
    CHECK(run_cli("sample --config " + broken.string()) == 1);
}

TEST_CASE("command line: moments order validation via flags") {
    CHECK(run_cli("moments --n 9 --out " +
                  (tmp_dir() / "cli_moments.csv").string()) == 1);
    CHECK(run_cli("moments --n 8 --out " +
                  (tmp_dir() / "cli_moments.csv").string()) == 0);
}

int main(int argc, char** argv) {
    // the build system passes the CLI binary path as the last argument
    if (argc > 1 && argv[argc - 1][0] != '-') {
        cli_path() = argv[argc - 1];
        --argc;
    }
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
