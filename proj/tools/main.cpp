#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "study.hpp"

namespace {

namespace study = geonorm::study;
using nlohmann::json;

json load_config(const std::string& path) {
    if (path.empty()) {
        return json::object();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw study::IoError("cannot open config '" + path + "' for reading");
    }
    json j;
    in >> j; // throws on malformed JSON
    return j;
}

template <class T>
void put(const json& j, const char* key, T& target) {
    if (const auto it = j.find(key); it != j.end()) {
        target = it->get<T>();
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geodesic-normal circular statistics: sampling, "
                 "maximum-likelihood fitting, moment tables, variance curves, "
                 "and reproducible simulation studies"};
    app.require_subcommand(1);

    study::SampleConfig sample_cfg;
    std::string sample_json;
    CLI::App* s = app.add_subcommand(
        "sample", "Draw a reproducible sample, written as index,theta CSV");
    s->add_option("--mu", sample_cfg.mu, "Location in radians")
        ->capture_default_str();
    s->add_option("--gamma", sample_cfg.gamma, "Concentration (> 0)")
        ->capture_default_str();
    s->add_option("--n", sample_cfg.n, "Number of draws")->capture_default_str();
    s->add_option("--seed", sample_cfg.seed, "Root RNG seed")
        ->capture_default_str();
    s->add_option("--out", sample_cfg.out, "Output CSV path")
        ->capture_default_str();
    s->add_option("--config", sample_json,
                  "JSON file whose keys (mu, gamma, n, seed, out) override "
                  "the flags");
    s->callback([&] {
        const json j = load_config(sample_json);
        put(j, "mu", sample_cfg.mu);
        put(j, "gamma", sample_cfg.gamma);
        put(j, "n", sample_cfg.n);
        put(j, "seed", sample_cfg.seed);
        put(j, "out", sample_cfg.out);
        study::cmd_sample(sample_cfg);
    });

    study::FitConfig fit_cfg;
    std::string fit_json;
    CLI::App* f = app.add_subcommand(
        "fit", "Maximum-likelihood fit of an angle CSV, written as JSON");
    f->add_option("input", fit_cfg.input, "CSV whose last column is an angle")
        ->required();
    f->add_option("--out", fit_cfg.out, "Output JSON path")
        ->capture_default_str();
    f->add_option("--level", fit_cfg.level,
                  "Confidence level in (0, 1) for the intervals")
        ->capture_default_str();
    f->add_option("--config", fit_json,
                  "JSON file whose keys (input, out, level) override the flags");
    f->callback([&] {
        const json j = load_config(fit_json);
        put(j, "input", fit_cfg.input);
        put(j, "out", fit_cfg.out);
        put(j, "level", fit_cfg.level);
        study::cmd_fit(fit_cfg);
    });

    study::MomentsConfig mom_cfg;
    std::string mom_json;
    CLI::App* m = app.add_subcommand(
        "moments", "Trigonometric moments of orders 1..n, written as CSV");
    m->add_option("--mu", mom_cfg.mu, "Location in radians")
        ->capture_default_str();
    m->add_option("--gamma", mom_cfg.gamma, "Concentration (> 0)")
        ->capture_default_str();
    m->add_option("--n", mom_cfg.max_order, "Highest moment order (1..8)")
        ->check(CLI::Range(1, 8))
        ->capture_default_str();
    m->add_option("--out", mom_cfg.out, "Output CSV path")
        ->capture_default_str();
    m->add_option("--config", mom_json,
                  "JSON file whose keys (mu, gamma, n, out) override the flags");
    m->callback([&] {
        const json j = load_config(mom_json);
        put(j, "mu", mom_cfg.mu);
        put(j, "gamma", mom_cfg.gamma);
        put(j, "n", mom_cfg.max_order);
        put(j, "out", mom_cfg.out);
        study::cmd_moments(mom_cfg);
    });

    study::CurvesConfig curves_cfg;
    std::string curves_json;
    CLI::App* c = app.add_subcommand(
        "curves",
        "Intrinsic/extrinsic variance of both families on a log grid of "
        "concentrations, written as CSV");
    c->add_option("--grid-min", curves_cfg.grid_min, "Lowest concentration")
        ->capture_default_str();
    c->add_option("--grid-max", curves_cfg.grid_max, "Highest concentration")
        ->capture_default_str();
    c->add_option("--grid-points", curves_cfg.grid_points,
                  "Number of grid points (>= 2)")
        ->capture_default_str();
    c->add_option("--out", curves_cfg.out, "Output CSV path")
        ->capture_default_str();
    c->add_option("--config", curves_json,
                  "JSON file whose keys (grid_min, grid_max, grid_points, out) "
                  "override the flags");
    c->callback([&] {
        const json j = load_config(curves_json);
        put(j, "grid_min", curves_cfg.grid_min);
        put(j, "grid_max", curves_cfg.grid_max);
        put(j, "grid_points", curves_cfg.grid_points);
        put(j, "out", curves_cfg.out);
        study::cmd_curves(curves_cfg);
    });

    study::MseConfig mse_cfg;
    std::string mse_json;
    double mse_mu = 3.0 * geonorm::pi / 4.0;
    double mse_gamma = 1.0;
    std::size_t mse_n = 0;
    CLI::App* e = app.add_subcommand(
        "mse-study",
        "Mean squared error of both estimates over replicated fits, one CSV "
        "row per (parameter pair, sample size)");
    CLI::Option* opt_mu =
        e->add_option("--mu", mse_mu,
                      "Restrict the study to a single generating location");
    CLI::Option* opt_gamma = e->add_option(
        "--gamma", mse_gamma,
        "Restrict the study to a single generating concentration");
    CLI::Option* opt_n = e->add_option(
        "--n", mse_n, "Restrict the study to a single sample size (>= 2)");
    e->add_option("--reps", mse_cfg.reps, "Replications per cell")
        ->capture_default_str();
    e->add_option("--seed", mse_cfg.seed, "Root RNG seed")
        ->capture_default_str();
    e->add_option("--threads", mse_cfg.threads,
                  "Worker threads per cell (same output for any value)")
        ->capture_default_str();
    e->add_option("--out", mse_cfg.out, "Output CSV path")
        ->capture_default_str();
    e->add_option("--config", mse_json,
                  "JSON file whose keys (pairs, sizes, reps, seed, threads, "
                  "out) override the flags");
    e->callback([&] {
        if (opt_mu->count() > 0 || opt_gamma->count() > 0) {
            mse_cfg.truth = {{mse_mu, mse_gamma}};
        }
        if (opt_n->count() > 0) {
            mse_cfg.sizes = {mse_n};
        }
        const json j = load_config(mse_json);
        if (const auto it = j.find("pairs"); it != j.end()) {
            mse_cfg.truth.clear();
            for (const auto& pr : *it) {
                mse_cfg.truth.emplace_back(pr.at(0).get<double>(),
                                           pr.at(1).get<double>());
            }
        }
        put(j, "sizes", mse_cfg.sizes);
        put(j, "reps", mse_cfg.reps);
        put(j, "seed", mse_cfg.seed);
        put(j, "threads", mse_cfg.threads);
        put(j, "out", mse_cfg.out);
        study::cmd_mse_study(mse_cfg);
    });

    study::CltConfig clt_cfg;
    std::string clt_json;
    CLI::App* t = app.add_subcommand(
        "clt-study",
        "Standardized location errors over replicated fits (CSV) with the "
        "asymptotic variance and a KS statistic (JSON sidecar)");
    t->add_option("--mu", clt_cfg.mu, "Generating location in radians")
        ->capture_default_str();
    t->add_option("--gamma", clt_cfg.gamma, "Generating concentration (> 0)")
        ->capture_default_str();
    t->add_option("--n", clt_cfg.n, "Sample size per replication")
        ->capture_default_str();
    t->add_option("--reps", clt_cfg.reps, "Number of replications")
        ->capture_default_str();
    t->add_option("--seed", clt_cfg.seed, "Root RNG seed")
        ->capture_default_str();
    t->add_option("--out", clt_cfg.out, "Output CSV path")
        ->capture_default_str();
    t->add_option("--sidecar", clt_cfg.sidecar, "Metadata JSON path")
        ->capture_default_str();
    t->add_option("--config", clt_json,
                  "JSON file whose keys (mu, gamma, n, reps, seed, out, "
                  "sidecar) override the flags");
    t->callback([&] {
        const json j = load_config(clt_json);
        put(j, "mu", clt_cfg.mu);
        put(j, "gamma", clt_cfg.gamma);
        put(j, "n", clt_cfg.n);
        put(j, "reps", clt_cfg.reps);
        put(j, "seed", clt_cfg.seed);
        put(j, "out", clt_cfg.out);
        put(j, "sidecar", clt_cfg.sidecar);
        study::cmd_clt_study(clt_cfg);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1; // usage problems are IO-class failures
    } catch (const geonorm::Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
