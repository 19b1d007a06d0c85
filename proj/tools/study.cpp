#include "study.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace geonorm::study {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: LF line endings only
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
    finish_out(out, path);
}

} // namespace

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double ks_statistic(std::vector<double> values,
                    const std::function<double(double)>& cdf) {
    if (values.empty()) {
        throw EmptySample("KS statistic needs at least one value");
    }
    std::sort(values.begin(), values.end());
    const double m = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i]);
        d = std::max(d, f - static_cast<double>(i) / m);
        d = std::max(d, static_cast<double>(i + 1) / m - f);
    }
    return d;
}

std::vector<Angle> read_angles_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::vector<Angle> angles;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const bool has_alpha =
            std::any_of(line.begin(), line.end(), [](unsigned char c) {
                return std::isalpha(c) != 0;
            });
        if (has_alpha) {
            if (lineno == 1) {
                continue; // header row
            }
            throw IoError(path + ":" + std::to_string(lineno) +
                          ": expected a numeric angle, got '" + line + "'");
        }
        const std::size_t comma = line.rfind(',');
        const std::string field =
            comma == std::string::npos ? line : line.substr(comma + 1);
        double theta = 0.0;
        const char* first = field.data();
        const char* last = field.data() + field.size();
        const auto [ptr, ec] = std::from_chars(first, last, theta);
        if (ec != std::errc{} || ptr != last || !std::isfinite(theta)) {
            throw IoError(path + ":" + std::to_string(lineno) +
                          ": cannot parse angle from '" + field + "'");
        }
        angles.push_back(Angle(theta));
    }
    return angles;
}

void cmd_sample(const SampleConfig& cfg) {
    const GnParams params(Angle(cfg.mu), cfg.gamma);
    RngStream rng(cfg.seed);
    const std::vector<Angle> draws = sample(cfg.n, params, rng);

    std::ofstream out = open_out(cfg.out);
    out << "index,theta\n";
    for (std::size_t i = 0; i < draws.size(); ++i) {
        out << i << ',' << fmt17(draws[i].radians()) << '\n';
    }
    finish_out(out, cfg.out);
}

void cmd_fit(const FitConfig& cfg) {
    const std::vector<Angle> angles = read_angles_csv(cfg.input);
    const MleFit fit = fit_gn_mle(angles);
    const ConfidenceIntervals ci = asymptotic_ci(fit, cfg.level);

    json j;
    j["n"] = fit.n;
    j["mu_hat"] = fit.mu_hat.radians();
    j["gamma_hat"] = fit.gamma_hat;
    j["log_likelihood"] = fit.log_likelihood;
    j["se_mu"] = fit.se_mu;
    j["se_gamma"] = fit.se_gamma;
    j["mean_set_multiplicity"] = fit.mean_set_multiplicity;
    j["near_identifiability_boundary"] = fit.near_identifiability_boundary;
    j["level"] = ci.level;
    j["ci_mu_lower"] = ci.mu_lower.radians();
    j["ci_mu_upper"] = ci.mu_upper.radians();
    j["ci_gamma_lower"] = ci.gamma_lower;
    j["ci_gamma_upper"] = ci.gamma_upper;
    // reference fit for comparison; undefined for some inputs (for example a
    // balanced sample has no mean direction), which is not a fit failure
    try {
        const VmParams vm = vm_fit_moments(angles);
        j["vm_mu_hat"] = vm.mu.radians();
        j["vm_kappa_hat"] = vm.kappa;
    } catch (const Error& e) {
        j["vm_error"] = e.what();
    }
    write_json(j, cfg.out);
}

void cmd_moments(const MomentsConfig& cfg) {
    if (cfg.max_order < 1 || cfg.max_order > 8) {
        throw DomainError("moment order must lie in 1..8");
    }
    const GnParams params(Angle(cfg.mu), cfg.gamma);

    std::ofstream out = open_out(cfg.out);
    out << "p,re,im,resultant_length,direction\n";
    for (int p = 1; p <= cfg.max_order; ++p) {
        const TrigMoment m = trig_moment(p, params);
        out << p << ',' << fmt17(m.re) << ',' << fmt17(m.im) << ','
            << fmt17(m.resultant_length) << ',' << fmt17(m.direction.radians())
            << '\n';
    }
    finish_out(out, cfg.out);
}

void cmd_curves(const CurvesConfig& cfg) {
    if (!(cfg.grid_min > 0.0) || !(cfg.grid_max > cfg.grid_min) ||
        cfg.grid_points < 2) {
        throw DomainError(
            "curves grid needs 0 < grid-min < grid-max and at least 2 points");
    }
    const double lo = std::log(cfg.grid_min);
    const double hi = std::log(cfg.grid_max);

    std::ofstream out = open_out(cfg.out);
    out << "concentration,gn_var_I,gn_var_E,vm_var_I,vm_var_E\n";
    for (int i = 0; i < cfg.grid_points; ++i) {
        const double c =
            std::exp(lo + (hi - lo) * i / static_cast<double>(cfg.grid_points - 1));
        const GnParams gn(Angle(0.0), c);
        out << fmt17(c) << ',' << fmt17(intrinsic_variance(c)) << ','
            << fmt17(extrinsic_variance(gn)) << ','
            << fmt17(vm_intrinsic_variance(c)) << ','
            << fmt17(vm_extrinsic_variance(c)) << '\n';
    }
    finish_out(out, cfg.out);
}

namespace {

struct RepOutcome {
    double sq_err_mu = 0.0;
    double sq_err_gamma = 0.0;
    bool failed = false;
};

// One recorded replication: simulate, fit, score.  Streams are derived
// purely from (root seed, cell, replication), so scheduling cannot change
// any result.
RepOutcome run_replication(const GnParams& truth, std::size_t n, RngStream rng) {
    RepOutcome r;
    const std::vector<Angle> draws = sample(n, truth, rng);
    try {
        const MleFit fit = fit_gn_mle(draws);
        const double dmu = geodesic_distance(fit.mu_hat, truth.mu);
        r.sq_err_mu = dmu * dmu;
        const double dg = fit.gamma_hat - truth.gamma;
        r.sq_err_gamma = dg * dg;
    } catch (const GammaNotIdentifiable&) {
        r.failed = true;
    }
    return r;
}

// Replication j of the cell starting at child index `base` uses the root's
// child(base + j): one flat index space, so no two cells can share a stream.
void run_reps_parallel(const GnParams& truth, std::size_t n, std::size_t reps,
                       unsigned threads, const RngStream& root,
                       std::uint64_t base, std::vector<RepOutcome>& slots) {
    slots.assign(reps, RepOutcome{});
    const unsigned t = std::max(1u, threads);
    if (t == 1 || reps < 2) {
        for (std::size_t j = 0; j < reps; ++j) {
            slots[j] = run_replication(truth, n, root.child(base + j));
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t j = w; j < reps; j += t) {
                slots[j] = run_replication(truth, n, root.child(base + j));
            }
        });
    }
    for (std::thread& th : pool) {
        th.join();
    }
}

} // namespace

std::vector<MseRow> run_mse_study(
    const MseConfig& cfg, const std::function<void(const MseRow&)>& on_row) {
    if (cfg.reps < 1) {
        throw DomainError("replication count must be at least 1");
    }
    if (cfg.truth.empty() || cfg.sizes.empty()) {
        throw DomainError("study grid must name at least one parameter pair "
                          "and one sample size");
    }
    for (const std::size_t n : cfg.sizes) {
        if (n < 2) {
            throw DomainError("sample sizes below 2 cannot be fitted");
        }
    }

    const RngStream root(cfg.seed);
    std::vector<MseRow> rows;
    std::vector<RepOutcome> slots;
    for (std::size_t pi = 0; pi < cfg.truth.size(); ++pi) {
        const GnParams truth(Angle(cfg.truth[pi].first), cfg.truth[pi].second);
        for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
            const std::size_t n = cfg.sizes[si];
            const std::uint64_t cell = pi * cfg.sizes.size() + si;
            run_reps_parallel(truth, n, cfg.reps, cfg.threads, root,
                              cell * cfg.reps, slots);

            MseRow row;
            row.mu_star = cfg.truth[pi].first;
            row.gamma_star = cfg.truth[pi].second;
            row.n = n;
            row.m = cfg.reps;
            double sum_mu = 0.0;
            double sum_gamma = 0.0;
            std::size_t kept = 0;
            for (const RepOutcome& r : slots) { // deterministic fold order
                if (r.failed) {
                    ++row.failures;
                    continue;
                }
                sum_mu += r.sq_err_mu;
                sum_gamma += r.sq_err_gamma;
                ++kept;
            }
            if (kept > 0) {
                row.mse_mu = sum_mu / static_cast<double>(kept);
                row.mse_gamma = sum_gamma / static_cast<double>(kept);
            }
            rows.push_back(row);
            if (on_row) {
                on_row(row);
            }
        }
    }
    return rows;
}

void cmd_mse_study(const MseConfig& cfg) {
    std::ofstream out = open_out(cfg.out);
    out << "mu_star,gamma_star,n,m,mse_mu,mse_gamma,failures\n";
    out.flush();
    run_mse_study(cfg, [&](const MseRow& r) {
        out << fmt17(r.mu_star) << ',' << fmt17(r.gamma_star) << ',' << r.n
            << ',' << r.m << ',' << fmt17(r.mse_mu) << ',' << fmt17(r.mse_gamma)
            << ',' << r.failures << '\n';
        out.flush(); // partial table survives an interrupted run
    });
    finish_out(out, cfg.out);
}

CltResult run_clt_study(const CltConfig& cfg) {
    if (cfg.reps < 2) {
        throw DomainError("the standardized-error study needs at least 2 "
                          "replications");
    }
    const GnParams truth(Angle(cfg.mu), cfg.gamma);
    const RngStream root(cfg.seed);
    const double sqrt_n = std::sqrt(static_cast<double>(cfg.n));

    CltResult res;
    res.standardized.resize(cfg.reps);
    for (std::size_t j = 0; j < cfg.reps; ++j) {
        RngStream rng = root.child(j);
        const std::vector<Angle> draws = sample(cfg.n, truth, rng);
        const MleFit fit = fit_gn_mle(draws);
        res.standardized[j] = sqrt_n * signed_displacement(truth.mu, fit.mu_hat);
    }

    const FisherInfo info = fisher_info(cfg.gamma);
    res.asymptotic_variance = 1.0 / info.j1;

    double sum = 0.0;
    for (const double e : res.standardized) {
        sum += e;
    }
    const double mean = sum / static_cast<double>(cfg.reps);
    double ss = 0.0;
    for (const double e : res.standardized) {
        ss += (e - mean) * (e - mean);
    }
    res.empirical_variance = ss / static_cast<double>(cfg.reps);

    const double scale = std::sqrt(info.j1);
    res.ks = ks_statistic(res.standardized, [scale](double x) {
        return special::norm_cdf(x * scale);
    });
    return res;
}

void cmd_clt_study(const CltConfig& cfg) {
    const CltResult res = run_clt_study(cfg);

    std::ofstream out = open_out(cfg.out);
    out << "replication,sqrt_n_error\n";
    for (std::size_t j = 0; j < res.standardized.size(); ++j) {
        out << j << ',' << fmt17(res.standardized[j]) << '\n';
    }
    finish_out(out, cfg.out);

    json meta;
    meta["mu_star"] = cfg.mu;
    meta["gamma_star"] = cfg.gamma;
    meta["n"] = cfg.n;
    meta["reps"] = cfg.reps;
    meta["seed"] = cfg.seed;
    meta["asymptotic_variance"] = res.asymptotic_variance;
    meta["empirical_variance"] = res.empirical_variance;
    meta["ks_statistic"] = res.ks;
    write_json(meta, cfg.sidecar);
}

} // namespace geonorm::study
