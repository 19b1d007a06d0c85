#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geonorm/geonorm.hpp"

namespace geonorm::study {

// File problems (unreadable, unwritable, malformed content).  Deliberately
// not a geonorm::Error so the CLI can map it to a different exit status.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---- command configurations -------------------------------------------

struct SampleConfig {
    double mu = 3.0 * pi / 4.0;
    double gamma = 1.0;
    std::size_t n = 100;
    std::uint64_t seed = 1;
    std::string out = "sample.csv";
};

struct FitConfig {
    std::string input;
    std::string out = "fit.json";
    double level = 0.95;
};

struct MomentsConfig {
    double mu = 3.0 * pi / 4.0;
    double gamma = 1.0;
    int max_order = 5; // orders 1..max_order, at most 8
    std::string out = "moments.csv";
};

struct CurvesConfig {
    double grid_min = 1e-4;
    double grid_max = 1e4;
    int grid_points = 50;
    std::string out = "curves.csv";
};

struct MseConfig {
    // (location, concentration) pairs of the generating distribution
    std::vector<std::pair<double, double>> truth = {
        {1.0 * pi / 4.0, 0.5},
        {3.0 * pi / 4.0, 1.0},
        {5.0 * pi / 4.0, 5.0},
        {7.0 * pi / 4.0, 10.0},
    };
    std::vector<std::size_t> sizes = {10, 20, 50, 100, 500};
    std::size_t reps = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = "mse_study.csv";
};

struct CltConfig {
    double mu = 3.0 * pi / 4.0;
    double gamma = 1.0;
    std::size_t n = 500;
    std::size_t reps = 2000;
    std::uint64_t seed = 1;
    std::string out = "clt_study.csv";
    std::string sidecar = "clt_study_meta.json";
};

// ---- study results (also consumed programmatically by the test suite) --

struct MseRow {
    double mu_star = 0.0;
    double gamma_star = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
    double mse_mu = 0.0;
    double mse_gamma = 0.0;
    std::size_t failures = 0; // non-identifiable replications, excluded
};

struct CltResult {
    std::vector<double> standardized; // sqrt(n) * signed location error
    double asymptotic_variance = 0.0; // 1 / J1(gamma*)
    double empirical_variance = 0.0;
    double ks = 0.0; // against the normal law with the asymptotic variance
};

// Row-streaming so partial tables survive an interrupted run; pass nullptr
// to just collect.
std::vector<MseRow> run_mse_study(const MseConfig& cfg,
                                  const std::function<void(const MseRow&)>& on_row);

CltResult run_clt_study(const CltConfig& cfg);

// ---- commands (each writes the files named in its config) --------------

void cmd_sample(const SampleConfig& cfg);
void cmd_fit(const FitConfig& cfg);
void cmd_moments(const MomentsConfig& cfg);
void cmd_curves(const CurvesConfig& cfg);
void cmd_mse_study(const MseConfig& cfg);
void cmd_clt_study(const CltConfig& cfg);

// ---- helpers shared with the tests --------------------------------------

// Angles from a CSV produced by cmd_sample (or any file whose last column
// is an angle in radians).  Throws IoError with file:line on bad content.
std::vector<Angle> read_angles_csv(const std::string& path);

// Two-sided Kolmogorov-Smirnov distance between the sample and a CDF.
double ks_statistic(std::vector<double> values,
                    const std::function<double(double)>& cdf);

// Shortest-round-trip-safe text form used in every CSV cell.
std::string fmt17(double v);

} // namespace geonorm::study
