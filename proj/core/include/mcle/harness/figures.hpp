#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcle/acf.hpp"
#include "mcle/estimation.hpp"
#include "mcle/simulation.hpp"
#include "mcle/tuples.hpp"

namespace mcle::harness {

// CL versus full-likelihood fits over a grid of horizons.
struct CompareConfig {
    ModelSpec truth;
    std::vector<int> big_t = {10, 25, 50, 100, 150, 200, 250};
    int n_per_day = 12;
    int replications = 20;
    int q = 3;
    std::vector<std::size_t> strides = {1, 6, 12, 24, 60};
    MeanMode mean_mode = MeanMode::known;
    std::uint64_t seed = 20240101;
    std::size_t cap = 4096;
};

struct CompareRow {
    int big_t = 0;
    std::size_t n = 0;
    double cl_seconds = 0.0;  // mean fit time
    double ml_seconds = 0.0;
    double runtime_ratio = 0.0;  // CL over ML
    double cl_hurst_rmse = 0.0;
    double ml_hurst_rmse = 0.0;
    double rmse_ratio = 0.0;
    int failures = 0;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    std::vector<std::string> notes;
};

[[nodiscard]] CompareReport compare_mle(const CompareConfig& cfg);
void write_compare_csv(const CompareReport& r, std::ostream& out);

// Single-evaluation timing of the two objectives.
struct ScalingRow {
    std::size_t n = 0;
    double cl_seconds = 0.0;
    double ml_seconds = 0.0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    double cl_exponent = 0.0;  // least-squares slope of log time on log n
    double ml_exponent = 0.0;
};

// Times cl_eval (moments included) and full_loglik at each n, taking the best
// of `repeats` runs after one untimed warm-up evaluation.
[[nodiscard]] ScalingReport scaling_table(const ModelSpec& m, const std::vector<std::size_t>& ns, const TupleSet& q,
                                          int repeats = 3, std::uint64_t seed = 7);
[[nodiscard]] double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct HeatmapSpec {
    double shape_lo = 0.0;  // defaults: kappa in [1e-4, 1], beta in [0.05, 3]
    double shape_hi = 0.0;
    std::size_t shape_points = 40;
    double alpha_lo = -0.45;
    double alpha_hi = 0.45;
    std::size_t alpha_points = 37;
    std::size_t max_cells = 250000;
    bool mark_mcle = true;
};

struct HeatmapResult {
    Family family = Family::fou;
    ParamId shape = ParamId::kappa;
    double mu = 0.0;  // sample average
    double nu = 0.0;  // sample standard deviation
    std::vector<double> shape_values;
    std::vector<double> alpha_values;
    std::vector<std::vector<double>> cl;  // [shape][alpha]
    std::size_t arg_shape = 0;
    std::size_t arg_alpha = 0;
    std::optional<std::pair<std::size_t, std::size_t>> mcle_cell;
    std::optional<EstimationResult> mcle;
};

// Composite likelihood over a log-spaced shape grid crossed with a linear
// alpha grid, with the mean and scale fixed at their sample values.
[[nodiscard]] HeatmapResult heatmap(const SampleSeries& y, Family family, const TupleSet& q, HeatmapSpec spec);
void write_heatmap_csv(const HeatmapResult& h, std::ostream& out);

struct ProfileSpec {
    std::vector<double> shape_values;  // empty: 25 log-spaced points over the heatmap default range
    MeanMode mean_mode = MeanMode::estimated;
    double known_mu = 0.0;
};

struct ProfileRow {
    double shape = 0.0;
    double cl = 0.0;
    double alpha = 0.0;  // maximizing alpha
    double nu = 0.0;
    double normalized = 0.0;  // 1 at the best point
    bool flagged = false;
    std::string note;
};

struct ProfileResult {
    Family family = Family::fou;
    ParamId shape = ParamId::kappa;
    std::vector<ProfileRow> rows;
};

// For each shape value the remaining parameters are maximized with the shape
// held fixed; normalized = 1 - (best - cl) / |best|.
[[nodiscard]] ProfileResult profile(const SampleSeries& y, Family family, const TupleSet& q, const ProfileSpec& spec);
void write_profile_csv(const ProfileResult& p, std::ostream& out);

[[nodiscard]] std::vector<double> log_space(double lo, double hi, std::size_t count);
[[nodiscard]] std::vector<double> lin_space(double lo, double hi, std::size_t count);
[[nodiscard]] std::pair<double, double> default_shape_range(Family f);

}  // namespace mcle::harness
