#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcle/acf.hpp"
#include "mcle/estimation.hpp"
#include "mcle/parameters.hpp"
#include "mcle/simulation.hpp"

namespace mcle::harness {

struct StudyConfig {
    ModelSpec truth;
    std::string panel = "custom";
    std::vector<int> big_t = {1095, 1825, 2555};
    int n_per_day = 12;
    int replications = 200;
    int q = 3;
    std::vector<std::size_t> strides = {1, 6, 12, 24, 60};
    MeanMode mean_mode = MeanMode::known;  // known value is truth.mu()
    std::uint64_t seed = 20240101;
    int workers = 1;
    bool standard_errors = false;
    std::size_t lag_truncation = 10000;
    bool run_mme = true;
    double max_failure_fraction = 0.05;
    FouSimOptions sim;

    void validate() const;
};

struct ParamSummary {
    ParamId id = ParamId::nu;
    double truth = 0.0;
    double mean_bias = 0.0;
    double std = 0.0;
    double rmse = 0.0;
    std::size_t count = 0;
};

struct StudyCell {
    int big_t = 0;
    std::size_t n = 0;
    int attempted = 0;
    int mcle_failures = 0;
    int mme_failures = 0;
    std::vector<ParamId> params;
    std::vector<ParamSummary> mcle;
    std::vector<ParamSummary> mme;
    std::vector<double> rmse_ratio;          // MCLE over MME per parameter
    std::vector<double> mean_std_error;      // mean sandwich SE per parameter (if computed)
    std::vector<std::vector<double>> mcle_draws;  // per successful replication
    std::vector<std::vector<double>> mme_draws;
    std::vector<std::vector<double>> se_draws;
    double seconds = 0.0;
    std::vector<std::string> warnings;
};

struct StudyReport {
    StudyConfig config;
    std::vector<StudyCell> cells;
};

using Logger = std::function<void(const std::string&)>;

// Seeds are derived per (root, family, panel, T, replication) so the output
// does not depend on the worker count.
[[nodiscard]] StudyReport run_study(const StudyConfig& cfg, const Logger& log = {});

[[nodiscard]] std::vector<ParamSummary> summarize(const std::vector<ParamId>& ids, const std::vector<double>& truth,
                                                  const std::vector<std::vector<double>>& draws);

void write_study_table(const StudyReport& r, std::ostream& out);
void write_study_csv(const StudyReport& r, std::ostream& out);

}  // namespace mcle::harness
