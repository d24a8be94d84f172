#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcle/acf.hpp"
#include "mcle/asymptotics.hpp"
#include "mcle/composite_likelihood.hpp"
#include "mcle/optimizer.hpp"
#include "mcle/parameters.hpp"
#include "mcle/simulation.hpp"
#include "mcle/tuples.hpp"

namespace mcle {

struct FitOptions {
    MeanMode mean_mode = MeanMode::known;
    double known_mu = 0.0;
    // Starting point; defaults to the moment estimator moved inside the box.
    std::optional<ModelSpec> init;
    // Parameters held at a value instead of estimated.
    std::vector<std::pair<ParamId, double>> fixed;
    optim::Options optimizer;
    bool standard_errors = false;
    SandwichOptions sandwich;
};

struct EstimationResult {
    ModelSpec model;                  // the estimate; model.mu() is the known or fitted mean
    std::vector<ParamId> params;      // covariance parameters in reporting order
    std::vector<double> theta_hat;
    std::optional<double> mu_hat;     // empty when the mean is known
    std::vector<ParamId> se_params;
    std::vector<double> std_errors;   // aligned with se_params; empty when not computed
    std::optional<SandwichReport> sandwich;
    double loglik = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    RegimeLabel regime;
    std::vector<double> init;         // covariance parameters at the start
    std::vector<double> score;        // gradient over free parameters at the estimate
    double runtime_seconds = 0.0;
    std::vector<std::string> diagnostics;

    [[nodiscard]] double estimate(ParamId p) const { return get_param(model, p); }
};

[[nodiscard]] EstimationResult fit_mcle(const SampleSeries& y, Family family, const TupleSet& q,
                                        const FitOptions& opt = {});

namespace detail {

// Shared driver for the composite and full likelihood fits. `objective`
// returns the log-likelihood at a model (profiling the mean itself when the
// mode is estimated) and `profiled_mean` reports that mean.
struct Objective {
    std::function<double(const ModelSpec&)> loglik;
    std::function<double(const ModelSpec&)> profiled_mean;
};

[[nodiscard]] EstimationResult maximize(const SampleSeries& y, Family family, const FitOptions& opt,
                                        const Objective& objective);

}  // namespace detail

}  // namespace mcle
