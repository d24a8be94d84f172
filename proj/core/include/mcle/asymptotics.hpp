#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcle/acf.hpp"
#include "mcle/parameters.hpp"
#include "mcle/tuples.hpp"

namespace mcle {

struct SandwichOptions {
    std::size_t lag_truncation = 10000;
    // Produce plug-in numbers outside the Gaussian-limit regime, tagged as nominal.
    bool nominal = false;
    // Parameters to differentiate; empty means free_params(family, mean_mode).
    std::vector<ParamId> params;
    double tail_tolerance = 0.01;
    // fit_mcle retries with ten times the truncation up to this limit when the
    // tail rule fails.
    std::size_t max_lag_truncation = 1000000;
};

struct SandwichReport {
    std::vector<ParamId> params;
    Eigen::MatrixXd H_matrix;
    Eigen::MatrixXd V_matrix;
    Eigen::MatrixXd G_inverse;
    std::vector<double> std_errors;  // empty when the regime has no root-n Gaussian limit
    std::size_t lag_truncation = 0;
    double tail_estimate = 0.0;      // extrapolated Frobenius norm of the omitted lag tail
    RegimeLabel regime;
    bool nominal = false;
    bool h_indefinite = false;
    std::string rate;                // convergence-rate label
    std::vector<std::string> notes;
};

[[nodiscard]] std::vector<ParamId> resolve_params(const ModelSpec& m, const std::vector<ParamId>& requested);

// Expected negative Hessian of one observation's composite log-likelihood.
[[nodiscard]] Eigen::MatrixXd sensitivity_H(const ModelSpec& m, const TupleSet& q, double delta,
                                            const std::vector<ParamId>& params = {});

// Long-run variance of the per-observation score, lags truncated at L.
// tail_estimate (optional) receives the extrapolated norm of the omitted tail.
[[nodiscard]] Eigen::MatrixXd variability_V(const ModelSpec& m, const TupleSet& q, double delta,
                                            const SandwichOptions& opt = {}, double* tail_estimate = nullptr);

[[nodiscard]] SandwichReport sandwich(const ModelSpec& m, const TupleSet& q, double delta, std::size_t n,
                                      const SandwichOptions& opt = {});

}  // namespace mcle
