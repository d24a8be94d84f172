#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mcle/estimation.hpp"

namespace mcle {

inline constexpr std::size_t kFullLikelihoodCap = 4096;

struct MleResult {
    ModelSpec model;
    std::vector<ParamId> params;
    std::vector<double> theta_hat;
    std::optional<double> mu_hat;
    double loglik = 0.0;
    double runtime_seconds = 0.0;
    std::size_t n = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> diagnostics;
};

// Exact Gaussian log-density of the whole series through a Cholesky factor of
// the Toeplitz covariance. An estimated mean is profiled out in GLS form.
[[nodiscard]] double full_loglik(const ModelSpec& m, const SampleSeries& y, std::size_t cap = kFullLikelihoodCap);
[[nodiscard]] double full_gls_mean(const ModelSpec& m, const SampleSeries& y, std::size_t cap = kFullLikelihoodCap);

[[nodiscard]] MleResult fit_mle(const SampleSeries& y, Family family, const FitOptions& opt = {},
                                std::size_t cap = kFullLikelihoodCap);

}  // namespace mcle
