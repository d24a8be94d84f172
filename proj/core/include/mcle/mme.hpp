#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcle/acf.hpp"
#include "mcle/simulation.hpp"

namespace mcle {

struct MmeResult {
    Family family = Family::fou;
    double alpha_hat = 0.0;
    double hurst_hat = 0.5;  // alpha_hat + 1/2
    double nu_hat = 0.0;
    double kappa_hat = 0.0;  // fOU only
    double beta_hat = 0.0;   // Cauchy only
    double mu_hat = 0.0;
    std::vector<std::string> notes;

    // The matching ModelSpec (mean mode left as known).
    [[nodiscard]] ModelSpec model() const;
};

// Sum over 1-based i = eta*k+1 .. n of |(1 - L^eta)^k y_i|^p.
[[nodiscard]] double power_variation(std::span<const double> y, double p, int k, int eta, double delta = 1.0);

// Change-of-frequency roughness estimate log2(V(p,2,2) / V(p,2,1)) / p - 1/2.
[[nodiscard]] double cof_alpha(std::span<const double> y, double delta = 1.0, double p = 2.0);

// Moment estimators. A known mean replaces the sample average in the
// variance and autocorrelation moments.
[[nodiscard]] MmeResult mme_fou(const SampleSeries& y, std::optional<double> known_mu = std::nullopt);
[[nodiscard]] MmeResult mme_cauchy(const SampleSeries& y, std::optional<double> known_mu = std::nullopt,
                                   const std::vector<std::size_t>& lags = {1, 6, 12, 24, 60});
[[nodiscard]] MmeResult mme(const SampleSeries& y, Family f, std::optional<double> known_mu = std::nullopt);

// Sample autocorrelations about `center` at the given grid lags.
[[nodiscard]] std::vector<double> sample_acf(std::span<const double> y, double center,
                                             const std::vector<std::size_t>& lags);

// Least-squares match of Cauchy correlations at lags*delta to `target` for fixed
// alpha. Throws IdentificationError when the minimizer sits on the search box edge.
[[nodiscard]] double match_cauchy_beta(double alpha, std::span<const double> target,
                                       const std::vector<std::size_t>& lags, double delta);

}  // namespace mcle
