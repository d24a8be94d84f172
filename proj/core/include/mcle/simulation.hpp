#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mcle/acf.hpp"

namespace mcle {

enum class Origin { simulated, empirical };

struct SampleSeries {
    std::vector<double> values;
    double delta = 1.0;
    Origin origin = Origin::simulated;
    std::string label;
    // Empty means every slot observed; otherwise 0 marks a gap whose value is ignored.
    std::vector<std::uint8_t> observed;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] bool has_gaps() const;
    [[nodiscard]] bool is_observed(std::size_t i) const { return observed.empty() || observed[i] != 0; }
    void validate() const;
};

struct SimPlan {
    ModelSpec model;
    std::size_t n = 2;
    double delta = 1.0;
    std::uint64_t seed = 0;
};

struct FouSimOptions {
    // Rescale fGn increments so one step has variance nu^2 (1 - e^{-2 kappa delta});
    // exact for H = 1/2. Off reproduces the plain discretized recursion.
    bool exact_ou_variance = false;
    // The recursion starts this many mean-reversion times 1/kappa before the
    // first kept point, capped at max_burn_in steps. An independent start is
    // not jointly Gaussian with fGn increments and inflates early variance.
    double burn_in_horizons = 10.0;
    std::size_t max_burn_in = std::size_t{1} << 22;
};

// Smallest power of two >= 2(n-1), the embedding size used when enough lags are supplied.
[[nodiscard]] std::size_t embedding_size(std::size_t n);

// One stationary Gaussian path with autocovariance acv. acv must hold at least n
// lags; with embedding_size(n)/2 + 1 lags the power-of-two embedding is used,
// otherwise the minimal 2(n-1) circulant.
[[nodiscard]] std::vector<double> circulant_embed(std::span<const double> acv, std::size_t n,
                                                  std::uint64_t seed);

// Autocovariance of fractional Gaussian noise at lag j on a grid of step delta.
[[nodiscard]] double fgn_acv(double hurst, std::size_t j, double delta);

[[nodiscard]] SampleSeries simulate_fgn(double hurst, std::size_t n, double delta, std::uint64_t seed);
[[nodiscard]] SampleSeries simulate_fou(const FouParams& p, std::size_t n, double delta, std::uint64_t seed,
                                        FouSimOptions opt = {});
[[nodiscard]] SampleSeries simulate_cauchy(const CauchyParams& p, std::size_t n, double delta,
                                           std::uint64_t seed);
[[nodiscard]] SampleSeries simulate(const SimPlan& plan, FouSimOptions opt = {});

// CSV with header index,time,value; optional leading comment lines.
void write_path_csv(const SampleSeries& s, std::ostream& out, const std::vector<std::string>& comments = {});
void write_path_csv(const SampleSeries& s, const std::string& path,
                    const std::vector<std::string>& comments = {});

namespace embedding_cache {
void clear();
[[nodiscard]] std::size_t size();
}  // namespace embedding_cache

}  // namespace mcle
