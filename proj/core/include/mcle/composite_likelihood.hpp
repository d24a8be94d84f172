#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mcle/acf.hpp"
#include "mcle/simulation.hpp"
#include "mcle/tuples.hpp"

namespace mcle {

// Per-tuple sufficient statistics of a series, centered at the sample mean.
// The Gaussian composite likelihood depends on the data only through these,
// so an optimizer can compute them once and evaluate in O(K q^3) per point.
struct TupleMoments {
    struct Block {
        Tuple tuple;
        std::size_t windows = 0;     // usable start indices i (all points observed)
        Eigen::MatrixXd cross;       // sum of z z^T with z = y_i^k - center
        Eigen::VectorXd sum;         // sum of z
        std::vector<std::size_t> lag_slot;  // (a,b) -> index into lags, row-major
    };

    double center = 0.0;
    double delta = 1.0;
    std::size_t n = 0;
    std::vector<Block> blocks;
    std::vector<std::size_t> lags;  // distinct within-tuple lag differences, sorted

    [[nodiscard]] static TupleMoments compute(const SampleSeries& y, const TupleSet& q);
    // Sum over tuples of q_j times its window count.
    [[nodiscard]] double total_terms() const;
};

// Per-tuple covariance factorization at one parameter point.
struct TupleFactor {
    Eigen::MatrixXd inverse;
    Eigen::VectorXd inverse_ones;  // Sigma^{-1} 1
    double ones_inverse_ones = 0.0;
    double logdet = 0.0;
};

[[nodiscard]] std::vector<TupleFactor> factor_tuples(const ModelSpec& m, const TupleMoments& mom);

// Composite log-likelihood. With an estimated mean the location is profiled
// out by gls_mean first; otherwise params.mu is used.
[[nodiscard]] double cl_eval(const ModelSpec& m, const SampleSeries& y, const TupleSet& q);
[[nodiscard]] double cl_eval(const ModelSpec& m, const TupleMoments& mom);
// Evaluates at params.mu whatever the mean mode.
[[nodiscard]] double cl_eval_at_mean(const ModelSpec& m, const TupleMoments& mom);

[[nodiscard]] double gls_mean(const ModelSpec& m, const SampleSeries& y, const TupleSet& q);
[[nodiscard]] double gls_mean(const ModelSpec& m, const TupleMoments& mom);

// Central-difference gradient over free_params(family, mean_mode), in natural
// coordinates, at the location params.mu.
[[nodiscard]] std::vector<double> cl_score(const ModelSpec& m, const SampleSeries& y, const TupleSet& q);
[[nodiscard]] std::vector<double> cl_score(const ModelSpec& m, const TupleMoments& mom);

}  // namespace mcle
