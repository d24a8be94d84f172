#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcle/acf.hpp"

namespace mcle {

// Index offsets (0, k_2, ..., k_q) whose joint densities enter the composite likelihood.
using Tuple = std::vector<std::size_t>;

struct TupleSet {
    std::vector<Tuple> tuples;

    [[nodiscard]] std::size_t size() const { return tuples.size(); }
    [[nodiscard]] std::size_t q_max() const;
    [[nodiscard]] std::size_t max_index() const;
    void validate() const;
    void validate_for(std::size_t n) const;
};

[[nodiscard]] std::string to_string(const Tuple& t);

inline const std::vector<std::size_t> kDefaultStrides = {1, 6, 12, 24, 60};

// (0, l) for q = 2 and (0, l, 2l) for q = 3, one tuple per stride.
[[nodiscard]] TupleSet build_default_tuples(int q, const std::vector<std::size_t>& strides = kDefaultStrides);
// The single tuple (0, 1, ..., n-1): the composite likelihood becomes the full likelihood.
[[nodiscard]] TupleSet full_tuple(std::size_t n);

[[nodiscard]] Eigen::MatrixXd tuple_covariance(const ModelSpec& m, const Tuple& t, double delta);

}  // namespace mcle
