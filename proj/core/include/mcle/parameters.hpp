#pragma once

#include <span>
#include <string>
#include <vector>

#include "mcle/acf.hpp"

namespace mcle {

enum class ParamId { kappa, beta, nu, alpha, mu };

[[nodiscard]] std::string to_string(ParamId p);
[[nodiscard]] ParamId parse_param(const std::string& name);

struct Bounds {
    double lo;
    double hi;
};

// Optimizer box. For the fOU, alpha bounds are hurst bounds shifted by 1/2.
[[nodiscard]] Bounds box_bounds(ParamId p);

// Shape, scale, roughness in reporting order: (kappa|beta, nu, alpha).
[[nodiscard]] std::vector<ParamId> covariance_params(Family f);
// covariance_params plus mu when the mean is estimated.
[[nodiscard]] std::vector<ParamId> free_params(Family f, MeanMode mode);

[[nodiscard]] double get_param(const ModelSpec& m, ParamId p);
void set_param(ModelSpec& m, ParamId p, double v);
[[nodiscard]] std::vector<double> get_params(const ModelSpec& m, std::span<const ParamId> ids);
void set_params(ModelSpec& m, std::span<const ParamId> ids, std::span<const double> values);

// Unconstrained coordinates: log for kappa, beta, nu (projected onto the box on
// the way back), scaled logit for alpha, identity for mu.
[[nodiscard]] double to_internal(ParamId p, double value);
[[nodiscard]] double from_internal(ParamId p, double u);

[[nodiscard]] bool near_bound(ParamId p, double value, double rel_tol = 1e-6);

// Moves every free parameter strictly inside its box; records what moved.
ModelSpec clamp_to_interior(ModelSpec m, std::span<const ParamId> ids, std::vector<std::string>* notes);

}  // namespace mcle
