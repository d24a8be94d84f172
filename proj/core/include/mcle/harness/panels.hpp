#pragma once

#include <exception>
#include <string>
#include <vector>

#include "mcle/acf.hpp"

namespace mcle::harness {

enum class ExitCode : int { ok = 0, other = 1, config = 2, data = 3, convergence = 4, budget = 5 };

[[nodiscard]] ExitCode exit_code_for(const std::exception& e);

// Monte Carlo designs A-E. fOU panels fix (kappa, nu, alpha), Cauchy panels (beta, nu, alpha).
[[nodiscard]] ModelSpec panel_model(Family f, char panel, double mu = 0.0);
[[nodiscard]] std::vector<char> panel_letters();

inline const std::vector<int> kStudyHorizons = {1095, 1825, 2555};
inline constexpr int kStudyPerDay = 12;

}  // namespace mcle::harness
