#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mcle::optim {

// Minimized. Exceptions thrown by the objective count as +infinity.
using Objective = std::function<double(const std::vector<double>&)>;

struct Options {
    int max_iterations = 500;           // quasi-Newton iterations
    int simplex_iterations = 150;       // Nelder-Mead warm-up
    double simplex_scale = 0.3;         // initial simplex edge in unconstrained units
    double simplex_tolerance = 1e-4;    // warm-up stops below this simplex diameter
    double step_tolerance = 1e-8;
    double gradient_tolerance = 1e-4;   // on ||g||_inf / (1 + |f|)
    double fd_relative_step = 1e-5;
};

struct Result {
    std::vector<double> x;
    double value = 0.0;
    std::vector<double> gradient;
    int iterations = 0;
    int evaluations = 0;
    double last_step = 0.0;
    bool converged = false;
    std::string message;
};

[[nodiscard]] std::vector<double> central_gradient(const Objective& f, const std::vector<double>& x,
                                                   double rel_step, int* evaluations = nullptr);

[[nodiscard]] Result nelder_mead(const Objective& f, std::vector<double> x0, const Options& opt = {});

// Nelder-Mead warm start followed by BFGS with Armijo backtracking.
[[nodiscard]] Result minimize(const Objective& f, std::vector<double> x0, const Options& opt = {});

}  // namespace mcle::optim
