#include "mcle/harness/panels.hpp"

#include <cctype>

#include "mcle/errors.hpp"

namespace mcle::harness {

ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::config;
    if (dynamic_cast<const DataError*>(&e)) return ExitCode::data;
    if (dynamic_cast<const BudgetError*>(&e)) return ExitCode::budget;
    if (dynamic_cast<const EvaluationError*>(&e) || dynamic_cast<const IdentificationError*>(&e))
        return ExitCode::convergence;
    return ExitCode::other;
}

std::vector<char> panel_letters() { return {'A', 'B', 'C', 'D', 'E'}; }

ModelSpec panel_model(Family f, char panel, double mu) {
    struct Row {
        double shape, nu, alpha;
    };
    static const Row fou[] = {{0.005, 1.25, -0.45}, {0.01, 0.75, -0.40}, {0.015, 0.5, -0.2}, {0.035, 0.3, 0.0},
                              {0.07, 0.2, 0.2}};
    static const Row cauchy[] = {{0.25, 1.25, -0.45}, {0.5, 0.75, -0.4}, {0.75, 0.5, -0.2}, {1.0, 0.3, 0.0},
                                 {1.25, 0.2, 0.2}};
    const int idx = std::toupper(static_cast<unsigned char>(panel)) - 'A';
    if (idx < 0 || idx > 4) throw ConfigError(std::string("unknown panel '") + panel + "' (expected A-E)");
    ModelSpec m;
    if (f == Family::fou) {
        const auto& r = fou[idx];
        m.params = FouParams{mu, r.shape, r.nu, r.alpha + 0.5};
    } else {
        const auto& r = cauchy[idx];
        m.params = CauchyParams{mu, r.shape, r.nu, r.alpha};
    }
    return m;
}

}  // namespace mcle::harness
