#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "mcle/composite_likelihood.hpp"
#include "mcle/errors.hpp"
#include "mcle/full_likelihood.hpp"
#include "mcle/rng.hpp"
#include "mcle/simulation.hpp"

using namespace mcle;

namespace {

ModelSpec fou_model(double kappa, double nu, double hurst, double mu = 0.0) {
    ModelSpec m;
    m.params = FouParams{mu, kappa, nu, hurst};
    return m;
}

double log_phi(double x, double s) { return -0.5 * std::log(2 * std::numbers::pi * s * s) - 0.5 * x * x / (s * s); }

}  // namespace

TEST(FullLikelihood, SinglePoint) {
    SampleSeries y;
    y.values = {0.0};
    EXPECT_NEAR(full_loglik(fou_model(0.1, 1.0, 0.3), y), -0.5 * std::log(2 * std::numbers::pi), 1e-14);
}

TEST(FullLikelihood, IndependentLimit) {
    const auto m = fou_model(1e6, 1.3, 0.5, 0.2);
    SampleSeries y;
    y.values = {0.5, -1.0, 2.0};
    const double want = log_phi(0.3, 1.3) + log_phi(-1.2, 1.3) + log_phi(1.8, 1.3);
    EXPECT_NEAR(full_loglik(m, y), want, 1e-10);
}

TEST(FullLikelihood, EqualsFullTupleComposite) {
    const auto m = fou_model(0.01, 0.75, 0.1);
    const auto y = simulate(SimPlan{m, 128, 1.0 / 12, 5});
    EXPECT_NEAR(full_loglik(m, y), cl_eval(m, y, full_tuple(128)), 1e-8);
}

TEST(FullLikelihood, EstimatedMeanIsGls) {
    auto m = fou_model(0.05, 0.8, 0.3, 0.0);
    m.mean_mode = MeanMode::estimated;
    const auto y = simulate(SimPlan{m, 200, 1.0 / 12, 6});
    const double mu = full_gls_mean(m, y);
    auto at = m;
    at.mean_mode = MeanMode::known;
    at.set_mu(mu);
    EXPECT_NEAR(full_loglik(m, y), full_loglik(at, y), 1e-9);
    at.set_mu(mu + 0.01);
    EXPECT_LT(full_loglik(at, y), full_loglik(m, y));
}

TEST(FullLikelihood, CapRefused) {
    SampleSeries y;
    y.values.assign(5000, 0.0);
    EXPECT_THROW((void)full_loglik(fou_model(0.1, 1, 0.3), y), BudgetError);
}

TEST(FullLikelihood, CubicCost) {
    const auto m = fou_model(0.01, 0.75, 0.1);
    auto time_at = [&](std::size_t n) {
        const auto y = simulate(SimPlan{m, n, 1.0 / 12, n});
        (void)full_loglik(m, y);  // warms the autocovariance cache
        double best = 1e9;
        for (int r = 0; r < 3; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            (void)full_loglik(m, y);
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return best;
    };
    EXPECT_GE(time_at(2048) / time_at(512), 8.0);
}

TEST(FitMle, RecoversRoughness) {
    const auto m = fou_model(0.01, 0.75, 0.1);
    int hits = 0;
    const int reps = 10;
    for (int r = 0; r < reps; ++r) {
        const auto y = simulate(SimPlan{m, 1200, 1.0 / 12, rng::derive_seed(31, r)});
        const auto fit = fit_mle(y, Family::fou);
        EXPECT_TRUE(fit.converged);
        if (std::abs(get_param(fit.model, ParamId::alpha) + 0.4) <= 0.02) ++hits;
    }
    EXPECT_GE(hits, 9);
}

TEST(FitMle, ScaleEquivariance) {
    const auto m = fou_model(0.05, 0.6, 0.3);
    auto y = simulate(SimPlan{m, 600, 1.0 / 12, 2});
    const auto a = fit_mle(y, Family::fou);
    for (auto& v : y.values) v *= 3.0;
    const auto b = fit_mle(y, Family::fou);
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_NEAR(get_param(b.model, ParamId::nu), 3.0 * get_param(a.model, ParamId::nu), 1e-6 * get_param(b.model, ParamId::nu));
    EXPECT_NEAR(get_param(b.model, ParamId::alpha), get_param(a.model, ParamId::alpha), 1e-6);
    EXPECT_NEAR(std::log(get_param(b.model, ParamId::kappa)), std::log(get_param(a.model, ParamId::kappa)), 1e-6);
}
