#include <gtest/gtest.h>

#include <cmath>

#include "mcle/errors.hpp"
#include "mcle/estimation.hpp"
#include "mcle/optimizer.hpp"
#include "mcle/parameters.hpp"
#include "mcle/rng.hpp"
#include "mcle/simulation.hpp"

using namespace mcle;

namespace {

ModelSpec fou_model(double kappa, double nu, double hurst, double mu = 0.0) {
    ModelSpec m;
    m.params = FouParams{mu, kappa, nu, hurst};
    return m;
}

ModelSpec cauchy_model(double beta, double nu, double alpha, double mu = 0.0) {
    ModelSpec m;
    m.params = CauchyParams{mu, beta, nu, alpha};
    return m;
}

}  // namespace

TEST(Optimizer, Rosenbrock) {
    const optim::Objective f = [](const std::vector<double>& x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    const auto r = optim::minimize(f, {-1.2, 1.0});
    EXPECT_TRUE(r.converged) << r.message;
    EXPECT_NEAR(r.x[0], 1.0, 1e-4);
    EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(Optimizer, QuadraticAndInfiniteRegions) {
    const optim::Objective f = [](const std::vector<double>& x) {
        if (x[0] < -5) throw std::runtime_error("outside");
        return std::pow(x[0] - 2, 2) + 3 * std::pow(x[1] + 1, 2) + 0.5 * x[0] * x[1];
    };
    const auto r = optim::minimize(f, {0.0, 0.0});
    EXPECT_TRUE(r.converged);
    // Stationary point of the quadratic.
    EXPECT_NEAR(2 * (r.x[0] - 2) + 0.5 * r.x[1], 0.0, 1e-5);
    EXPECT_NEAR(6 * (r.x[1] + 1) + 0.5 * r.x[0], 0.0, 1e-5);
}

TEST(Optimizer, NelderMeadAlone) {
    const optim::Objective f = [](const std::vector<double>& x) { return std::abs(x[0] - 1) + std::abs(x[1] + 2); };
    optim::Options opt;
    opt.simplex_iterations = 2000;
    opt.simplex_tolerance = 1e-9;
    const auto r = optim::nelder_mead(f, {0.0, 0.0}, opt);
    EXPECT_NEAR(r.x[0], 1.0, 1e-5);
    EXPECT_NEAR(r.x[1], -2.0, 1e-5);
}

TEST(Parameters, TransformsRoundTrip) {
    for (auto p : {ParamId::kappa, ParamId::beta, ParamId::nu}) {
        EXPECT_NEAR(from_internal(p, to_internal(p, 0.37)), 0.37, 1e-14);
    }
    EXPECT_NEAR(from_internal(ParamId::alpha, to_internal(ParamId::alpha, -0.31)), -0.31, 1e-14);
    EXPECT_EQ(from_internal(ParamId::mu, 1.5), 1.5);
    const auto b = box_bounds(ParamId::alpha);
    EXPECT_GE(from_internal(ParamId::alpha, 1e3), b.lo);
    EXPECT_LE(from_internal(ParamId::alpha, 1e3), b.hi);
    EXPECT_EQ(parse_param("kappa"), ParamId::kappa);
    EXPECT_THROW((void)parse_param("gamma"), ConfigError);
}

TEST(Parameters, HurstAndAlphaLinked) {
    auto m = fou_model(0.1, 1.0, 0.3);
    EXPECT_NEAR(get_param(m, ParamId::alpha), -0.2, 1e-15);
    set_param(m, ParamId::alpha, 0.1);
    EXPECT_NEAR(std::get<FouParams>(m.params).hurst, 0.6, 1e-15);
    EXPECT_EQ(covariance_params(Family::cauchy), (std::vector<ParamId>{ParamId::beta, ParamId::nu, ParamId::alpha}));
    EXPECT_EQ(free_params(Family::fou, MeanMode::estimated).back(), ParamId::mu);
}

TEST(Parameters, ClampReportsMoves) {
    auto m = cauchy_model(100.0, 1.0, 0.499999);
    std::vector<std::string> notes;
    const auto c = clamp_to_interior(m, covariance_params(Family::cauchy), &notes);
    EXPECT_LT(get_param(c, ParamId::beta), box_bounds(ParamId::beta).hi);
    EXPECT_LT(get_param(c, ParamId::alpha), box_bounds(ParamId::alpha).hi);
    EXPECT_EQ(notes.size(), 2u);
}

TEST(FitMcle, RecoversFouPanelB) {
    const auto m = fou_model(0.01, 0.75, 0.1);
    const auto y = simulate(SimPlan{m, 12 * 1095, 1.0 / 12, 1});
    const auto r = fit_mcle(y, Family::fou, build_default_tuples(3));
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.estimate(ParamId::alpha), -0.40, 0.015);
    EXPECT_FALSE(r.mu_hat.has_value());
    EXPECT_EQ(r.init.size(), 3u);
    // First-order condition at the optimum, in the optimizer's coordinates.
    const auto ids = free_params(Family::fou, MeanMode::known);
    ASSERT_EQ(r.score.size(), ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) {
        const double v = r.estimate(ids[j]);
        const double jac = ids[j] == ParamId::alpha ? 1.0 : v;
        EXPECT_LE(std::abs(r.score[j] * jac), 1e-3 * (1 + std::abs(r.loglik))) << to_string(ids[j]);
    }
}

TEST(FitMcle, RecoversCauchyWithEstimatedMean) {
    const auto m = cauchy_model(1.0, 0.3, 0.0, 1.5);
    const auto y = simulate(SimPlan{m, 12 * 1095, 1.0 / 12, 2});
    FitOptions opt;
    opt.mean_mode = MeanMode::estimated;
    const auto r = fit_mcle(y, Family::cauchy, build_default_tuples(3), opt);
    ASSERT_TRUE(r.converged);
    ASSERT_TRUE(r.mu_hat.has_value());
    EXPECT_NEAR(*r.mu_hat, 1.5, 0.1);
    EXPECT_NEAR(r.estimate(ParamId::alpha), 0.0, 0.03);
    EXPECT_NEAR(r.estimate(ParamId::nu), 0.3, 0.05);
}

TEST(FitMcle, ScaleEquivariance) {
    const auto m = cauchy_model(0.75, 0.5, -0.2);
    auto y = simulate(SimPlan{m, 12 * 400, 1.0 / 12, 3});
    const auto q = build_default_tuples(3);
    const auto a = fit_mcle(y, Family::cauchy, q);
    for (auto& v : y.values) v *= 2.5;
    const auto b = fit_mcle(y, Family::cauchy, q);
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_NEAR(b.estimate(ParamId::nu), 2.5 * a.estimate(ParamId::nu), 1e-6 * b.estimate(ParamId::nu));
    EXPECT_NEAR(b.estimate(ParamId::beta), a.estimate(ParamId::beta), 1e-6);
    EXPECT_NEAR(b.estimate(ParamId::alpha), a.estimate(ParamId::alpha), 1e-6);
}

TEST(FitMcle, FixedParameterHeld) {
    const auto m = fou_model(0.035, 0.3, 0.5);
    const auto y = simulate(SimPlan{m, 12 * 300, 1.0 / 12, 4});
    FitOptions opt;
    opt.fixed = {{ParamId::kappa, 0.05}};
    const auto r = fit_mcle(y, Family::fou, build_default_tuples(3), opt);
    EXPECT_DOUBLE_EQ(r.estimate(ParamId::kappa), 0.05);
    EXPECT_TRUE(r.converged);
}

TEST(FitMcle, ConstantSeriesIsNotASilentSuccess) {
    SampleSeries y;
    y.values.assign(500, 2.0);
    y.delta = 1.0 / 12;
    FitOptions opt;
    opt.known_mu = 2.0;
    const auto r = fit_mcle(y, Family::fou, build_default_tuples(3, {1, 6}), opt);
    EXPECT_FALSE(r.converged);
    EXPECT_FALSE(r.diagnostics.empty());
}

TEST(FitMcle, InitOutsideBoxIsClamped) {
    const auto m = cauchy_model(0.5, 1.0, 0.1);
    const auto y = simulate(SimPlan{m, 12 * 200, 1.0 / 12, 5});
    FitOptions opt;
    opt.init = cauchy_model(80.0, 1.0, 0.1);
    const auto r = fit_mcle(y, Family::cauchy, build_default_tuples(3), opt);
    bool noted = false;
    for (const auto& d : r.diagnostics) noted = noted || d.find("beta") != std::string::npos;
    EXPECT_TRUE(noted);
    EXPECT_THROW((void)fit_mcle(y, Family::fou, build_default_tuples(3), opt), ConfigError);
}

TEST(FitMcle, TooShortSeries) {
    SampleSeries y;
    y.values.assign(50, 0.1);
    EXPECT_THROW((void)fit_mcle(y, Family::fou, build_default_tuples(3)), DataError);
}

TEST(FitMcle, StandardErrorsAttached) {
    const auto m = fou_model(0.035, 0.3, 0.5);
    const auto y = simulate(SimPlan{m, 12 * 1095, 1.0 / 12, 6});
    FitOptions opt;
    opt.standard_errors = true;
    const auto r = fit_mcle(y, Family::fou, build_default_tuples(3), opt);
    ASSERT_TRUE(r.converged);
    ASSERT_TRUE(r.sandwich.has_value());
    ASSERT_EQ(r.std_errors.size(), 3u);
    for (double s : r.std_errors) {
        EXPECT_TRUE(std::isfinite(s));
        EXPECT_GT(s, 0.0);
    }
}
