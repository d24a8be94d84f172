#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcle/errors.hpp"
#include "mcle/estimation.hpp"
#include "mcle/harness/figures.hpp"
#include "mcle/harness/panels.hpp"
#include "mcle/harness/series_io.hpp"
#include "mcle/harness/study.hpp"
#include "mcle/parameters.hpp"
#include "mcle/simulation.hpp"

using namespace mcle;
using namespace mcle::harness;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / ("mcle_harness_" + name);
    std::ofstream(p) << body;
    return p.string();
}

}  // namespace

TEST(Panels, Values) {
    const auto b = panel_model(Family::fou, 'B');
    EXPECT_DOUBLE_EQ(get_param(b, ParamId::kappa), 0.01);
    EXPECT_DOUBLE_EQ(get_param(b, ParamId::nu), 0.75);
    EXPECT_DOUBLE_EQ(get_param(b, ParamId::alpha), -0.40);
    const auto e = panel_model(Family::cauchy, 'e', 2.0);
    EXPECT_DOUBLE_EQ(get_param(e, ParamId::beta), 1.25);
    EXPECT_DOUBLE_EQ(get_param(e, ParamId::alpha), 0.2);
    EXPECT_DOUBLE_EQ(e.mu(), 2.0);
    EXPECT_THROW((void)panel_model(Family::fou, 'F'), ConfigError);
    EXPECT_EQ(panel_letters().size(), 5u);
}

TEST(Panels, ExitCodes) {
    EXPECT_EQ(exit_code_for(ConfigError("x")), ExitCode::config);
    EXPECT_EQ(exit_code_for(DataError("x")), ExitCode::data);
    EXPECT_EQ(exit_code_for(BudgetError("x")), ExitCode::budget);
    EXPECT_EQ(exit_code_for(EvaluationError("x")), ExitCode::convergence);
    EXPECT_EQ(exit_code_for(std::runtime_error("x")), ExitCode::other);
}

TEST(SeriesIo, PathCsvRoundTrip) {
    const auto s = simulate_cauchy(CauchyParams{0.5, 1.0, 0.3, -0.2}, 50, 1.0 / 12, 9);
    std::ostringstream out;
    write_path_csv(s, out, {"family=cauchy", "seed=9"});
    const auto path = temp_file("path.csv", out.str());
    const auto in = read_series_csv(path);
    ASSERT_EQ(in.series.size(), 50u);
    EXPECT_NEAR(in.series.delta, 1.0 / 12, 1e-12);
    EXPECT_EQ(in.tags.at("family"), "cauchy");
    for (std::size_t i = 0; i < 50; ++i) EXPECT_NEAR(in.series.values[i], s.values[i], 1e-11 * (1 + std::abs(s.values[i])));
}

TEST(SeriesIo, BlockCsvWithGapsAndBareColumn) {
    const auto path = temp_file("block.csv", "day,slot,value\n0,0,1.5\n0,1,\n1,0,2\n1,1,3\n");
    const auto in = read_series_csv(path);
    ASSERT_EQ(in.series.size(), 4u);
    EXPECT_NEAR(in.series.delta, 0.5, 1e-15);
    EXPECT_FALSE(in.series.is_observed(1));
    EXPECT_TRUE(in.series.has_gaps());
    const auto bare = read_series_csv(temp_file("bare.csv", "1\n2\n3\n"), 0.25);
    EXPECT_EQ(bare.series.size(), 3u);
    EXPECT_DOUBLE_EQ(bare.series.delta, 0.25);
    EXPECT_THROW((void)read_series_csv("/nonexistent/none.csv"), DataError);
}

TEST(Study, SingleReplicationWarns) {
    StudyConfig cfg;
    cfg.truth = panel_model(Family::cauchy, 'D');
    cfg.big_t = {60};
    cfg.replications = 1;
    const auto r = run_study(cfg);
    ASSERT_EQ(r.cells.size(), 1u);
    const auto& c = r.cells[0];
    EXPECT_EQ(c.n, 720u);
    ASSERT_FALSE(c.warnings.empty());
    for (const auto& s : c.mcle) EXPECT_EQ(s.std, 0.0);
    std::ostringstream table, csv;
    write_study_table(r, table);
    write_study_csv(r, csv);
    EXPECT_FALSE(table.str().empty());
    EXPECT_FALSE(csv.str().empty());
}

TEST(Study, WorkerCountDoesNotChangeResults) {
    StudyConfig cfg;
    cfg.truth = panel_model(Family::fou, 'D');
    cfg.big_t = {40};
    cfg.replications = 4;
    cfg.workers = 1;
    const auto a = run_study(cfg);
    cfg.workers = 3;
    const auto b = run_study(cfg);
    ASSERT_EQ(a.cells[0].mcle_draws.size(), b.cells[0].mcle_draws.size());
    for (std::size_t i = 0; i < a.cells[0].mcle_draws.size(); ++i)
        EXPECT_EQ(a.cells[0].mcle_draws[i], b.cells[0].mcle_draws[i]);
}

TEST(Study, Validation) {
    StudyConfig cfg;
    cfg.truth = panel_model(Family::fou, 'A');
    cfg.replications = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.replications = 1;
    cfg.big_t = {};
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Study, Summarize) {
    const auto s = summarize({ParamId::alpha}, {0.0}, {{1.0}, {3.0}});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s[0].mean_bias, 2.0);
    EXPECT_DOUBLE_EQ(s[0].std, std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(s[0].rmse, std::sqrt(5.0));
}

TEST(Figures, Grids) {
    const auto l = log_space(1e-4, 1.0, 5);
    EXPECT_NEAR(l[2], 1e-2, 1e-16);
    EXPECT_EQ(lin_space(1, 1, 1).front(), 1.0);
    EXPECT_THROW((void)log_space(0.0, 1.0, 3), ConfigError);
    EXPECT_NEAR(loglog_slope({1, 10, 100}, {2, 200, 20000}), 2.0, 1e-12);
}

TEST(Figures, HeatmapSingleCellAndBudget) {
    const auto y = simulate_cauchy(CauchyParams{0, 1.0, 0.3, 0.0}, 600, 1.0 / 12, 1);
    const auto q = build_default_tuples(3);
    HeatmapSpec spec;
    spec.shape_lo = spec.shape_hi = 1.0;
    spec.shape_points = spec.alpha_points = 1;
    spec.alpha_lo = spec.alpha_hi = 0.0;
    spec.mark_mcle = false;
    const auto h = heatmap(y, Family::cauchy, q, spec);
    ASSERT_EQ(h.cl.size(), 1u);
    EXPECT_TRUE(std::isfinite(h.cl[0][0]));
    spec.shape_points = spec.alpha_points = 1000;
    spec.shape_hi = 2.0;
    spec.alpha_hi = 0.1;
    EXPECT_THROW((void)heatmap(y, Family::cauchy, q, spec), BudgetError);
}

TEST(Figures, HeatmapArgmaxNearTruth) {
    const auto y = simulate_cauchy(CauchyParams{0, 1.0, 0.3, 0.0}, 6000, 1.0 / 12, 2);
    HeatmapSpec spec;
    spec.shape_points = 20;
    spec.alpha_points = 19;
    const auto h = heatmap(y, Family::cauchy, build_default_tuples(3), spec);
    EXPECT_NEAR(h.alpha_values[h.arg_alpha], 0.0, 0.15);
    EXPECT_TRUE(h.mcle_cell.has_value());
    std::ostringstream out;
    write_heatmap_csv(h, out);
    EXPECT_NE(out.str().find("beta,alpha,cl"), std::string::npos);
}

TEST(Figures, ProfileAtEstimateMatchesFit) {
    const auto y = simulate_cauchy(CauchyParams{1.0, 0.5, 0.75, -0.4}, 3000, 1.0 / 12, 3);
    const auto q = build_default_tuples(3);
    FitOptions opt;
    opt.mean_mode = MeanMode::estimated;
    const auto fit = fit_mcle(y, Family::cauchy, q, opt);
    ASSERT_TRUE(fit.converged);
    ProfileSpec spec;
    spec.shape_values = {get_param(fit.model, ParamId::beta)};
    const auto p = profile(y, Family::cauchy, q, spec);
    ASSERT_EQ(p.rows.size(), 1u);
    EXPECT_NEAR(p.rows[0].cl, fit.loglik, 1e-4 * std::abs(fit.loglik));
    EXPECT_DOUBLE_EQ(p.rows[0].normalized, 1.0);
}

TEST(Figures, CompareSingleHorizon) {
    CompareConfig cfg;
    cfg.truth = panel_model(Family::cauchy, 'D');
    cfg.big_t = {20};
    cfg.replications = 2;
    const auto r = compare_mle(cfg);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].n, 240u);
    EXPECT_GT(r.rows[0].ml_seconds, 0.0);
    EXPECT_GT(r.rows[0].cl_hurst_rmse, 0.0);
    cfg.big_t = {1000};
    cfg.cap = 4096;
    const auto skipped = compare_mle(cfg);
    EXPECT_TRUE(skipped.rows.empty());
    EXPECT_FALSE(skipped.notes.empty());
}
