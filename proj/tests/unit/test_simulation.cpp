#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "mcle/acf.hpp"
#include "mcle/errors.hpp"
#include "mcle/rng.hpp"
#include "mcle/simulation.hpp"

using namespace mcle;

namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / v.size();
}

double lag_corr(const std::vector<double>& v, std::size_t k) {
    const double m = mean_of(v);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        den += (v[i] - m) * (v[i] - m);
        if (i + k < v.size()) num += (v[i] - m) * (v[i + k] - m);
    }
    return num / den;
}

}  // namespace

TEST(Rng, DerivedSeedsDifferAndRepeat) {
    EXPECT_EQ(rng::derive_seed(1, {2, 3}), rng::derive_seed(1, {2, 3}));
    EXPECT_NE(rng::derive_seed(1, {2, 3}), rng::derive_seed(1, {3, 2}));
    EXPECT_NE(rng::derive_seed(1, 5), rng::derive_seed(2, 5));
}

TEST(EmbeddingSize, PowerOfTwo) {
    EXPECT_EQ(embedding_size(2), 2u);
    EXPECT_EQ(embedding_size(5), 8u);
    EXPECT_EQ(embedding_size(1025), 2048u);
}

TEST(CirculantEmbed, StandardNormalMarginal) {
    const double g[] = {1.0};
    std::vector<double> draws;
    for (std::uint64_t s = 0; s < 10000; ++s) draws.push_back(circulant_embed(g, 1, s)[0]);
    EXPECT_NEAR(mean_of(draws), 0.0, 0.03);
    EXPECT_GT(var_of(draws), 0.95);
    EXPECT_LT(var_of(draws), 1.05);
}

TEST(CirculantEmbed, WhiteNoise) {
    const std::size_t n = 8192;
    std::vector<double> g(n, 0.0);
    g[0] = 4.0;
    const auto y = circulant_embed(g, n, 99);
    EXPECT_LT(std::abs(lag_corr(y, 1)), 3.0 / std::sqrt(double(n)));
    EXPECT_NEAR(var_of(y), 4.0, 0.25);
}

TEST(CirculantEmbed, CauchyLagOneCorrelation) {
    ModelSpec m;
    m.params = CauchyParams{0.0, 1.0, 1.0, 0.0};
    const std::size_t n = 4096;
    const auto g = acv_prefix(m, embedding_size(n) / 2 + 1, 1.0);
    double acc = 0.0, acc2 = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const double c = lag_corr(circulant_embed(g, n, rng::derive_seed(5, r)), 1);
        acc += c;
        acc2 += c * c;
    }
    const double mean = acc / reps;
    const double se = std::sqrt((acc2 / reps - mean * mean) / reps);
    // The sample autocorrelation about the sample mean is biased down under long memory; allow for it.
    EXPECT_NEAR(mean, 0.5, 3 * se + 0.03);
}

TEST(CirculantEmbed, RejectsNonDefiniteSequence) {
    // The 3 x 3 Toeplitz matrix of this sequence has a negative determinant.
    const double g[] = {1.0, 0.9, -0.9};
    EXPECT_THROW((void)circulant_embed(g, 3, 1), EmbeddingError);
    const double bad[] = {1.0, 2.0};
    EXPECT_THROW((void)circulant_embed(bad, 2, 1), DomainError);
}

TEST(CirculantEmbed, SeedReproducible) {
    const double g[] = {1.0, 0.5, 0.25, 0.125};
    EXPECT_EQ(circulant_embed(g, 4, 17), circulant_embed(g, 4, 17));
    EXPECT_NE(circulant_embed(g, 4, 17), circulant_embed(g, 4, 18));
}

TEST(Fgn, AutocovarianceValues) {
    EXPECT_DOUBLE_EQ(fgn_acv(0.5, 0, 0.25), 0.25);
    for (std::size_t j = 1; j < 10; ++j) EXPECT_NEAR(fgn_acv(0.5, j, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(fgn_acv(0.7, 1, 1.0), (std::pow(2.0, 1.4) - 2.0) / 2.0, 1e-12);
    EXPECT_NEAR(fgn_acv(0.7, 1, 1.0), 0.319508, 1e-6);
    EXPECT_NEAR(fgn_acv(0.1, 1, 1.0), -0.4256508225, 1e-9);
    // Large-lag form agrees with the direct second difference.
    const double h = 0.3;
    const double j = 7.0;
    const double direct = 0.5 * (std::pow(j + 1, 2 * h) - 2 * std::pow(j, 2 * h) + std::pow(j - 1, 2 * h));
    EXPECT_NEAR(fgn_acv(h, 7, 1.0), direct, 1e-14);
}

TEST(Fgn, SampleVarianceMatchesDelta) {
    const auto y = simulate_fgn(0.3, 20000, 0.25, 4);
    EXPECT_NEAR(var_of(y.values), std::pow(0.25, 0.6), 0.05 * std::pow(0.25, 0.6));
}

TEST(Fou, StrongMeanReversionGivesIndependentDraws) {
    FouParams p{0.0, 1e6, 1.0, 0.5};
    FouSimOptions opt;
    opt.exact_ou_variance = true;
    const auto y = simulate_fou(p, 20000, 1.0 / 12, 8, opt);
    EXPECT_LT(std::abs(lag_corr(y.values, 1)), 3.0 / std::sqrt(20000.0));
    EXPECT_NEAR(var_of(y.values), 1.0, 0.05);
}

TEST(Fou, ExactVarianceOptionMatchesOuAutocorrelation) {
    FouParams p{0.0, 2.0, 1.0, 0.5};
    FouSimOptions opt;
    opt.exact_ou_variance = true;
    const auto y = simulate_fou(p, 50000, 0.1, 2, opt);
    EXPECT_NEAR(lag_corr(y.values, 1), std::exp(-0.2), 0.02);
}

TEST(Fou, PanelVarianceNearNuSquared) {
    // Second moment about the known mean, over the whole path and over the first
    // 30 days, where a start not matched to the increments shows up.
    FouParams p{0.0, 0.01, 0.75, 0.1};
    const int reps = 200;
    std::vector<double> whole, early;
    for (int r = 0; r < reps; ++r) {
        const auto y = simulate_fou(p, 12 * 1825, 1.0 / 12, rng::derive_seed(3, r)).values;
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            a += y[i] * y[i];
            if (i < 360) b += y[i] * y[i];
        }
        whole.push_back(a / y.size());
        early.push_back(b / 360);
    }
    for (const auto* v : {&whole, &early}) {
        double m = 0.0, m2 = 0.0;
        for (double x : *v) {
            m += x;
            m2 += x * x;
        }
        m /= reps;
        const double se = std::sqrt((m2 / reps - m * m) / reps);
        EXPECT_NEAR(m, 0.5625, 4.0 * se);
    }
}

TEST(Fou, DegenerateScaleStaysAtMean) {
    FouParams p{5.0, 0.1, 1e-6, 0.3};
    const auto y = simulate_fou(p, 1000, 1.0 / 12, 1);
    for (double v : y.values) EXPECT_NEAR(v, 5.0, 1e-4);
}

TEST(Cauchy, MeanWithinLongMemoryBand) {
    CauchyParams p{0.0, 0.5, 1.0, 0.0};
    const std::size_t n = 4096;
    ModelSpec m;
    m.params = p;
    const auto g = acv_prefix(m, n, 1.0);
    double var_mean = g[0] / n;
    for (std::size_t k = 1; k < n; ++k) var_mean += 2.0 * (1.0 - double(k) / n) * g[k] / n;
    const auto y = simulate_cauchy(p, n, 1.0, 21);
    EXPECT_LT(std::abs(mean_of(y.values)), 4.0 * std::sqrt(var_mean));
}

TEST(Cauchy, LagTwelveCorrelationPanelE) {
    CauchyParams p{0.0, 1.25, 0.2, 0.2};
    const double delta = 1.0 / 12;
    const double target = cauchy_acf(p, 12 * delta);
    double acc = 0.0, acc2 = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const auto y = simulate_cauchy(p, 12 * 365, delta, rng::derive_seed(9, r));
        const double c = lag_corr(y.values, 12);
        acc += c;
        acc2 += c * c;
    }
    const double mean = acc / reps;
    const double sd = std::sqrt(acc2 / reps - mean * mean);
    // Mean-centering bias of order the variance of the sample mean is left in the band.
    EXPECT_NEAR(mean, target, 3 * sd / std::sqrt(double(reps)) + 0.02);
}

TEST(Cauchy, LocationShift) {
    const auto y = simulate_cauchy(CauchyParams{-3.0, 2.0, 0.5, 0.0}, 20000, 1.0, 6);
    EXPECT_NEAR(mean_of(y.values), -3.0, 0.05);
}

TEST(Simulate, ReproducibleAndCsv) {
    SimPlan plan;
    plan.model.params = FouParams{0.0, 0.015, 0.5, 0.3};
    plan.n = 120;
    plan.delta = 1.0 / 12;
    plan.seed = 44;
    const auto a = simulate(plan);
    const auto b = simulate(plan);
    EXPECT_EQ(a.values, b.values);
    std::ostringstream sa, sb;
    write_path_csv(a, sa, {"family=fou"});
    write_path_csv(b, sb, {"family=fou"});
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(sa.str().rfind("# family=fou\nindex,time,value\n0,0,", 0), 0u);
}

TEST(SampleSeries, Validation) {
    SampleSeries s;
    EXPECT_THROW(s.validate(), DataError);
    s.values = {1.0, std::nan("")};
    EXPECT_THROW(s.validate(), DataError);
    s.observed = {1, 0};
    EXPECT_NO_THROW(s.validate());
    EXPECT_TRUE(s.has_gaps());
}
