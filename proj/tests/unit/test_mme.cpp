#include <gtest/gtest.h>

#include <cmath>

#include "mcle/acf.hpp"
#include "mcle/errors.hpp"
#include "mcle/mme.hpp"
#include "mcle/parameters.hpp"
#include "mcle/rng.hpp"
#include "mcle/simulation.hpp"

using namespace mcle;

namespace {

const std::vector<double> kSquares = {0, 1, 4, 9, 16, 25};

}  // namespace

TEST(PowerVariation, SquaresFixture) {
    EXPECT_EQ(power_variation(kSquares, 2.0, 2, 1, 1.0), 16.0);
    EXPECT_EQ(power_variation(kSquares, 2.0, 2, 2, 1.0), 128.0);
    const std::vector<double> flat(10, 3.0);
    EXPECT_EQ(power_variation(flat, 2.0, 2, 1, 1.0), 0.0);
    EXPECT_THROW((void)power_variation(std::vector<double>{1, 2}, 2.0, 2, 1, 1.0), DataError);
}

TEST(CofAlpha, SquaresFixture) {
    EXPECT_EQ(cof_alpha(kSquares, 1.0), 1.0);
    std::vector<double> ramp(20);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    EXPECT_THROW((void)cof_alpha(ramp, 1.0), DataError);
}

TEST(CofAlpha, InfillConsistencyBrownianRoughness) {
    int inside = 0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
        const auto y = simulate_cauchy(CauchyParams{0, 1.0, 1.0, 0.0}, 65536, 1.0 / 12, rng::derive_seed(12, r));
        if (std::abs(cof_alpha(y.values, y.delta)) < 0.05) ++inside;
    }
    EXPECT_GE(inside, 95);
}

TEST(MmeFou, OuSecondMoment) {
    FouParams p{0.0, 0.5, 1.2, 0.5};
    FouSimOptions opt;
    opt.exact_ou_variance = true;
    const auto y = simulate_fou(p, std::size_t{1} << 19, 1.0 / 12, 3, opt);
    const auto r = mme_fou(y, 0.0);
    EXPECT_NEAR(r.nu_hat * r.nu_hat, 1.44, 0.05 * 1.44);
    EXPECT_NEAR(r.hurst_hat, 0.5, 0.03);
    EXPECT_GT(r.kappa_hat, 0.0);
}

TEST(MmeFou, PanelARoughness) {
    FouParams p{0.0, 0.005, 1.25, 0.05};
    double sa = 0.0, sa2 = 0.0, sk = 0.0;
    int reps = 0, out_of_range = 0;
    for (int r = 0; r < 60; ++r) {
        const auto y = simulate_fou(p, 12 * 1095, 1.0 / 12, rng::derive_seed(13, r));
        MmeResult m;
        try {
            m = mme_fou(y, 0.0);
        } catch (const DomainError&) {
            ++out_of_range;  // roughness estimate past -1/2, about four standard deviations out
            continue;
        }
        ++reps;
        sa += m.alpha_hat + 0.45;
        sa2 += std::pow(m.alpha_hat + 0.45, 2);
        sk += m.kappa_hat - 0.005;
    }
    const double bias = sa / reps;
    const double sd = std::sqrt(sa2 / reps - bias * bias);
    EXPECT_NEAR(bias, 0.0, 0.006);
    EXPECT_NEAR(sd, 0.013, 0.006);
    EXPECT_GT(sk / reps, -0.005);
    EXPECT_LE(out_of_range, 2);
}

TEST(MmeFou, OutOfRangeHurstIsAnError) {
    SampleSeries y;
    y.values = kSquares;
    for (int i = 6; i < 40; ++i) y.values.push_back(double(i) * i);
    EXPECT_THROW((void)mme_fou(y), DomainError);
}

TEST(MmeCauchy, ExactAutocorrelationsRecoverBeta) {
    const std::vector<std::size_t> lags = {1, 6, 12, 24, 60};
    const CauchyParams p{0.0, 0.8, 1.0, -0.2};
    std::vector<double> rho;
    for (auto l : lags) rho.push_back(cauchy_acf(p, l / 12.0));
    EXPECT_NEAR(match_cauchy_beta(-0.2, rho, lags, 1.0 / 12), 0.8, 1e-6);
}

TEST(MmeCauchy, UnidentifiedAtSearchEdge) {
    const std::vector<std::size_t> lags = {1, 2};
    const std::vector<double> rho = {1.0, 1.0};
    EXPECT_THROW((void)match_cauchy_beta(0.0, rho, lags, 1.0), IdentificationError);
}

TEST(MmeCauchy, PanelEAlphaBiasSign) {
    const CauchyParams p{0.0, 1.25, 0.2, 0.2};
    double sa = 0.0;
    const int reps = 30;
    for (int r = 0; r < reps; ++r) {
        const auto y = simulate_cauchy(p, 12 * 1095, 1.0 / 12, rng::derive_seed(14, r));
        sa += mme_cauchy(y, 0.0).alpha_hat - 0.2;
    }
    EXPECT_GT(sa / reps, 0.02);
}

TEST(MmeCauchy, ScaleAndModel) {
    const auto y = simulate_cauchy(CauchyParams{0.0, 1.0, 0.3, 0.0}, 12 * 1000, 1.0 / 12, 15);
    const auto r = mme(y, Family::cauchy, 0.0);
    EXPECT_NEAR(r.nu_hat, 0.3, 0.03);
    const auto m = r.model();
    EXPECT_EQ(m.family(), Family::cauchy);
    EXPECT_DOUBLE_EQ(get_param(m, ParamId::beta), r.beta_hat);
}

TEST(SampleAcf, LagZeroIsOne) {
    const std::vector<double> v = {1, -1, 2, 0, 3, -2};
    const auto r = sample_acf(v, 0.5, {0, 1});
    EXPECT_DOUBLE_EQ(r[0], 1.0);
}
