#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mcle/errors.hpp"
#include "mcle/hf/pipeline.hpp"
#include "mcle/hf/ticks.hpp"

using namespace mcle;
using namespace mcle::hf;

namespace {

constexpr std::int64_t kDay0 = 19000;

// One trade per `step_s` seconds over `days` days, log price a Gaussian random
// walk with daily variance `daily_var` plus i.i.d. noise of std `noise`.
std::vector<TickRecord> synthetic_ticks(int days, int step_s, double daily_var, double noise, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    const int per_day = 86400 / step_s;
    const double sd = std::sqrt(daily_var / per_day);
    double x = std::log(100.0);
    std::vector<TickRecord> out;
    out.reserve(static_cast<std::size_t>(days) * per_day);
    for (int d = 0; d < days; ++d)
        for (int i = 0; i < per_day; ++i) {
            x += sd * z(rng);
            const std::int64_t t = (kDay0 + d) * kMsPerDay + static_cast<std::int64_t>(i) * step_s * 1000 + 500;
            out.push_back({t, std::exp(x + noise * z(rng)), 1.0, 1.0});
        }
    return out;
}

ReturnPanel panel_of(std::vector<double> r, int slots, std::vector<std::int64_t> days) {
    ReturnPanel p;
    p.days = std::move(days);
    p.slots_per_day = slots;
    p.slot_seconds = 86400.0 / slots;
    p.r = std::move(r);
    return p;
}

}  // namespace

TEST(Ingest, HeaderlessArchiveAndOrdering) {
    std::istringstream in(
        "2,100.5,0.1,10.05,1600000001000,true,true\n"
        "1,100.0,0.2,20.0,1600000000000,false,true\n");
    const auto d = ingest_ticks(in);
    ASSERT_EQ(d.ticks.size(), 2u);
    EXPECT_EQ(d.ticks[0].timestamp_ms, 1600000000000);
    EXPECT_DOUBLE_EQ(d.ticks[1].price, 100.5);
    EXPECT_EQ(d.report.out_of_order, 1u);
}

TEST(Ingest, HeaderAndMicroseconds) {
    std::istringstream in(
        "id,price,qty,quote_qty,time,is_buyer_maker\n"
        "1,50,2,100,1700000000000000,true\n");
    const auto d = ingest_ticks(in);
    ASSERT_EQ(d.ticks.size(), 1u);
    EXPECT_EQ(d.ticks[0].timestamp_ms, 1700000000000);
    EXPECT_DOUBLE_EQ(d.ticks[0].quote_volume, 100.0);
}

TEST(Ingest, EmptyAndMalformed) {
    std::istringstream empty("");
    const auto e = ingest_ticks(empty);
    EXPECT_TRUE(e.ticks.empty());
    EXPECT_EQ(e.report.rows, 0u);
    std::istringstream bad("2,100,1,1,1600000000001,true,true\n1,abc,1,1,1600000000000,true,true\n");
    EXPECT_THROW((void)ingest_ticks(bad), DataError);
}

TEST(Ingest, OneTradePerSecond) {
    std::ostringstream s;
    for (int i = 0; i < 86400; ++i) s << i << ",100,1,100," << (kDay0 * kMsPerDay + i * 1000LL) << ",true,true\n";
    std::istringstream in(s.str());
    const auto d = ingest_ticks(in);
    EXPECT_EQ(d.ticks.size(), 86400u);
    std::ostringstream back;
    write_ticks_csv(d.ticks, back);
    EXPECT_FALSE(back.str().empty());
}

TEST(Weekday, EpochWasThursday) {
    EXPECT_EQ(weekday_of_day(0), 4);
    EXPECT_EQ(weekday_of_day(3), 0);
    EXPECT_EQ(day_of(-1), -1);
}

TEST(Grid, ConstantPrice) {
    std::vector<TickRecord> t;
    for (int i = 0; i < 96; ++i) t.push_back({kDay0 * kMsPerDay + i * 900000LL, 42.0, 1, 42});
    const auto g = grid_prices(t, 900, 3);
    ASSERT_EQ(g.days.size(), 1u);
    for (double v : g.log_price) EXPECT_DOUBLE_EQ(v, std::log(42.0));
    const auto rv = block_rv(log_returns(g), 12);
    for (double r : rv.raw) EXPECT_EQ(r, 0.0);
}

TEST(Grid, SingleTradePerSlotIsPreviousTick) {
    std::vector<TickRecord> t;
    for (int i = 0; i < 96; ++i) t.push_back({kDay0 * kMsPerDay + i * 900000LL + 10, 100.0 + i, 1, 1});
    const auto g = grid_prices(t, 900, 5);
    for (int s = 1; s <= 96; ++s) EXPECT_NEAR(g.at(0, s), std::log(100.0 + s - 1), 1e-15);
}

TEST(Grid, PreAveragingWindow) {
    const std::int64_t b = kDay0 * kMsPerDay + 900000;  // first slot boundary
    std::vector<TickRecord> t = {{kDay0 * kMsPerDay + 1000, 100, 1, 1},
                                 {b - 2000, 101, 1, 1},
                                 {b - 1000, 100, 1, 1},
                                 {b + 1000, 101, 1, 1}};
    const auto g = grid_prices(t, 900, 2);
    EXPECT_NEAR(g.at(0, 1), 0.5 * (std::log(101.0) + std::log(100.0)), 1e-15);
}

TEST(Grid, EmptyDayDropped) {
    std::vector<TickRecord> t = {{kDay0 * kMsPerDay + 5, 10, 1, 1}, {(kDay0 + 2) * kMsPerDay + 5, 11, 1, 1}};
    const auto g = grid_prices(t, 3600, 1);
    EXPECT_EQ(g.days, (std::vector<std::int64_t>{kDay0, kDay0 + 2}));
    EXPECT_FALSE(g.diagnostics.empty());
    const auto rv = block_rv(log_returns(g), 12);
    EXPECT_EQ(rv.missing_days, 1u);
    EXPECT_EQ(rv.values.size(), 36u);
}

TEST(BlockRv, Arithmetic) {
    const auto rv = block_rv(panel_of({0.01, -0.02}, 2, {kDay0}), 1);
    EXPECT_NEAR(rv.raw[0], 5e-4, 1e-18);
    EXPECT_NEAR(rv.values[0], std::log(5e-4), 1e-12);
    const auto eq = block_rv(panel_of(std::vector<double>(24, 0.003), 24, {kDay0}), 6);
    for (double r : eq.raw) EXPECT_NEAR(r, 4 * 0.003 * 0.003, 1e-18);
    EXPECT_THROW((void)block_rv(panel_of({0.1, 0.1, 0.1}, 3, {kDay0}), 2), ConfigError);
}

TEST(BlockRv, ChiSquareLogBias) {
    // m returns per block with variance s2: E log RV = log(m s2) + E log(chi2_m / m).
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z(0.0, 1.0);
    const int S = 240, B = 12, days = 200;
    const double s2 = 1e-6;
    std::vector<double> r(S * days);
    std::vector<std::int64_t> dd;
    for (int d = 0; d < days; ++d) dd.push_back(kDay0 + d);
    for (auto& v : r) v = std::sqrt(s2) * z(rng);
    const auto rv = block_rv(panel_of(r, S, dd), B);
    double mean = 0.0;
    for (double v : rv.values) mean += v;
    mean /= rv.values.size();
    const double m = S / B;
    // digamma(m/2) + log(2/m) ~ -1/m - 1/(3 m^2)
    const double bias = -1.0 / m - 1.0 / (3.0 * m * m);
    EXPECT_NEAR(mean, std::log(m * s2) + bias, 0.02);
}

TEST(Diurnal, SumsToOneAndRecoversShape) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> z(0.0, 1.0);
    const int S = 96, days = 2000;
    std::vector<double> shape(S), r(S * days);
    double tot = 0.0;
    for (int s = 0; s < S; ++s) {
        const double u = (s + 0.5) / S - 0.5;
        shape[s] = 1.0 + 6.0 * u * u;
        tot += shape[s];
    }
    for (auto& v : shape) v /= tot;
    std::vector<std::int64_t> dd;
    for (int d = 0; d < days; ++d) {
        dd.push_back(kDay0 + d);
        for (int s = 0; s < S; ++s) r[d * S + s] = std::sqrt(shape[s]) * z(rng);
    }
    const auto p = panel_of(r, S, dd);
    const auto f = diurnal_factors(p);
    double sum = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int s = 0; s < S; ++s) {
        sum += f[s];
        sx += f[s];
        sy += shape[s];
        sxx += f[s] * f[s];
        syy += shape[s] * shape[s];
        sxy += f[s] * shape[s];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    const double corr = (S * sxy - sx * sy) / std::sqrt((S * sxx - sx * sx) * (S * syy - sy * sy));
    EXPECT_GT(corr, 0.99);
    // Correction preserves total squared returns.
    const auto c = apply_diurnal(p, f);
    double a = 0.0, b = 0.0;
    for (double v : p.r) a += v * v;
    for (double v : c.r) b += v * v;
    EXPECT_NEAR(a, b, 0.05 * a);
}

TEST(Diurnal, FlatAndFloored) {
    std::vector<double> r(48, 0.0);
    for (int d = 0; d < 2; ++d)
        for (int s = 0; s < 23; ++s) r[d * 24 + s] = 0.01;
    std::vector<std::string> notes;
    const auto f = diurnal_factors(panel_of(r, 24, {kDay0, kDay0 + 1}), &notes);
    EXPECT_GT(f[23], 0.0);
    EXPECT_LT(f[23], 1e-11);
    EXPECT_NEAR(f[0], 1.0 / 23, 1e-9);
    EXPECT_FALSE(notes.empty());
}

TEST(DayOfWeek, Factors) {
    std::vector<std::int64_t> days;
    std::vector<double> rv;
    for (int d = 0; d < 28; ++d) {
        days.push_back(kDay0 + d);
        const int w = weekday_of_day(kDay0 + d);
        rv.push_back(w == 0 || w == 6 ? 2.0 : 1.0);
    }
    const auto f = dow_factors(days, rv);
    const double avg = (5.0 + 4.0) / 7.0;
    EXPECT_NEAR(f[0], 2.0 / avg, 1e-12);
    EXPECT_NEAR(f[3], 1.0 / avg, 1e-12);
    std::vector<double> same(28, 1.0);
    for (double v : dow_factors(days, same)) EXPECT_DOUBLE_EQ(v, 1.0);
    std::vector<std::string> notes;
    (void)dow_factors({kDay0, kDay0 + 1}, {1.0, 1.0}, &notes);
    bool warned = false, missing = false;
    for (const auto& n : notes) {
        warned = warned || n.find("single week") != std::string::npos;
        missing = missing || n.find("no ") == 0;
    }
    EXPECT_TRUE(warned);
    EXPECT_TRUE(missing);
}

TEST(Truncation, SingleSpike) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z(0.0, 1.0);
    const int S = 1440;
    std::vector<double> r(S);
    for (auto& v : r) v = 0.001 * z(rng);
    r[700] = 20.0 * 0.001;
    std::size_t zeroed = 0;
    const auto p = panel_of(r, S, {kDay0});
    const auto t = truncate_jumps(p, 1, 4.0, &zeroed);
    EXPECT_EQ(zeroed, 1u);
    EXPECT_EQ(t.r[700], 0.0);
    (void)truncate_jumps(p, 1, 1e12, &zeroed);
    EXPECT_EQ(zeroed, 0u);
}

TEST(Signature, NoiselessFlat) {
    const auto ticks = synthetic_ticks(30, 1, 1e-4, 0.0, 11);
    const auto rows = volatility_signature(ticks, {1, 5, 15, 60, 300, 600});
    ASSERT_EQ(rows.size(), 6u);
    for (const auto& r : rows) {
        EXPECT_LE(r.lower, 1.0) << r.seconds;
        EXPECT_GE(r.upper, 1.0) << r.seconds;
    }
    EXPECT_EQ(volatility_signature(ticks, {60}).size(), 1u);
}

TEST(Signature, NoiseRaisesHighFrequency) {
    const auto ticks = synthetic_ticks(30, 1, 1e-4, 2e-4, 12);
    const auto rows = volatility_signature(ticks, {600, 300, 60, 15, 5, 1});
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].scaled, rows[i - 1].scaled) << rows[i].seconds;
    // Noise adds about 2 m omega^2 per day.
    const double m = 86400.0;
    EXPECT_NEAR(rows.back().mean_rv, 1e-4 + 2 * m * 4e-8, 0.1 * (1e-4 + 2 * m * 4e-8));
}

TEST(Volume, ConstantVolumeFlat) {
    std::vector<TickRecord> t;
    for (int d = 0; d < 10; ++d)
        for (int i = 0; i < 288; ++i) t.push_back({(kDay0 + d) * kMsPerDay + i * 300000LL, 100, 1, 5.0});
    const auto v = volume_series(t, 12);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        EXPECT_NEAR(v.raw[i], 5.0 * 24, 1e-9);
        EXPECT_NEAR(v.values[i], std::log(5.0 * 24), 1e-9);
    }
}

TEST(Volume, ExponentialGrowthDetrended) {
    std::vector<TickRecord> t;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z(0.0, 0.1);
    for (int d = 0; d < 60; ++d)
        for (int i = 0; i < 288; ++i)
            t.push_back({(kDay0 + d) * kMsPerDay + i * 300000LL, 100, 1, std::exp(0.02 * d + z(rng))});
    const auto v = volume_series(t, 12);
    double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
    const double n = static_cast<double>(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        st += i;
        sy += v.values[i];
        stt += double(i) * i;
        sty += double(i) * v.values[i];
        syy += v.values[i] * v.values[i];
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    const double icpt = (sy - slope * st) / n;
    double sse = 0;
    for (std::size_t i = 0; i < v.values.size(); ++i) sse += std::pow(v.values[i] - icpt - slope * i, 2);
    const double se = std::sqrt(sse / (n - 2) / (stt - st * st / n));
    EXPECT_LT(std::abs(slope / se), 2.0);
}

TEST(Volume, MissingDayIsGap) {
    std::vector<TickRecord> t;
    for (int d : {0, 2})
        for (int i = 0; i < 24; ++i) t.push_back({(kDay0 + d) * kMsPerDay + i * 3600000LL, 100, 1, 1.0});
    const auto v = volume_series(t, 12);
    EXPECT_EQ(v.missing_days, 1u);
    for (int b = 12; b < 24; ++b) EXPECT_EQ(v.observed[b], 0);
    const auto sweep = volume_sweep(t, {7200, 3600});
    EXPECT_EQ(sweep.size(), 2u);
    EXPECT_EQ(sweep[1].blocks_per_day, 24);
}

TEST(Pipeline, EndToEnd) {
    const auto ticks = synthetic_ticks(14, 5, 1e-4, 0.0, 4);
    RvPipelineConfig cfg;
    const auto r = run_rv_pipeline(ticks, cfg);
    EXPECT_EQ(r.days, 14u);
    EXPECT_EQ(r.rv.values.size(), 14u * 12u);
    double s = 0.0;
    for (double f : r.diurnal) s += f;
    EXPECT_NEAR(s, 1.0, 1e-12);
    std::ostringstream out;
    write_block_csv(r.rv, out);
    EXPECT_EQ(out.str().rfind("day,slot,value\n", 0), 0u);
    const auto series = r.rv.to_series();
    EXPECT_NEAR(series.delta, 1.0 / 12, 1e-15);
}
