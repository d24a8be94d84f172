#include <algorithm>
#include <cmath>
#include <string>

#include "mcle/errors.hpp"
#include "mcle/hf/pipeline.hpp"

namespace mcle::hf {

namespace {

std::vector<double> daily_rv_at(const std::vector<TickRecord>& ticks, int seconds) {
    return log_returns(grid_prices(ticks, seconds, 1)).daily_rv();
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<SignatureRow> volatility_signature(const std::vector<TickRecord>& ticks, const std::vector<int>& seconds,
                                               int reference_seconds) {
    if (ticks.empty()) throw DataError("no ticks for the volatility signature");
    const auto ref = daily_rv_at(ticks, reference_seconds);
    const double mr = ref.empty() ? 0.0 : mean_of(ref);
    if (!(mr > 0.0)) throw DataError("reference-frequency RV is zero");
    const double days = static_cast<double>(ref.size());
    std::vector<SignatureRow> out;
    for (int s : seconds) {
        const auto rv = s == reference_seconds ? ref : daily_rv_at(ticks, s);
        SignatureRow row;
        row.seconds = s;
        row.days = rv.size();
        row.mean_rv = mean_of(rv);
        row.scaled = row.mean_rv / mr;
        // Delta-method error of the ratio of means over the same days.
        double vs = 0.0, vr = 0.0, cv = 0.0;
        for (std::size_t d = 0; d < rv.size(); ++d) {
            vs += (rv[d] - row.mean_rv) * (rv[d] - row.mean_rv);
            vr += (ref[d] - mr) * (ref[d] - mr);
            cv += (rv[d] - row.mean_rv) * (ref[d] - mr);
        }
        double ratio_se = 0.0;
        if (rv.size() > 1) {
            const double k = 1.0 / ((days - 1.0) * days);
            row.std_error = std::sqrt(vs * k);
            const double var = row.scaled * row.scaled *
                               (vs * k / (row.mean_rv * row.mean_rv) + vr * k / (mr * mr) - 2.0 * cv * k / (row.mean_rv * mr));
            ratio_se = std::sqrt(std::max(var, 0.0));
        }
        row.lower = row.scaled - 2.0 * ratio_se;
        row.upper = row.scaled + 2.0 * ratio_se;
        out.push_back(row);
    }
    return out;
}

RvSeries volume_series(const std::vector<TickRecord>& ticks, int blocks_per_day) {
    if (blocks_per_day <= 0 || 86400 % blocks_per_day != 0)
        throw ConfigError("blocks per day must divide 86400 seconds");
    RvSeries out;
    out.blocks_per_day = blocks_per_day;
    if (ticks.empty()) return out;
    const auto B = static_cast<std::size_t>(blocks_per_day);
    const std::int64_t block_ms = kMsPerDay / blocks_per_day;
    out.first_day = day_of(ticks.front().timestamp_ms);
    const auto span = static_cast<std::size_t>(day_of(ticks.back().timestamp_ms) - out.first_day + 1);
    std::vector<double> vol(span * B, 0.0);
    std::vector<std::uint8_t> day_present(span, 0);
    for (const auto& t : ticks) {
        const std::int64_t day = day_of(t.timestamp_ms);
        const auto cal = static_cast<std::size_t>(day - out.first_day);
        const auto b = static_cast<std::size_t>((t.timestamp_ms - day * kMsPerDay) / block_ms);
        vol[cal * B + b] += t.quote_volume;
        day_present[cal] = 1;
    }
    out.raw = vol;
    out.observed.assign(span * B, 0);
    for (std::size_t d = 0; d < span; ++d) {
        if (!day_present[d]) {
            ++out.missing_days;
            continue;
        }
        for (std::size_t b = 0; b < B; ++b) {
            if (vol[d * B + b] > 0.0)
                out.observed[d * B + b] = 1;
            else
                ++out.dropped_blocks;
        }
    }
    // Time-of-day factors on level volume, normalized to sum to one.
    std::vector<double> f(B, 0.0);
    std::vector<std::size_t> cnt(B, 0);
    for (std::size_t i = 0; i < vol.size(); ++i) {
        if (!out.observed[i]) continue;
        f[i % B] += vol[i];
        ++cnt[i % B];
    }
    double total = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
        f[b] = cnt[b] ? f[b] / static_cast<double>(cnt[b]) : 0.0;
        total += f[b];
    }
    if (!(total > 0.0)) throw DataError("all volume blocks are empty");
    for (auto& v : f) v = std::max(v / total, 1e-12);
    out.values.assign(vol.size(), 0.0);
    for (std::size_t i = 0; i < vol.size(); ++i)
        if (out.observed[i]) out.values[i] = std::log(vol[i] / (f[i % B] * static_cast<double>(B)));
    // Remove the OLS slope in calendar time; keep the level.
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0, c = 0.0;
    for (std::size_t i = 0; i < vol.size(); ++i) {
        if (!out.observed[i]) continue;
        const double t = static_cast<double>(i);
        st += t;
        sy += out.values[i];
        stt += t * t;
        sty += t * out.values[i];
        c += 1.0;
    }
    const double den = c * stt - st * st;
    if (c >= 2.0 && den > 0.0) {
        const double slope = (c * sty - st * sy) / den;
        for (std::size_t i = 0; i < vol.size(); ++i)
            if (out.observed[i]) out.values[i] -= slope * static_cast<double>(i);
        out.diagnostics.push_back("linear trend removed, slope " + std::to_string(slope) + " per block");
    }
    out.corrected = true;
    if (out.dropped_blocks > 0)
        out.diagnostics.push_back(std::to_string(out.dropped_blocks) + " zero-volume blocks dropped as gaps");
    if (out.missing_days > 0)
        out.diagnostics.push_back(std::to_string(out.missing_days) + " calendar days without data left as gaps");
    return out;
}

std::vector<RvSeries> volume_sweep(const std::vector<TickRecord>& ticks, const std::vector<int>& seconds) {
    std::vector<RvSeries> out;
    for (int s : seconds) {
        if (s <= 0 || 86400 % s != 0) throw ConfigError("sweep block length must divide 86400 seconds");
        out.push_back(volume_series(ticks, 86400 / s));
    }
    return out;
}

RvPipelineResult run_rv_pipeline(const std::vector<TickRecord>& ticks, const RvPipelineConfig& cfg) {
    RvPipelineResult res;
    auto grid = grid_prices(ticks, cfg.slot_seconds, cfg.preavg_window);
    res.diagnostics = grid.diagnostics;
    res.days = grid.days.size();
    if (grid.days.empty()) throw DataError("no trading days in the tick data");
    auto panel = log_returns(grid);
    if (cfg.truncate) {
        panel = truncate_jumps(panel, cfg.truncation_window_days, cfg.truncation_c, &res.zeroed);
        res.diagnostics.push_back(std::to_string(res.zeroed) + " returns zeroed by jump truncation");
    }
    if (cfg.diurnal) {
        res.diurnal = diurnal_factors(panel, &res.diagnostics);
        panel = apply_diurnal(panel, res.diurnal);
    }
    if (cfg.day_of_week) {
        res.dow = dow_factors(panel.days, panel.daily_rv(), &res.diagnostics);
        panel = apply_dow(panel, res.dow);
    }
    res.rv = block_rv(panel, cfg.blocks_per_day);
    res.rv.corrected = cfg.diurnal || cfg.day_of_week;
    for (const auto& d : res.rv.diagnostics) res.diagnostics.push_back(d);
    return res;
}

}  // namespace mcle::hf
