#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcle/hf/ticks.hpp"
#include "mcle/simulation.hpp"

namespace mcle::hf {

// Log prices at the slot boundaries of each trading day. Day d holds
// slots_per_day + 1 values: index 0 is the open, index s the close of slot s.
struct GridSeries {
    std::vector<std::int64_t> days;  // epoch day numbers with trades
    int slot_seconds = 15;
    int slots_per_day = 5760;
    std::vector<double> log_price;   // days.size() * (slots_per_day + 1)
    std::vector<std::string> diagnostics;

    [[nodiscard]] double at(std::size_t d, std::size_t s) const {
        return log_price[d * static_cast<std::size_t>(slots_per_day + 1) + s];
    }
};

// Intraday log-returns, day-major.
struct ReturnPanel {
    std::vector<std::int64_t> days;
    int slots_per_day = 0;
    double slot_seconds = 0.0;
    std::vector<double> r;

    [[nodiscard]] double& at(std::size_t d, std::size_t s) { return r[d * static_cast<std::size_t>(slots_per_day) + s]; }
    [[nodiscard]] double at(std::size_t d, std::size_t s) const {
        return r[d * static_cast<std::size_t>(slots_per_day) + s];
    }
    [[nodiscard]] std::vector<double> daily_rv() const;
};

// Blockwise series on the calendar grid; missing days and dropped blocks are gaps.
struct RvSeries {
    std::int64_t first_day = 0;
    int blocks_per_day = 12;
    std::vector<double> values;        // log RV (or log volume)
    std::vector<double> raw;           // RV (or volume) before the log
    std::vector<std::uint8_t> observed;
    bool corrected = false;
    std::size_t dropped_blocks = 0;
    std::size_t missing_days = 0;
    std::vector<std::string> diagnostics;

    [[nodiscard]] double delta() const { return 1.0 / blocks_per_day; }
    [[nodiscard]] SampleSeries to_series(const std::string& label = "rv") const;
};

// Causal pre-averaging: mean log price of the last `preavg_window` trades inside
// each slot, previous tick when the slot is empty. Days without trades are dropped.
[[nodiscard]] GridSeries grid_prices(const std::vector<TickRecord>& ticks, int slot_seconds = 15,
                                     int preavg_window = 5);

[[nodiscard]] ReturnPanel log_returns(const GridSeries& g);

// Per-slot mean squared return, normalized to sum to one and floored at 1e-12.
[[nodiscard]] std::vector<double> diurnal_factors(const ReturnPanel& p, std::vector<std::string>* notes = nullptr);
// r / sqrt(f_s * slots_per_day), which leaves the total squared return unchanged.
[[nodiscard]] ReturnPanel apply_diurnal(const ReturnPanel& p, const std::vector<double>& factors);

// Mean daily RV per weekday (0 = Sunday), normalized to average one.
[[nodiscard]] std::array<double, 7> dow_factors(const std::vector<std::int64_t>& days,
                                                const std::vector<double>& daily_rv,
                                                std::vector<std::string>* notes = nullptr);
[[nodiscard]] ReturnPanel apply_dow(const ReturnPanel& p, const std::array<double, 7>& factors);

// Zeroes |r| > c * sqrt(BV) * (1/slots_per_day)^0.49 with BV the daily bipower
// variation averaged over the trailing window_days.
[[nodiscard]] ReturnPanel truncate_jumps(const ReturnPanel& p, int window_days = 1, double c = 4.0,
                                         std::size_t* zeroed = nullptr);

[[nodiscard]] RvSeries block_rv(const ReturnPanel& p, int blocks_per_day = 12);

struct SignatureRow {
    int seconds = 0;
    double mean_rv = 0.0;
    double std_error = 0.0;
    double scaled = 0.0;  // mean_rv over the reference-frequency mean
    double lower = 0.0;   // scaled -/+ 2 standard errors of the ratio
    double upper = 0.0;
    std::size_t days = 0;
};

// Average daily RV from previous-tick sampling at each frequency, scaled by the
// value at reference_seconds.
[[nodiscard]] std::vector<SignatureRow> volatility_signature(const std::vector<TickRecord>& ticks,
                                                             const std::vector<int>& seconds,
                                                             int reference_seconds = 600);

// Blockwise quote volume: per-time-of-day factors on level volume, log, then
// linear-trend residuals with the intercept retained.
[[nodiscard]] RvSeries volume_series(const std::vector<TickRecord>& ticks, int blocks_per_day = 12);

inline const std::vector<int> kVolumeSweepSeconds = {7200, 3600, 1800, 900, 600, 300, 120, 60, 30, 15};
[[nodiscard]] std::vector<RvSeries> volume_sweep(const std::vector<TickRecord>& ticks,
                                                 const std::vector<int>& seconds = kVolumeSweepSeconds);

struct RvPipelineConfig {
    int slot_seconds = 15;
    int preavg_window = 5;
    int blocks_per_day = 12;
    bool truncate = true;
    double truncation_c = 4.0;
    int truncation_window_days = 1;
    bool diurnal = true;
    bool day_of_week = true;
};

struct RvPipelineResult {
    RvSeries rv;
    std::vector<double> diurnal;
    std::array<double, 7> dow{1, 1, 1, 1, 1, 1, 1};
    std::size_t zeroed = 0;
    std::size_t days = 0;
    std::vector<std::string> diagnostics;
};

[[nodiscard]] RvPipelineResult run_rv_pipeline(const std::vector<TickRecord>& ticks, const RvPipelineConfig& cfg = {});

// CSV with header day,slot,value; gaps are written with an empty value.
void write_block_csv(const RvSeries& s, std::ostream& out);

}  // namespace mcle::hf
