#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mcle::hf {

inline constexpr std::int64_t kMsPerDay = 86'400'000;

struct TickRecord {
    std::int64_t timestamp_ms = 0;  // epoch milliseconds, UTC
    double price = 0.0;
    double quantity = 0.0;
    double quote_volume = 0.0;
};

struct IngestReport {
    std::size_t rows = 0;
    std::size_t accepted = 0;
    std::size_t malformed = 0;
    std::size_t out_of_order = 0;
    std::size_t files = 0;
    std::vector<std::string> examples;  // first few rejected lines
};

struct TickData {
    std::vector<TickRecord> ticks;
    IngestReport report;
};

// Trade-archive CSV: id, price, qty, quote_qty, time, is_buyer_maker, is_best_match.
// A header row is optional; when present columns are located by name.
// Microsecond timestamps are converted to milliseconds.
[[nodiscard]] TickData ingest_ticks(std::istream& in, double max_malformed_fraction = 0.01);
[[nodiscard]] TickData ingest_ticks(const std::string& path, double max_malformed_fraction = 0.01);
// Every *.csv in the directory, in file-name order, merged and sorted.
[[nodiscard]] TickData ingest_directory(const std::string& dir, double max_malformed_fraction = 0.01);

void write_ticks_csv(const std::vector<TickRecord>& ticks, std::ostream& out);

[[nodiscard]] inline std::int64_t day_of(std::int64_t ms) {
    return ms >= 0 ? ms / kMsPerDay : -((-ms + kMsPerDay - 1) / kMsPerDay);
}

// 0 = Sunday.
[[nodiscard]] inline int weekday_of_day(std::int64_t day) {
    return static_cast<int>(((day + 4) % 7 + 7) % 7);
}

}  // namespace mcle::hf
