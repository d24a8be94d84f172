#include <cmath>

#include "mcle/errors.hpp"
#include "mcle/hf/pipeline.hpp"

namespace mcle::hf {

namespace {

void check_slot(int slot_seconds) {
    if (slot_seconds <= 0 || 86400 % slot_seconds != 0)
        throw ConfigError("slot length must divide 86400 seconds, got " + std::to_string(slot_seconds));
}

}  // namespace

std::vector<double> ReturnPanel::daily_rv() const {
    const auto S = static_cast<std::size_t>(slots_per_day);
    std::vector<double> out(days.size(), 0.0);
    for (std::size_t d = 0; d < days.size(); ++d)
        for (std::size_t s = 0; s < S; ++s) out[d] += at(d, s) * at(d, s);
    return out;
}

GridSeries grid_prices(const std::vector<TickRecord>& ticks, int slot_seconds, int preavg_window) {
    check_slot(slot_seconds);
    if (preavg_window < 1) throw ConfigError("pre-averaging window must be at least one trade");
    GridSeries g;
    g.slot_seconds = slot_seconds;
    g.slots_per_day = 86400 / slot_seconds;
    if (ticks.empty()) return g;
    for (std::size_t i = 1; i < ticks.size(); ++i)
        if (ticks[i].timestamp_ms < ticks[i - 1].timestamp_ms) throw DataError("ticks must be sorted by time");

    std::vector<double> lp(ticks.size());
    for (std::size_t i = 0; i < ticks.size(); ++i) lp[i] = std::log(ticks[i].price);
    const std::int64_t slot_ms = static_cast<std::int64_t>(slot_seconds) * 1000;
    const auto S = static_cast<std::size_t>(g.slots_per_day);
    const std::int64_t first = day_of(ticks.front().timestamp_ms);
    const std::int64_t last = day_of(ticks.back().timestamp_ms);

    std::size_t next = 0;  // first tick with timestamp > current boundary
    for (std::int64_t day = first; day <= last; ++day) {
        const std::int64_t start = day * kMsPerDay;
        // Does the day contain any trade?
        std::size_t probe = next;
        while (probe < ticks.size() && ticks[probe].timestamp_ms < start) ++probe;
        if (probe >= ticks.size() || ticks[probe].timestamp_ms >= start + kMsPerDay) {
            g.diagnostics.push_back("day " + std::to_string(day) + " has no trades and was dropped");
            next = probe;
            continue;
        }
        g.days.push_back(day);
        for (std::size_t j = 0; j <= S; ++j) {
            const std::int64_t t = start + static_cast<std::int64_t>(j) * slot_ms;
            while (next < ticks.size() && ticks[next].timestamp_ms <= t) ++next;
            double value;
            if (next == 0) {
                // Nothing traded yet: back-fill from the day's first trade.
                value = lp[probe];
                if (j == 0) g.diagnostics.push_back("day " + std::to_string(day) + " open back-filled from first trade");
            } else {
                double s = 0.0;
                int c = 0;
                for (std::size_t k = next; k > 0 && c < preavg_window; --k) {
                    if (ticks[k - 1].timestamp_ms <= t - slot_ms) break;
                    s += lp[k - 1];
                    ++c;
                }
                value = c > 0 ? s / c : lp[next - 1];
            }
            g.log_price.push_back(value);
        }
    }
    return g;
}

ReturnPanel log_returns(const GridSeries& g) {
    ReturnPanel p;
    p.days = g.days;
    p.slots_per_day = g.slots_per_day;
    p.slot_seconds = g.slot_seconds;
    const auto S = static_cast<std::size_t>(g.slots_per_day);
    p.r.resize(g.days.size() * S);
    for (std::size_t d = 0; d < g.days.size(); ++d)
        for (std::size_t s = 0; s < S; ++s) p.at(d, s) = g.at(d, s + 1) - g.at(d, s);
    return p;
}

}  // namespace mcle::hf
