#pragma once

#include <map>
#include <optional>
#include <string>

#include "mcle/simulation.hpp"

namespace mcle::harness {

struct LoadedSeries {
    SampleSeries series;
    std::map<std::string, std::string> tags;  // from leading "# key=value" comments
};

// Reads `index,time,value`, `day,slot,value` (empty value = gap) or a bare
// value column. delta comes from the override, a delta tag, the time column or
// the slot count, in that order.
[[nodiscard]] LoadedSeries read_series_csv(const std::string& path, std::optional<double> delta = std::nullopt);

}  // namespace mcle::harness
