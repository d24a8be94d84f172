#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "mcle/errors.hpp"
#include "mcle/hf/pipeline.hpp"

namespace mcle::hf {

namespace {

constexpr double kFactorFloor = 1e-12;

void check_panel(const ReturnPanel& p) {
    if (p.slots_per_day <= 0) throw ConfigError("return panel has no slots");
    if (p.r.size() != p.days.size() * static_cast<std::size_t>(p.slots_per_day))
        throw DataError("return panel size mismatch");
}

}  // namespace

std::vector<double> diurnal_factors(const ReturnPanel& p, std::vector<std::string>* notes) {
    check_panel(p);
    if (p.days.empty()) throw DataError("no days to estimate diurnal factors from");
    if (notes && p.days.size() < 30)
        notes->push_back("diurnal factors estimated from fewer than 30 days (" + std::to_string(p.days.size()) + ")");
    const auto S = static_cast<std::size_t>(p.slots_per_day);
    std::vector<double> f(S, 0.0);
    for (std::size_t d = 0; d < p.days.size(); ++d)
        for (std::size_t s = 0; s < S; ++s) f[s] += p.at(d, s) * p.at(d, s);
    double total = 0.0;
    for (auto& v : f) {
        v /= static_cast<double>(p.days.size());
        total += v;
    }
    if (!(total > 0.0)) throw DataError("all returns are zero; diurnal factors undefined");
    std::size_t floored = 0;
    for (auto& v : f) {
        v /= total;
        if (v < kFactorFloor) {
            v = kFactorFloor;
            ++floored;
        }
    }
    if (floored > 0) {
        double s = 0.0;
        for (double v : f) s += v;
        for (auto& v : f) v /= s;
        if (notes) notes->push_back(std::to_string(floored) + " zero-variance slot factors floored at 1e-12");
    }
    return f;
}

ReturnPanel apply_diurnal(const ReturnPanel& p, const std::vector<double>& factors) {
    check_panel(p);
    const auto S = static_cast<std::size_t>(p.slots_per_day);
    if (factors.size() != S) throw ConfigError("diurnal factor count does not match slots per day");
    ReturnPanel out = p;
    for (std::size_t d = 0; d < p.days.size(); ++d)
        for (std::size_t s = 0; s < S; ++s) out.at(d, s) = p.at(d, s) / std::sqrt(factors[s] * static_cast<double>(S));
    return out;
}

std::array<double, 7> dow_factors(const std::vector<std::int64_t>& days, const std::vector<double>& daily_rv,
                                  std::vector<std::string>* notes) {
    if (days.size() != daily_rv.size()) throw DataError("day and RV counts differ");
    std::array<double, 7> sum{}, f{};
    std::array<std::size_t, 7> cnt{};
    for (std::size_t d = 0; d < days.size(); ++d) {
        const int w = weekday_of_day(days[d]);
        sum[static_cast<std::size_t>(w)] += daily_rv[d];
        ++cnt[static_cast<std::size_t>(w)];
    }
    if (notes && !days.empty() && days.back() - days.front() < 7)
        notes->push_back("warning: day-of-week factors estimated from a single week");
    double avg = 0.0;
    int present = 0;
    for (std::size_t w = 0; w < 7; ++w) {
        if (cnt[w] == 0) continue;
        f[w] = sum[w] / static_cast<double>(cnt[w]);
        avg += f[w];
        ++present;
    }
    if (present == 0 || !(avg > 0.0)) {
        f.fill(1.0);
        if (notes) notes->push_back("day-of-week factors undefined; set to one");
        return f;
    }
    avg /= present;
    static const char* names[] = {"Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};
    for (std::size_t w = 0; w < 7; ++w) {
        if (cnt[w] == 0) {
            f[w] = 1.0;
            if (notes) notes->push_back(std::string("no ") + names[w] + " in sample; factor set to one");
        } else {
            f[w] /= avg;
        }
    }
    return f;
}

ReturnPanel apply_dow(const ReturnPanel& p, const std::array<double, 7>& factors) {
    check_panel(p);
    ReturnPanel out = p;
    const auto S = static_cast<std::size_t>(p.slots_per_day);
    for (std::size_t d = 0; d < p.days.size(); ++d) {
        const double f = factors[static_cast<std::size_t>(weekday_of_day(p.days[d]))];
        if (!(f > 0.0)) continue;
        const double s = 1.0 / std::sqrt(f);
        for (std::size_t j = 0; j < S; ++j) out.at(d, j) *= s;
    }
    return out;
}

ReturnPanel truncate_jumps(const ReturnPanel& p, int window_days, double c, std::size_t* zeroed) {
    check_panel(p);
    if (!(c > 0.0)) throw ConfigError("truncation constant must be positive");
    if (window_days < 1) throw ConfigError("truncation window must be at least one day");
    const auto S = static_cast<std::size_t>(p.slots_per_day);
    std::vector<double> bv(p.days.size(), 0.0);
    for (std::size_t d = 0; d < p.days.size(); ++d) {
        double s = 0.0;
        for (std::size_t j = 1; j < S; ++j) s += std::abs(p.at(d, j)) * std::abs(p.at(d, j - 1));
        bv[d] = 0.5 * std::numbers::pi * s;
    }
    const double scale = c * std::pow(1.0 / static_cast<double>(S), 0.49);
    ReturnPanel out = p;
    std::size_t count = 0;
    for (std::size_t d = 0; d < p.days.size(); ++d) {
        double local = 0.0;
        int used = 0;
        for (std::size_t k = d + 1; k-- > 0 && used < window_days;) {
            if (p.days[d] - p.days[k] >= window_days) break;
            local += bv[k];
            ++used;
        }
        local /= used;
        if (!(local > 0.0)) continue;
        const double limit = scale * std::sqrt(local);
        for (std::size_t j = 0; j < S; ++j) {
            if (std::abs(out.at(d, j)) > limit) {
                out.at(d, j) = 0.0;
                ++count;
            }
        }
    }
    if (zeroed) *zeroed = count;
    return out;
}

RvSeries block_rv(const ReturnPanel& p, int blocks_per_day) {
    check_panel(p);
    if (blocks_per_day <= 0 || p.slots_per_day % blocks_per_day != 0)
        throw ConfigError("slots per day (" + std::to_string(p.slots_per_day) + ") not divisible by blocks per day (" +
                          std::to_string(blocks_per_day) + ")");
    RvSeries out;
    out.blocks_per_day = blocks_per_day;
    if (p.days.empty()) return out;
    const auto B = static_cast<std::size_t>(blocks_per_day);
    const std::size_t m = static_cast<std::size_t>(p.slots_per_day) / B;
    out.first_day = p.days.front();
    const auto span = static_cast<std::size_t>(p.days.back() - p.days.front() + 1);
    out.values.assign(span * B, 0.0);
    out.raw.assign(span * B, 0.0);
    out.observed.assign(span * B, 0);
    for (std::size_t d = 0; d < p.days.size(); ++d) {
        const auto cal = static_cast<std::size_t>(p.days[d] - out.first_day);
        for (std::size_t b = 0; b < B; ++b) {
            double rv = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double r = p.at(d, b * m + j);
                rv += r * r;
            }
            const std::size_t idx = cal * B + b;
            out.raw[idx] = rv;
            if (rv > 0.0) {
                out.values[idx] = std::log(rv);
                out.observed[idx] = 1;
            } else {
                ++out.dropped_blocks;
            }
        }
    }
    out.missing_days = span - p.days.size();
    if (out.dropped_blocks > 0)
        out.diagnostics.push_back(std::to_string(out.dropped_blocks) + " zero-RV blocks dropped as gaps");
    if (out.missing_days > 0)
        out.diagnostics.push_back(std::to_string(out.missing_days) + " calendar days without data left as gaps");
    return out;
}

SampleSeries RvSeries::to_series(const std::string& label) const {
    SampleSeries s;
    s.values = values;
    s.delta = delta();
    s.origin = Origin::empirical;
    s.label = label;
    if (std::any_of(observed.begin(), observed.end(), [](std::uint8_t o) { return o == 0; })) s.observed = observed;
    return s;
}

void write_block_csv(const RvSeries& s, std::ostream& out) {
    out << "day,slot,value\n";
    const auto B = static_cast<std::size_t>(s.blocks_per_day);
    char line[96];
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const long long day = static_cast<long long>(s.first_day) + static_cast<long long>(i / B);
        if (s.observed[i])
            std::snprintf(line, sizeof line, "%lld,%zu,%.12g\n", day, i % B, s.values[i]);
        else
            std::snprintf(line, sizeof line, "%lld,%zu,\n", day, i % B);
        out << line;
    }
}

}  // namespace mcle::hf
