#include "mcle/harness/series_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "mcle/errors.hpp"

namespace mcle::harness {

namespace {

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream s(line);
    while (std::getline(s, cur, ',')) {
        while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
        while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
        out.push_back(cur);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool to_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

}  // namespace

LoadedSeries read_series_csv(const std::string& path, std::optional<double> delta) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open series file " + path);
    LoadedSeries out;
    auto& s = out.series;
    s.origin = Origin::empirical;
    s.label = path;
    std::string line;
    enum class Layout { unknown, path, block, bare } layout = Layout::unknown;
    std::vector<double> times;
    std::size_t max_slot = 0;
    std::vector<std::uint8_t> mask;
    bool gaps = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto body = line.substr(1);
            std::istringstream ts(body);
            std::string tok;
            while (ts >> tok) {
                auto eq = tok.find('=');
                if (eq != std::string::npos) out.tags[tok.substr(0, eq)] = tok.substr(eq + 1);
            }
            continue;
        }
        auto f = fields(line);
        if (layout == Layout::unknown) {
            if (f.size() >= 3 && f[0] == "index" && f[1] == "time" && f[2] == "value") {
                layout = Layout::path;
                continue;
            }
            if (f.size() >= 3 && f[0] == "day" && f[1] == "slot" && f[2] == "value") {
                layout = Layout::block;
                continue;
            }
            double probe;
            if (f.size() == 1 && to_double(f[0], probe)) {
                layout = Layout::bare;
            } else if (f.size() == 1 && !to_double(f[0], probe)) {
                layout = Layout::bare;
                continue;  // single-column header
            } else {
                throw DataError(path + ": unrecognized series header '" + line + "'");
            }
        }
        double v = 0.0;
        switch (layout) {
            case Layout::path: {
                double t = 0.0;
                if (f.size() < 3 || !to_double(f[1], t)) throw DataError(path + ": bad row at line " + std::to_string(lineno));
                times.push_back(t);
                if (f[2].empty()) {
                    s.values.push_back(0.0);
                    mask.push_back(0);
                    gaps = true;
                } else {
                    if (!to_double(f[2], v)) throw DataError(path + ": bad value at line " + std::to_string(lineno));
                    s.values.push_back(v);
                    mask.push_back(1);
                }
                break;
            }
            case Layout::block: {
                double slot = 0.0;
                if (f.size() < 3 || !to_double(f[1], slot)) throw DataError(path + ": bad row at line " + std::to_string(lineno));
                max_slot = std::max(max_slot, static_cast<std::size_t>(slot));
                if (f[2].empty()) {
                    s.values.push_back(0.0);
                    mask.push_back(0);
                    gaps = true;
                } else {
                    if (!to_double(f[2], v)) throw DataError(path + ": bad value at line " + std::to_string(lineno));
                    s.values.push_back(v);
                    mask.push_back(1);
                }
                break;
            }
            case Layout::bare:
                if (!to_double(f[0], v)) throw DataError(path + ": bad value at line " + std::to_string(lineno));
                s.values.push_back(v);
                mask.push_back(1);
                break;
            case Layout::unknown: break;
        }
    }
    if (s.values.empty()) throw DataError(path + ": series is empty");
    if (gaps) s.observed = std::move(mask);
    double d = 1.0;
    double tagged = 0.0;
    if (delta) {
        d = *delta;
    } else if (auto it = out.tags.find("delta"); it != out.tags.end() && to_double(it->second, tagged)) {
        d = tagged;
    } else if (layout == Layout::path && times.size() >= 2) {
        d = times[1] - times[0];
    } else if (layout == Layout::block) {
        d = 1.0 / static_cast<double>(max_slot + 1);
    }
    if (!(d > 0.0) || !std::isfinite(d)) throw DataError(path + ": cannot determine a positive time step");
    s.delta = d;
    s.validate();
    return out;
}

}  // namespace mcle::harness
