#include "mcle/hf/ticks.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "mcle/errors.hpp"

namespace mcle::hf {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            auto f = line.substr(start, i - start);
            while (!f.empty() && (f.front() == ' ' || f.front() == '"')) f.remove_prefix(1);
            while (!f.empty() && (f.back() == ' ' || f.back() == '"' || f.back() == '\r')) f.remove_suffix(1);
            out.push_back(f);
            start = i + 1;
        }
    }
    return out;
}

bool parse_double(std::string_view s, double& v) {
    if (s.empty()) return false;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(v);
}

bool parse_int(std::string_view s, std::int64_t& v) {
    if (s.empty()) return false;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return true;
    double d;
    if (!parse_double(s, d) || std::abs(d) > 9e18) return false;
    v = static_cast<std::int64_t>(std::llround(d));
    return true;
}

struct Columns {
    std::size_t price = 1, qty = 2, quote = 3, time = 4;
};

std::string lower(std::string_view s) {
    std::string o(s);
    std::transform(o.begin(), o.end(), o.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return o;
}

bool looks_like_header(const std::vector<std::string_view>& f) {
    for (auto s : f) {
        double d;
        if (!s.empty() && !parse_double(s, d) && lower(s) != "true" && lower(s) != "false") return true;
    }
    return false;
}

Columns map_header(const std::vector<std::string_view>& f) {
    Columns c;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto n = lower(f[i]);
        if (n == "price") c.price = i;
        else if (n == "qty" || n == "quantity" || n == "base_qty") c.qty = i;
        else if (n == "quote_qty" || n == "quoteqty" || n == "quote_quantity" || n == "quote_volume") c.quote = i;
        else if (n == "time" || n == "timestamp" || n == "transact_time" || n == "timestamp_ms") c.time = i;
    }
    return c;
}

void finish(TickData& d, double max_fraction) {
    std::stable_sort(d.ticks.begin(), d.ticks.end(),
                     [](const TickRecord& a, const TickRecord& b) { return a.timestamp_ms < b.timestamp_ms; });
    d.report.accepted = d.ticks.size();
    if (d.report.rows > 0 &&
        static_cast<double>(d.report.malformed) > max_fraction * static_cast<double>(d.report.rows)) {
        std::ostringstream s;
        s << d.report.malformed << " of " << d.report.rows << " rows malformed, above the "
          << 100.0 * max_fraction << "% limit";
        if (!d.report.examples.empty()) s << "; first: '" << d.report.examples.front() << "'";
        throw DataError(s.str());
    }
}

void read_stream(std::istream& in, TickData& d) {
    std::string line;
    bool first = true;
    Columns cols;
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        auto f = split(line);
        if (first) {
            first = false;
            if (looks_like_header(f)) {
                cols = map_header(f);
                continue;
            }
        }
        ++d.report.rows;
        TickRecord t;
        const std::size_t need = std::max({cols.price, cols.qty, cols.quote, cols.time}) + 1;
        bool ok = f.size() >= need && parse_double(f[cols.price], t.price) && parse_double(f[cols.qty], t.quantity) &&
                  parse_double(f[cols.quote], t.quote_volume) && parse_int(f[cols.time], t.timestamp_ms) &&
                  t.price > 0.0 && t.quantity >= 0.0 && t.quote_volume >= 0.0;
        if (!ok) {
            ++d.report.malformed;
            if (d.report.examples.size() < 5) d.report.examples.push_back(line);
            continue;
        }
        if (t.timestamp_ms > 100'000'000'000'000LL) t.timestamp_ms /= 1000;
        if (t.timestamp_ms < last) ++d.report.out_of_order;
        last = std::max(last, t.timestamp_ms);
        d.ticks.push_back(t);
    }
}

}  // namespace

TickData ingest_ticks(std::istream& in, double max_malformed_fraction) {
    TickData d;
    d.report.files = 1;
    read_stream(in, d);
    finish(d, max_malformed_fraction);
    return d;
}

TickData ingest_ticks(const std::string& path, double max_malformed_fraction) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open tick file " + path);
    return ingest_ticks(f, max_malformed_fraction);
}

TickData ingest_directory(const std::string& dir, double max_malformed_fraction) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        if (fs::is_regular_file(dir)) return ingest_ticks(dir, max_malformed_fraction);
        throw DataError("tick data directory " + dir + " does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    TickData d;
    for (const auto& p : files) {
        std::ifstream f(p);
        if (!f) throw DataError("cannot open tick file " + p.string());
        read_stream(f, d);
        ++d.report.files;
    }
    finish(d, max_malformed_fraction);
    return d;
}

void write_ticks_csv(const std::vector<TickRecord>& ticks, std::ostream& out) {
    out << "id,price,qty,quote_qty,time,is_buyer_maker,is_best_match\n";
    char line[160];
    std::size_t id = 0;
    for (const auto& t : ticks) {
        std::snprintf(line, sizeof line, "%zu,%.12g,%.12g,%.12g,%lld,false,true\n", id++, t.price, t.quantity,
                      t.quote_volume, static_cast<long long>(t.timestamp_ms));
        out << line;
    }
}

}  // namespace mcle::hf
