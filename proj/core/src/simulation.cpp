#include "mcle/simulation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

#include "mcle/errors.hpp"
#include "mcle/rng.hpp"

namespace mcle {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwDeleter {
    void operator()(void* p) const { fftw_free(p); }
};

constexpr double kNegativeTolerance = 1e-8;

// sqrt(lambda_k / m) for k = 0 .. m/2 of the circulant built from acv[0 .. m/2].
struct Factor {
    std::size_t m = 0;
    std::vector<double> root;
};

Factor embedding_factor(std::span<const double> acv, std::size_t half) {
    const std::size_t len = half + 1;
    std::unique_ptr<double, FftwDeleter> buf(static_cast<double*>(fftw_malloc(sizeof(double) * len)));
    std::copy(acv.begin(), acv.begin() + static_cast<std::ptrdiff_t>(len), buf.get());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_r2r_1d(static_cast<int>(len), buf.get(), buf.get(), FFTW_REDFT00, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    const double* lambda = buf.get();
    const double top = *std::max_element(lambda, lambda + len);
    const double low = *std::min_element(lambda, lambda + len);
    if (!(top > 0.0)) throw EmbeddingError("circulant embedding has no positive eigenvalue");
    if (low < -kNegativeTolerance * top) {
        std::ostringstream msg;
        msg << "circulant embedding not nonnegative definite: min eigenvalue " << low << " vs max " << top;
        throw EmbeddingError(msg.str());
    }
    Factor f;
    f.m = 2 * half;
    f.root.resize(len);
    const double scale = 1.0 / static_cast<double>(f.m);
    for (std::size_t k = 0; k < len; ++k) f.root[k] = std::sqrt(std::max(lambda[k], 0.0) * scale);
    return f;
}

std::vector<double> synthesize(const Factor& f, std::size_t n, std::uint64_t seed) {
    auto eng = rng::make_engine(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    const std::size_t m = f.m;
    std::unique_ptr<fftw_complex, FftwDeleter> buf(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m)));
    fftw_complex* w = buf.get();
    for (std::size_t k = 0; k < m; ++k) {
        const double s = f.root[k <= m / 2 ? k : m - k];
        w[k][0] = s * z(eng);
        w[k][1] = s * z(eng);
    }
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(m), w, w, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = w[j][0];
    return out;
}

std::size_t choose_half(std::size_t acv_len, std::size_t n) {
    const std::size_t pow2 = embedding_size(n);
    if (acv_len >= pow2 / 2 + 1) return pow2 / 2;
    return n - 1;
}

// Small LRU of unit-variance factors; large embeddings are not retained.
struct FactorCache {
    std::mutex mutex;
    std::list<std::pair<std::string, std::shared_ptr<const Factor>>> items;
    static constexpr std::size_t capacity = 8;
    static constexpr std::size_t max_m = std::size_t{1} << 22;
};

FactorCache& factor_cache() {
    static FactorCache c;
    return c;
}

template <class Build>
std::shared_ptr<const Factor> cached_factor(const std::string& key, std::size_t m, Build&& build) {
    auto& c = factor_cache();
    {
        std::lock_guard lock(c.mutex);
        for (auto it = c.items.begin(); it != c.items.end(); ++it) {
            if (it->first == key) {
                c.items.splice(c.items.begin(), c.items, it);
                return it->second;
            }
        }
    }
    auto f = std::make_shared<const Factor>(build());
    if (m <= FactorCache::max_m) {
        std::lock_guard lock(c.mutex);
        c.items.emplace_front(key, f);
        if (c.items.size() > FactorCache::capacity) c.items.pop_back();
    }
    return f;
}

std::string key_of(const char* tag, double a, double b, std::size_t n, double delta) {
    std::ostringstream k;
    k.precision(17);
    k << tag << '|' << a << '|' << b << '|' << n << '|' << delta;
    return k.str();
}

std::vector<double> draw_unit(std::size_t n, std::uint64_t seed, const std::string& key,
                              const std::function<double(std::size_t)>& unit_acv) {
    if (n == 0) throw DomainError("path length must be positive");
    if (n == 1) {
        auto eng = rng::make_engine(seed);
        return {std::sqrt(unit_acv(0)) * std::normal_distribution<double>(0.0, 1.0)(eng)};
    }
    const std::size_t half = embedding_size(n) / 2;
    auto f = cached_factor(key, 2 * half, [&] {
        std::vector<double> acv(half + 1);
        for (std::size_t j = 0; j <= half; ++j) acv[j] = unit_acv(j);
        return embedding_factor(acv, half);
    });
    return synthesize(*f, n, seed);
}

}  // namespace

bool SampleSeries::has_gaps() const {
    return std::any_of(observed.begin(), observed.end(), [](std::uint8_t o) { return o == 0; });
}

void SampleSeries::validate() const {
    if (values.empty()) throw DataError("series is empty");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DataError("series delta must be positive");
    if (!observed.empty() && observed.size() != values.size())
        throw DataError("observation mask length does not match series length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (is_observed(i) && !std::isfinite(values[i]))
            throw DataError("series has a non-finite value at index " + std::to_string(i));
    }
}

std::size_t embedding_size(std::size_t n) {
    if (n < 2) return 2;
    return std::bit_ceil(2 * (n - 1));
}

std::vector<double> circulant_embed(std::span<const double> acv, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("path length must be positive");
    if (acv.size() < n) throw DomainError("autocovariance prefix shorter than path length");
    if (!(acv[0] > 0.0)) throw DomainError("gamma_0 must be positive");
    for (double g : acv) {
        if (!std::isfinite(g) || std::abs(g) > acv[0] * (1.0 + 1e-12))
            throw DomainError("autocovariance entries must be finite and bounded by gamma_0");
    }
    if (n == 1) {
        auto eng = rng::make_engine(seed);
        return {std::sqrt(acv[0]) * std::normal_distribution<double>(0.0, 1.0)(eng)};
    }
    const std::size_t half = choose_half(acv.size(), n);
    return synthesize(embedding_factor(acv, half), n, seed);
}

double fgn_acv(double hurst, std::size_t j, double delta) {
    const double p = 2.0 * hurst;
    const double scale = 0.5 * std::pow(delta, p);
    if (j == 0) return 2.0 * scale;
    if (j == 1) return scale * (std::pow(2.0, p) - 2.0);
    // j^{2H} [(1+1/j)^{2H} - 2 + (1-1/j)^{2H}] without the cancellation.
    const double x = 1.0 / static_cast<double>(j);
    const double jp = std::pow(static_cast<double>(j), p);
    return scale * jp * (std::expm1(p * std::log1p(x)) + std::expm1(p * std::log1p(-x)));
}

SampleSeries simulate_fgn(double hurst, std::size_t n, double delta, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("hurst must lie in (0,1)");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    auto unit = draw_unit(n, seed, key_of("fgn", hurst, 0.0, n, 1.0),
                          [hurst](std::size_t j) { return fgn_acv(hurst, j, 1.0); });
    const double s = std::pow(delta, hurst);
    for (auto& v : unit) v *= s;
    SampleSeries out;
    out.values = std::move(unit);
    out.delta = delta;
    out.label = "fgn";
    return out;
}

SampleSeries simulate_fou(const FouParams& p, std::size_t n, double delta, std::uint64_t seed,
                          FouSimOptions opt) {
    p.validate();
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (n == 0) throw DomainError("path length must be positive");
    auto eng = rng::make_engine(rng::derive_seed(seed, 2));
    double y = p.mu + p.nu * std::normal_distribution<double>(0.0, 1.0)(eng);
    SampleSeries out;
    out.delta = delta;
    out.label = "fou";
    out.values.resize(n);
    const double steps = std::ceil(std::max(opt.burn_in_horizons, 0.0) / (p.kappa * delta));
    const std::size_t burn = steps < static_cast<double>(opt.max_burn_in) ? static_cast<std::size_t>(steps)
                                                                             : opt.max_burn_in;
    const std::size_t total = burn + n - 1;
    std::vector<double> incr;
    if (total > 0) incr = simulate_fgn(p.hurst, total, delta, rng::derive_seed(seed, 1)).values;
    const double decay = std::exp(-p.kappa * delta);
    double gain = p.nu * p.scale_b() * std::exp(-0.5 * p.kappa * delta);
    if (opt.exact_ou_variance)
        gain = p.nu * std::sqrt(-std::expm1(-2.0 * p.kappa * delta)) / std::pow(delta, p.hurst);
    for (std::size_t t = 0; t < total; ++t) {
        if (t >= burn) out.values[t - burn] = y;
        y = p.mu + (y - p.mu) * decay + gain * incr[t];
    }
    out.values[n - 1] = y;
    return out;
}

SampleSeries simulate_cauchy(const CauchyParams& p, std::size_t n, double delta, std::uint64_t seed) {
    p.validate();
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    auto unit = draw_unit(n, seed, key_of("cauchy", p.alpha, p.beta, n, delta), [&](std::size_t j) {
        return cauchy_acf(p, static_cast<double>(j) * delta);
    });
    for (auto& v : unit) v = p.mu + p.nu * v;
    SampleSeries out;
    out.values = std::move(unit);
    out.delta = delta;
    out.label = "cauchy";
    return out;
}

SampleSeries simulate(const SimPlan& plan, FouSimOptions opt) {
    if (plan.n < 1) throw DomainError("path length must be positive");
    if (const auto* f = std::get_if<FouParams>(&plan.model.params))
        return simulate_fou(*f, plan.n, plan.delta, plan.seed, opt);
    return simulate_cauchy(std::get<CauchyParams>(plan.model.params), plan.n, plan.delta, plan.seed);
}

void write_path_csv(const SampleSeries& s, std::ostream& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "index,time,value\n";
    char line[96];
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!s.is_observed(i)) {
            std::snprintf(line, sizeof line, "%zu,%.12g,\n", i, static_cast<double>(i) * s.delta);
        } else {
            std::snprintf(line, sizeof line, "%zu,%.12g,%.12g\n", i, static_cast<double>(i) * s.delta,
                          s.values[i]);
        }
        out << line;
    }
}

void write_path_csv(const SampleSeries& s, const std::string& path, const std::vector<std::string>& comments) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot open " + path + " for writing");
    write_path_csv(s, f, comments);
}

namespace embedding_cache {

void clear() {
    auto& c = factor_cache();
    std::lock_guard lock(c.mutex);
    c.items.clear();
}

std::size_t size() {
    auto& c = factor_cache();
    std::lock_guard lock(c.mutex);
    return c.items.size();
}

}  // namespace embedding_cache

}  // namespace mcle
