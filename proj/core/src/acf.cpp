#include "mcle/acf.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <unordered_map>

#include "mcle/errors.hpp"
#include "mcle/quadrature.hpp"

namespace mcle {

std::string to_string(Family f) { return f == Family::fou ? "fou" : "cauchy"; }

Family parse_family(const std::string& name) {
    if (name == "fou" || name == "fOU" || name == "FOU") return Family::fou;
    if (name == "cauchy" || name == "Cauchy" || name == "CAUCHY") return Family::cauchy;
    throw ConfigError("unknown family '" + name + "' (expected fou or cauchy)");
}

std::string to_string(Roughness r) {
    switch (r) {
        case Roughness::rough: return "ROUGH";
        case Roughness::brownian: return "BROWNIAN";
        case Roughness::smooth: return "SMOOTH";
    }
    return "?";
}

std::string to_string(Memory m) { return m == Memory::long_memory ? "LONG" : "SHORT"; }

std::string to_string(CltCase c) {
    switch (c) {
        case CltCase::case1_gaussian: return "CASE1_GAUSSIAN";
        case CltCase::case2_boundary: return "CASE2_BOUNDARY";
        case CltCase::case3_rosenblatt: return "CASE3_ROSENBLATT";
    }
    return "?";
}

namespace {

void check_fou_shape(double kappa, double hurst) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("fOU kappa must be positive and finite");
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("fOU hurst must lie in (0,1)");
}

void check_cauchy_shape(double beta, double alpha) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("Cauchy beta must be positive");
    if (!(alpha > -0.5 && alpha < 0.5)) throw DomainError("Cauchy alpha must lie in (-1/2,1/2)");
}

void check_location_scale(double mu, double nu) {
    if (!std::isfinite(mu)) throw DomainError("mean must be finite");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("nu must be positive and finite");
}

constexpr double kTruncation = 40.0;
constexpr double kAbsTol = 1e-13;

// 0.5 * int e^{-|y|} (|x+y|^{2H} - x^{2H}) dy for x > 0.
double fou_kernel_integral(double x, double hurst) {
    const double p = 2.0 * hurst;
    const double xp = std::pow(x, p);
    auto diff = [&](double y) {
        if (y > -0.5 * x) return xp * std::expm1(p * std::log1p(y / x));
        return std::pow(std::abs(x + y), p) - xp;
    };
    // The substitution y = a + (b-a) t^4 flattens the |x+y|^{2H} cusp at a.
    auto cusp_left = [&](double a, double b) {
        const double w = b - a;
        return quad::integrate(
                   [&](double t) {
                       const double t2 = t * t;
                       const double y = a + w * t2 * t2;
                       return std::exp(-std::abs(y)) * diff(y) * 4.0 * w * t2 * t;
                   },
                   0.0, 1.0, kAbsTol)
            .value;
    };
    auto cusp_right = [&](double a, double b) {
        const double w = b - a;
        return quad::integrate(
                   [&](double t) {
                       const double t2 = t * t;
                       const double y = b - w * t2 * t2;
                       return std::exp(-std::abs(y)) * diff(y) * 4.0 * w * t2 * t;
                   },
                   0.0, 1.0, kAbsTol)
            .value;
    };
    auto plain = [&](double a, double b) {
        return quad::integrate([&](double y) { return std::exp(-std::abs(y)) * diff(y); }, a, b,
                               kAbsTol)
            .value;
    };
    double total = 0.0;
    if (x < kTruncation) {
        total = cusp_right(-kTruncation, -x) + cusp_left(-x, 0.0) + plain(0.0, kTruncation);
    } else {
        total = plain(-kTruncation, 0.0) + plain(0.0, kTruncation);
    }
    return 0.5 * total;
}

struct CacheKey {
    std::uint64_t a, b, delta;
    bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const {
        std::uint64_t h = k.a * 0x9E3779B97F4A7C15ULL;
        h ^= k.b + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h ^= k.delta + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

std::uint64_t bits(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    return u;
}

struct Memo {
    std::mutex mutex;
    std::unordered_map<CacheKey, std::unordered_map<std::size_t, double>, CacheKeyHash> table;
    std::size_t entries = 0;
    bool enabled = true;
    static constexpr std::size_t max_entries = 4'000'000;
};

Memo& memo() {
    static Memo m;
    return m;
}

std::vector<double> fou_rho_lags(const FouParams& p, std::span<const std::size_t> lags, double delta) {
    std::vector<double> rho(lags.size());
    Memo& m = memo();
    const CacheKey key{bits(p.kappa), bits(p.hurst), bits(delta)};
    std::vector<std::size_t> missing;
    {
        std::lock_guard lock(m.mutex);
        if (m.enabled) {
            auto it = m.table.find(key);
            for (std::size_t j = 0; j < lags.size(); ++j) {
                if (it != m.table.end()) {
                    auto hit = it->second.find(lags[j]);
                    if (hit != it->second.end()) {
                        rho[j] = hit->second;
                        continue;
                    }
                }
                missing.push_back(j);
            }
        } else {
            for (std::size_t j = 0; j < lags.size(); ++j) missing.push_back(j);
        }
    }
    if (missing.empty()) return rho;
    for (auto j : missing) rho[j] = fou_acf(p, static_cast<double>(lags[j]) * delta);
    std::lock_guard lock(m.mutex);
    if (!m.enabled) return rho;
    if (m.entries + missing.size() > Memo::max_entries) {
        m.table.clear();
        m.entries = 0;
    }
    auto& slot = m.table[key];
    for (auto j : missing) {
        if (slot.emplace(lags[j], rho[j]).second) ++m.entries;
    }
    return rho;
}

}  // namespace

double FouParams::scale_b() const {
    check_fou_shape(kappa, hurst);
    return std::sqrt(std::pow(kappa, 2.0 * hurst) / (hurst * std::tgamma(2.0 * hurst)));
}

void FouParams::validate() const {
    check_fou_shape(kappa, hurst);
    check_location_scale(mu, nu);
}

void CauchyParams::validate() const {
    check_cauchy_shape(beta, alpha);
    check_location_scale(mu, nu);
}

double ModelSpec::mu() const {
    return std::visit([](const auto& p) { return p.mu; }, params);
}

double ModelSpec::nu() const {
    return std::visit([](const auto& p) { return p.nu; }, params);
}

void ModelSpec::set_mu(double v) {
    std::visit([v](auto& p) { p.mu = v; }, params);
}

void ModelSpec::set_nu(double v) {
    std::visit([v](auto& p) { p.nu = v; }, params);
}

void ModelSpec::validate() const {
    std::visit([](const auto& p) { p.validate(); }, params);
}

double fou_acf(const FouParams& p, double h) {
    check_fou_shape(p.kappa, p.hurst);
    if (!std::isfinite(h)) throw DomainError("lag must be finite");
    const double x = p.kappa * std::abs(h);
    if (x == 0.0) return 1.0;
    return fou_kernel_integral(x, p.hurst) / std::tgamma(2.0 * p.hurst + 1.0);
}

double cauchy_acf(const CauchyParams& p, double h) {
    check_cauchy_shape(p.beta, p.alpha);
    if (!std::isfinite(h)) throw DomainError("lag must be finite");
    if (h == 0.0) return 1.0;
    const double a = 2.0 * p.alpha + 1.0;
    return std::exp(-p.beta / a * std::log1p(std::pow(std::abs(h), a)));
}

double correlation(const ModelSpec& m, double h) {
    if (const auto* f = std::get_if<FouParams>(&m.params)) return fou_acf(*f, h);
    return cauchy_acf(std::get<CauchyParams>(m.params), h);
}

std::vector<double> acv_vector(const ModelSpec& m, std::span<const std::size_t> lags, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
    const double nu = m.nu();
    if (!(nu > 0.0)) throw DomainError("nu must be positive");
    std::vector<double> out;
    if (const auto* f = std::get_if<FouParams>(&m.params)) {
        out = fou_rho_lags(*f, lags, delta);
    } else {
        const auto& c = std::get<CauchyParams>(m.params);
        out.resize(lags.size());
        for (std::size_t j = 0; j < lags.size(); ++j)
            out[j] = cauchy_acf(c, static_cast<double>(lags[j]) * delta);
    }
    const double var = nu * nu;
    for (auto& v : out) v *= var;
    return out;
}

std::vector<double> acv_prefix(const ModelSpec& m, std::size_t count, double delta) {
    std::vector<std::size_t> lags(count);
    for (std::size_t j = 0; j < count; ++j) lags[j] = j;
    return acv_vector(m, lags, delta);
}

RegimeLabel classify_regime(const ModelSpec& m) {
    m.validate();
    RegimeLabel r;
    constexpr double eps = 1e-12;
    auto by_sign = [](double a) {
        if (std::abs(a) < eps) return Roughness::brownian;
        return a < 0.0 ? Roughness::rough : Roughness::smooth;
    };
    if (const auto* f = std::get_if<FouParams>(&m.params)) {
        r.roughness = by_sign(f->alpha());
        r.memory = f->hurst > 0.5 + eps ? Memory::long_memory : Memory::short_memory;
        r.beta_decay = 2.0 * (1.0 - f->hurst);
    } else {
        const auto& c = std::get<CauchyParams>(m.params);
        r.roughness = by_sign(c.alpha);
        r.memory = c.beta <= 1.0 + eps ? Memory::long_memory : Memory::short_memory;
        r.beta_decay = c.beta;
    }
    if (r.memory == Memory::short_memory || r.beta_decay > 0.5 + eps)
        r.clt_case = CltCase::case1_gaussian;
    else if (r.beta_decay >= 0.5 - eps)
        r.clt_case = CltCase::case2_boundary;
    else
        r.clt_case = CltCase::case3_rosenblatt;
    return r;
}

double arfima_d_from_beta(double beta_decay) {
    if (!(beta_decay > 0.0 && beta_decay <= 1.0))
        throw DomainError("arfima d is defined for beta in (0,1]");
    return 0.5 * (1.0 - beta_decay);
}

namespace acf_cache {

void clear() {
    Memo& m = memo();
    std::lock_guard lock(m.mutex);
    m.table.clear();
    m.entries = 0;
}

std::size_t size() {
    Memo& m = memo();
    std::lock_guard lock(m.mutex);
    return m.entries;
}

void set_enabled(bool on) {
    Memo& m = memo();
    std::lock_guard lock(m.mutex);
    m.enabled = on;
    if (!on) {
        m.table.clear();
        m.entries = 0;
    }
}

bool enabled() {
    Memo& m = memo();
    std::lock_guard lock(m.mutex);
    return m.enabled;
}

}  // namespace acf_cache

}  // namespace mcle
