#include "mcle/parameters.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcle/errors.hpp"

namespace mcle {

std::string to_string(ParamId p) {
    switch (p) {
        case ParamId::kappa: return "kappa";
        case ParamId::beta: return "beta";
        case ParamId::nu: return "nu";
        case ParamId::alpha: return "alpha";
        case ParamId::mu: return "mu";
    }
    return "?";
}

ParamId parse_param(const std::string& name) {
    if (name == "kappa") return ParamId::kappa;
    if (name == "beta") return ParamId::beta;
    if (name == "nu") return ParamId::nu;
    if (name == "alpha") return ParamId::alpha;
    if (name == "mu") return ParamId::mu;
    throw ConfigError("unknown parameter '" + name + "'");
}

Bounds box_bounds(ParamId p) {
    switch (p) {
        case ParamId::kappa: return {1e-8, 1e3};
        case ParamId::nu: return {1e-8, 1e3};
        case ParamId::beta: return {1e-4, 50.0};
        case ParamId::alpha: return {-0.499, 0.499};
        case ParamId::mu: return {-1e300, 1e300};
    }
    return {0.0, 0.0};
}

std::vector<ParamId> covariance_params(Family f) {
    if (f == Family::fou) return {ParamId::kappa, ParamId::nu, ParamId::alpha};
    return {ParamId::beta, ParamId::nu, ParamId::alpha};
}

std::vector<ParamId> free_params(Family f, MeanMode mode) {
    auto ids = covariance_params(f);
    if (mode == MeanMode::estimated) ids.push_back(ParamId::mu);
    return ids;
}

double get_param(const ModelSpec& m, ParamId p) {
    if (p == ParamId::mu) return m.mu();
    if (p == ParamId::nu) return m.nu();
    if (const auto* f = std::get_if<FouParams>(&m.params)) {
        if (p == ParamId::kappa) return f->kappa;
        if (p == ParamId::alpha) return f->alpha();
    } else {
        const auto& c = std::get<CauchyParams>(m.params);
        if (p == ParamId::beta) return c.beta;
        if (p == ParamId::alpha) return c.alpha;
    }
    throw ConfigError("parameter " + to_string(p) + " does not belong to the " + to_string(m.family()) +
                      " family");
}

void set_param(ModelSpec& m, ParamId p, double v) {
    if (p == ParamId::mu) return m.set_mu(v);
    if (p == ParamId::nu) return m.set_nu(v);
    if (auto* f = std::get_if<FouParams>(&m.params)) {
        if (p == ParamId::kappa) {
            f->kappa = v;
            return;
        }
        if (p == ParamId::alpha) {
            f->hurst = v + 0.5;
            return;
        }
    } else {
        auto& c = std::get<CauchyParams>(m.params);
        if (p == ParamId::beta) {
            c.beta = v;
            return;
        }
        if (p == ParamId::alpha) {
            c.alpha = v;
            return;
        }
    }
    throw ConfigError("parameter " + to_string(p) + " does not belong to the " + to_string(m.family()) +
                      " family");
}

std::vector<double> get_params(const ModelSpec& m, std::span<const ParamId> ids) {
    std::vector<double> out;
    out.reserve(ids.size());
    for (auto p : ids) out.push_back(get_param(m, p));
    return out;
}

void set_params(ModelSpec& m, std::span<const ParamId> ids, std::span<const double> values) {
    for (std::size_t j = 0; j < ids.size(); ++j) set_param(m, ids[j], values[j]);
}

double to_internal(ParamId p, double value) {
    const auto b = box_bounds(p);
    switch (p) {
        case ParamId::mu: return value;
        case ParamId::alpha: {
            const double v = std::clamp(value, b.lo + 1e-12, b.hi - 1e-12);
            return std::log((v - b.lo) / (b.hi - v));
        }
        default: return std::log(std::clamp(value, b.lo, b.hi));
    }
}

double from_internal(ParamId p, double u) {
    const auto b = box_bounds(p);
    switch (p) {
        case ParamId::mu: return u;
        case ParamId::alpha: return b.lo + (b.hi - b.lo) / (1.0 + std::exp(-u));
        default: return std::clamp(std::exp(u), b.lo, b.hi);
    }
}

bool near_bound(ParamId p, double value, double rel_tol) {
    if (p == ParamId::mu) return false;
    const auto b = box_bounds(p);
    if (p == ParamId::alpha) {
        const double w = b.hi - b.lo;
        return value - b.lo <= rel_tol * w * 1e3 || b.hi - value <= rel_tol * w * 1e3;
    }
    // Log-scale parameters: compare on the log scale.
    return std::log(value / b.lo) <= 1e3 * rel_tol || std::log(b.hi / value) <= 1e3 * rel_tol;
}

ModelSpec clamp_to_interior(ModelSpec m, std::span<const ParamId> ids, std::vector<std::string>* notes) {
    for (auto p : ids) {
        if (p == ParamId::mu) continue;
        const auto b = box_bounds(p);
        const double v = get_param(m, p);
        double lo = b.lo;
        double hi = b.hi;
        if (p == ParamId::alpha) {
            lo += 0.01 * (b.hi - b.lo);
            hi -= 0.01 * (b.hi - b.lo);
        } else {
            lo *= 10.0;
            hi /= 10.0;
        }
        const double c = std::isfinite(v) ? std::clamp(v, lo, hi) : 0.5 * (lo + hi);
        if (c != v) {
            if (notes) {
                std::ostringstream s;
                s << "initial " << to_string(p) << " = " << v << " moved to " << c << " inside the box";
                notes->push_back(s.str());
            }
            set_param(m, p, c);
        }
    }
    return m;
}

}  // namespace mcle
