#include "mcle/estimation.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <sstream>

#include "mcle/errors.hpp"
#include "mcle/mme.hpp"

namespace mcle {

namespace {

double observed_variance(const SampleSeries& y) {
    double s = 0.0, s2 = 0.0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!y.is_observed(i)) continue;
        s += y.values[i];
        ++c;
    }
    const double mean = s / static_cast<double>(c);
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y.is_observed(i)) s2 += (y.values[i] - mean) * (y.values[i] - mean);
    return s2 / static_cast<double>(c);
}

double observed_mean(const SampleSeries& y) {
    double s = 0.0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!y.is_observed(i)) continue;
        s += y.values[i];
        ++c;
    }
    return s / static_cast<double>(c);
}

ModelSpec default_start(Family f, double sd) {
    ModelSpec m;
    if (f == Family::fou)
        m.params = FouParams{0.0, 0.05, sd, 0.5};
    else
        m.params = CauchyParams{0.0, 1.0, sd, 0.0};
    return m;
}

ModelSpec starting_model(const SampleSeries& y, Family f, const FitOptions& opt, std::vector<std::string>& notes) {
    if (opt.init) {
        if (opt.init->family() != f) throw ConfigError("initial model family does not match the fitted family");
        return *opt.init;
    }
    const double sd = std::sqrt(observed_variance(y));
    if (y.has_gaps()) {
        notes.push_back("moment initialization skipped for a series with gaps; default start used");
        return default_start(f, sd);
    }
    try {
        const auto known = opt.mean_mode == MeanMode::known ? std::optional<double>(opt.known_mu) : std::nullopt;
        auto m = mme(y, f, known).model();
        m.validate();
        return m;
    } catch (const Error& e) {
        notes.push_back(std::string("moment initialization failed (") + e.what() + "); default start used");
        return default_start(f, sd);
    }
}

}  // namespace

namespace detail {

EstimationResult maximize(const SampleSeries& y, Family family, const FitOptions& opt, const Objective& objective) {
    const auto t0 = std::chrono::steady_clock::now();
    y.validate();
    EstimationResult res;
    res.params = covariance_params(family);

    ModelSpec start = starting_model(y, family, opt, res.diagnostics);
    start.mean_mode = opt.mean_mode;
    start.set_mu(opt.mean_mode == MeanMode::known ? opt.known_mu : observed_mean(y));
    if (opt.mean_mode == MeanMode::known && !std::isfinite(opt.known_mu))
        throw ConfigError("known mean must be finite");
    for (const auto& [p, v] : opt.fixed) {
        if (p == ParamId::mu) throw ConfigError("fix the mean through the known mean mode");
        set_param(start, p, v);
    }

    std::vector<ParamId> free;
    for (auto p : res.params) {
        bool is_fixed = false;
        for (const auto& f : opt.fixed) is_fixed = is_fixed || f.first == p;
        if (!is_fixed) free.push_back(p);
    }
    start = clamp_to_interior(start, free, &res.diagnostics);
    res.init = get_params(start, res.params);

    const double var = observed_variance(y);
    if (!(var > 0.0)) {
        res.model = start;
        set_param(res.model, ParamId::nu, box_bounds(ParamId::nu).lo);
        res.theta_hat = get_params(res.model, res.params);
        if (opt.mean_mode == MeanMode::estimated) {
            res.mu_hat = observed_mean(y);
            res.model.set_mu(*res.mu_hat);
        }
        res.converged = false;
        res.regime = classify_regime(res.model);
        try {
            res.loglik = objective.loglik(res.model);
        } catch (const Error&) {
            res.loglik = std::numeric_limits<double>::quiet_NaN();
        }
        res.diagnostics.push_back("degenerate data: constant series, nu driven to its lower bound");
        res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

    std::vector<double> u0;
    for (auto p : free) u0.push_back(to_internal(p, get_param(start, p)));
    auto model_at = [&](const std::vector<double>& u) {
        ModelSpec m = start;
        for (std::size_t j = 0; j < free.size(); ++j) set_param(m, free[j], from_internal(free[j], u[j]));
        return m;
    };
    const optim::Objective f = [&](const std::vector<double>& u) { return -objective.loglik(model_at(u)); };
    const auto r = optim::minimize(f, u0, opt.optimizer);

    res.model = model_at(r.x);
    res.theta_hat = get_params(res.model, res.params);
    res.loglik = -r.value;
    res.iterations = r.iterations;
    res.evaluations = r.evaluations;
    res.converged = r.converged && std::isfinite(res.loglik);
    if (!r.message.empty()) res.diagnostics.push_back(r.message);
    if (opt.mean_mode == MeanMode::estimated) {
        res.mu_hat = objective.profiled_mean(res.model);
        res.model.set_mu(*res.mu_hat);
    }
    for (auto p : free) {
        const double v = get_param(res.model, p);
        if (near_bound(p, v)) {
            std::ostringstream s;
            s << "estimate of " << to_string(p) << " = " << v << " is at its box bound";
            res.diagnostics.push_back(s.str());
        }
    }
    res.regime = classify_regime(res.model);
    res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace detail

EstimationResult fit_mcle(const SampleSeries& y, Family family, const TupleSet& q, const FitOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    q.validate();
    if (y.size() <= q.max_index() + 1)
        throw DataError("series must be longer than the largest tuple index plus one");
    const auto mom = TupleMoments::compute(y, q);
    detail::Objective obj{[&](const ModelSpec& m) { return cl_eval(m, mom); },
                          [&](const ModelSpec& m) { return gls_mean(m, mom); }};
    auto res = detail::maximize(y, family, opt, obj);
    if (std::isfinite(res.loglik) && res.converged) {
        try {
            res.score = cl_score(res.model, mom);
        } catch (const Error&) {
        }
    }
    if (opt.standard_errors && res.converged) {
        try {
            auto sw = opt.sandwich;
            std::optional<SandwichReport> found;
            while (!found) {
                try {
                    found = sandwich(res.model, q, y.delta, y.size(), sw);
                } catch (const TruncationError&) {
                    if (sw.lag_truncation >= sw.max_lag_truncation) throw;
                    sw.lag_truncation = std::min(sw.lag_truncation * 10, sw.max_lag_truncation);
                }
            }
            auto rep = std::move(*found);
            if (rep.lag_truncation != opt.sandwich.lag_truncation)
                res.diagnostics.push_back("lag truncation raised to " + std::to_string(rep.lag_truncation) +
                                          " to meet the tail rule");
            res.se_params = rep.params;
            res.std_errors = rep.std_errors;
            for (const auto& n : rep.notes) res.diagnostics.push_back(n);
            res.sandwich = std::move(rep);
        } catch (const Error& e) {
            res.diagnostics.push_back(std::string("standard errors unavailable: ") + e.what());
        }
    }
    res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace mcle
