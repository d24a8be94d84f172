#include "mcle/harness/figures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <tuple>

#include "mcle/composite_likelihood.hpp"
#include "mcle/errors.hpp"
#include "mcle/full_likelihood.hpp"
#include "mcle/mme.hpp"
#include "mcle/rng.hpp"

namespace mcle::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double hurst_of(const ModelSpec& m) { return get_param(m, ParamId::alpha) + 0.5; }

std::pair<double, double> sample_moments(const SampleSeries& y) {
    double s = 0.0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y.is_observed(i)) {
            s += y.values[i];
            ++c;
        }
    if (c < 2) throw DataError("series has fewer than two observations");
    const double mean = s / static_cast<double>(c);
    double ss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y.is_observed(i)) ss += (y.values[i] - mean) * (y.values[i] - mean);
    return {mean, std::sqrt(ss / static_cast<double>(c))};
}

ParamId shape_of(Family f) { return f == Family::fou ? ParamId::kappa : ParamId::beta; }

std::size_t nearest(const std::vector<double>& grid, double v, bool log_scale) {
    std::size_t best = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = log_scale ? std::abs(std::log(grid[i]) - std::log(v)) : std::abs(grid[i] - v);
        if (d < gap) {
            gap = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (count == 0 || !(lo > 0.0) || !(hi >= lo)) throw ConfigError("invalid log-spaced grid");
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = count == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1.0));
    return v;
}

std::vector<double> lin_space(double lo, double hi, std::size_t count) {
    if (count == 0 || !(hi >= lo)) throw ConfigError("invalid linear grid");
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1.0);
    return v;
}

std::pair<double, double> default_shape_range(Family f) {
    return f == Family::fou ? std::pair{1e-4, 1.0} : std::pair{0.05, 3.0};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

CompareReport compare_mle(const CompareConfig& cfg) {
    cfg.truth.validate();
    if (cfg.replications < 1) throw ConfigError("replications must be at least 1");
    CompareReport rep;
    const auto q = build_default_tuples(cfg.q, cfg.strides);
    const double delta = 1.0 / cfg.n_per_day;
    const double h0 = hurst_of(cfg.truth);
    for (int big_t : cfg.big_t) {
        const std::size_t n = static_cast<std::size_t>(big_t) * static_cast<std::size_t>(cfg.n_per_day);
        if (n > cfg.cap) {
            rep.notes.push_back("T = " + std::to_string(big_t) + " skipped: n = " + std::to_string(n) +
                                " exceeds the full-likelihood cap " + std::to_string(cfg.cap));
            continue;
        }
        if (n <= q.max_index() + 1) {
            rep.notes.push_back("T = " + std::to_string(big_t) + " skipped: series shorter than the tuple span");
            continue;
        }
        CompareRow row;
        row.big_t = big_t;
        row.n = n;
        double cl_sq = 0.0, ml_sq = 0.0;
        int ok = 0;
        for (int r = 0; r < cfg.replications; ++r) {
            const auto seed = rng::derive_seed(cfg.seed, {static_cast<std::uint64_t>(big_t), static_cast<std::uint64_t>(r)});
            const auto y = simulate(SimPlan{cfg.truth, n, delta, seed});
            FitOptions opt;
            opt.mean_mode = cfg.mean_mode;
            opt.known_mu = cfg.truth.mu();
            try {
                opt.init = mme(y, cfg.truth.family(),
                               cfg.mean_mode == MeanMode::known ? std::optional<double>(cfg.truth.mu()) : std::nullopt)
                               .model();
                opt.init->validate();
            } catch (const std::exception&) {
                opt.init.reset();
            }
            try {
                auto t0 = Clock::now();
                const auto cl = fit_mcle(y, cfg.truth.family(), q, opt);
                const double tc = seconds_since(t0);
                t0 = Clock::now();
                const auto ml = fit_mle(y, cfg.truth.family(), opt, cfg.cap);
                const double tm = seconds_since(t0);
                if (!cl.converged || !ml.converged) {
                    ++row.failures;
                    continue;
                }
                row.cl_seconds += tc;
                row.ml_seconds += tm;
                cl_sq += std::pow(hurst_of(cl.model) - h0, 2);
                ml_sq += std::pow(hurst_of(ml.model) - h0, 2);
                ++ok;
            } catch (const std::exception&) {
                ++row.failures;
            }
        }
        if (ok == 0) {
            rep.notes.push_back("T = " + std::to_string(big_t) + ": no replication converged for both estimators");
            continue;
        }
        row.cl_seconds /= ok;
        row.ml_seconds /= ok;
        row.runtime_ratio = row.cl_seconds / row.ml_seconds;
        row.cl_hurst_rmse = std::sqrt(cl_sq / ok);
        row.ml_hurst_rmse = std::sqrt(ml_sq / ok);
        row.rmse_ratio = row.ml_hurst_rmse > 0.0 ? row.cl_hurst_rmse / row.ml_hurst_rmse : std::nan("");
        rep.rows.push_back(row);
    }
    return rep;
}

void write_compare_csv(const CompareReport& r, std::ostream& out) {
    for (const auto& n : r.notes) out << "# " << n << '\n';
    out << "T,n,cl_seconds,ml_seconds,runtime_ratio,cl_hurst_rmse,ml_hurst_rmse,rmse_ratio,failures\n";
    char buf[512];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%d,%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n", row.big_t, row.n,
                      row.cl_seconds, row.ml_seconds, row.runtime_ratio, row.cl_hurst_rmse, row.ml_hurst_rmse,
                      row.rmse_ratio, row.failures);
        out << buf;
    }
}

ScalingReport scaling_table(const ModelSpec& m, const std::vector<std::size_t>& ns, const TupleSet& q, int repeats,
                            std::uint64_t seed) {
    if (ns.size() < 2) throw ConfigError("scaling needs at least two sample sizes");
    ScalingReport rep;
    std::vector<double> x, tc, tm;
    for (std::size_t n : ns) {
        const auto y = simulate(SimPlan{m, n, 1.0 / 12.0, rng::derive_seed(seed, n)});
        ScalingRow row;
        row.n = n;
        row.cl_seconds = row.ml_seconds = std::numeric_limits<double>::infinity();
        volatile double sink = cl_eval(m, y, q) + full_loglik(m, y, std::max<std::size_t>(n, kFullLikelihoodCap));
        for (int r = 0; r < std::max(1, repeats); ++r) {
            auto t0 = Clock::now();
            sink = cl_eval(m, y, q);
            row.cl_seconds = std::min(row.cl_seconds, seconds_since(t0));
            t0 = Clock::now();
            sink = full_loglik(m, y, std::max<std::size_t>(n, kFullLikelihoodCap));
            row.ml_seconds = std::min(row.ml_seconds, seconds_since(t0));
        }
        (void)sink;
        x.push_back(static_cast<double>(n));
        tc.push_back(row.cl_seconds);
        tm.push_back(row.ml_seconds);
        rep.rows.push_back(row);
    }
    rep.cl_exponent = loglog_slope(x, tc);
    rep.ml_exponent = loglog_slope(x, tm);
    return rep;
}

HeatmapResult heatmap(const SampleSeries& y, Family family, const TupleSet& q, HeatmapSpec spec) {
    y.validate();
    if (spec.shape_lo <= 0.0 || spec.shape_hi <= 0.0) {
        const auto [lo, hi] = default_shape_range(family);
        spec.shape_lo = lo;
        spec.shape_hi = hi;
    }
    if (spec.shape_points * spec.alpha_points > spec.max_cells)
        throw BudgetError("heatmap grid of " + std::to_string(spec.shape_points * spec.alpha_points) +
                          " cells exceeds the limit " + std::to_string(spec.max_cells));
    const auto ab = box_bounds(ParamId::alpha);
    if (spec.alpha_lo < ab.lo || spec.alpha_hi > ab.hi) throw ConfigError("alpha grid leaves the admissible range");
    HeatmapResult h;
    h.family = family;
    h.shape = shape_of(family);
    std::tie(h.mu, h.nu) = sample_moments(y);
    h.shape_values = log_space(spec.shape_lo, spec.shape_hi, spec.shape_points);
    h.alpha_values = lin_space(spec.alpha_lo, spec.alpha_hi, spec.alpha_points);
    const auto mom = TupleMoments::compute(y, q);
    ModelSpec m;
    if (family == Family::fou)
        m.params = FouParams{};
    else
        m.params = CauchyParams{};
    m.mean_mode = MeanMode::known;
    m.set_mu(h.mu);
    m.set_nu(h.nu);
    double best = -std::numeric_limits<double>::infinity();
    h.cl.assign(h.shape_values.size(), std::vector<double>(h.alpha_values.size()));
    for (std::size_t i = 0; i < h.shape_values.size(); ++i) {
        set_param(m, h.shape, h.shape_values[i]);
        for (std::size_t j = 0; j < h.alpha_values.size(); ++j) {
            set_param(m, ParamId::alpha, h.alpha_values[j]);
            double v;
            try {
                v = cl_eval(m, mom);
            } catch (const Error&) {
                v = std::nan("");
            }
            h.cl[i][j] = v;
            if (std::isfinite(v) && v > best) {
                best = v;
                h.arg_shape = i;
                h.arg_alpha = j;
            }
        }
    }
    if (spec.mark_mcle) {
        FitOptions opt;
        opt.mean_mode = MeanMode::known;
        opt.known_mu = h.mu;
        try {
            auto r = fit_mcle(y, family, q, opt);
            h.mcle_cell = std::pair{nearest(h.shape_values, get_param(r.model, h.shape), true),
                                    nearest(h.alpha_values, get_param(r.model, ParamId::alpha), false)};
            h.mcle = std::move(r);
        } catch (const Error&) {
            h.mcle_cell.reset();
        }
    }
    return h;
}

void write_heatmap_csv(const HeatmapResult& h, std::ostream& out) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "# family=%s mu=%.12g nu=%.12g\n", to_string(h.family).c_str(), h.mu, h.nu);
    out << buf;
    if (h.mcle) {
        std::snprintf(buf, sizeof buf, "# mcle %s=%.12g alpha=%.12g\n", to_string(h.shape).c_str(),
                      get_param(h.mcle->model, h.shape), get_param(h.mcle->model, ParamId::alpha));
        out << buf;
    }
    out << to_string(h.shape) << ",alpha,cl,argmax,mcle\n";
    for (std::size_t i = 0; i < h.shape_values.size(); ++i)
        for (std::size_t j = 0; j < h.alpha_values.size(); ++j) {
            const bool is_max = i == h.arg_shape && j == h.arg_alpha;
            const bool is_mcle = h.mcle_cell && h.mcle_cell->first == i && h.mcle_cell->second == j;
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%d,%d\n", h.shape_values[i], h.alpha_values[j],
                          h.cl[i][j], is_max ? 1 : 0, is_mcle ? 1 : 0);
            out << buf;
        }
}

ProfileResult profile(const SampleSeries& y, Family family, const TupleSet& q, const ProfileSpec& spec) {
    y.validate();
    ProfileResult p;
    p.family = family;
    p.shape = shape_of(family);
    auto values = spec.shape_values;
    if (values.empty()) {
        const auto [lo, hi] = default_shape_range(family);
        values = log_space(lo, hi, 25);
    }
    if (y.size() <= q.max_index() + 1) throw DataError("series must be longer than the largest tuple index plus one");
    const auto mom = TupleMoments::compute(y, q);
    detail::Objective obj{[&](const ModelSpec& m) { return cl_eval(m, mom); },
                          [&](const ModelSpec& m) { return gls_mean(m, mom); }};
    std::optional<ModelSpec> warm;
    double best = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        ProfileRow row;
        row.shape = v;
        FitOptions opt;
        opt.mean_mode = spec.mean_mode;
        opt.known_mu = spec.known_mu;
        opt.fixed = {{p.shape, v}};
        opt.init = warm;
        try {
            auto r = detail::maximize(y, family, opt, obj);
            row.cl = r.loglik;
            row.alpha = get_param(r.model, ParamId::alpha);
            row.nu = get_param(r.model, ParamId::nu);
            if (!r.converged) {
                row.flagged = true;
                row.note = "inner maximization did not converge";
            } else {
                warm = r.model;
            }
        } catch (const std::exception& e) {
            row.flagged = true;
            row.cl = std::nan("");
            row.note = e.what();
        }
        if (std::isfinite(row.cl)) best = std::max(best, row.cl);
        p.rows.push_back(row);
    }
    for (auto& row : p.rows)
        row.normalized = std::isfinite(row.cl) ? 1.0 - (best - row.cl) / std::abs(best) : std::nan("");
    return p;
}

void write_profile_csv(const ProfileResult& p, std::ostream& out) {
    out << to_string(p.shape) << ",cl,normalized,alpha,nu,flagged,note\n";
    char buf[512];
    for (const auto& r : p.rows) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%d,%s\n", r.shape, r.cl, r.normalized, r.alpha,
                      r.nu, r.flagged ? 1 : 0, r.note.c_str());
        out << buf;
    }
}

}  // namespace mcle::harness
