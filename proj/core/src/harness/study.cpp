#include "mcle/harness/study.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "mcle/errors.hpp"
#include "mcle/mme.hpp"
#include "mcle/rng.hpp"
#include "mcle/tuples.hpp"

namespace mcle::harness {

namespace {

struct RepOutcome {
    bool mcle_ok = false;
    bool mme_ok = false;
    std::vector<double> mcle;
    std::vector<double> mme;
    std::vector<double> se;
    std::string error;
};

std::uint64_t panel_code(const std::string& panel) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : panel) h = (h ^ c) * 1099511628211ULL;
    return h;
}

std::vector<double> pick(const ModelSpec& m, const std::vector<ParamId>& ids) { return get_params(m, ids); }

RepOutcome replicate(const StudyConfig& cfg, const TupleSet& q, const std::vector<ParamId>& ids, std::size_t n,
                     std::uint64_t seed) {
    RepOutcome out;
    const double delta = 1.0 / cfg.n_per_day;
    SampleSeries y;
    try {
        y = simulate(SimPlan{cfg.truth, n, delta, seed}, cfg.sim);
    } catch (const std::exception& e) {
        out.error = std::string("simulation: ") + e.what();
        return out;
    }
    const bool known = cfg.mean_mode == MeanMode::known;
    std::optional<ModelSpec> init;
    if (cfg.run_mme) {
        try {
            auto m = mme(y, cfg.truth.family(), known ? std::optional<double>(cfg.truth.mu()) : std::nullopt);
            auto spec = m.model();
            out.mme = pick(spec, ids);
            out.mme_ok = true;
            spec.validate();
            init = spec;
        } catch (const std::exception&) {
            init.reset();
        }
    }
    try {
        FitOptions opt;
        opt.mean_mode = cfg.mean_mode;
        opt.known_mu = cfg.truth.mu();
        opt.init = init;
        opt.standard_errors = cfg.standard_errors;
        opt.sandwich.lag_truncation = cfg.lag_truncation;
        auto r = fit_mcle(y, cfg.truth.family(), q, opt);
        if (!r.converged) {
            out.error = "not converged";
            for (const auto& d : r.diagnostics) out.error += "; " + d;
            return out;
        }
        out.mcle = pick(r.model, ids);
        if (cfg.standard_errors) {
            out.se.assign(ids.size(), std::nan(""));
            for (std::size_t j = 0; j < ids.size(); ++j)
                for (std::size_t k = 0; k < r.se_params.size(); ++k)
                    if (r.se_params[k] == ids[j] && k < r.std_errors.size()) out.se[j] = r.std_errors[k];
        }
        out.mcle_ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

void StudyConfig::validate() const {
    truth.validate();
    if (replications < 1) throw ConfigError("replications must be at least 1");
    if (n_per_day < 1) throw ConfigError("observations per day must be positive");
    if (big_t.empty()) throw ConfigError("no horizons T given");
    for (int t : big_t)
        if (t < 1) throw ConfigError("horizon T must be positive");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    (void)build_default_tuples(q, strides);
}

std::vector<ParamSummary> summarize(const std::vector<ParamId>& ids, const std::vector<double>& truth,
                                    const std::vector<std::vector<double>>& draws) {
    std::vector<ParamSummary> out(ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) {
        auto& s = out[j];
        s.id = ids[j];
        s.truth = truth[j];
        s.count = draws.size();
        if (draws.empty()) {
            s.mean_bias = s.std = s.rmse = std::nan("");
            continue;
        }
        double mean = 0.0;
        for (const auto& d : draws) mean += d[j];
        mean /= static_cast<double>(draws.size());
        double ss = 0.0, se = 0.0;
        for (const auto& d : draws) {
            ss += (d[j] - mean) * (d[j] - mean);
            se += (d[j] - truth[j]) * (d[j] - truth[j]);
        }
        s.mean_bias = mean - truth[j];
        s.std = draws.size() > 1 ? std::sqrt(ss / static_cast<double>(draws.size() - 1)) : 0.0;
        s.rmse = std::sqrt(se / static_cast<double>(draws.size()));
    }
    return out;
}

StudyReport run_study(const StudyConfig& cfg, const Logger& log) {
    cfg.validate();
    StudyReport rep;
    rep.config = cfg;
    const auto q = build_default_tuples(cfg.q, cfg.strides);
    const auto ids = free_params(cfg.truth.family(), cfg.mean_mode);
    const auto truth = get_params(cfg.truth, ids);
    const std::uint64_t fam = cfg.truth.family() == Family::fou ? 1 : 2;
    for (int big_t : cfg.big_t) {
        const auto t0 = std::chrono::steady_clock::now();
        StudyCell cell;
        cell.big_t = big_t;
        cell.n = static_cast<std::size_t>(big_t) * static_cast<std::size_t>(cfg.n_per_day);
        cell.params = ids;
        cell.attempted = cfg.replications;
        std::vector<RepOutcome> outcomes(static_cast<std::size_t>(cfg.replications));
        std::atomic<int> next{0};
        std::mutex log_mutex;
        auto work = [&] {
            for (int r = next++; r < cfg.replications; r = next++) {
                const auto seed = rng::derive_seed(
                    cfg.seed, {fam, panel_code(cfg.panel), static_cast<std::uint64_t>(big_t), static_cast<std::uint64_t>(r)});
                outcomes[static_cast<std::size_t>(r)] = replicate(cfg, q, ids, cell.n, seed);
                if (log && (r + 1) % 50 == 0) {
                    std::lock_guard lock(log_mutex);
                    log("T=" + std::to_string(big_t) + ": " + std::to_string(r + 1) + " replications done");
                }
            }
        };
        if (cfg.workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }
        std::vector<std::vector<double>> se_ok;
        for (std::size_t r = 0; r < outcomes.size(); ++r) {
            auto& o = outcomes[r];
            if (o.mcle_ok) {
                cell.mcle_draws.push_back(o.mcle);
                if (cfg.standard_errors) cell.se_draws.push_back(o.se);
            } else {
                ++cell.mcle_failures;
                if (log) log("replication " + std::to_string(r) + " failed: " + o.error);
            }
            if (o.mme_ok)
                cell.mme_draws.push_back(o.mme);
            else if (cfg.run_mme)
                ++cell.mme_failures;
        }
        cell.mcle = summarize(ids, truth, cell.mcle_draws);
        cell.mme = summarize(ids, truth, cell.mme_draws);
        cell.rmse_ratio.resize(ids.size());
        for (std::size_t j = 0; j < ids.size(); ++j)
            cell.rmse_ratio[j] = cell.mme[j].rmse > 0.0 ? cell.mcle[j].rmse / cell.mme[j].rmse : std::nan("");
        if (cfg.standard_errors) {
            cell.mean_std_error.assign(ids.size(), 0.0);
            for (std::size_t j = 0; j < ids.size(); ++j) {
                double s = 0.0;
                int c = 0;
                for (const auto& d : cell.se_draws)
                    if (std::isfinite(d[j])) {
                        s += d[j];
                        ++c;
                    }
                cell.mean_std_error[j] = c ? s / c : std::nan("");
            }
        }
        if (cfg.replications == 1) cell.warnings.push_back("one replication: standard deviations reported as 0");
        if (cell.mme_failures > 0)
            cell.warnings.push_back(std::to_string(cell.mme_failures) + " moment-estimator failures excluded");
        cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double frac = static_cast<double>(cell.mcle_failures) / cfg.replications;
        if (frac > cfg.max_failure_fraction) {
            std::ostringstream s;
            s << "study failed: " << cell.mcle_failures << " of " << cfg.replications << " replications failed at T = "
              << big_t;
            throw EvaluationError(s.str());
        }
        if (cell.mcle_failures > 0)
            cell.warnings.push_back(std::to_string(cell.mcle_failures) + " failed replications excluded");
        rep.cells.push_back(std::move(cell));
    }
    return rep;
}

void write_study_table(const StudyReport& r, std::ostream& out) {
    const auto& c = r.config;
    char buf[256];
    out << "family=" << to_string(c.truth.family()) << " panel=" << c.panel
        << " mean=" << (c.mean_mode == MeanMode::known ? "known" : "estimated") << " q=" << c.q
        << " N=" << c.n_per_day << " reps=" << c.replications << " seed=" << c.seed << '\n';
    for (const auto& cell : r.cells) {
        std::snprintf(buf, sizeof buf, "T = %d (n = %zu, %d/%d MCLE ok, %.1f s)\n", cell.big_t, cell.n,
                      cell.attempted - cell.mcle_failures, cell.attempted, cell.seconds);
        out << buf;
        std::snprintf(buf, sizeof buf, "  %-6s %10s %22s %22s %10s\n", "param", "true", "MCLE bias (std)",
                      "MME bias (std)", "RMSE ratio");
        out << buf;
        for (std::size_t j = 0; j < cell.params.size(); ++j) {
            char a[64], b[64];
            std::snprintf(a, sizeof a, "%.4f (%.4f)", cell.mcle[j].mean_bias, cell.mcle[j].std);
            std::snprintf(b, sizeof b, "%.4f (%.4f)", cell.mme[j].mean_bias, cell.mme[j].std);
            std::snprintf(buf, sizeof buf, "  %-6s %10.4f %22s %22s %10.3f\n", to_string(cell.params[j]).c_str(),
                          cell.mcle[j].truth, a, b, cell.rmse_ratio[j]);
            out << buf;
        }
        for (const auto& w : cell.warnings) out << "  warning: " << w << '\n';
    }
}

void write_study_csv(const StudyReport& r, std::ostream& out) {
    out << "family,panel,T,n,param,true,estimator,mean_bias,std,rmse,count,rmse_ratio,mean_se\n";
    char buf[512];
    for (const auto& cell : r.cells) {
        for (std::size_t j = 0; j < cell.params.size(); ++j) {
            for (int e = 0; e < 2; ++e) {
                const auto& s = e == 0 ? cell.mcle[j] : cell.mme[j];
                const double se = (e == 0 && !cell.mean_std_error.empty()) ? cell.mean_std_error[j] : std::nan("");
                std::snprintf(buf, sizeof buf, "%s,%s,%d,%zu,%s,%.12g,%s,%.12g,%.12g,%.12g,%zu,%.12g,%.12g\n",
                              to_string(r.config.truth.family()).c_str(), r.config.panel.c_str(), cell.big_t, cell.n,
                              to_string(cell.params[j]).c_str(), s.truth, e == 0 ? "mcle" : "mme", s.mean_bias, s.std,
                              s.rmse, s.count, cell.rmse_ratio[j], se);
                out << buf;
            }
        }
    }
}

}  // namespace mcle::harness
