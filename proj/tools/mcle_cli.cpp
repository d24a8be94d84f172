// mcle: simulate, fit and study Gaussian volatility models; drive the
// high-frequency realized-variance and volume pipelines.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mcle/composite_likelihood.hpp"
#include "mcle/errors.hpp"
#include "mcle/estimation.hpp"
#include "mcle/harness/figures.hpp"
#include "mcle/harness/panels.hpp"
#include "mcle/harness/series_io.hpp"
#include "mcle/harness/study.hpp"
#include "mcle/hf/pipeline.hpp"
#include "mcle/hf/ticks.hpp"
#include "mcle/mme.hpp"
#include "mcle/simulation.hpp"
#include "mcle/tuples.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace mcle;

namespace {

// Floats go out with 12 significant digits; non-finite values become null.
json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::stod(buf);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct MeanArg {
    MeanMode mode = MeanMode::known;
    double mu = 0.0;
};

MeanArg parse_mean(const std::string& s) {
    if (s == "estimated") return {MeanMode::estimated, 0.0};
    if (s == "known") return {MeanMode::known, 0.0};
    if (s.rfind("known:", 0) == 0) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s.substr(6), &used);
            if (used == s.size() - 6 && std::isfinite(v)) return {MeanMode::known, v};
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("--mean-mode must be known:<value> or estimated, got '" + s + "'");
}

// Writes through a file when a path is given, otherwise to stdout.
template <class F>
void emit(const std::string& path, F&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    write(out);
}

struct ModelArgs {
    std::string family = "fou";
    std::string panel;
    double shape = std::nan("");
    double nu = std::nan("");
    double alpha = std::nan("");
    double mu = 0.0;

    void attach(CLI::App* c) {
        c->add_option("--family", family, "fou or cauchy")->capture_default_str();
        c->add_option("--panel", panel, "Monte Carlo design A-E");
        c->add_option("--shape", shape, "kappa (fou) or beta (cauchy)");
        c->add_option("--nu", nu, "scale");
        c->add_option("--alpha", alpha, "roughness index");
        c->add_option("--mu", mu, "mean")->capture_default_str();
    }

    [[nodiscard]] ModelSpec model() const {
        const Family f = parse_family(family);
        ModelSpec m;
        if (!panel.empty()) {
            if (panel.size() != 1) throw ConfigError("--panel takes one letter A-E");
            m = harness::panel_model(f, static_cast<char>(std::toupper(panel[0])), mu);
        } else {
            if (f == Family::fou)
                m.params = FouParams{};
            else
                m.params = CauchyParams{};
            m.set_mu(mu);
        }
        if (std::isfinite(shape)) set_param(m, f == Family::fou ? ParamId::kappa : ParamId::beta, shape);
        if (std::isfinite(nu)) set_param(m, ParamId::nu, nu);
        if (std::isfinite(alpha)) set_param(m, ParamId::alpha, alpha);
        m.validate();
        return m;
    }
};

std::vector<std::string> model_tags(const ModelSpec& m, double delta, std::uint64_t seed) {
    std::ostringstream s;
    s.precision(17);
    s << "family=" << to_string(m.family()) << " delta=" << delta << " seed=" << seed;
    for (auto p : covariance_params(m.family())) s << ' ' << to_string(p) << '=' << get_param(m, p);
    s << " mu=" << m.mu();
    return {s.str()};
}

json regime_json(const RegimeLabel& r) {
    return json{{"roughness", to_string(r.roughness)},
                {"memory", to_string(r.memory)},
                {"clt_case", to_string(r.clt_case)},
                {"beta_decay", num(r.beta_decay)}};
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json fit_json(const EstimationResult& r, std::size_t n, double delta) {
    json j;
    j["family"] = to_string(r.model.family());
    j["n"] = n;
    j["delta"] = num(delta);
    json est;
    for (std::size_t k = 0; k < r.params.size(); ++k) est[to_string(r.params[k])] = num(r.theta_hat[k]);
    if (r.model.family() == Family::fou) est["hurst"] = num(get_param(r.model, ParamId::alpha) + 0.5);
    est["mu"] = num(r.model.mu());
    j["estimates"] = est;
    j["mean_mode"] = r.mu_hat ? "estimated" : "known";
    json se = json::object();
    for (std::size_t k = 0; k < r.se_params.size() && k < r.std_errors.size(); ++k)
        se[to_string(r.se_params[k])] = num(r.std_errors[k]);
    j["std_errors"] = se;
    j["loglik"] = num(r.loglik);
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["evaluations"] = r.evaluations;
    j["regime"] = regime_json(r.regime);
    json init;
    for (std::size_t k = 0; k < r.params.size() && k < r.init.size(); ++k) init[to_string(r.params[k])] = num(r.init[k]);
    j["init"] = init;
    json score = json::array();
    for (double g : r.score) score.push_back(num(g));
    j["score"] = score;
    if (r.sandwich) {
        const auto& s = *r.sandwich;
        json sw;
        json names = json::array();
        for (auto p : s.params) names.push_back(to_string(p));
        sw["params"] = names;
        sw["H"] = matrix_json(s.H_matrix);
        sw["V"] = matrix_json(s.V_matrix);
        sw["lag_truncation"] = s.lag_truncation;
        sw["tail_estimate"] = num(s.tail_estimate);
        sw["nominal"] = s.nominal;
        sw["h_indefinite"] = s.h_indefinite;
        sw["rate"] = s.rate;
        sw["notes"] = s.notes;
        j["sandwich"] = sw;
    }
    j["runtime_seconds"] = num(r.runtime_seconds);
    j["diagnostics"] = r.diagnostics;
    return j;
}

TupleSet tuple_set(int q, const std::vector<std::size_t>& strides) { return build_default_tuples(q, strides); }

std::vector<hf::TickRecord> load_ticks(const std::string& path, json& report) {
    auto data = fs::is_directory(path) ? hf::ingest_directory(path) : hf::ingest_ticks(path);
    report["ingest"] = json{{"files", data.report.files},
                            {"rows", data.report.rows},
                            {"accepted", data.report.accepted},
                            {"malformed", data.report.malformed},
                            {"out_of_order", data.report.out_of_order}};
    if (data.ticks.empty()) throw DataError(path + ": no trades found");
    return std::move(data.ticks);
}

void write_json(const std::string& path, const json& j) {
    emit(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Composite-likelihood estimation of rough and long-memory Gaussian volatility models"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.require_subcommand(1);

    // Options shared by the estimation commands.
    int q = 3;
    std::vector<std::size_t> strides = kDefaultStrides;
    std::string mean_mode = "known:0";
    std::uint64_t seed = 20240101;
    int reps = 200;
    std::vector<int> big_t = harness::kStudyHorizons;
    int n_per_day = harness::kStudyPerDay;
    std::size_t lag_trunc = 10000;
    std::string out;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--q", q, "tuple dimension (2 or 3)")->capture_default_str();
        c->add_option("--strides", strides, "tuple strides")->delimiter(',')->capture_default_str();
        c->add_option("--mean-mode", mean_mode, "known:<value> or estimated")->capture_default_str();
        c->add_option("--seed", seed, "root seed")->capture_default_str();
        c->add_option("--out", out, "output path (stdout when empty)");
    };

    ModelArgs model_args;

    auto* sim = app.add_subcommand("simulate", "simulate one path and write it as CSV");
    model_args.attach(sim);
    add_common(sim);
    int sim_t = 1095;
    bool exact_var = false;
    sim->add_option("--big-t", sim_t, "horizon in days")->capture_default_str();
    sim->add_option("--n-per-day", n_per_day, "observations per day")->capture_default_str();
    sim->add_flag("--exact-ou-variance", exact_var, "rescale fOU increments to the exact OU step variance");

    auto* fit = app.add_subcommand("fit", "fit a series by maximum composite likelihood");
    std::string series_path;
    std::string fit_family = "fou";
    std::optional<double> delta_override;
    bool no_se = false;
    bool nominal = false;
    fit->add_option("series", series_path, "series CSV")->required();
    fit->add_option("--family", fit_family, "fou or cauchy")->capture_default_str();
    fit->add_option("--delta", delta_override, "time step override");
    fit->add_option("--lag-trunc", lag_trunc, "lag truncation for the variability matrix")->capture_default_str();
    fit->add_flag("--no-se", no_se, "skip sandwich standard errors");
    fit->add_flag("--nominal", nominal, "report plug-in errors outside the Gaussian-limit regime");
    add_common(fit);

    auto* study = app.add_subcommand("study", "Monte Carlo study of MCLE and moment estimators");
    model_args.attach(study);
    add_common(study);
    int workers = 1;
    bool with_se = false;
    bool no_mme = false;
    std::string study_csv;
    study->add_option("--reps", reps, "replications")->capture_default_str();
    study->add_option("--big-t", big_t, "horizons in days")->delimiter(',')->capture_default_str();
    study->add_option("--n-per-day", n_per_day, "observations per day")->capture_default_str();
    study->add_option("--workers", workers, "replication threads")->capture_default_str();
    study->add_option("--lag-trunc", lag_trunc, "lag truncation for standard errors")->capture_default_str();
    study->add_option("--csv", study_csv, "also write the summary as CSV");
    study->add_flag("--se", with_se, "compute sandwich standard errors per replication");
    study->add_flag("--no-mme", no_mme, "skip the moment estimator");

    auto* cmp = app.add_subcommand("compare-mle", "runtime and RMSE of CL against full likelihood");
    model_args.attach(cmp);
    add_common(cmp);
    std::vector<int> cmp_t = {10, 25, 50, 100, 150, 200, 250};
    int cmp_reps = 20;
    cmp->add_option("--big-t", cmp_t, "horizons in days")->delimiter(',')->capture_default_str();
    cmp->add_option("--n-per-day", n_per_day, "observations per day")->capture_default_str();
    cmp->add_option("--reps", cmp_reps, "replications per horizon")->capture_default_str();

    auto* scal = app.add_subcommand("scaling", "time one CL and one full-likelihood evaluation against n");
    model_args.attach(scal);
    std::vector<std::size_t> scal_n = {120, 240, 480, 960, 1920, 3000};
    int scal_repeats = 3;
    std::vector<std::size_t> scal_strides = {1, 6, 12, 24};  // fits the smallest default n
    scal->add_option("--n", scal_n, "sample sizes")->delimiter(',')->capture_default_str();
    scal->add_option("--repeats", scal_repeats, "timed repeats (best kept)")->capture_default_str();
    scal->add_option("--q", q, "tuple dimension")->capture_default_str();
    scal->add_option("--strides", scal_strides, "tuple strides")->delimiter(',')->capture_default_str();
    scal->add_option("--out", out, "output path");

    auto* heat = app.add_subcommand("heatmap", "composite likelihood over a shape x alpha grid");
    harness::HeatmapSpec hspec;
    std::vector<double> shape_range, alpha_range;
    heat->add_option("series", series_path, "series CSV")->required();
    heat->add_option("--family", fit_family, "fou or cauchy")->capture_default_str();
    heat->add_option("--delta", delta_override, "time step override");
    heat->add_option("--shape-range", shape_range, "lo,hi of the log-spaced shape axis")->delimiter(',')->expected(2);
    heat->add_option("--shape-points", hspec.shape_points, "shape grid size")->capture_default_str();
    heat->add_option("--alpha-range", alpha_range, "lo,hi of the alpha axis")->delimiter(',')->expected(2);
    heat->add_option("--alpha-points", hspec.alpha_points, "alpha grid size")->capture_default_str();
    heat->add_option("--max-cells", hspec.max_cells, "grid size limit")->capture_default_str();
    heat->add_option("--q", q, "tuple dimension")->capture_default_str();
    heat->add_option("--strides", strides, "tuple strides")->delimiter(',');
    heat->add_option("--out", out, "output path");

    auto* prof = app.add_subcommand("profile", "profile composite likelihood over the shape parameter");
    std::vector<double> shape_values;
    std::size_t shape_points = 25;
    prof->add_option("series", series_path, "series CSV")->required();
    prof->add_option("--family", fit_family, "fou or cauchy")->capture_default_str();
    prof->add_option("--delta", delta_override, "time step override");
    prof->add_option("--shape-values", shape_values, "explicit shape values")->delimiter(',');
    prof->add_option("--shape-range", shape_range, "lo,hi of a log-spaced axis")->delimiter(',')->expected(2);
    prof->add_option("--shape-points", shape_points, "points on the log-spaced axis")->capture_default_str();
    add_common(prof);

    std::string data_path;
    std::string report_path;
    hf::RvPipelineConfig rv_cfg;
    bool no_trunc = false, no_diurnal = false, no_dow = false;
    auto* rv = app.add_subcommand("rv", "blockwise log realized variance from trade archives");
    rv->add_option("--data", data_path, "trade CSV file or directory")->required();
    rv->add_option("--slot-seconds", rv_cfg.slot_seconds, "grid slot length")->capture_default_str();
    rv->add_option("--preavg-window", rv_cfg.preavg_window, "trades averaged per slot")->capture_default_str();
    rv->add_option("--blocks-per-day", rv_cfg.blocks_per_day, "blocks per day")->capture_default_str();
    rv->add_option("--truncation-c", rv_cfg.truncation_c, "jump threshold multiple")->capture_default_str();
    rv->add_option("--truncation-window", rv_cfg.truncation_window_days, "days in the BV average")
        ->capture_default_str();
    rv->add_flag("--no-truncate", no_trunc, "keep jumps");
    rv->add_flag("--no-diurnal", no_diurnal, "skip the intraday correction");
    rv->add_flag("--no-dow", no_dow, "skip the day-of-week correction");
    rv->add_option("--out", out, "block CSV output");
    rv->add_option("--report", report_path, "JSON report");

    auto* vol = app.add_subcommand("volume", "detrended log quote volume per block");
    int vol_blocks = 12;
    bool sweep = false;
    std::vector<int> sweep_seconds = hf::kVolumeSweepSeconds;
    vol->add_option("--data", data_path, "trade CSV file or directory")->required();
    vol->add_option("--blocks-per-day", vol_blocks, "blocks per day")->capture_default_str();
    vol->add_flag("--sweep", sweep, "one series per block length; --out names a directory");
    vol->add_option("--sweep-seconds", sweep_seconds, "block lengths for the sweep")->delimiter(',');
    vol->add_option("--out", out, "block CSV output (directory with --sweep)");
    vol->add_option("--report", report_path, "JSON report");

    auto* sig = app.add_subcommand("signature", "volatility signature from trade archives");
    std::vector<int> sig_seconds = {1, 5, 15, 30, 60, 120, 300, 600, 900, 1800, 3600};
    int ref_seconds = 600;
    sig->add_option("--data", data_path, "trade CSV file or directory")->required();
    sig->add_option("--seconds", sig_seconds, "sampling intervals")->delimiter(',')->capture_default_str();
    sig->add_option("--reference", ref_seconds, "scaling interval")->capture_default_str();
    sig->add_option("--out", out, "CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(harness::ExitCode::config);
    }

    try {
        if (*sim) {
            const auto m = model_args.model();
            if (sim_t < 1 || n_per_day < 1) throw ConfigError("--big-t and --n-per-day must be positive");
            const std::size_t n = static_cast<std::size_t>(sim_t) * static_cast<std::size_t>(n_per_day);
            const double delta = 1.0 / n_per_day;
            FouSimOptions so;
            so.exact_ou_variance = exact_var;
            const auto y = simulate(SimPlan{m, n, delta, seed}, so);
            emit(out, [&](std::ostream& o) { write_path_csv(y, o, model_tags(m, delta, seed)); });
            return 0;
        }

        if (*fit) {
            const Family f = parse_family(fit_family);
            const auto mean = parse_mean(mean_mode);
            auto loaded = harness::read_series_csv(series_path, delta_override);
            const auto& y = loaded.series;
            FitOptions opt;
            opt.mean_mode = mean.mode;
            opt.known_mu = mean.mu;
            opt.standard_errors = !no_se;
            opt.sandwich.lag_truncation = lag_trunc;
            opt.sandwich.nominal = nominal;
            auto r = fit_mcle(y, f, tuple_set(q, strides), opt);
            if (auto it = loaded.tags.find("family"); it != loaded.tags.end() && it->second != to_string(f))
                r.diagnostics.push_back("misspecification: data generated by the " + it->second +
                                        " family; estimates are pseudo-parameters of the fitted " + to_string(f) +
                                        " family");
            write_json(out, fit_json(r, y.size(), y.delta));
            if (!r.converged) {
                std::cerr << "error: optimizer did not converge\n";
                return static_cast<int>(harness::ExitCode::convergence);
            }
            return 0;
        }

        if (*study) {
            harness::StudyConfig cfg;
            cfg.truth = model_args.model();
            const auto mean = parse_mean(mean_mode);
            cfg.mean_mode = mean.mode;
            if (mean.mode == MeanMode::known) cfg.truth.set_mu(mean.mu);
            cfg.panel = model_args.panel.empty() ? "custom" : model_args.panel;
            cfg.big_t = big_t;
            cfg.n_per_day = n_per_day;
            cfg.replications = reps;
            cfg.q = q;
            cfg.strides = strides;
            cfg.seed = seed;
            cfg.workers = workers;
            cfg.standard_errors = with_se;
            cfg.lag_truncation = lag_trunc;
            cfg.run_mme = !no_mme;
            const auto rep = harness::run_study(cfg, [](const std::string& s) { std::cerr << s << '\n'; });
            emit(out, [&](std::ostream& o) { harness::write_study_table(rep, o); });
            if (!study_csv.empty()) emit(study_csv, [&](std::ostream& o) { harness::write_study_csv(rep, o); });
            return 0;
        }

        if (*cmp) {
            harness::CompareConfig cfg;
            cfg.truth = model_args.model();
            const auto mean = parse_mean(mean_mode);
            cfg.mean_mode = mean.mode;
            if (mean.mode == MeanMode::known) cfg.truth.set_mu(mean.mu);
            cfg.big_t = cmp_t;
            cfg.n_per_day = n_per_day;
            cfg.replications = cmp_reps;
            cfg.q = q;
            cfg.strides = strides;
            cfg.seed = seed;
            const auto rep = harness::compare_mle(cfg);
            emit(out, [&](std::ostream& o) { harness::write_compare_csv(rep, o); });
            return 0;
        }

        if (*scal) {
            const auto m = model_args.model();
            const auto rep = harness::scaling_table(m, scal_n, tuple_set(q, scal_strides), scal_repeats);
            emit(out, [&](std::ostream& o) {
                o << "# cl_exponent=" << fmt(rep.cl_exponent) << " ml_exponent=" << fmt(rep.ml_exponent) << '\n';
                o << "n,cl_seconds,ml_seconds,ratio\n";
                for (const auto& r : rep.rows)
                    o << r.n << ',' << fmt(r.cl_seconds) << ',' << fmt(r.ml_seconds) << ','
                      << fmt(r.cl_seconds / r.ml_seconds) << '\n';
            });
            return 0;
        }

        if (*heat) {
            const Family f = parse_family(fit_family);
            const auto loaded = harness::read_series_csv(series_path, delta_override);
            if (!shape_range.empty()) {
                hspec.shape_lo = shape_range[0];
                hspec.shape_hi = shape_range[1];
            }
            if (!alpha_range.empty()) {
                hspec.alpha_lo = alpha_range[0];
                hspec.alpha_hi = alpha_range[1];
            }
            const auto h = harness::heatmap(loaded.series, f, tuple_set(q, strides), hspec);
            emit(out, [&](std::ostream& o) { harness::write_heatmap_csv(h, o); });
            return 0;
        }

        if (*prof) {
            const Family f = parse_family(fit_family);
            const auto loaded = harness::read_series_csv(series_path, delta_override);
            harness::ProfileSpec spec;
            const auto mean = parse_mean(mean_mode);
            spec.mean_mode = mean.mode;
            spec.known_mu = mean.mu;
            spec.shape_values = shape_values;
            if (spec.shape_values.empty() && !shape_range.empty())
                spec.shape_values = harness::log_space(shape_range[0], shape_range[1], shape_points);
            const auto p = harness::profile(loaded.series, f, tuple_set(q, strides), spec);
            emit(out, [&](std::ostream& o) { harness::write_profile_csv(p, o); });
            return 0;
        }

        if (*rv) {
            json report;
            const auto ticks = load_ticks(data_path, report);
            rv_cfg.truncate = !no_trunc;
            rv_cfg.diurnal = !no_diurnal;
            rv_cfg.day_of_week = !no_dow;
            const auto r = hf::run_rv_pipeline(ticks, rv_cfg);
            emit(out, [&](std::ostream& o) { hf::write_block_csv(r.rv, o); });
            if (!report_path.empty()) {
                report["days"] = r.days;
                report["missing_days"] = r.rv.missing_days;
                report["dropped_blocks"] = r.rv.dropped_blocks;
                report["zeroed_returns"] = r.zeroed;
                json dow = json::array();
                for (double d : r.dow) dow.push_back(num(d));
                report["day_of_week_factors"] = dow;
                json di = json::array();
                for (double d : r.diurnal) di.push_back(num(d));
                report["diurnal_factors"] = di;
                report["diagnostics"] = r.diagnostics;
                write_json(report_path, report);
            }
            return 0;
        }

        if (*vol) {
            json report;
            const auto ticks = load_ticks(data_path, report);
            if (sweep) {
                if (out.empty()) throw ConfigError("--sweep needs --out naming a directory");
                fs::create_directories(out);
                const auto series = hf::volume_sweep(ticks, sweep_seconds);
                json files = json::array();
                for (std::size_t i = 0; i < series.size(); ++i) {
                    const auto name = (fs::path(out) / ("volume_" + std::to_string(sweep_seconds[i]) + "s.csv")).string();
                    emit(name, [&](std::ostream& o) { hf::write_block_csv(series[i], o); });
                    files.push_back(name);
                }
                report["files"] = files;
            } else {
                const auto s = hf::volume_series(ticks, vol_blocks);
                emit(out, [&](std::ostream& o) { hf::write_block_csv(s, o); });
                report["missing_days"] = s.missing_days;
                report["dropped_blocks"] = s.dropped_blocks;
                report["diagnostics"] = s.diagnostics;
            }
            if (!report_path.empty()) write_json(report_path, report);
            return 0;
        }

        if (*sig) {
            json report;
            const auto ticks = load_ticks(data_path, report);
            const auto rows = hf::volatility_signature(ticks, sig_seconds, ref_seconds);
            emit(out, [&](std::ostream& o) {
                o << "seconds,mean_rv,std_error,scaled,lower,upper,days\n";
                for (const auto& r : rows)
                    o << r.seconds << ',' << fmt(r.mean_rv) << ',' << fmt(r.std_error) << ',' << fmt(r.scaled) << ','
                      << fmt(r.lower) << ',' << fmt(r.upper) << ',' << r.days << '\n';
            });
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(harness::exit_code_for(e));
    }
    return 0;
}
