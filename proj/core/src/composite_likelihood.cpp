#include "mcle/composite_likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcle/errors.hpp"
#include "mcle/parameters.hpp"

namespace mcle {

namespace {

constexpr std::size_t kBlockWindows = 1024;
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double observed_mean(const SampleSeries& y) {
    double s = 0.0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y.is_observed(i)) {
            s += y.values[i];
            ++c;
        }
    }
    if (c == 0) throw DataError("series has no observed values");
    return s / static_cast<double>(c);
}

void accumulate(const SampleSeries& y, double center, TupleMoments::Block& blk) {
    const auto& t = blk.tuple;
    const std::size_t q = t.size();
    const std::size_t span = t.back();
    const std::size_t n = y.size();
    const bool gaps = y.has_gaps();
    std::vector<double> total(q * q, 0.0), local(q * q, 0.0);
    std::vector<double> total_s(q, 0.0), local_s(q, 0.0);
    std::vector<double> z(q);
    std::size_t windows = 0, in_block = 0;
    auto flush = [&] {
        for (std::size_t a = 0; a < q * q; ++a) {
            total[a] += local[a];
            local[a] = 0.0;
        }
        for (std::size_t a = 0; a < q; ++a) {
            total_s[a] += local_s[a];
            local_s[a] = 0.0;
        }
        in_block = 0;
    };
    const double* v = y.values.data();
    for (std::size_t i = 0; i + span < n; ++i) {
        if (gaps) {
            bool ok = true;
            for (std::size_t a = 0; a < q && ok; ++a) ok = y.is_observed(i + t[a]);
            if (!ok) continue;
        }
        for (std::size_t a = 0; a < q; ++a) z[a] = v[i + t[a]] - center;
        for (std::size_t a = 0; a < q; ++a) {
            local_s[a] += z[a];
            double* row = &local[a * q];
            const double za = z[a];
            for (std::size_t b = a; b < q; ++b) row[b] += za * z[b];
        }
        ++windows;
        if (++in_block == kBlockWindows) flush();
    }
    flush();
    blk.windows = windows;
    blk.cross.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
    blk.sum.resize(static_cast<Eigen::Index>(q));
    for (std::size_t a = 0; a < q; ++a) {
        blk.sum(static_cast<Eigen::Index>(a)) = total_s[a];
        for (std::size_t b = a; b < q; ++b) {
            blk.cross(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = total[a * q + b];
            blk.cross(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = total[a * q + b];
        }
    }
}

struct Evaluation {
    double cl;
    double mu;
};

Evaluation evaluate(const ModelSpec& m, const TupleMoments& mom, bool profile) {
    const auto factors = factor_tuples(m, mom);
    double delta_mu = m.mu() - mom.center;
    if (profile) {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            num += factors[k].inverse_ones.dot(mom.blocks[k].sum);
            den += static_cast<double>(mom.blocks[k].windows) * factors[k].ones_inverse_ones;
        }
        if (!(den > 0.0)) throw EvaluationError("GLS mean denominator is not positive");
        delta_mu = num / den;
    }
    double cl = 0.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& b = mom.blocks[k];
        const auto& f = factors[k];
        const double cnt = static_cast<double>(b.windows);
        if (b.windows == 0) continue;
        const double q = static_cast<double>(b.tuple.size());
        const double quad = f.inverse.cwiseProduct(b.cross).sum() - 2.0 * delta_mu * f.inverse_ones.dot(b.sum) +
                            cnt * delta_mu * delta_mu * f.ones_inverse_ones;
        cl += -0.5 * cnt * q * kLog2Pi - 0.5 * cnt * f.logdet - 0.5 * quad;
    }
    if (!std::isfinite(cl)) throw EvaluationError("composite likelihood is not finite");
    return {cl, mom.center + delta_mu};
}

double fd_step(ParamId p, double v) {
    double h = 1e-5 * std::max(1.0, std::abs(v));
    if (p != ParamId::alpha && p != ParamId::mu) h = std::min(h, 0.25 * v);
    if (p == ParamId::alpha) h = std::min({h, 0.5 * (v + 0.5), 0.5 * (0.5 - v)});
    return h;
}

}  // namespace

TupleMoments TupleMoments::compute(const SampleSeries& y, const TupleSet& q) {
    y.validate();
    q.validate_for(y.size());
    TupleMoments mom;
    mom.center = observed_mean(y);
    mom.delta = y.delta;
    mom.n = y.size();
    for (const auto& t : q.tuples)
        for (std::size_t a = 0; a < t.size(); ++a)
            for (std::size_t b = a; b < t.size(); ++b) mom.lags.push_back(t[b] - t[a]);
    std::sort(mom.lags.begin(), mom.lags.end());
    mom.lags.erase(std::unique(mom.lags.begin(), mom.lags.end()), mom.lags.end());
    mom.blocks.reserve(q.size());
    for (const auto& t : q.tuples) {
        TupleMoments::Block b;
        b.tuple = t;
        const std::size_t qq = t.size();
        b.lag_slot.resize(qq * qq);
        for (std::size_t a = 0; a < qq; ++a) {
            for (std::size_t c = 0; c < qq; ++c) {
                const std::size_t lag = a < c ? t[c] - t[a] : t[a] - t[c];
                b.lag_slot[a * qq + c] = static_cast<std::size_t>(
                    std::lower_bound(mom.lags.begin(), mom.lags.end(), lag) - mom.lags.begin());
            }
        }
        accumulate(y, mom.center, b);
        mom.blocks.push_back(std::move(b));
    }
    return mom;
}

double TupleMoments::total_terms() const {
    double s = 0.0;
    for (const auto& b : blocks) s += static_cast<double>(b.tuple.size() * b.windows);
    return s;
}

std::vector<TupleFactor> factor_tuples(const ModelSpec& m, const TupleMoments& mom) {
    const auto acv = acv_vector(m, mom.lags, mom.delta);
    std::vector<TupleFactor> out;
    out.reserve(mom.blocks.size());
    for (const auto& b : mom.blocks) {
        const auto q = static_cast<Eigen::Index>(b.tuple.size());
        Eigen::MatrixXd s(q, q);
        for (Eigen::Index a = 0; a < q; ++a)
            for (Eigen::Index c = 0; c < q; ++c) s(a, c) = acv[b.lag_slot[static_cast<std::size_t>(a * q + c)]];
        Eigen::LLT<Eigen::MatrixXd> llt(s);
        if (llt.info() != Eigen::Success)
            throw CovarianceError("covariance of tuple " + to_string(b.tuple) + " is not positive definite");
        TupleFactor f;
        f.inverse = llt.solve(Eigen::MatrixXd::Identity(q, q));
        f.inverse_ones = f.inverse.rowwise().sum();
        f.ones_inverse_ones = f.inverse_ones.sum();
        const auto& l = llt.matrixLLT();
        double ld = 0.0;
        for (Eigen::Index a = 0; a < q; ++a) ld += std::log(l(a, a));
        f.logdet = 2.0 * ld;
        out.push_back(std::move(f));
    }
    return out;
}

double cl_eval(const ModelSpec& m, const SampleSeries& y, const TupleSet& q) {
    return cl_eval(m, TupleMoments::compute(y, q));
}

double cl_eval(const ModelSpec& m, const TupleMoments& mom) {
    return evaluate(m, mom, m.mean_mode == MeanMode::estimated).cl;
}

double cl_eval_at_mean(const ModelSpec& m, const TupleMoments& mom) { return evaluate(m, mom, false).cl; }

double gls_mean(const ModelSpec& m, const SampleSeries& y, const TupleSet& q) {
    return gls_mean(m, TupleMoments::compute(y, q));
}

double gls_mean(const ModelSpec& m, const TupleMoments& mom) { return evaluate(m, mom, true).mu; }

std::vector<double> cl_score(const ModelSpec& m, const SampleSeries& y, const TupleSet& q) {
    return cl_score(m, TupleMoments::compute(y, q));
}

std::vector<double> cl_score(const ModelSpec& m, const TupleMoments& mom) {
    const auto ids = free_params(m.family(), m.mean_mode);
    std::vector<double> g(ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) {
        const double v = get_param(m, ids[j]);
        const double h = fd_step(ids[j], v);
        ModelSpec up = m, dn = m;
        set_param(up, ids[j], v + h);
        set_param(dn, ids[j], v - h);
        g[j] = (cl_eval_at_mean(up, mom) - cl_eval_at_mean(dn, mom)) / (2.0 * h);
    }
    return g;
}

}  // namespace mcle
