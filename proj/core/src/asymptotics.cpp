#include "mcle/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcle/errors.hpp"

namespace mcle {

namespace {

struct TupleDerivs {
    Eigen::MatrixXd inverse;
    Eigen::VectorXd inverse_ones;
    std::vector<Eigen::MatrixXd> d_sigma;  // per parameter; empty matrix for mu
    std::vector<Eigen::MatrixXd> d_inverse;
};

double derivative_step(ParamId p, double v) {
    double h = 1e-4 * std::max(std::abs(v), 1e-2);
    if (p == ParamId::alpha) h = std::min({h, 0.25 * (v + 0.5), 0.25 * (0.5 - v)});
    if (p == ParamId::kappa || p == ParamId::beta || p == ParamId::nu) h = std::min(h, 0.25 * v);
    return h;
}

std::vector<TupleDerivs> tuple_derivatives(const ModelSpec& m, const TupleSet& q, double delta,
                                           const std::vector<ParamId>& ids) {
    std::vector<TupleDerivs> out;
    out.reserve(q.size());
    for (const auto& t : q.tuples) {
        TupleDerivs d;
        const auto s = tuple_covariance(m, t, delta);
        Eigen::LLT<Eigen::MatrixXd> llt(s);
        d.inverse = llt.solve(Eigen::MatrixXd::Identity(s.rows(), s.cols()));
        d.inverse_ones = d.inverse.rowwise().sum();
        for (auto p : ids) {
            if (p == ParamId::mu) {
                d.d_sigma.emplace_back();
                d.d_inverse.emplace_back();
                continue;
            }
            const double v = get_param(m, p);
            const double h = derivative_step(p, v);
            ModelSpec up = m, dn = m;
            set_param(up, p, v + h);
            set_param(dn, p, v - h);
            Eigen::MatrixXd ds = (tuple_covariance(up, t, delta) - tuple_covariance(dn, t, delta)) / (2.0 * h);
            d.d_inverse.push_back(-d.inverse * ds * d.inverse);
            d.d_sigma.push_back(std::move(ds));
        }
        out.push_back(std::move(d));
    }
    return out;
}

// Ratio of the omitted tail sum_{l > L} l^{-p} to the last-decade sum over (0.9L, L].
double tail_factor(double p) {
    if (!(p > 1.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / (std::pow(0.9, 1.0 - p) - 1.0);
}

std::string rate_label(const RegimeLabel& r) {
    std::ostringstream s;
    switch (r.clt_case) {
        case CltCase::case1_gaussian: return "sqrt(n)";
        case CltCase::case2_boundary: return "sqrt(n/L_gamma(n))";
        case CltCase::case3_rosenblatt: s << "n^" << r.beta_decay; return s.str();
    }
    return "?";
}

}  // namespace

std::vector<ParamId> resolve_params(const ModelSpec& m, const std::vector<ParamId>& requested) {
    if (requested.empty()) return free_params(m.family(), m.mean_mode);
    for (auto p : requested) (void)get_param(m, p);
    return requested;
}

Eigen::MatrixXd sensitivity_H(const ModelSpec& m, const TupleSet& q, double delta,
                              const std::vector<ParamId>& params) {
    m.validate();
    q.validate();
    const auto ids = resolve_params(m, params);
    const auto derivs = tuple_derivatives(m, q, delta, ids);
    const auto p = static_cast<Eigen::Index>(ids.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p, p);
    for (const auto& d : derivs) {
        for (Eigen::Index r = 0; r < p; ++r) {
            const auto ur = static_cast<std::size_t>(r);
            if (ids[ur] == ParamId::mu) {
                h(r, r) += d.inverse_ones.sum();
                continue;
            }
            const Eigen::MatrixXd ar = d.inverse * d.d_sigma[ur];
            for (Eigen::Index s = r; s < p; ++s) {
                const auto us = static_cast<std::size_t>(s);
                if (ids[us] == ParamId::mu) continue;
                const Eigen::MatrixXd as = d.inverse * d.d_sigma[us];
                const double v = 0.5 * (ar.cwiseProduct(as.transpose())).sum();
                h(r, s) += v;
                if (s != r) h(s, r) += v;
            }
        }
    }
    return h;
}

Eigen::MatrixXd variability_V(const ModelSpec& m, const TupleSet& q, double delta, const SandwichOptions& opt,
                              double* tail_estimate) {
    m.validate();
    q.validate();
    const auto regime = classify_regime(m);
    if (regime.clt_case != CltCase::case1_gaussian && !opt.nominal)
        throw RegimeError("score variance is not finite in regime " + to_string(regime.clt_case) +
                          "; the estimator converges at rate " + rate_label(regime));
    const std::size_t L = opt.lag_truncation;
    if (L < 10) throw ConfigError("lag truncation must be at least 10");
    const auto ids = resolve_params(m, opt.params);
    const auto derivs = tuple_derivatives(m, q, delta, ids);
    const std::size_t reach = 2 * q.max_index();
    const auto gamma = acv_prefix(m, L + reach + 1, delta);
    const auto g = [&](long l) { return gamma[static_cast<std::size_t>(l < 0 ? -l : l)]; };
    const long iL = static_cast<long>(L);
    const long tail_start = static_cast<long>(std::floor(0.9 * static_cast<double>(L)));
    const long D = static_cast<long>(reach);

    // R(d) = sum_{|l| <= L} gamma_l gamma_{l+d} and its last-decade part.
    std::vector<double> R(static_cast<std::size_t>(2 * D + 1)), Rt(R.size());
    for (long d = -D; d <= D; ++d) {
        double s = 0.0, st = 0.0;
        for (long l = -iL; l <= iL; ++l) {
            const double v = g(l) * g(l + d);
            s += v;
            if ((l < 0 ? -l : l) > tail_start) st += v;
        }
        R[static_cast<std::size_t>(d + D)] = s;
        Rt[static_cast<std::size_t>(d + D)] = st;
    }
    // S(u) = sum_{|l| <= L} gamma_{l+u} for the mean block.
    std::vector<double> S(R.size()), St(R.size());
    for (long u = -D; u <= D; ++u) {
        double s = 0.0, st = 0.0;
        for (long l = -iL; l <= iL; ++l) {
            s += g(l + u);
            if ((l < 0 ? -l : l) > tail_start) st += g(l + u);
        }
        S[static_cast<std::size_t>(u + D)] = s;
        St[static_cast<std::size_t>(u + D)] = st;
    }

    const auto p = static_cast<Eigen::Index>(ids.size());
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(p, p), vt = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t k1 = 0; k1 < q.size(); ++k1) {
        const auto& t1 = q.tuples[k1];
        for (std::size_t k2 = 0; k2 < q.size(); ++k2) {
            const auto& t2 = q.tuples[k2];
            const std::size_t q1 = t1.size(), q2 = t2.size();
            for (Eigen::Index r = 0; r < p; ++r) {
                const auto ur = static_cast<std::size_t>(r);
                for (Eigen::Index s = 0; s < p; ++s) {
                    const auto us = static_cast<std::size_t>(s);
                    const bool mr = ids[ur] == ParamId::mu, ms = ids[us] == ParamId::mu;
                    if (mr != ms) continue;
                    double acc = 0.0, acct = 0.0;
                    if (mr) {
                        const auto& w1 = derivs[k1].inverse_ones;
                        const auto& w2 = derivs[k2].inverse_ones;
                        for (std::size_t a = 0; a < q1; ++a) {
                            for (std::size_t c = 0; c < q2; ++c) {
                                const long u = static_cast<long>(t1[a]) - static_cast<long>(t2[c]);
                                const double w = w1(static_cast<Eigen::Index>(a)) * w2(static_cast<Eigen::Index>(c));
                                acc += w * S[static_cast<std::size_t>(u + D)];
                                acct += w * St[static_cast<std::size_t>(u + D)];
                            }
                        }
                    } else {
                        const auto& A = derivs[k1].d_inverse[ur];
                        const auto& B = derivs[k2].d_inverse[us];
                        for (std::size_t a = 0; a < q1; ++a) {
                            for (std::size_t b = 0; b < q1; ++b) {
                                const double aab = A(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                                const long e1 = static_cast<long>(t1[b]) - static_cast<long>(t1[a]);
                                for (std::size_t c = 0; c < q2; ++c) {
                                    for (std::size_t d = 0; d < q2; ++d) {
                                        const double w = aab * B(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d));
                                        const long e2 = static_cast<long>(t2[d]) - static_cast<long>(t2[c]);
                                        const auto i1 = static_cast<std::size_t>(e1 - e2 + D);
                                        const auto i2 = static_cast<std::size_t>(e1 + e2 + D);
                                        acc += w * (R[i1] + R[i2]);
                                        acct += w * (Rt[i1] + Rt[i2]);
                                    }
                                }
                            }
                        }
                        acc *= 0.25;
                        acct *= 0.25;
                    }
                    v(r, s) += acc;
                    vt(r, s) += acct;
                }
            }
        }
    }
    v = 0.5 * (v + v.transpose()).eval();

    // Extrapolate the omitted tail from the last decade and the power decay.
    double tail = 0.0;
    const double cov_factor = tail_factor(2.0 * regime.beta_decay);
    const double mean_factor = tail_factor(regime.beta_decay);
    for (Eigen::Index r = 0; r < p; ++r) {
        for (Eigen::Index s = 0; s < p; ++s) {
            const bool mean_cell = ids[static_cast<std::size_t>(r)] == ParamId::mu;
            // Under long memory the mean block is not root-n; sandwich() drops it.
            if (mean_cell && regime.memory == Memory::long_memory) continue;
            const double f = mean_cell ? mean_factor : cov_factor;
            const double c = std::isfinite(f) ? vt(r, s) * f : (vt(r, s) != 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            tail += c * c;
        }
    }
    tail = std::sqrt(tail);
    if (tail_estimate) *tail_estimate = tail;
    if (!opt.nominal && tail > opt.tail_tolerance * v.norm()) {
        std::ostringstream s;
        s << "lag truncation L = " << L << " leaves an estimated tail of " << tail << " against ||V|| = " << v.norm()
          << "; increase the lag truncation";
        throw TruncationError(s.str());
    }
    return v;
}

SandwichReport sandwich(const ModelSpec& m, const TupleSet& q, double delta, std::size_t n,
                        const SandwichOptions& opt) {
    if (n == 0) throw DomainError("sample size must be positive");
    SandwichReport rep;
    rep.regime = classify_regime(m);
    rep.params = resolve_params(m, opt.params);
    rep.lag_truncation = opt.lag_truncation;
    rep.rate = rate_label(rep.regime);
    rep.H_matrix = sensitivity_H(m, q, delta, rep.params);
    const bool gaussian = rep.regime.clt_case == CltCase::case1_gaussian;
    if (!gaussian && !opt.nominal) {
        rep.notes.push_back("no standard errors: regime " + to_string(rep.regime.clt_case) + " converges at rate " +
                            rep.rate + " to a non-Gaussian or slowly varying limit");
        return rep;
    }
    rep.nominal = !gaussian;
    if (rep.nominal) rep.notes.push_back("nominal (" + to_string(rep.regime.clt_case) + " regime)");
    rep.V_matrix = variability_V(m, q, delta, opt, &rep.tail_estimate);

    const auto p = rep.H_matrix.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rep.H_matrix);
    const auto& ev = eig.eigenvalues();
    Eigen::MatrixXd hinv;
    if (ev.minCoeff() <= 1e-12 * std::max(ev.maxCoeff(), 0.0)) {
        rep.h_indefinite = true;
        rep.notes.push_back("sensitivity matrix not positive definite; pseudo-inverse used");
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(p);
        for (Eigen::Index j = 0; j < p; ++j)
            if (ev(j) > 1e-12 * std::max(ev.maxCoeff(), 0.0)) inv(j) = 1.0 / ev(j);
        hinv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
    } else {
        hinv = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    }
    rep.G_inverse = hinv * rep.V_matrix * hinv;
    rep.G_inverse = 0.5 * (rep.G_inverse + rep.G_inverse.transpose()).eval();
    rep.std_errors.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const double var = rep.G_inverse(j, j) / static_cast<double>(n);
        rep.std_errors[static_cast<std::size_t>(j)] = std::sqrt(std::max(var, 0.0));
    }
    if (rep.regime.memory == Memory::long_memory) {
        for (std::size_t j = 0; j < rep.params.size(); ++j) {
            if (rep.params[j] == ParamId::mu) {
                rep.std_errors[j] = std::numeric_limits<double>::quiet_NaN();
                rep.notes.push_back("mean estimate is not root-n under long memory; its standard error is omitted");
            }
        }
    }
    return rep;
}

}  // namespace mcle
