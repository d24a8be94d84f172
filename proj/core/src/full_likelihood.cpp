#include "mcle/full_likelihood.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "mcle/errors.hpp"

namespace mcle {

namespace {

struct Factorized {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double logdet = 0.0;
};

Factorized factorize(const ModelSpec& m, const SampleSeries& y, std::size_t cap) {
    y.validate();
    if (y.has_gaps()) throw DataError("full likelihood needs a gap-free series");
    const std::size_t n = y.size();
    if (n > cap)
        throw BudgetError("full likelihood refused for n = " + std::to_string(n) + " above the cap of " +
                          std::to_string(cap) + ": Cholesky cost grows as n^3");
    const auto acv = acv_prefix(m, n, y.delta);
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd s(nn, nn);
    for (Eigen::Index a = 0; a < nn; ++a)
        for (Eigen::Index b = 0; b < nn; ++b) s(a, b) = acv[static_cast<std::size_t>(a > b ? a - b : b - a)];
    Factorized f;
    f.llt.compute(s);
    if (f.llt.info() != Eigen::Success) throw CovarianceError("Toeplitz covariance is not positive definite");
    const auto& l = f.llt.matrixLLT();
    for (Eigen::Index a = 0; a < nn; ++a) f.logdet += std::log(l(a, a));
    f.logdet *= 2.0;
    return f;
}

double gls(const Factorized& f, const Eigen::VectorXd& y) {
    const Eigen::VectorXd w = f.llt.solve(Eigen::VectorXd::Ones(y.size()));
    const double den = w.sum();
    if (!(den > 0.0)) throw EvaluationError("GLS mean denominator is not positive");
    return w.dot(y) / den;
}

}  // namespace

double full_loglik(const ModelSpec& m, const SampleSeries& y, std::size_t cap) {
    const auto f = factorize(m, y, cap);
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(y.values.data(), static_cast<Eigen::Index>(y.size()));
    const double mu = m.mean_mode == MeanMode::estimated ? gls(f, v) : m.mu();
    const Eigen::VectorXd z = f.llt.matrixL().solve(v - Eigen::VectorXd::Constant(v.size(), mu));
    const double n = static_cast<double>(y.size());
    const double ll = -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * f.logdet - 0.5 * z.squaredNorm();
    if (!std::isfinite(ll)) throw EvaluationError("full log-likelihood is not finite");
    return ll;
}

double full_gls_mean(const ModelSpec& m, const SampleSeries& y, std::size_t cap) {
    const auto f = factorize(m, y, cap);
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(y.values.data(), static_cast<Eigen::Index>(y.size()));
    return gls(f, v);
}

MleResult fit_mle(const SampleSeries& y, Family family, const FitOptions& opt, std::size_t cap) {
    const auto t0 = std::chrono::steady_clock::now();
    if (y.size() > cap)
        throw BudgetError("full likelihood refused for n = " + std::to_string(y.size()) + " above the cap of " +
                          std::to_string(cap));
    detail::Objective obj{[&](const ModelSpec& m) { return full_loglik(m, y, cap); },
                          [&](const ModelSpec& m) { return full_gls_mean(m, y, cap); }};
    auto est = detail::maximize(y, family, opt, obj);
    MleResult r;
    r.model = est.model;
    r.params = est.params;
    r.theta_hat = est.theta_hat;
    r.mu_hat = est.mu_hat;
    r.loglik = est.loglik;
    r.n = y.size();
    r.iterations = est.iterations;
    r.converged = est.converged;
    r.diagnostics = std::move(est.diagnostics);
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace mcle
