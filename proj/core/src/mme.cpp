#include "mcle/mme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "mcle/errors.hpp"

namespace mcle {

namespace {

constexpr double kBetaLo = 1e-4;
constexpr double kBetaHi = 50.0;

double mean_of(std::span<const double> y) {
    return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

double second_moment(std::span<const double> y, double center) {
    double s = 0.0;
    for (double v : y) s += (v - center) * (v - center);
    return s / static_cast<double>(y.size());
}

void require_complete(const SampleSeries& y) {
    y.validate();
    if (y.has_gaps()) throw DataError("moment estimators need a gap-free series");
}

}  // namespace

ModelSpec MmeResult::model() const {
    ModelSpec m;
    if (family == Family::fou)
        m.params = FouParams{mu_hat, kappa_hat, nu_hat, hurst_hat};
    else
        m.params = CauchyParams{mu_hat, beta_hat, nu_hat, alpha_hat};
    return m;
}

double power_variation(std::span<const double> y, double p, int k, int eta, double delta) {
    if (!(p > 0.0)) throw DomainError("power must be positive");
    if (k != 1 && k != 2) throw DomainError("difference order must be 1 or 2");
    if (eta != 1 && eta != 2) throw DomainError("sampling frequency must be 1 or 2");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    const std::size_t lag = static_cast<std::size_t>(eta);
    const std::size_t reach = lag * static_cast<std::size_t>(k);
    if (y.size() <= reach) throw DataError("series too short for the requested power variation");
    double s = 0.0;
    for (std::size_t i = reach; i < y.size(); ++i) {
        const double d = k == 1 ? y[i] - y[i - lag] : y[i] - 2.0 * y[i - lag] + y[i - 2 * lag];
        s += p == 2.0 ? d * d : std::pow(std::abs(d), p);
    }
    return s;
}

double cof_alpha(std::span<const double> y, double delta, double p) {
    const double coarse = power_variation(y, p, 2, 2, delta);
    const double fine = power_variation(y, p, 2, 1, delta);
    if (!(coarse > 0.0) || !(fine > 0.0))
        throw DataError("degenerate power variation: second differences vanish");
    return std::log2(coarse / fine) / p - 0.5;
}

std::vector<double> sample_acf(std::span<const double> y, double center, const std::vector<std::size_t>& lags) {
    const std::size_t n = y.size();
    double c0 = 0.0;
    for (double v : y) c0 += (v - center) * (v - center);
    if (!(c0 > 0.0)) throw DataError("sample variance is zero");
    std::vector<double> out;
    out.reserve(lags.size());
    for (auto h : lags) {
        if (h >= n) throw DataError("autocorrelation lag exceeds series length");
        double c = 0.0;
        for (std::size_t i = 0; i + h < n; ++i) c += (y[i] - center) * (y[i + h] - center);
        out.push_back(c / c0);
    }
    return out;
}

double match_cauchy_beta(double alpha, std::span<const double> target, const std::vector<std::size_t>& lags,
                         double delta) {
    if (target.size() != lags.size() || lags.empty()) throw DomainError("lag and target sizes differ");
    auto loss = [&](double log_beta) {
        const CauchyParams p{0.0, std::exp(log_beta), 1.0, alpha};
        double s = 0.0;
        for (std::size_t j = 0; j < lags.size(); ++j) {
            const double r = target[j] - cauchy_acf(p, static_cast<double>(lags[j]) * delta);
            s += r * r;
        }
        return s;
    };
    const double lo = std::log(kBetaLo), hi = std::log(kBetaHi);
    constexpr int grid = 240;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int g = 0; g <= grid; ++g) {
        const double v = loss(lo + (hi - lo) * g / grid);
        if (v < best_val) {
            best_val = v;
            best = g;
        }
    }
    const double a = lo + (hi - lo) * std::max(best - 1, 0) / grid;
    const double b = lo + (hi - lo) * std::min(best + 1, grid) / grid;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::brent_find_minima(loss, a, b, 52, iters);
    const double edge = 1e-6 * (hi - lo);
    if (r.first - lo < edge || hi - r.first < edge) {
        std::ostringstream s;
        s << "beta not identified: autocorrelation match settles on the search bound " << std::exp(r.first);
        throw IdentificationError(s.str());
    }
    return std::exp(r.first);
}

MmeResult mme_fou(const SampleSeries& y, std::optional<double> known_mu) {
    require_complete(y);
    MmeResult r;
    r.family = Family::fou;
    r.alpha_hat = cof_alpha(y.values, y.delta);
    r.hurst_hat = r.alpha_hat + 0.5;
    r.mu_hat = known_mu ? *known_mu : mean_of(y.values);
    if (!(r.hurst_hat > 0.0 && r.hurst_hat < 1.0)) {
        std::ostringstream s;
        s << "moment estimate of H = " << r.hurst_hat << " lies outside (0,1)";
        throw DomainError(s.str());
    }
    const double h = r.hurst_hat;
    const auto n = static_cast<double>(y.size());
    const double ss = power_variation(y.values, 2.0, 2, 1, y.delta);
    // Scale of the driving fBm, i.e. nu * b in the stationary parametrization.
    const double sigma = std::sqrt(ss / (n * (4.0 - std::pow(2.0, 2.0 * h)) * std::pow(y.delta, 2.0 * h)));
    const double var = second_moment(y.values, r.mu_hat);
    if (!(var > 0.0) || !(sigma > 0.0)) throw DataError("degenerate sample moments");
    const double hg = h * std::tgamma(2.0 * h);
    r.kappa_hat = std::pow(var / (sigma * sigma * hg), -1.0 / (2.0 * h));
    const double b = std::sqrt(std::pow(r.kappa_hat, 2.0 * h) / hg);
    r.nu_hat = sigma / b;
    return r;
}

MmeResult mme_cauchy(const SampleSeries& y, std::optional<double> known_mu, const std::vector<std::size_t>& lags) {
    require_complete(y);
    MmeResult r;
    r.family = Family::cauchy;
    r.alpha_hat = cof_alpha(y.values, y.delta);
    r.hurst_hat = r.alpha_hat + 0.5;
    r.mu_hat = known_mu ? *known_mu : mean_of(y.values);
    if (!(r.alpha_hat > -0.5 && r.alpha_hat < 0.5)) {
        std::ostringstream s;
        s << "moment estimate of alpha = " << r.alpha_hat << " lies outside (-1/2,1/2)";
        throw DomainError(s.str());
    }
    const double var = second_moment(y.values, r.mu_hat);
    if (!(var > 0.0)) throw DataError("degenerate sample moments");
    r.nu_hat = std::sqrt(var);
    const auto rho = sample_acf(y.values, r.mu_hat, lags);
    r.beta_hat = match_cauchy_beta(r.alpha_hat, rho, lags, y.delta);
    return r;
}

MmeResult mme(const SampleSeries& y, Family f, std::optional<double> known_mu) {
    return f == Family::fou ? mme_fou(y, known_mu) : mme_cauchy(y, known_mu);
}

}  // namespace mcle
