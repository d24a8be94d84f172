#include "mcle/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace mcle::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Counted {
    const Objective& f;
    int evaluations = 0;
    double operator()(const std::vector<double>& x) {
        ++evaluations;
        try {
            const double v = f(x);
            return std::isfinite(v) ? v : kInf;
        } catch (const std::exception&) {
            return kInf;
        }
    }
};

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

std::vector<double> fd_gradient(Counted& f, const std::vector<double>& x, double rel) {
    std::vector<double> g(x.size());
    std::vector<double> p = x;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double h = rel * std::max(1.0, std::abs(x[j]));
        p[j] = x[j] + h;
        const double up = f(p);
        p[j] = x[j] - h;
        const double dn = f(p);
        p[j] = x[j];
        g[j] = (up - dn) / (2.0 * h);
    }
    return g;
}

bool gradient_ok(const std::vector<double>& g, double fx, double tol) {
    return std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); }) &&
           inf_norm(g) <= tol * (1.0 + std::abs(fx));
}

Result run_simplex(Counted& f, std::vector<double> x0, const Options& opt) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> val(d + 1);
    for (std::size_t j = 0; j < d; ++j) pts[j + 1][j] += opt.simplex_scale;
    for (std::size_t j = 0; j <= d; ++j) val[j] = f(pts[j]);
    std::vector<std::size_t> order(d + 1);
    int it = 0;
    auto point = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
        std::vector<double> p(d);
        for (std::size_t k = 0; k < d; ++k) p[k] = c[k] + t * (w[k] - c[k]);
        return p;
    };
    for (; it < opt.simplex_iterations; ++it) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
        double diam = 0.0;
        for (std::size_t j = 1; j <= d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                diam = std::max(diam, std::abs(pts[order[j]][k] - pts[order[0]][k]));
        if (diam < opt.simplex_tolerance) break;
        const std::size_t best = order[0], worst = order[d], second = order[d - 1];
        std::vector<double> c(d, 0.0);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) c[k] += pts[order[j]][k] / static_cast<double>(d);
        auto xr = point(c, pts[worst], -1.0);
        const double fr = f(xr);
        if (fr < val[best]) {
            auto xe = point(c, pts[worst], -2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[worst] = std::move(xe);
                val[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                val[worst] = fr;
            }
            continue;
        }
        if (fr < val[second]) {
            pts[worst] = std::move(xr);
            val[worst] = fr;
            continue;
        }
        const bool outside = fr < val[worst];
        auto xc = point(c, pts[worst], outside ? -0.5 : 0.5);
        const double fc = f(xc);
        if (fc < std::min(fr, val[worst])) {
            pts[worst] = std::move(xc);
            val[worst] = fc;
            continue;
        }
        for (std::size_t j = 1; j <= d; ++j) {
            auto& p = pts[order[j]];
            for (std::size_t k = 0; k < d; ++k) p[k] = pts[best][k] + 0.5 * (p[k] - pts[best][k]);
            val[order[j]] = f(p);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
    Result r;
    r.x = pts[best];
    r.value = val[best];
    r.iterations = it;
    return r;
}

}  // namespace

std::vector<double> central_gradient(const Objective& f, const std::vector<double>& x, double rel_step,
                                     int* evaluations) {
    Counted c{f};
    auto g = fd_gradient(c, x, rel_step);
    if (evaluations) *evaluations += c.evaluations;
    return g;
}

Result nelder_mead(const Objective& f, std::vector<double> x0, const Options& opt) {
    Counted c{f};
    auto r = run_simplex(c, std::move(x0), opt);
    r.evaluations = c.evaluations;
    return r;
}

Result minimize(const Objective& f, std::vector<double> x0, const Options& opt) {
    Counted fc{f};
    const std::size_t d = x0.size();
    Result out;
    if (d == 0) {
        out.x = x0;
        out.value = fc(x0);
        out.converged = std::isfinite(out.value);
        out.evaluations = fc.evaluations;
        return out;
    }
    auto warm = run_simplex(fc, std::move(x0), opt);
    std::vector<double> x = warm.x;
    double fx = warm.value;
    if (!std::isfinite(fx)) {
        out.x = x;
        out.value = fx;
        out.iterations = warm.iterations;
        out.evaluations = fc.evaluations;
        out.message = "objective not finite at any simplex vertex";
        return out;
    }
    using Vec = Eigen::VectorXd;
    auto to_vec = [](const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); };
    std::vector<double> g = fd_gradient(fc, x, opt.fd_relative_step);
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    bool identity = true;
    double last_step = kInf;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        if (gradient_ok(g, fx, opt.gradient_tolerance) && last_step < opt.step_tolerance) {
            out.converged = true;
            break;
        }
        Vec gv = to_vec(g);
        Vec dir = -hinv * gv;
        if (!(gv.dot(dir) < 0.0)) {
            hinv.setIdentity();
            identity = true;
            dir = -gv;
        }
        const double dmax = dir.cwiseAbs().maxCoeff();
        if (dmax > 2.0) dir *= 2.0 / dmax;
        const double slope = gv.dot(dir);
        double t = 1.0;
        std::vector<double> xn(d);
        double fn = kInf;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t j = 0; j < d; ++j) xn[j] = x[j] + t * dir(static_cast<Eigen::Index>(j));
            fn = fc(xn);
            if (fn <= fx + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            if (t * dmax < 1e-14) break;
            t *= 0.5;
        }
        if (!accepted) {
            last_step = t * std::min(dmax, 2.0);
            if (!identity) {
                hinv.setIdentity();
                identity = true;
                continue;
            }
            out.converged = gradient_ok(g, fx, opt.gradient_tolerance);
            if (!out.converged) out.message = "line search failed away from a stationary point";
            break;
        }
        auto gn = fd_gradient(fc, xn, opt.fd_relative_step);
        Vec s = to_vec(xn) - to_vec(x);
        Vec y = to_vec(gn) - gv;
        last_step = s.cwiseAbs().maxCoeff();
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (identity) hinv *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            hinv = (eye - rho * s * y.transpose()) * hinv * (eye - rho * y * s.transpose()) + rho * s * s.transpose();
            identity = false;
        }
        x = std::move(xn);
        fx = fn;
        g = std::move(gn);
    }
    if (it >= opt.max_iterations && !out.converged) out.message = "iteration limit reached";
    out.x = x;
    out.value = fx;
    out.gradient = g;
    out.iterations = warm.iterations + it;
    out.evaluations = fc.evaluations;
    out.last_step = last_step;
    return out;
}

}  // namespace mcle::optim
