#include "mcle/tuples.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mcle/errors.hpp"

namespace mcle {

std::size_t TupleSet::q_max() const {
    std::size_t q = 0;
    for (const auto& t : tuples) q = std::max(q, t.size());
    return q;
}

std::size_t TupleSet::max_index() const {
    std::size_t k = 0;
    for (const auto& t : tuples) k = std::max(k, t.back());
    return k;
}

void TupleSet::validate() const {
    if (tuples.empty()) throw ConfigError("tuple set is empty");
    for (const auto& t : tuples) {
        if (t.empty() || t.front() != 0) throw ConfigError("tuple " + to_string(t) + " must start at 0");
        for (std::size_t a = 1; a < t.size(); ++a) {
            if (t[a] <= t[a - 1]) throw ConfigError("tuple " + to_string(t) + " is not strictly increasing");
        }
    }
}

void TupleSet::validate_for(std::size_t n) const {
    validate();
    if (max_index() >= n)
        throw DataError("series of length " + std::to_string(n) + " too short for tuple index " +
                        std::to_string(max_index()));
}

std::string to_string(const Tuple& t) {
    std::ostringstream s;
    s << '(';
    for (std::size_t a = 0; a < t.size(); ++a) s << (a ? "," : "") << t[a];
    s << ')';
    return s.str();
}

TupleSet build_default_tuples(int q, const std::vector<std::size_t>& strides) {
    if (q != 2 && q != 3) throw ConfigError("default tuples support q = 2 or q = 3");
    if (strides.empty()) throw ConfigError("stride list is empty");
    std::set<std::size_t> seen;
    TupleSet out;
    for (auto l : strides) {
        if (l == 0) throw ConfigError("strides must be positive");
        if (!seen.insert(l).second) throw ConfigError("strides must be distinct");
        if (q == 2)
            out.tuples.push_back({0, l});
        else
            out.tuples.push_back({0, l, 2 * l});
    }
    return out;
}

TupleSet full_tuple(std::size_t n) {
    if (n == 0) throw ConfigError("full tuple needs n >= 1");
    Tuple t(n);
    for (std::size_t j = 0; j < n; ++j) t[j] = j;
    return TupleSet{{t}};
}

Eigen::MatrixXd tuple_covariance(const ModelSpec& m, const Tuple& t, double delta) {
    const auto q = static_cast<Eigen::Index>(t.size());
    std::vector<std::size_t> lags;
    lags.reserve(t.size() * t.size());
    for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = a; b < t.size(); ++b) lags.push_back(t[b] - t[a]);
    std::sort(lags.begin(), lags.end());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
    const auto acv = acv_vector(m, lags, delta);
    auto lookup = [&](std::size_t lag) {
        return acv[static_cast<std::size_t>(std::lower_bound(lags.begin(), lags.end(), lag) - lags.begin())];
    };
    Eigen::MatrixXd s(q, q);
    for (Eigen::Index a = 0; a < q; ++a) {
        for (Eigen::Index b = a; b < q; ++b) {
            const double v = lookup(t[static_cast<std::size_t>(b)] - t[static_cast<std::size_t>(a)]);
            s(a, b) = v;
            s(b, a) = v;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success)
        throw CovarianceError("covariance of tuple " + to_string(t) + " is not positive definite");
    return s;
}

}  // namespace mcle
