#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mcle {

enum class Family { fou, cauchy };

[[nodiscard]] std::string to_string(Family f);
[[nodiscard]] Family parse_family(const std::string& name);

// Fractional Ornstein-Uhlenbeck. nu is the stationary standard deviation.
struct FouParams {
    double mu = 0.0;
    double kappa = 0.1;
    double nu = 1.0;
    double hurst = 0.5;

    [[nodiscard]] double alpha() const { return hurst - 0.5; }
    // Scale b with b^2 = kappa^{2H} / (H Gamma(2H)); links nu to the driving fBm.
    [[nodiscard]] double scale_b() const;
    void validate() const;
};

struct CauchyParams {
    double mu = 0.0;
    double beta = 1.0;
    double nu = 1.0;
    double alpha = 0.0;

    void validate() const;
};

// The known location lives in params.mu; `estimated` treats it as free.
enum class MeanMode { known, estimated };

struct ModelSpec {
    std::variant<FouParams, CauchyParams> params = FouParams{};
    MeanMode mean_mode = MeanMode::known;

    [[nodiscard]] Family family() const {
        return std::holds_alternative<FouParams>(params) ? Family::fou : Family::cauchy;
    }
    [[nodiscard]] double mu() const;
    [[nodiscard]] double nu() const;
    void set_mu(double mu);
    void set_nu(double nu);
    void validate() const;
};

enum class Roughness { rough, brownian, smooth };
enum class Memory { short_memory, long_memory };
enum class CltCase { case1_gaussian, case2_boundary, case3_rosenblatt };

struct RegimeLabel {
    Roughness roughness = Roughness::brownian;
    Memory memory = Memory::short_memory;
    CltCase clt_case = CltCase::case1_gaussian;
    double beta_decay = 1.0;
};

[[nodiscard]] std::string to_string(Roughness r);
[[nodiscard]] std::string to_string(Memory m);
[[nodiscard]] std::string to_string(CltCase c);

// Unit-variance fOU correlation at lag h (time units).
[[nodiscard]] double fou_acf(const FouParams& p, double h);
[[nodiscard]] double cauchy_acf(const CauchyParams& p, double h);
[[nodiscard]] double correlation(const ModelSpec& m, double h);

// gamma[j] = nu^2 rho(lags[j] * delta). fOU values are memoized per shape.
[[nodiscard]] std::vector<double> acv_vector(const ModelSpec& m, std::span<const std::size_t> lags,
                                             double delta);
// Lags 0 .. count-1.
[[nodiscard]] std::vector<double> acv_prefix(const ModelSpec& m, std::size_t count, double delta);

[[nodiscard]] RegimeLabel classify_regime(const ModelSpec& m);
[[nodiscard]] double arfima_d_from_beta(double beta_decay);

namespace acf_cache {
void clear();
[[nodiscard]] std::size_t size();
void set_enabled(bool on);
[[nodiscard]] bool enabled();
}  // namespace acf_cache

}  // namespace mcle
