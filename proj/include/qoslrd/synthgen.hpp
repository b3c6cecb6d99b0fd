#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qoslrd/series.hpp"

namespace qoslrd {

/**
 * @brief Seeded standard-normal source with platform-stable output.
 *
 * Uniforms are the top 53 bits of std::mt19937_64 (whose output sequence is
 * fixed by the standard) mapped to (0, 1); normals come from the Box-Muller
 * transform, using both values of each pair. std::normal_distribution is
 * avoided because its algorithm is implementation-defined.
 */
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() noexcept;

    std::vector<double> normals(std::size_t n) {
        std::vector<double> out(n);
        for (auto& v : out) v = normal();
        return out;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class GenKind { WhiteNoise, Arma, Arfima, Fgn, RandomWalk };

struct GenSpec {
    GenKind kind = GenKind::WhiteNoise;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<double> phi;    ///< AR coefficients (ARMA, ARFIMA)
    std::vector<double> theta;  ///< MA coefficients (ARMA, ARFIMA)
    double d = 0.0;             ///< ARFIMA fractional order, (-0.5, 0.5)
    double hurst = 0.5;         ///< FGN Hurst exponent, (0, 1)
    double sigma = 1.0;         ///< innovation standard deviation (FGN: marginal)
    double offset = 0.0;        ///< added to every value after synthesis
    std::int64_t start_time = 0;
    double interval = 3600.0;
};

/// Samples discarded before ARMA / ARFIMA output starts.
inline constexpr std::size_t kBurnIn = 500;

/// Throws InvalidSpec, InvalidD or NonEmbeddableCovariance.
[[nodiscard]] TimeSeries generate(const GenSpec& spec);

/// Exact autocovariance of unit-variance fractional Gaussian noise.
[[nodiscard]] double fgn_autocovariance(double hurst, std::size_t lag) noexcept;

/// rho(k) of ARFIMA(0, d, 0): rho(0) = 1, rho(k) = rho(k-1) (k - 1 + d) / (k - d).
[[nodiscard]] std::vector<double> theoretical_acf_arfima0d0(double d, std::size_t max_lag);

}  // namespace qoslrd
