#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qoslrd/series.hpp"

namespace qoslrd {

enum class HurstMethod { AggregatedVariance, RescaledRange, Periodogram };

[[nodiscard]] std::string_view to_string(HurstMethod method) noexcept;

struct ScalePoint {
    double scale;      ///< block size m, block length n, or frequency lambda
    double statistic;  ///< Var(X^(m)), mean R/S, or I(lambda)
};

/**
 * @brief Result of a log-log regression Hurst estimator.
 *
 * `slope` and `intercept` are the OLS fit of log10(statistic) against
 * log10(scale) over `points`. The Hurst exponent follows from the slope:
 *
 *   aggregated variance   h = 1 + slope / 2
 *   rescaled range        h = slope            (intercept = log10 C)
 *   periodogram           h = (1 - slope) / 2
 *
 * When the implied value falls outside the method's admissible range it is
 * clamped and `clamped` is set.
 */
struct HurstEstimate {
    HurstMethod method = HurstMethod::AggregatedVariance;
    double h = 0.5;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<ScalePoint> points;
    bool clamped = false;
    std::vector<std::string> warnings;
};

/// Hurst exponent implied by a fitted slope, before clamping.
[[nodiscard]] double hurst_from_slope(HurstMethod method, double slope) noexcept;

struct AggregatedVarianceOptions {
    std::size_t min_block = 2;
    std::size_t max_blocks = 20;  ///< number of log-spaced block sizes before de-duplication
};

struct RescaledRangeOptions {
    std::size_t min_block = 8;
};

struct PeriodogramOptions {
    double frequency_fraction = 0.10;
};

[[nodiscard]] HurstEstimate hurst_aggregated_variance(std::span<const double> values,
                                                      const AggregatedVarianceOptions& options = {});
[[nodiscard]] HurstEstimate hurst_rescaled_range(std::span<const double> values,
                                                 const RescaledRangeOptions& options = {});
[[nodiscard]] HurstEstimate hurst_periodogram(std::span<const double> values,
                                              const PeriodogramOptions& options = {});

/// Asymptotic Dickey-Fuller critical values, constant and no trend.
struct AdfCriticalValues {
    double one_pct = -3.43035;
    double five_pct = -2.86154;
    double ten_pct = -2.56677;
};

struct AdfResult {
    double statistic = 0.0;  ///< t-ratio of the y_{t-1} coefficient
    std::size_t lags_used = 0;
    std::size_t nobs = 0;  ///< rows in the regression
    AdfCriticalValues critical_values;
    bool stationary_at_5pct = false;
    double gamma = 0.0;      ///< coefficient on y_{t-1}
    double intercept = 0.0;
    std::vector<double> betas;  ///< lagged-difference coefficients
};

/// Schwert's rule floor(12 (n / 100)^(1/4)).
[[nodiscard]] std::size_t schwert_lag(std::size_t n) noexcept;

/// Augmented Dickey-Fuller regression with intercept:
///   dy_t = c + gamma y_{t-1} + sum_{i=1..k} beta_i dy_{t-i} + e_t
[[nodiscard]] AdfResult adf_test(std::span<const double> values,
                                 std::optional<std::size_t> max_lag = std::nullopt);

enum class MemoryVerdict { Lrd, Srd };

[[nodiscard]] std::string_view to_string(MemoryVerdict verdict) noexcept;

struct MemoryClassification {
    MemoryVerdict verdict = MemoryVerdict::Srd;
    std::array<HurstEstimate, 3> estimates;  ///< aggregated variance, R/S, periodogram
    double h_median = 0.5;
    double threshold = 0.6;  ///< h_median above this is LRD
};

struct ClassifyOptions {
    /// Estimator spread tolerated around H = 1/2 before a series is called
    /// long-memory. With the default the Hurst table of the original study
    /// (SRD medians 0.54-0.59, LRD medians >= 0.66) is reproduced; zero
    /// gives the bare H > 1/2 rule.
    double decision_margin = 0.1;
};

/// Runs the three estimators with default options; LRD iff the median
/// estimate exceeds 1/2 + decision_margin.
[[nodiscard]] MemoryClassification classify_memory(std::span<const double> values,
                                                   const ClassifyOptions& options = {});

struct SeasonalDiagnostic {
    bool present = false;
    std::vector<std::size_t> peak_lags;  ///< one per checked multiple, where found
    std::size_t multiples_checked = 0;
};

/**
 * Looks for the ACF bump that a daily cycle leaves at lags that are
 * multiples of `daily_lag`. A multiple counts as a peak when some lag within
 * +/-1 of it is a strict local maximum of rho and lies above the 95% white
 * noise band 1.96 / sqrt(n). Multiples m with m * daily_lag + 2 beyond the
 * last ACF lag are skipped, since a peak there cannot be confirmed. The
 * diagnostic is positive only when every checked multiple has a peak.
 */
[[nodiscard]] SeasonalDiagnostic seasonal_peak_diagnostic(const AcfResult& acf, std::size_t daily_lag);

/// Number of samples per day for a sampling interval in seconds (at least 1).
[[nodiscard]] std::size_t daily_lag_for_interval(double interval_seconds) noexcept;

}  // namespace qoslrd
