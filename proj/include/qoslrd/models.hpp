#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qoslrd/series.hpp"

namespace qoslrd {

enum class ModelFamily { Naive, Mean, Arima, Arfima };

[[nodiscard]] std::string_view to_string(ModelFamily family) noexcept;
/// Case-insensitive; throws InvalidSpec on unknown names.
[[nodiscard]] ModelFamily parse_model_family(std::string_view name);

/// Orders of a forecasting model. `d` is integral for ARIMA and lies in
/// [0, 0.5) for ARFIMA; NAIVE and MEAN carry p = d = q = 0.
struct ModelSpec {
    ModelFamily family = ModelFamily::Mean;
    std::size_t p = 0;
    double d = 0.0;
    std::size_t q = 0;
    bool include_mean = false;

    /// Throws InvalidSpec (or InvalidD) when the invariants above fail.
    void validate() const;
};

/**
 * @brief A model fitted to one (possibly transformed) training window.
 *
 * Coefficients follow the sign convention
 *
 *   w_t = phi_1 w_{t-1} + ... + phi_p w_{t-p} + z_t + theta_1 z_{t-1} + ... + theta_q z_{t-q}
 *
 * where w is the mean-adjusted series after integer differencing (ARIMA)
 * or fractional differencing (ARFIMA). For NAIVE `mean` holds the last
 * observation, for MEAN the sample mean.
 *
 * `history` keeps the training values on the transformed scale; forecasts
 * are computed from it and mapped back through `transform`.
 */
struct FittedModel {
    ModelSpec spec;
    std::vector<double> phi;
    std::vector<double> theta;
    double mean = 0.0;
    double sigma2 = 0.0;
    std::vector<double> residuals;
    double loglik = 0.0;
    double aicc = 0.0;
    TransformSpec transform;
    std::size_t n = 0;
    std::vector<double> history;
};

struct ForecastResult {
    std::vector<double> point;  ///< original scale
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> point_transformed;
    std::vector<double> psi;           ///< MA(inf) weights, transformed scale
    std::vector<double> scale_sigma2;  ///< per-horizon forecast variance, transformed scale
    double level = 0.95;

    [[nodiscard]] std::size_t horizons() const noexcept { return point.size(); }
};

enum class OrderSearch {
    /// Start from (2,2), (0,0), (1,0), (0,1) and move one step in p and/or q
    /// while AICc improves.
    Stepwise,
    /// Every (p, q) up to the limits.
    Exhaustive,
};

struct ArimaOptions {
    std::size_t max_p = 5;
    std::size_t max_q = 5;
    std::size_t max_d = 2;
    OrderSearch search = OrderSearch::Stepwise;
};

struct ArfimaOptions {
    std::size_t max_p = 2;
    std::size_t max_q = 2;
    /// Skip the d search and hold d at this value.
    std::optional<double> fixed_d;
};

/// Small-sample corrected AIC:
///   -2 loglik + 2 k n / (n - k - 1),  k = p + q + 1 + extra_params.
/// Throws DegenerateSampleSize unless n > k + 1.
[[nodiscard]] double aicc(double loglik, std::size_t n, std::size_t p, std::size_t q,
                          std::size_t extra_params = 0);

/// Gaussian log-likelihood of `count` residuals with sum of squares `sse`
/// at the maximum-likelihood variance sse / count.
[[nodiscard]] double conditional_loglik(double sse, std::size_t count) noexcept;

/// Conditional (CSS) innovations of an ARMA(p, q) model on an already
/// mean-adjusted, differenced series. The first p values are conditioned on
/// and presample innovations are zero, so the result has size() - p entries.
[[nodiscard]] std::vector<double> arma_css_residuals(std::span<const double> w, std::span<const double> phi,
                                                     std::span<const double> theta);

struct ArmaFit {
    std::vector<double> phi;
    std::vector<double> theta;
    std::vector<double> residuals;
    double sse = 0.0;
};

/// Minimises the conditional sum of squares over (phi, theta) from a zero
/// start with a damped Gauss-Newton iteration that never leaves the
/// causal / invertible region. Only residuals at t >= condition (at least p)
/// enter the objective, so candidates of different order can be scored on a
/// common sample. Returns nullopt when the fit degenerates.
[[nodiscard]] std::optional<ArmaFit> fit_arma_css(std::span<const double> w, std::size_t p, std::size_t q,
                                                  std::size_t condition = 0);

[[nodiscard]] FittedModel fit_naive(const TimeSeries& series);
[[nodiscard]] FittedModel fit_mean(const TimeSeries& series);

/// d is the smallest order whose differences pass the ADF test at 5%;
/// (p, q) minimise AICc over the grid.
[[nodiscard]] FittedModel fit_arima(const TimeSeries& series, const ArimaOptions& options = {});

/// Joint CSS estimation of (d, phi, theta) for every (p, q) in the grid;
/// d is searched on a 0.05 grid in [0, 0.45] and refined by golden section.
[[nodiscard]] FittedModel fit_arfima(const TimeSeries& series, const ArfimaOptions& options = {});

/// Fits an explicitly specified ARIMA / ARFIMA order (no selection).
[[nodiscard]] FittedModel fit_fixed(const TimeSeries& series, const ModelSpec& spec);

/// Dispatches on family with default options.
[[nodiscard]] FittedModel fit_model(const TimeSeries& series, ModelFamily family);

/// Same parameters, new conditioning history (already on the model's
/// transformed scale). NAIVE re-anchors on the new last observation.
[[nodiscard]] FittedModel rebind_history(const FittedModel& model, std::span<const double> history);

/// AR(inf) weights pi with pi(B) w_t = z_t on the mean-adjusted level scale
/// (pi[0] = 1), truncated to `length` terms.
[[nodiscard]] std::vector<double> ar_infinity_weights(const FittedModel& model, std::size_t length);

/// MA(inf) weights psi = 1 / pi(B), truncated to `length` terms.
[[nodiscard]] std::vector<double> ma_infinity_weights(const FittedModel& model, std::size_t length);

/// h-step point forecasts and Gaussian prediction intervals at `level`,
/// computed on the transformed scale and mapped back through the model's
/// transform. Throws InvalidLevel / InvalidSpec.
[[nodiscard]] ForecastResult forecast(const FittedModel& model, std::size_t h, double level = 0.95);

}  // namespace qoslrd
