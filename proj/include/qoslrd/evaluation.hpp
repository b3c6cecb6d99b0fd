#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qoslrd/models.hpp"
#include "qoslrd/series.hpp"

namespace qoslrd {

/// Rolling-origin protocol. Defaults are four days of hourly samples for
/// training and two days of forecast horizon.
struct CvConfig {
    std::size_t window = 96;
    std::size_t max_horizon = 48;
    std::size_t step = 1;
    std::vector<ModelFamily> methods{ModelFamily::Naive, ModelFamily::Mean, ModelFamily::Arima,
                                     ModelFamily::Arfima};
    double level = 0.95;
    TransformSpec transform = TransformSpec::box_cox(0.0);
    /// Worker threads for origin evaluation; results never depend on it.
    std::size_t threads = 1;

    /// Protocol equality; `threads` is ignored.
    [[nodiscard]] bool same_protocol(const CvConfig& other) const;
};

struct BoxplotStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Forecast errors of one method. Rows of `errors` / `pct_errors` are
/// origins (in `origins` order), columns are horizons 1..max_horizon.
struct MetricSet {
    std::vector<double> mae;   ///< per horizon
    std::vector<double> mape;  ///< per horizon, percent
    std::vector<std::vector<double>> errors;      ///< e = y - yhat
    std::vector<std::vector<double>> pct_errors;  ///< P = 100 e / y
    std::vector<BoxplotStats> abs_pct_quantiles;  ///< of |P| per horizon
    std::size_t count = 0;

    [[nodiscard]] double mean_mape() const noexcept;
    [[nodiscard]] double mean_mae() const noexcept;
};

struct Improvement {
    ModelFamily baseline;
    ModelFamily candidate;
    std::vector<double> per_horizon;  ///< NaN where the baseline MAPE is zero
    double mean = 0.0;                ///< on the horizon-averaged MAPE
    double max = 0.0;                 ///< over horizons
};

struct ExcludedOrigin {
    std::string series_label;
    std::size_t origin = 0;
    ModelFamily method = ModelFamily::Mean;
    std::string error;
};

struct CvReport {
    std::string series_label;
    CvConfig config;
    std::vector<ModelFamily> methods;
    std::vector<MetricSet> per_method;  ///< parallel to `methods`
    std::vector<Improvement> improvements;
    std::vector<std::size_t> origins;   ///< origins that entered the aggregates
    std::vector<ExcludedOrigin> excluded;
    std::size_t origins_attempted = 0;

    [[nodiscard]] const MetricSet& metrics(ModelFamily method) const;
    [[nodiscard]] const Improvement& improvement_of(ModelFamily candidate, ModelFamily baseline) const;
    /// methods x origins x horizons, counting only origins that were kept.
    [[nodiscard]] std::size_t experiment_count() const noexcept;
};

[[nodiscard]] double mae(std::span<const double> actual, std::span<const double> forecast);
[[nodiscard]] double mape(std::span<const double> actual, std::span<const double> forecast);

/// ((baseline - candidate) / baseline) * 100; positive when the candidate
/// has the smaller MAPE.
[[nodiscard]] double improvement(double mape_baseline, double mape_candidate);

/// Origins are window, window + step, ... up to size() - max_horizon. An
/// origin where any method fails to fit is dropped for every method.
[[nodiscard]] CvReport rolling_cv(const TimeSeries& series, const CvConfig& config = {});

/// Pools the per-origin error matrices of several reports and recomputes
/// every aggregate. Throws ConfigMismatch when protocols differ.
[[nodiscard]] CvReport aggregate_reports(std::span<const CvReport> reports, std::string label = "aggregate");

/// Linear-interpolation sample quantile (Hyndman-Fan type 7) of sorted data.
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double prob) noexcept;

}  // namespace qoslrd
