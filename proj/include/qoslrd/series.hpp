#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qoslrd {

/// Box-Cox transform parameters. `applied == false` is the identity.
struct TransformSpec {
    double lambda = 0.0;
    bool applied = false;

    [[nodiscard]] static TransformSpec identity() noexcept { return {0.0, false}; }
    [[nodiscard]] static TransformSpec box_cox(double lambda) noexcept { return {lambda, true}; }

    bool operator==(const TransformSpec&) const = default;
};

/// Forward Box-Cox of a single value. Throws NonPositiveValue when
/// lambda == 0 and x <= 0.
[[nodiscard]] double box_cox(double x, const TransformSpec& spec);

/// Inverse Box-Cox of a single value. For lambda != 0 the argument of the
/// fractional power is floored at zero, so the result is never NaN.
[[nodiscard]] double inverse_box_cox(double w, const TransformSpec& spec) noexcept;

/**
 * @brief Regularly sampled, gap-free series of observations.
 *
 * Values are indexed 0..size()-1 on a grid start_time + i * interval. The
 * object is immutable after construction; every operation returns a new
 * series. `transform()` records the Box-Cox spec that produced the values,
 * so a transformed series can be mapped back with inverse_transform().
 */
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, std::int64_t start_time = 0, double interval = 1.0,
                        std::string label = {}, TransformSpec transform = TransformSpec::identity());

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& data() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] std::int64_t start_time() const noexcept { return start_time_; }
    [[nodiscard]] double interval() const noexcept { return interval_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] const TransformSpec& transform() const noexcept { return transform_; }

    /// Same metadata, new values. start_time is shifted by `offset` samples.
    [[nodiscard]] TimeSeries with_values(std::vector<double> values, std::size_t offset = 0) const;

    /// Contiguous sub-range [first, first + count).
    [[nodiscard]] TimeSeries slice(std::size_t first, std::size_t count) const;

private:
    std::vector<double> values_;
    std::int64_t start_time_;
    double interval_;
    std::string label_;
    TransformSpec transform_;
};

enum class GapPolicy {
    Reject,
    LastObservationCarriedForward,
};

struct IngestOptions {
    std::optional<double> interval_hint;
    GapPolicy gap_policy = GapPolicy::Reject;
    /// Raw response-time traces must be strictly positive.
    bool require_positive = true;
};

/// Parse the `timestamp,value` CSV format. The interval is the hint when
/// given, otherwise the modal difference of consecutive timestamps.
[[nodiscard]] TimeSeries read_csv(std::istream& in, const IngestOptions& options = {},
                                  std::string label = {});

[[nodiscard]] TimeSeries ingest_csv(const std::filesystem::path& path,
                                    const IngestOptions& options = {});

/// Write the same `timestamp,value` format; values with 9 significant digits.
void write_csv(std::ostream& out, const TimeSeries& series);
void write_csv(const std::filesystem::path& path, const TimeSeries& series);

/// Elementwise Box-Cox. The result records `spec` for later inversion.
[[nodiscard]] TimeSeries transform(const TimeSeries& series, const TransformSpec& spec);

/// Undo the transform recorded on `series`; identity if none was applied.
[[nodiscard]] TimeSeries inverse_transform(const TimeSeries& series);

/// d-fold integer differencing (1 - B)^d; output length is size() - d.
[[nodiscard]] TimeSeries difference(const TimeSeries& series, std::size_t order);
[[nodiscard]] std::vector<double> difference(std::span<const double> values, std::size_t order);

struct AcfResult {
    std::vector<double> rho;  ///< rho[k] for k = 0..max_lag
    double gamma0 = 0.0;      ///< biased sample variance
    std::size_t n = 0;        ///< length of the series the ACF was computed from

    [[nodiscard]] std::size_t max_lag() const noexcept { return rho.empty() ? 0 : rho.size() - 1; }
};

/// Sample autocorrelation with the biased (1/N) autocovariance estimator.
[[nodiscard]] AcfResult acf(std::span<const double> values, std::size_t max_lag);
[[nodiscard]] inline AcfResult acf(const TimeSeries& series, std::size_t max_lag) {
    return acf(series.values(), max_lag);
}

/// Arithmetic mean and unbiased (n - 1) sample variance.
[[nodiscard]] double mean(std::span<const double> values) noexcept;
[[nodiscard]] double sample_variance(std::span<const double> values) noexcept;

}  // namespace qoslrd
