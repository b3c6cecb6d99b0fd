#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qoslrd/error.hpp"
#include "qoslrd/lrd.hpp"
#include "regression.hpp"

namespace qoslrd {

namespace {

constexpr std::string_view kModule = "lrd";
constexpr std::size_t kMinPoints = 4;

void require_variance(std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) throw Error(kModule, Errc::ZeroVariance, "constant series");
}

HurstEstimate finish(HurstMethod method, std::vector<ScalePoint> points, double h_lo, double h_hi) {
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (const auto& p : points) {
        lx.push_back(std::log10(p.scale));
        ly.push_back(std::log10(p.statistic));
    }
    const auto fit = detail::fit_line(lx, ly);

    HurstEstimate est;
    est.method = method;
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.r_squared = fit.r_squared;
    est.points = std::move(points);
    const double raw = hurst_from_slope(method, fit.slope);
    est.h = std::clamp(raw, h_lo, h_hi);
    if (est.h != raw) {
        est.clamped = true;
        est.warnings.push_back("ClampWarning: estimate " + std::to_string(raw) + " clamped to [" +
                               std::to_string(h_lo) + ", " + std::to_string(h_hi) + "]");
    }
    return est;
}

}  // namespace

std::string_view to_string(HurstMethod method) noexcept {
    switch (method) {
        case HurstMethod::AggregatedVariance: return "aggregated_variance";
        case HurstMethod::RescaledRange: return "rescaled_range";
        case HurstMethod::Periodogram: return "periodogram";
    }
    return "unknown";
}

double hurst_from_slope(HurstMethod method, double slope) noexcept {
    switch (method) {
        case HurstMethod::AggregatedVariance: return 1.0 + slope / 2.0;
        case HurstMethod::RescaledRange: return slope;
        case HurstMethod::Periodogram: return (1.0 - slope) / 2.0;
    }
    return slope;
}

HurstEstimate hurst_aggregated_variance(std::span<const double> values, const AggregatedVarianceOptions& options) {
    const std::size_t n = values.size();
    const std::size_t min_block = std::max<std::size_t>(options.min_block, 1);
    if (n < 4 * min_block) {
        throw Error(kModule, Errc::SeriesTooShort,
                    "aggregated variance needs at least " + std::to_string(4 * min_block) + " observations");
    }
    require_variance(values);

    const std::size_t max_m = n / 4;
    const std::size_t grid = std::max<std::size_t>(options.max_blocks, 2);
    std::vector<std::size_t> sizes;
    const double lo = std::log(static_cast<double>(min_block));
    const double hi = std::log(static_cast<double>(max_m));
    for (std::size_t i = 0; i < grid; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(grid - 1);
        const auto m = static_cast<std::size_t>(std::llround(std::exp(lo + t * (hi - lo))));
        if (sizes.empty() || m != sizes.back()) sizes.push_back(std::clamp(m, min_block, max_m));
    }
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    std::vector<ScalePoint> points;
    std::vector<double> block_means;
    for (std::size_t m : sizes) {
        const std::size_t blocks = n / m;
        block_means.assign(blocks, 0.0);
        for (std::size_t b = 0; b < blocks; ++b) {
            double s = 0.0;
            for (std::size_t i = b * m; i < (b + 1) * m; ++i) s += values[i];
            block_means[b] = s / static_cast<double>(m);
        }
        const double var = sample_variance(block_means);
        if (var > 0.0) points.push_back({static_cast<double>(m), var});
    }
    if (points.size() < kMinPoints) {
        throw Error(kModule, Errc::SeriesTooShort, "too few block sizes for the aggregated-variance fit");
    }
    return finish(HurstMethod::AggregatedVariance, std::move(points), 0.0, 1.0);
}

HurstEstimate hurst_rescaled_range(std::span<const double> values, const RescaledRangeOptions& options) {
    const std::size_t n = values.size();
    const std::size_t min_block = std::max<std::size_t>(options.min_block, 2);
    if (n < 2 * min_block) {
        throw Error(kModule, Errc::SeriesTooShort,
                    "rescaled range needs at least " + std::to_string(2 * min_block) + " observations");
    }

    std::vector<ScalePoint> points;
    std::vector<std::string> warnings;
    for (std::size_t parts = 1; n / parts >= min_block; parts *= 2) {
        const std::size_t len = n / parts;
        double sum_rs = 0.0;
        std::size_t used = 0;
        for (std::size_t b = 0; b < parts; ++b) {
            const auto block = values.subspan(b * len, len);
            const double m = mean(block);
            double cum = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
                const double dev = block[i] - m;
                cum += dev;
                ss += dev * dev;
                if (i == 0) {
                    lo = hi = cum;
                } else {
                    lo = std::min(lo, cum);
                    hi = std::max(hi, cum);
                }
            }
            const double s = std::sqrt(ss / static_cast<double>(len));
            if (!(s > 0.0)) continue;
            sum_rs += (hi - lo) / s;
            ++used;
        }
        if (used == 0) {
            warnings.push_back("DegenerateScale: every block of length " + std::to_string(len) +
                               " has zero standard deviation");
            continue;
        }
        points.push_back({static_cast<double>(len), sum_rs / static_cast<double>(used)});
    }
    if (points.empty()) {
        throw Error(kModule, Errc::ZeroVariance, "all rescaled-range scales are degenerate");
    }
    // R/S is zero for a single-observation cumulative range; such points
    // cannot enter the log fit.
    std::erase_if(points, [](const ScalePoint& p) { return !(p.statistic > 0.0); });
    if (points.size() < kMinPoints) {
        throw Error(kModule, Errc::SeriesTooShort, "too few usable scales for the rescaled-range fit");
    }
    std::reverse(points.begin(), points.end());
    auto est = finish(HurstMethod::RescaledRange, std::move(points), 0.0, 1.0);
    est.warnings.insert(est.warnings.begin(), warnings.begin(), warnings.end());
    return est;
}

HurstEstimate hurst_periodogram(std::span<const double> values, const PeriodogramOptions& options) {
    const std::size_t n = values.size();
    if (n < 64) throw Error(kModule, Errc::SeriesTooShort, "periodogram needs at least 64 observations");
    if (!(options.frequency_fraction > 0.0 && options.frequency_fraction <= 0.5)) {
        throw Error(kModule, Errc::InvalidSpec, "frequency_fraction must be in (0, 0.5]");
    }
    require_variance(values);

    const auto k_max = static_cast<std::size_t>(
        std::floor(options.frequency_fraction * static_cast<double>(n) / 2.0));
    if (k_max < kMinPoints) {
        throw Error(kModule, Errc::SeriesTooShort, "too few Fourier frequencies in the low band");
    }

    const double m = mean(values);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = values[i] - m;

    const std::size_t bins = n / 2 + 1;
    auto* spectrum = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), centered.data(), spectrum, FFTW_ESTIMATE);
    fftw_execute(plan);

    // |sum x_j e^{i j lambda}|^2 does not depend on the sign convention of
    // the exponent or on the index origin.
    std::vector<ScalePoint> points;
    points.reserve(k_max);
    const double norm = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(n));
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double re = spectrum[k][0];
        const double im = spectrum[k][1];
        const double lambda = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        const double power = (re * re + im * im) * norm;
        if (power > 0.0) points.push_back({lambda, power});
    }
    fftw_destroy_plan(plan);
    fftw_free(spectrum);

    if (points.size() < kMinPoints) {
        throw Error(kModule, Errc::SeriesTooShort, "too few non-zero periodogram ordinates");
    }
    return finish(HurstMethod::Periodogram, std::move(points), 0.0, 1.2);
}

}  // namespace qoslrd
