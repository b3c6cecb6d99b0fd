#include <algorithm>
#include <cmath>
#include <string>

#include "qoslrd/error.hpp"
#include "qoslrd/lrd.hpp"

namespace qoslrd {

namespace {
constexpr std::string_view kModule = "lrd";
}

std::string_view to_string(MemoryVerdict verdict) noexcept {
    return verdict == MemoryVerdict::Lrd ? "LRD" : "SRD";
}

MemoryClassification classify_memory(std::span<const double> values, const ClassifyOptions& options) {
    if (values.size() < 256) {
        throw Error(kModule, Errc::SeriesTooShort, "memory classification needs at least 256 observations");
    }
    MemoryClassification out;
    out.estimates[0] = hurst_aggregated_variance(values);
    out.estimates[1] = hurst_rescaled_range(values);
    out.estimates[2] = hurst_periodogram(values);

    std::array<double, 3> h{out.estimates[0].h, out.estimates[1].h, out.estimates[2].h};
    std::sort(h.begin(), h.end());
    out.h_median = h[1];
    out.threshold = 0.5 + options.decision_margin;
    out.verdict = out.h_median > out.threshold ? MemoryVerdict::Lrd : MemoryVerdict::Srd;
    return out;
}

std::size_t daily_lag_for_interval(double interval_seconds) noexcept {
    if (!(interval_seconds > 0.0)) return 1;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(86400.0 / interval_seconds)));
}

SeasonalDiagnostic seasonal_peak_diagnostic(const AcfResult& acf, std::size_t daily_lag) {
    if (daily_lag < 2) throw Error(kModule, Errc::InvalidSpec, "daily_lag must be at least 2");
    const std::size_t max_lag = acf.max_lag();
    // A peak at k needs rho[k + 1], and k may sit one lag past the multiple.
    if (max_lag < 2 * daily_lag + 2) {
        throw Error(kModule, Errc::LagTooLarge,
                    "ACF must cover at least " + std::to_string(2 * daily_lag + 2) + " lags");
    }
    const double band = acf.n > 0 ? 1.96 / std::sqrt(static_cast<double>(acf.n)) : 0.0;
    const auto& rho = acf.rho;

    SeasonalDiagnostic out;
    bool all = true;
    for (std::size_t m = 1; m * daily_lag + 2 <= max_lag; ++m) {
        const std::size_t centre = m * daily_lag;
        ++out.multiples_checked;
        std::size_t best = 0;
        for (std::size_t k = centre - 1; k <= centre + 1; ++k) {
            const bool local_max = rho[k] > rho[k - 1] && rho[k] > rho[k + 1];
            if (local_max && rho[k] > band && (best == 0 || rho[k] > rho[best])) best = k;
        }
        if (best == 0) {
            all = false;
        } else {
            out.peak_lags.push_back(best);
        }
    }
    out.present = all && out.multiples_checked >= 2;
    return out;
}

}  // namespace qoslrd
