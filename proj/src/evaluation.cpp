#include "qoslrd/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>

#include "qoslrd/error.hpp"

namespace qoslrd {

namespace {

constexpr std::string_view kModule = "evaluation";

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(kModule, Errc::LengthMismatch,
                    "actual has " + std::to_string(a.size()) + " values, forecast has " + std::to_string(b.size()));
    }
}

struct OriginResult {
    // One row of errors per method, or the failure that excluded the origin.
    std::vector<std::vector<double>> errors;
    std::vector<std::vector<double>> pct_errors;
    std::optional<ExcludedOrigin> failure;
};

OriginResult evaluate_origin(const TimeSeries& raw, const TimeSeries& transformed, std::size_t origin,
                             const CvConfig& config) {
    OriginResult out;
    const auto window = transformed.slice(origin - config.window, config.window);
    for (ModelFamily method : config.methods) {
        try {
            const auto model = fit_model(window, method);
            const auto fc = forecast(model, config.max_horizon, config.level);
            std::vector<double> e(config.max_horizon), p(config.max_horizon);
            for (std::size_t k = 0; k < config.max_horizon; ++k) {
                const double actual = raw[origin + k];
                e[k] = actual - fc.point[k];
                p[k] = 100.0 * e[k] / actual;
            }
            out.errors.push_back(std::move(e));
            out.pct_errors.push_back(std::move(p));
        } catch (const std::exception& ex) {
            out.failure = ExcludedOrigin{raw.label(), origin, method, ex.what()};
            return out;
        }
    }
    return out;
}

void summarize(CvReport& report) {
    const std::size_t horizons = report.config.max_horizon;
    for (auto& ms : report.per_method) {
        ms.count = ms.errors.size();
        ms.mae.assign(horizons, 0.0);
        ms.mape.assign(horizons, 0.0);
        ms.abs_pct_quantiles.assign(horizons, {});
        std::vector<double> column;
        for (std::size_t k = 0; k < horizons; ++k) {
            column.clear();
            double sum_abs = 0.0;
            for (std::size_t r = 0; r < ms.count; ++r) {
                sum_abs += std::abs(ms.errors[r][k]);
                column.push_back(std::abs(ms.pct_errors[r][k]));
            }
            if (ms.count == 0) {
                ms.mae[k] = ms.mape[k] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            double sum_pct = 0.0;
            for (double v : column) sum_pct += v;
            ms.mae[k] = sum_abs / static_cast<double>(ms.count);
            ms.mape[k] = sum_pct / static_cast<double>(ms.count);
            std::sort(column.begin(), column.end());
            ms.abs_pct_quantiles[k] = {column.front(), quantile_sorted(column, 0.25), quantile_sorted(column, 0.5),
                                       quantile_sorted(column, 0.75), column.back()};
        }
    }

    report.improvements.clear();
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t a = 0; a < report.methods.size(); ++a) {
        for (std::size_t b = 0; b < report.methods.size(); ++b) {
            if (a == b) continue;
            const auto& base = report.per_method[a];
            const auto& cand = report.per_method[b];
            Improvement imp{report.methods[a], report.methods[b], std::vector<double>(horizons, nan), nan, nan};
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < horizons; ++k) {
                if (base.mape[k] > 0.0) {
                    imp.per_horizon[k] = improvement(base.mape[k], cand.mape[k]);
                    best = std::max(best, imp.per_horizon[k]);
                }
            }
            if (std::isfinite(best)) imp.max = best;
            if (base.mean_mape() > 0.0) imp.mean = improvement(base.mean_mape(), cand.mean_mape());
            report.improvements.push_back(std::move(imp));
        }
    }
}

}  // namespace

bool CvConfig::same_protocol(const CvConfig& other) const {
    return window == other.window && max_horizon == other.max_horizon && step == other.step &&
           methods == other.methods && level == other.level && transform == other.transform;
}

double MetricSet::mean_mape() const noexcept {
    if (mape.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double v : mape) s += v;
    return s / static_cast<double>(mape.size());
}

double MetricSet::mean_mae() const noexcept {
    if (mae.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double v : mae) s += v;
    return s / static_cast<double>(mae.size());
}

const MetricSet& CvReport::metrics(ModelFamily method) const {
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (methods[i] == method) return per_method[i];
    }
    throw Error(kModule, Errc::InvalidSpec, "method " + std::string(to_string(method)) + " not in report");
}

const Improvement& CvReport::improvement_of(ModelFamily candidate, ModelFamily baseline) const {
    for (const auto& imp : improvements) {
        if (imp.candidate == candidate && imp.baseline == baseline) return imp;
    }
    throw Error(kModule, Errc::InvalidSpec, "no improvement entry for this pair");
}

std::size_t CvReport::experiment_count() const noexcept {
    return methods.size() * origins.size() * config.max_horizon;
}

double mae(std::span<const double> actual, std::span<const double> forecast) {
    require_same_length(actual, forecast);
    if (actual.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) s += std::abs(actual[i] - forecast[i]);
    return s / static_cast<double>(actual.size());
}

double mape(std::span<const double> actual, std::span<const double> forecast) {
    require_same_length(actual, forecast);
    if (actual.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) throw Error(kModule, Errc::ZeroActual, "MAPE is undefined for a zero actual value");
        s += std::abs(100.0 * (actual[i] - forecast[i]) / actual[i]);
    }
    return s / static_cast<double>(actual.size());
}

double improvement(double mape_baseline, double mape_candidate) {
    if (!(mape_baseline > 0.0)) throw Error(kModule, Errc::ZeroBaseline, "baseline MAPE must be positive");
    return (mape_baseline - mape_candidate) / mape_baseline * 100.0;
}

double quantile_sorted(std::span<const double> sorted, double prob) noexcept {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

CvReport rolling_cv(const TimeSeries& series, const CvConfig& config) {
    if (config.window == 0 || config.max_horizon == 0 || config.step == 0) {
        throw Error(kModule, Errc::InvalidSpec, "window, max_horizon and step must be positive");
    }
    if (config.methods.empty()) throw Error(kModule, Errc::InvalidSpec, "at least one method is required");
    if (!(config.level > 0.0 && config.level < 1.0)) {
        throw Error(kModule, Errc::InvalidLevel, "interval level must lie in (0, 1)");
    }
    if (config.window + config.max_horizon > series.size()) {
        throw Error(kModule, Errc::ConfigTooLargeForSeries,
                    "window + max_horizon = " + std::to_string(config.window + config.max_horizon) +
                        " exceeds series length " + std::to_string(series.size()));
    }
    const auto transformed = transform(series, config.transform);

    std::vector<std::size_t> origins;
    for (std::size_t o = config.window; o + config.max_horizon <= series.size(); o += config.step) {
        origins.push_back(o);
    }

    std::vector<OriginResult> results(origins.size());
    const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, std::max<std::size_t>(origins.size(), 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < origins.size(); ++i) {
            results[i] = evaluate_origin(series, transformed, origins[i], config);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < origins.size(); i = next++) {
                    results[i] = evaluate_origin(series, transformed, origins[i], config);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    CvReport report;
    report.series_label = series.label();
    report.config = config;
    report.methods = config.methods;
    report.per_method.resize(config.methods.size());
    report.origins_attempted = origins.size();
    for (std::size_t i = 0; i < origins.size(); ++i) {
        auto& r = results[i];
        if (r.failure) {
            report.excluded.push_back(std::move(*r.failure));
            continue;
        }
        report.origins.push_back(origins[i]);
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            report.per_method[m].errors.push_back(std::move(r.errors[m]));
            report.per_method[m].pct_errors.push_back(std::move(r.pct_errors[m]));
        }
    }
    summarize(report);
    return report;
}

CvReport aggregate_reports(std::span<const CvReport> reports, std::string label) {
    if (reports.empty()) throw Error(kModule, Errc::InvalidSpec, "nothing to aggregate");
    CvReport out;
    out.series_label = std::move(label);
    out.config = reports.front().config;
    out.methods = reports.front().methods;
    out.per_method.resize(out.methods.size());
    for (const auto& r : reports) {
        if (!r.config.same_protocol(out.config) || r.methods != out.methods) {
            throw Error(kModule, Errc::ConfigMismatch,
                        "report '" + r.series_label + "' was produced under a different protocol");
        }
        out.origins.insert(out.origins.end(), r.origins.begin(), r.origins.end());
        out.excluded.insert(out.excluded.end(), r.excluded.begin(), r.excluded.end());
        out.origins_attempted += r.origins_attempted;
        for (std::size_t m = 0; m < out.methods.size(); ++m) {
            const auto& src = r.per_method[m];
            auto& dst = out.per_method[m];
            dst.errors.insert(dst.errors.end(), src.errors.begin(), src.errors.end());
            dst.pct_errors.insert(dst.pct_errors.end(), src.pct_errors.begin(), src.pct_errors.end());
        }
    }
    summarize(out);
    return out;
}

}  // namespace qoslrd
