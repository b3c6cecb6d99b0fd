// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qoslrd/error.hpp"
#include "qoslrd/evaluation.hpp"
#include "qoslrd/fracdiff.hpp"
#include "qoslrd/lrd.hpp"
#include "qoslrd/models.hpp"
#include "qoslrd/synthgen.hpp"

using namespace qoslrd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

TimeSeries simulate(GenKind kind, std::size_t n, std::uint64_t seed, double d = 0.0, double hurst = 0.5,
                    double offset = 0.0, std::vector<double> phi = {}) {
    GenSpec spec;
    spec.kind = kind;
    spec.n = n;
    spec.seed = seed;
    spec.d = d;
    spec.hurst = hurst;
    spec.offset = offset;
    spec.phi = std::move(phi);
    return generate(spec);
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome hurst_recovery() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (double h : {0.6, 0.7, 0.8, 0.9}) {
        double err[3] = {0, 0, 0};
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto x = simulate(GenKind::Fgn, 8192, 10000 + seed, 0.0, h);
            err[0] += std::fabs(hurst_aggregated_variance(x.values()).h - h) / 50.0;
            err[1] += std::fabs(hurst_rescaled_range(x.values()).h - h) / 50.0;
            err[2] += std::fabs(hurst_periodogram(x.values()).h - h) / 50.0;
        }
        for (double e : err) ok = ok && e <= 0.1;
        detail += fmt("H=%.1f av/rs/pg %.3f/%.3f/%.3f; ", h, err[0], err[1], err[2]);
    }
    const double secs = seconds_since(t0);
    return {ok && secs <= 60.0, detail + fmt("%.1f s", secs)};
}

Outcome classification() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (double d : {0.0, 0.2, 0.3, 0.4}) {
        int right = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto x = d == 0.0 ? simulate(GenKind::WhiteNoise, 4096, 20000 + seed)
                                    : simulate(GenKind::Arfima, 4096, 20000 + seed, d);
            const auto v = classify_memory(x.values()).verdict;
            right += (d == 0.0) == (v == MemoryVerdict::Srd);
        }
        ok = ok && right >= 45;
        detail += d == 0.0 ? fmt("white SRD %d/50; ", right) : fmt("d=%.1f LRD %d/50; ", d, right);
    }
    const double secs = seconds_since(t0);
    return {ok && secs <= 60.0, detail + fmt("%.1f s", secs)};
}

Outcome frac_algebra() {
    const auto t0 = Clock::now();
    double impulse = 0.0;
    for (double d : {0.1, 0.25, 0.45}) {
        const auto c = frac_diff_coeffs(d, 512);
        const auto prod = convolve(c.pi, c.eta, 512);
        for (std::size_t j = 0; j < 512; ++j) impulse = std::max(impulse, std::fabs(prod[j] - (j == 0 ? 1.0 : 0.0)));
    }
    double round_trip = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto x = simulate(GenKind::Arfima, 1000, 30000 + seed, 0.3).data();
        for (double d : {0.1, 0.25, 0.45}) {
            const auto back = frac_difference(frac_difference(x, d), -d);
            for (std::size_t i = 0; i < x.size(); ++i) round_trip = std::max(round_trip, std::fabs(back[i] - x[i]));
        }
    }
    const auto x = simulate(GenKind::WhiteNoise, 500, 30100).data();
    const auto y = frac_difference(x, 1.0);
    const auto dx = difference(x, 1);
    bool exact = y[0] == x[0];
    for (std::size_t t = 1; t < x.size(); ++t) exact = exact && y[t] == dx[t - 1];
    const double secs = seconds_since(t0);
    return {impulse <= 1e-10 && round_trip <= 1e-8 && exact && secs <= 1.0,
            fmt("impulse %.2e, round trip %.2e, d=1 %s; %.3f s", impulse, round_trip, exact ? "exact" : "MISMATCH",
                secs)};
}

Outcome d_estimation() {
    const auto t0 = Clock::now();
    ArfimaOptions pure;
    pure.max_p = 0;
    pure.max_q = 0;
    double sum = 0.0;
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const double d = fit_arfima(simulate(GenKind::Arfima, 2000, 40000 + seed, 0.3), pure).spec.d;
        sum += d;
        inside += d >= 0.2 && d <= 0.4;
    }
    const double secs = seconds_since(t0);
    const double mean_d = sum / 50.0;

    // Information only: the same data under the default (2,2) order grid.
    double sum_default = 0.0;
    int inside_default = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const double d = fit_arfima(simulate(GenKind::Arfima, 2000, 40000 + seed, 0.3)).spec.d;
        sum_default += d;
        inside_default += d >= 0.2 && d <= 0.4;
    }
    return {std::fabs(mean_d - 0.3) <= 0.05 && inside >= 45 && secs <= 300.0,
            fmt("mean d %.4f, %d/50 in [0.2,0.4]; %.1f s (default grid, 10 seeds: mean %.3f, %d/10 in range)", mean_d,
                inside, secs, sum_default / 10.0, inside_default)};
}

Outcome cross_validation() {
    const auto t0 = Clock::now();
    CvConfig config;
    config.window = 96;
    config.max_horizon = 48;
    config.step = 5;
    std::vector<CvReport> reports;
    for (std::uint64_t seed = 1000; seed < 1010; ++seed) {
        auto x = simulate(GenKind::Arfima, 2000, seed, 0.35, 0.5, 10.0);
        reports.push_back(rolling_cv(x, config));
    }
    const auto pooled = aggregate_reports(reports);
    const auto& imp = pooled.improvement_of(ModelFamily::Arfima, ModelFamily::Arima);
    const double arfima = pooled.metrics(ModelFamily::Arfima).mean_mape();
    const double arima = pooled.metrics(ModelFamily::Arima).mean_mape();
    const double naive = pooled.metrics(ModelFamily::Naive).mean_mape();
    const double mean = pooled.metrics(ModelFamily::Mean).mean_mape();
    const std::size_t origins = pooled.origins.size();
    const double secs = seconds_since(t0);
    const bool a = imp.mean > 0.0;
    const bool b = imp.per_horizon.back() > imp.per_horizon.front();
    const bool c = arfima < naive && arfima < mean;
    return {a && b && c && origins >= 1000 && secs <= 1800.0,
            fmt("(a) mean improvement %+.2f%% (b) h=1 %+.2f%% h=48 %+.2f%% (c) MAPE arfima %.3f arima %.3f naive %.3f "
                "mean %.3f; %zu origins, %zu excluded; %.0f s",
                imp.mean, imp.per_horizon.front(), imp.per_horizon.back(), arfima, arima, naive, mean, origins,
                pooled.excluded.size(), secs)};
}

Outcome window_speed() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto x = simulate(GenKind::Arfima, 96, 50000 + seed, 0.3, 0.5, 10.0);
        const auto t0 = Clock::now();
        const auto f = forecast(fit_arfima(transform(x, TransformSpec::box_cox(0.0))), 24);
        worst = std::max(worst, seconds_since(t0));
        if (f.point.size() != 24) return {false, "forecast length mismatch"};
    }
    return {worst <= 1.0, fmt("slowest of 5 windows %.1f ms", worst * 1000.0)};
}

Outcome adf_calibration() {
    const auto t0 = Clock::now();
    int false_rejections = 0, detections = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        false_rejections += adf_test(simulate(GenKind::RandomWalk, 2000, 60000 + seed).values()).stationary_at_5pct;
        detections +=
            adf_test(simulate(GenKind::Arma, 2000, 61000 + seed, 0.0, 0.5, 0.0, {0.5}).values()).stationary_at_5pct;
    }
    const double secs = seconds_since(t0);
    return {false_rejections <= 20 && detections >= 180 && secs <= 120.0,
            fmt("type-I %d/200 (%.1f%%), power %d/200 (%.1f%%); %.1f s", false_rejections, false_rejections / 2.0,
                detections, detections / 2.0, secs)};
}

bool throws(Errc code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

Outcome metric_identities() {
    int failed = 0;
    auto expect = [&](bool cond) { failed += !cond; };
    using V = std::vector<double>;
    expect(mape(V{100, 200}, V{110, 180}) == 10.0);
    expect(mape(V{3, 7, 11}, V{3, 7, 11}) == 0.0);
    expect(mape(V{100}, V{0}) == 100.0);
    expect(mae(V{1, 2, 3}, V{2, 2, 2}) == 2.0 / 3.0);
    expect(mae(V{4, 5}, V{4, 5}) == 0.0);
    expect(mae(V{0, 0}, V{-1, 1}) == 1.0);
    expect(improvement(40.0, 25.0) == 37.5);
    expect(improvement(12.0, 12.0) == 0.0);
    expect(improvement(10.0, 20.0) == -100.0);
    expect(throws(Errc::LengthMismatch, [] { (void)mape(V{1, 2}, V{1}); }));
    expect(throws(Errc::ZeroActual, [] { (void)mape(V{0, 2}, V{1, 2}); }));
    expect(throws(Errc::LengthMismatch, [] { (void)mae(V{1}, V{1, 2}); }));
    expect(throws(Errc::ZeroBaseline, [] { (void)improvement(0.0, 3.0); }));
    return {failed == 0, fmt("improvement(40, 25) = %.10g; %d of 13 identities failed", improvement(40.0, 25.0),
                             failed)};
}

Outcome interval_shape() {
    const auto x = simulate(GenKind::WhiteNoise, 200, 70000, 0.0, 0.5, 50.0);
    const auto fm = forecast(fit_mean(x), 48);
    double mean_spread = 0.0;
    for (std::size_t k = 0; k < 48; ++k) {
        mean_spread = std::max(mean_spread, std::fabs((fm.upper[k] - fm.lower[k]) - (fm.upper[0] - fm.lower[0])));
    }
    const auto fn = forecast(fit_naive(simulate(GenKind::RandomWalk, 200, 70001, 0.0, 0.5, 50.0)), 48);
    double naive_dev = 0.0;
    const double w1 = fn.upper[0] - fn.lower[0];
    for (std::size_t k = 0; k < 48; ++k) {
        const double ratio = (fn.upper[k] - fn.lower[k]) / w1;
        naive_dev = std::max(naive_dev, std::fabs(ratio - std::sqrt(static_cast<double>(k + 1))));
    }

    // Coverage: fit once on a long simulation, then re-anchor the fitted
    // model on fresh data at 500 origins and score the 95% intervals.
    constexpr std::size_t kHistory = 1000, kStride = 10, kOrigins = 500, kH = 10;
    const auto model = fit_arfima(simulate(GenKind::Arfima, 8000, 70002, 0.3, 0.5, 0.0, {0.3}));
    GenSpec fresh;
    fresh.kind = GenKind::Arfima;
    fresh.n = kHistory + kStride * kOrigins + kH;
    fresh.seed = 70003;
    fresh.d = 0.3;
    fresh.phi = {0.3};
    const auto y = generate(fresh).data();
    std::size_t covered = 0, total = 0;
    for (std::size_t i = 0; i < kOrigins; ++i) {
        const std::size_t origin = kHistory + i * kStride;
        const std::span<const double> hist(y.data() + origin - kHistory, kHistory);
        const auto f = forecast(rebind_history(model, hist), kH);
        for (std::size_t k = 0; k < kH; ++k) {
            covered += y[origin + k] >= f.lower[k] && y[origin + k] <= f.upper[k];
            ++total;
        }
    }
    const double coverage = 100.0 * static_cast<double>(covered) / static_cast<double>(total);
    return {mean_spread == 0.0 && naive_dev <= 1e-9 && coverage >= 88.0 && coverage <= 99.0,
            fmt("MEAN width spread %.1e, NAIVE sqrt(h) deviation %.1e, ARFIMA(%zu,%.3f,%zu) coverage %.2f%% (%zu points)",
                mean_spread, naive_dev, model.spec.p, model.spec.d, model.spec.q, coverage, total)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"hurst recovery", hurst_recovery},     {"memory classification", classification},
        {"fractional algebra", frac_algebra},   {"d estimation", d_estimation},
        {"rolling cross-validation", cross_validation}, {"window speed", window_speed},
        {"adf calibration", adf_calibration},   {"metric identities", metric_identities},
        {"interval shape", interval_shape},
    };
    int failures = 0;
    int index = 1;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
