#include "qoslrd/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "qoslrd/error.hpp"

namespace qoslrd {

namespace {

constexpr std::string_view kModule = "series";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw Error(kModule, Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

double box_cox(double x, const TransformSpec& spec) {
    if (!spec.applied) return x;
    if (spec.lambda == 0.0) {
        if (!(x > 0.0)) {
            throw Error(kModule, Errc::NonPositiveValue, "log transform requires positive values");
        }
        return std::log(x);
    }
    if (x < 0.0) {
        throw Error(kModule, Errc::NonPositiveValue, "Box-Cox transform requires non-negative values");
    }
    return (std::pow(x, spec.lambda) - 1.0) / spec.lambda;
}

double inverse_box_cox(double w, const TransformSpec& spec) noexcept {
    if (!spec.applied) return w;
    if (spec.lambda == 0.0) return std::exp(w);
    const double base = std::max(0.0, spec.lambda * w + 1.0);
    return std::pow(base, 1.0 / spec.lambda);
}

TimeSeries::TimeSeries(std::vector<double> values, std::int64_t start_time, double interval,
                       std::string label, TransformSpec transform)
    : values_(std::move(values)),
      start_time_(start_time),
      interval_(interval),
      label_(std::move(label)),
      transform_(transform) {
    if (values_.empty()) throw Error(kModule, Errc::EmptyInput, "series has no observations");
    if (!(interval_ > 0.0)) throw Error(kModule, Errc::IrregularGrid, "interval must be positive");
}

TimeSeries TimeSeries::with_values(std::vector<double> values, std::size_t offset) const {
    const auto shift = static_cast<std::int64_t>(std::llround(static_cast<double>(offset) * interval_));
    return TimeSeries(std::move(values), start_time_ + shift, interval_, label_, transform_);
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size()) {
        throw Error(kModule, Errc::SeriesTooShort, "slice exceeds series length");
    }
    std::vector<double> part(values_.begin() + static_cast<std::ptrdiff_t>(first),
                             values_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return with_values(std::move(part), first);
}

TimeSeries read_csv(std::istream& in, const IngestOptions& options, std::string label) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<std::int64_t> stamps;
    std::vector<double> values;

    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        if (!header_seen) {
            if (row != "timestamp,value") parse_error(line_no, "expected header 'timestamp,value'");
            header_seen = true;
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos) parse_error(line_no, "expected two columns");
        const auto ts_text = trim(row.substr(0, comma));
        const auto val_text = trim(row.substr(comma + 1));

        std::int64_t ts = 0;
        auto [tp, tec] = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), ts);
        if (tec != std::errc{} || tp != ts_text.data() + ts_text.size()) {
            parse_error(line_no, "timestamp is not an integer");
        }
        double v = 0.0;
        auto [vp, vec] = std::from_chars(val_text.data(), val_text.data() + val_text.size(), v);
        if (vec != std::errc{} || vp != val_text.data() + val_text.size() || !std::isfinite(v)) {
            parse_error(line_no, "value is not a finite number");
        }
        if (options.require_positive && !(v > 0.0)) {
            throw Error(kModule, Errc::NonPositiveValue,
                        "line " + std::to_string(line_no) + ": value must be > 0");
        }
        if (!stamps.empty() && ts <= stamps.back()) {
            throw Error(kModule, Errc::IrregularGrid,
                        "line " + std::to_string(line_no) + ": timestamps must be strictly increasing");
        }
        stamps.push_back(ts);
        values.push_back(v);
    }
    if (values.empty()) throw Error(kModule, Errc::EmptyInput, "no observations in input");

    double interval = 1.0;
    if (options.interval_hint) {
        interval = *options.interval_hint;
        if (!(interval > 0.0)) throw Error(kModule, Errc::IrregularGrid, "interval hint must be positive");
    } else if (stamps.size() > 1) {
        // Modal difference; ties resolve to the smallest difference.
        std::map<std::int64_t, std::size_t> counts;
        for (std::size_t i = 1; i < stamps.size(); ++i) ++counts[stamps[i] - stamps[i - 1]];
        auto best = counts.begin();
        for (auto it = counts.begin(); it != counts.end(); ++it) {
            if (it->second > best->second) best = it;
        }
        interval = static_cast<double>(best->first);
    }

    std::vector<double> grid;
    grid.reserve(values.size());
    grid.push_back(values.front());
    for (std::size_t i = 1; i < stamps.size(); ++i) {
        const double steps = static_cast<double>(stamps[i] - stamps[i - 1]) / interval;
        const double whole = std::round(steps);
        const bool on_grid = std::abs(steps - whole) < 1e-9;
        if (on_grid && whole == 1.0) {
            grid.push_back(values[i]);
            continue;
        }
        if (on_grid && whole > 1.0 && options.gap_policy == GapPolicy::LastObservationCarriedForward) {
            for (int k = 1; k < static_cast<int>(whole); ++k) grid.push_back(grid.back());
            grid.push_back(values[i]);
            continue;
        }
        throw Error(kModule, Errc::IrregularGrid,
                    "gap of " + std::to_string(stamps[i] - stamps[i - 1]) + " s between timestamps " +
                        std::to_string(stamps[i - 1]) + " and " + std::to_string(stamps[i]));
    }
    return TimeSeries(std::move(grid), stamps.front(), interval, std::move(label));
}

TimeSeries ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(kModule, Errc::EmptyInput, "cannot open " + path.string());
    return read_csv(in, options, path.stem().string());
}

void write_csv(std::ostream& out, const TimeSeries& series) {
    out << "timestamp,value\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto ts = series.start_time() +
                        static_cast<std::int64_t>(std::llround(static_cast<double>(i) * series.interval()));
        std::snprintf(buf, sizeof buf, "%.9g", series[i]);
        out << ts << ',' << buf << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) throw Error(kModule, Errc::ParseError, "cannot write " + path.string());
    write_csv(out, series);
}

TimeSeries transform(const TimeSeries& series, const TransformSpec& spec) {
    std::vector<double> out(series.size());
    std::transform(series.values().begin(), series.values().end(), out.begin(),
                   [&](double x) { return box_cox(x, spec); });
    return TimeSeries(std::move(out), series.start_time(), series.interval(), series.label(), spec);
}

TimeSeries inverse_transform(const TimeSeries& series) {
    const auto& spec = series.transform();
    std::vector<double> out(series.size());
    std::transform(series.values().begin(), series.values().end(), out.begin(),
                   [&](double w) { return inverse_box_cox(w, spec); });
    return TimeSeries(std::move(out), series.start_time(), series.interval(), series.label());
}

std::vector<double> difference(std::span<const double> values, std::size_t order) {
    if (values.size() <= order) {
        throw Error(kModule, Errc::SeriesTooShort,
                    "differencing of order " + std::to_string(order) + " needs more than " +
                        std::to_string(order) + " observations");
    }
    std::vector<double> out(values.begin(), values.end());
    for (std::size_t pass = 0; pass < order; ++pass) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

TimeSeries difference(const TimeSeries& series, std::size_t order) {
    return series.with_values(difference(series.values(), order), order);
}

double mean(std::span<const double> values) noexcept {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) noexcept {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

AcfResult acf(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (max_lag >= n) {
        throw Error(kModule, Errc::LagTooLarge,
                    "max_lag " + std::to_string(max_lag) + " must be below series length " + std::to_string(n));
    }
    const double m = mean(values);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = values[i] - m;

    double gamma0 = 0.0;
    for (double c : centered) gamma0 += c * c;
    gamma0 /= static_cast<double>(n);
    if (!(gamma0 > 0.0)) throw Error(kModule, Errc::ZeroVariance, "constant series has no autocorrelation");

    AcfResult result;
    result.gamma0 = gamma0;
    result.n = n;
    result.rho.resize(max_lag + 1);
    result.rho[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) s += centered[t] * centered[t + k];
        result.rho[k] = s / static_cast<double>(n) / gamma0;
    }
    return result;
}

}  // namespace qoslrd
