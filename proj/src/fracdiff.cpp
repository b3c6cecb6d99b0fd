#include "qoslrd/fracdiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qoslrd/error.hpp"

namespace qoslrd {

namespace {
constexpr std::string_view kModule = "models";

// |d| = 1 is admitted so the operator reduces to integer differencing.
void check_d(double d) {
    if (!(std::abs(d) <= 1.0)) {
        throw Error(kModule, Errc::InvalidD, "fractional order d=" + std::to_string(d) + " must satisfy |d| <= 1");
    }
}
}  // namespace

FracDiffCoeffs frac_diff_coeffs(double d, std::size_t length) {
    check_d(d);
    if (length == 0) throw Error(kModule, Errc::InvalidSpec, "coefficient length must be at least 1");

    FracDiffCoeffs c;
    c.d = d;
    c.pi.resize(length);
    c.eta.resize(length);
    c.pi[0] = 1.0;
    c.eta[0] = 1.0;
    for (std::size_t j = 1; j < length; ++j) {
        const auto jd = static_cast<double>(j);
        c.pi[j] = c.pi[j - 1] * (jd - 1.0 - d) / jd;
        c.eta[j] = c.eta[j - 1] * (jd - 1.0 + d) / jd;
    }
    return c;
}

std::vector<double> frac_difference(std::span<const double> values, double d) {
    check_d(d);
    const std::size_t n = values.size();
    if (n == 0) return {};
    const auto coeffs = frac_diff_coeffs(d, n);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        double s = 0.0;
        for (std::size_t j = 0; j <= t; ++j) s += coeffs.pi[j] * values[t - j];
        out[t] = s;
    }
    return out;
}

TimeSeries frac_difference(const TimeSeries& series, double d) {
    return series.with_values(frac_difference(series.values(), d));
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b, std::size_t length) {
    std::vector<double> out(length, 0.0);
    for (std::size_t i = 0; i < std::min(a.size(), length); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < length; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

}  // namespace qoslrd
