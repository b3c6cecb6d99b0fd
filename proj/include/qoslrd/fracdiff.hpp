#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qoslrd/series.hpp"

namespace qoslrd {

/// Binomial-expansion coefficients of the fractional differencing operator.
///
///   (1 - B)^d  = sum_j pi[j]  B^j
///   (1 - B)^-d = sum_j eta[j] B^j,   eta[j] = Gamma(j + d) / (Gamma(j + 1) Gamma(d))
///
/// Both are produced by the ratio recursions
///   pi[j]  = pi[j-1]  * (j - 1 - d) / j
///   eta[j] = eta[j-1] * (j - 1 + d) / j
/// which never touch Gamma and stay finite for any length.
struct FracDiffCoeffs {
    double d = 0.0;
    std::vector<double> pi;
    std::vector<double> eta;
};

/// Throws InvalidD unless |d| <= 1, InvalidSpec if length == 0.
[[nodiscard]] FracDiffCoeffs frac_diff_coeffs(double d, std::size_t length);

/// y_t = sum_{j=0..t} pi[j] x_{t-j}: (1 - B)^d with zero presample.
/// The output has the same length as the input.
[[nodiscard]] std::vector<double> frac_difference(std::span<const double> values, double d);
[[nodiscard]] TimeSeries frac_difference(const TimeSeries& series, double d);

/// Truncated power-series product (a * b)[0..length).
[[nodiscard]] std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                                           std::size_t length);

}  // namespace qoslrd
