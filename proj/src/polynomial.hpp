#pragma once

#include <span>

namespace qoslrd::detail {

/// True when every root of 1 - c_1 z - ... - c_k z^k lies outside the
/// circle of radius 1 + tol. Pass negated MA coefficients to test
/// invertibility of 1 + theta_1 z + ... .
[[nodiscard]] bool roots_outside_unit_circle(std::span<const double> c, double tol = 1e-6);

}  // namespace qoslrd::detail
