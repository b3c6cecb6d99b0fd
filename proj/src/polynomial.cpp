#include "polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qoslrd::detail {

bool roots_outside_unit_circle(std::span<const double> c, double tol) {
    // Drop trailing zeros: they do not contribute roots.
    std::size_t k = c.size();
    while (k > 0 && c[k - 1] == 0.0) --k;
    if (k == 0) return true;
    for (std::size_t i = 0; i < k; ++i) {
        if (!std::isfinite(c[i])) return false;
    }
    if (k == 1) return std::abs(c[0]) < 1.0 / (1.0 + tol);

    // Eigenvalues of the companion matrix are the reciprocal roots.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) companion(0, static_cast<Eigen::Index>(i)) = c[i];
    for (std::size_t i = 1; i < k; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) return false;
    const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    return radius < 1.0 / (1.0 + tol);
}

}  // namespace qoslrd::detail
