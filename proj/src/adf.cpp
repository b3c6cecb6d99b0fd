#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "qoslrd/error.hpp"
#include "qoslrd/lrd.hpp"

namespace qoslrd {

namespace {
constexpr std::string_view kModule = "lrd";
}

std::size_t schwert_lag(std::size_t n) noexcept {
    return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

AdfResult adf_test(std::span<const double> values, std::optional<std::size_t> max_lag) {
    const std::size_t n = values.size();
    if (n < 25) throw Error(kModule, Errc::SeriesTooShort, "ADF test needs at least 25 observations");

    const std::size_t k = max_lag.value_or(schwert_lag(n));
    const std::size_t cols = k + 2;
    // Rows t = k+1 .. n-1 (0-based), one per usable first difference.
    if (n < k + 2 || n - 1 - k <= cols) {
        throw Error(kModule, Errc::SeriesTooShort,
                    "ADF with " + std::to_string(k) + " lags needs more than " + std::to_string(n) +
                        " observations");
    }
    const std::size_t rows = n - 1 - k;

    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + k + 1;
        const auto row = static_cast<Eigen::Index>(r);
        y(row) = values[t] - values[t - 1];
        x(row, 0) = values[t - 1];
        x(row, 1) = 1.0;
        for (std::size_t i = 1; i <= k; ++i) {
            x(row, static_cast<Eigen::Index>(i + 1)) = values[t - i] - values[t - i - 1];
        }
    }

    // Scale columns before the rank check so the threshold is unit-free.
    Eigen::VectorXd scale = x.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
        if (!(scale(j) > 0.0)) throw Error(kModule, Errc::SingularRegression, "ADF design has a zero column");
    }
    const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(cols)) {
        throw Error(kModule, Errc::SingularRegression, "ADF design matrix is rank deficient");
    }
    const Eigen::VectorXd coef_scaled = qr.solve(y);
    const Eigen::VectorXd resid = y - xs * coef_scaled;
    const double dof = static_cast<double>(rows - cols);
    const double s2 = resid.squaredNorm() / dof;

    // (X'X)^-1 of the scaled design via the triangular factor.
    const Eigen::Index c = static_cast<Eigen::Index>(cols);
    Eigen::MatrixXd r_inv = qr.matrixR().topLeftCorner(c, c).triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(c, c));
    const Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
    const Eigen::MatrixXd cov_scaled = qr.colsPermutation() * cov_perm * qr.colsPermutation().transpose();

    AdfResult out;
    out.lags_used = k;
    out.nobs = rows;
    out.gamma = coef_scaled(0) / scale(0);
    out.intercept = coef_scaled(1) / scale(1);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = static_cast<Eigen::Index>(i + 2);
        out.betas.push_back(coef_scaled(j) / scale(j));
    }
    const double se_gamma = std::sqrt(s2 * cov_scaled(0, 0)) / scale(0);
    if (!(se_gamma > 0.0)) throw Error(kModule, Errc::SingularRegression, "ADF regression has a perfect fit");
    out.statistic = out.gamma / se_gamma;
    out.stationary_at_5pct = out.statistic < out.critical_values.five_pct;
    return out;
}

}  // namespace qoslrd
