#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polynomial.hpp"
#include "qoslrd/models.hpp"

namespace qoslrd {

namespace {

constexpr int kMaxIterations = 200;

bool admissible(std::span<const double> phi, std::span<const double> theta) {
    if (!detail::roots_outside_unit_circle(phi)) return false;
    std::vector<double> neg(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) neg[i] = -theta[i];
    return detail::roots_outside_unit_circle(neg);
}

double sum_squares(std::span<const double> e) {
    double s = 0.0;
    for (double v : e) s += v * v;
    return s;
}

// Residuals and their Jacobian with respect to (phi, theta).
void residuals_and_jacobian(std::span<const double> w, std::span<const double> phi,
                            std::span<const double> theta, Eigen::VectorXd& e, Eigen::MatrixXd& jac) {
    const std::size_t p = phi.size();
    const std::size_t q = theta.size();
    const std::size_t n = w.size();
    const std::size_t m = n - p;
    const auto k = static_cast<Eigen::Index>(p + q);
    e.setZero(static_cast<Eigen::Index>(m));
    jac.setZero(static_cast<Eigen::Index>(m), k);

    for (std::size_t t = p; t < n; ++t) {
        const auto r = static_cast<Eigen::Index>(t - p);
        double v = w[t];
        for (std::size_t i = 0; i < p; ++i) v -= phi[i] * w[t - 1 - i];
        for (std::size_t j = 0; j < q; ++j) {
            if (t - p >= j + 1) v -= theta[j] * e(r - 1 - static_cast<Eigen::Index>(j));
        }
        e(r) = v;

        for (std::size_t i = 0; i < p; ++i) {
            double g = -w[t - 1 - i];
            for (std::size_t j = 0; j < q; ++j) {
                if (t - p >= j + 1) g -= theta[j] * jac(r - 1 - static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
            }
            jac(r, static_cast<Eigen::Index>(i)) = g;
        }
        for (std::size_t l = 0; l < q; ++l) {
            double g = (t - p >= l + 1) ? -e(r - 1 - static_cast<Eigen::Index>(l)) : 0.0;
            for (std::size_t j = 0; j < q; ++j) {
                if (t - p >= j + 1) {
                    g -= theta[j] * jac(r - 1 - static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(p + l));
                }
            }
            jac(r, static_cast<Eigen::Index>(p + l)) = g;
        }
    }
}

}  // namespace

double conditional_loglik(double sse, std::size_t count) noexcept {
    const auto m = static_cast<double>(count);
    const double sigma2 = sse / m;
    return -0.5 * m * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
}

std::vector<double> arma_css_residuals(std::span<const double> w, std::span<const double> phi,
                                       std::span<const double> theta) {
    const std::size_t p = phi.size();
    const std::size_t q = theta.size();
    if (w.size() <= p) return {};
    std::vector<double> e(w.size() - p, 0.0);
    for (std::size_t t = p; t < w.size(); ++t) {
        const std::size_t r = t - p;
        double v = w[t];
        for (std::size_t i = 0; i < p; ++i) v -= phi[i] * w[t - 1 - i];
        for (std::size_t j = 0; j < q && j < r; ++j) v -= theta[j] * e[r - 1 - j];
        e[r] = v;
    }
    return e;
}

std::optional<ArmaFit> fit_arma_css(std::span<const double> w, std::size_t p, std::size_t q,
                                    std::size_t condition) {
    condition = std::max(condition, p);
    if (w.size() <= condition + p + q + 1) return std::nullopt;
    const std::size_t skip = condition - p;
    auto scored = [skip](std::vector<double> e) {
        e.erase(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(skip));
        return e;
    };

    ArmaFit fit;
    fit.phi.assign(p, 0.0);
    fit.theta.assign(q, 0.0);

    if (p + q == 0) {
        fit.residuals.assign(w.begin() + static_cast<std::ptrdiff_t>(condition), w.end());
        fit.sse = sum_squares(fit.residuals);
        if (!(fit.sse > 0.0) || !std::isfinite(fit.sse)) return std::nullopt;
        return fit;
    }

    const auto k = static_cast<Eigen::Index>(p + q);
    const auto rows = static_cast<Eigen::Index>(w.size() - condition);
    Eigen::VectorXd e_full;
    Eigen::MatrixXd jac_full;
    residuals_and_jacobian(w, fit.phi, fit.theta, e_full, jac_full);
    Eigen::VectorXd e = e_full.tail(rows);
    Eigen::MatrixXd jac = jac_full.bottomRows(rows);
    double sse = e.squaredNorm();
    if (!(sse > 0.0) || !std::isfinite(sse)) return std::nullopt;

    double damping = 1e-3;
    std::vector<double> trial_phi(p), trial_theta(q);
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const Eigen::MatrixXd normal = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * e;

        bool accepted = false;
        bool converged = false;
        while (damping < 1e12) {
            Eigen::MatrixXd lhs = normal;
            for (Eigen::Index i = 0; i < k; ++i) lhs(i, i) += damping * (normal(i, i) + 1e-12);
            const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
            if (!step.allFinite()) {
                damping *= 10.0;
                continue;
            }
            for (std::size_t i = 0; i < p; ++i) trial_phi[i] = fit.phi[i] + step(static_cast<Eigen::Index>(i));
            for (std::size_t j = 0; j < q; ++j) {
                trial_theta[j] = fit.theta[j] + step(static_cast<Eigen::Index>(p + j));
            }
            if (!admissible(trial_phi, trial_theta)) {
                damping *= 10.0;
                continue;
            }
            const auto trial_e = scored(arma_css_residuals(w, trial_phi, trial_theta));
            const double trial_sse = sum_squares(trial_e);
            if (!(trial_sse < sse) || !std::isfinite(trial_sse)) {
                damping *= 10.0;
                continue;
            }
            const double gain = sse - trial_sse;
            fit.phi = trial_phi;
            fit.theta = trial_theta;
            converged = gain <= 1e-12 * sse || step.norm() < 1e-10;
            sse = trial_sse;
            damping = std::max(damping * 0.3, 1e-12);
            accepted = true;
            break;
        }
        if (!accepted || converged) break;
        residuals_and_jacobian(w, fit.phi, fit.theta, e_full, jac_full);
        e = e_full.tail(rows);
        jac = jac_full.bottomRows(rows);
    }

    fit.residuals = scored(arma_css_residuals(w, fit.phi, fit.theta));
    fit.sse = sum_squares(fit.residuals);
    if (!(fit.sse > 0.0) || !std::isfinite(fit.sse)) return std::nullopt;
    return fit;
}

}  // namespace qoslrd
