#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

#include "qoslrd/error.hpp"
#include "qoslrd/fracdiff.hpp"
#include "qoslrd/models.hpp"

namespace qoslrd {

namespace {

constexpr std::string_view kModule = "models";

// Power series of phi(B) / theta(B) with phi(B) = 1 - sum phi_i B^i and
// theta(B) = 1 + sum theta_j B^j.
std::vector<double> arma_ratio(std::span<const double> phi, std::span<const double> theta, std::size_t length) {
    std::vector<double> a(length, 0.0);
    if (length == 0) return a;
    a[0] = 1.0;
    for (std::size_t j = 1; j < length; ++j) {
        double v = j <= phi.size() ? -phi[j - 1] : 0.0;
        for (std::size_t i = 1; i <= theta.size() && i <= j; ++i) v -= theta[i - 1] * a[j - i];
        a[j] = v;
    }
    return a;
}

std::vector<double> integer_difference_poly(std::size_t d) {
    std::vector<double> poly{1.0};
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i];
        }
        poly = std::move(next);
    }
    return poly;
}

// Level subtracted from the history before the AR(inf) recursion.
double level_offset(const FittedModel& model) {
    switch (model.spec.family) {
        case ModelFamily::Mean:
        case ModelFamily::Arfima: return model.mean;
        case ModelFamily::Arima: return model.spec.include_mean ? model.mean : 0.0;
        case ModelFamily::Naive: return 0.0;
    }
    return 0.0;
}

}  // namespace

std::vector<double> ar_infinity_weights(const FittedModel& model, std::size_t length) {
    std::vector<double> pi(length, 0.0);
    if (length == 0) return pi;
    switch (model.spec.family) {
        case ModelFamily::Mean:
            pi[0] = 1.0;
            return pi;
        case ModelFamily::Naive:
            pi[0] = 1.0;
            if (length > 1) pi[1] = -1.0;
            return pi;
        case ModelFamily::Arima: {
            const auto a = arma_ratio(model.phi, model.theta, length);
            return convolve(a, integer_difference_poly(static_cast<std::size_t>(model.spec.d)), length);
        }
        case ModelFamily::Arfima: {
            const auto a = arma_ratio(model.phi, model.theta, length);
            const auto coeffs = frac_diff_coeffs(model.spec.d, length);
            return convolve(a, coeffs.pi, length);
        }
    }
    return pi;
}

std::vector<double> ma_infinity_weights(const FittedModel& model, std::size_t length) {
    const auto pi = ar_infinity_weights(model, length);
    std::vector<double> psi(length, 0.0);
    if (length == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t j = 1; j < length; ++j) {
        double v = 0.0;
        for (std::size_t i = 1; i <= j; ++i) v -= pi[i] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

ForecastResult forecast(const FittedModel& model, std::size_t h, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(kModule, Errc::InvalidLevel, "interval level must lie in (0, 1)");
    }
    if (h == 0) throw Error(kModule, Errc::InvalidSpec, "forecast horizon must be at least 1");
    if (model.history.empty()) throw Error(kModule, Errc::InvalidSpec, "model has no history to forecast from");

    ForecastResult out;
    out.level = level;
    out.point_transformed.resize(h);
    out.scale_sigma2.resize(h);

    const std::size_t n = model.history.size();
    if (model.spec.family == ModelFamily::Mean) {
        out.psi.assign(h, 0.0);
        out.psi[0] = 1.0;
        const double var = model.sigma2 * (1.0 + 1.0 / static_cast<double>(model.n));
        std::fill(out.point_transformed.begin(), out.point_transformed.end(), model.mean);
        std::fill(out.scale_sigma2.begin(), out.scale_sigma2.end(), var);
    } else {
        const double mu = level_offset(model);
        // Integrated ARIMA runs the ARMA recursion on the differenced history
        // and integrates back; applying the full AR(inf) filter to the raw
        // level would treat the zero presample as a step at t = 0.
        const std::size_t d_int =
            model.spec.family == ModelFamily::Arima ? static_cast<std::size_t>(model.spec.d) : 0;
        std::vector<double> base(model.history.begin(), model.history.end());
        for (auto& v : base) v -= mu;
        const std::vector<double> work = d_int > 0 ? difference(std::span<const double>(base), d_int) : base;
        const std::size_t m = work.size();
        const auto pi = d_int > 0 ? arma_ratio(model.phi, model.theta, m + h) : ar_infinity_weights(model, m + h);
        std::vector<double> z(m + h, 0.0);
        std::copy(work.begin(), work.end(), z.begin());
        for (std::size_t t = m; t < m + h; ++t) {
            double v = 0.0;
            for (std::size_t j = 1; j <= t; ++j) v -= pi[j] * z[t - j];
            z[t] = v;
        }
        if (d_int > 0) {
            const auto c = integer_difference_poly(d_int);
            base.resize(n + h);
            for (std::size_t k = 0; k < h; ++k) {
                const std::size_t t = n + k;
                double v = z[m + k];
                for (std::size_t i = 1; i <= d_int; ++i) v -= c[i] * base[t - i];
                base[t] = v;
            }
            for (std::size_t k = 0; k < h; ++k) out.point_transformed[k] = base[n + k] + mu;
        } else {
            for (std::size_t k = 0; k < h; ++k) out.point_transformed[k] = z[m + k] + mu;
        }
        out.psi = ma_infinity_weights(model, h);
        double cumulative = 0.0;
        for (std::size_t k = 0; k < h; ++k) {
            cumulative += out.psi[k] * out.psi[k];
            out.scale_sigma2[k] = model.sigma2 * cumulative;
        }
    }

    const boost::math::normal_distribution<double> standard;
    const double z = boost::math::quantile(standard, 0.5 + level / 2.0);
    out.point.resize(h);
    out.lower.resize(h);
    out.upper.resize(h);
    for (std::size_t k = 0; k < h; ++k) {
        const double centre = out.point_transformed[k];
        const double half = z * std::sqrt(out.scale_sigma2[k]);
        out.point[k] = inverse_box_cox(centre, model.transform);
        out.lower[k] = inverse_box_cox(centre - half, model.transform);
        out.upper[k] = inverse_box_cox(centre + half, model.transform);
    }
    return out;
}

}  // namespace qoslrd
