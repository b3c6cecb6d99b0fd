#include "qoslrd/synthgen.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>

#include "polynomial.hpp"
#include "qoslrd/error.hpp"
#include "qoslrd/fracdiff.hpp"

namespace qoslrd {

namespace {

constexpr std::string_view kModule = "synthgen";

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

ComplexBuffer alloc_complex(std::size_t n) {
    return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// In-place forward DFT of length n.
void dft_inplace(fftw_complex* data, std::size_t n) {
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

// y_t = sum phi_i y_{t-i} + x_t + sum theta_j x_{t-j}, zero presample.
std::vector<double> arma_filter(const std::vector<double>& x, const std::vector<double>& phi,
                                const std::vector<double>& theta) {
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        double v = x[t];
        for (std::size_t i = 0; i < phi.size() && i < t; ++i) v += phi[i] * y[t - 1 - i];
        for (std::size_t j = 0; j < theta.size() && j < t; ++j) v += theta[j] * x[t - 1 - j];
        y[t] = v;
    }
    return y;
}

void check_arma(const GenSpec& spec) {
    if (!detail::roots_outside_unit_circle(spec.phi, 0.0)) {
        throw Error(kModule, Errc::InvalidSpec, "AR polynomial is not causal");
    }
    std::vector<double> neg_theta(spec.theta.size());
    std::transform(spec.theta.begin(), spec.theta.end(), neg_theta.begin(), [](double v) { return -v; });
    if (!detail::roots_outside_unit_circle(neg_theta, 0.0)) {
        throw Error(kModule, Errc::InvalidSpec, "MA polynomial is not invertible");
    }
}

std::vector<double> davies_harte(std::size_t n, double hurst, GaussianSource& rng) {
    // Circulant embedding of the first m + 1 autocovariances into size 2m.
    std::size_t m = std::max<std::size_t>(n, 2);
    for (int attempt = 0; attempt < 4; ++attempt, m *= 2) {
        const std::size_t size = 2 * m;
        auto eig = alloc_complex(size);
        for (std::size_t k = 0; k < size; ++k) {
            const std::size_t lag = k <= m ? k : size - k;
            eig[k][0] = fgn_autocovariance(hurst, lag);
            eig[k][1] = 0.0;
        }
        dft_inplace(eig.get(), size);

        double max_eig = 0.0;
        double min_eig = 0.0;
        for (std::size_t k = 0; k < size; ++k) {
            max_eig = std::max(max_eig, eig[k][0]);
            min_eig = std::min(min_eig, eig[k][0]);
        }
        if (min_eig < -1e-10 * max_eig) continue;

        auto w = alloc_complex(size);
        const double scale = 1.0 / static_cast<double>(size);
        for (std::size_t k = 0; k < size; ++k) {
            const double amp = std::sqrt(std::max(0.0, eig[k][0]) * scale);
            w[k][0] = amp * rng.normal();
            w[k][1] = amp * rng.normal();
        }
        dft_inplace(w.get(), size);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = w[i][0];
        return out;
    }
    throw Error(kModule, Errc::NonEmbeddableCovariance,
                "circulant embedding has negative eigenvalues for H=" + std::to_string(hurst));
}

}  // namespace

double GaussianSource::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

double fgn_autocovariance(double hurst, std::size_t lag) noexcept {
    const double k = static_cast<double>(lag);
    const double e = 2.0 * hurst;
    return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

std::vector<double> theoretical_acf_arfima0d0(double d, std::size_t max_lag) {
    if (!(d > -0.5 && d < 0.5)) {
        throw Error(kModule, Errc::InvalidD, "ARFIMA(0,d,0) ACF requires d in (-0.5, 0.5)");
    }
    std::vector<double> rho(max_lag + 1);
    rho[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        const auto kd = static_cast<double>(k);
        rho[k] = rho[k - 1] * (kd - 1.0 + d) / (kd - d);
    }
    return rho;
}

TimeSeries generate(const GenSpec& spec) {
    if (spec.n == 0) throw Error(kModule, Errc::InvalidSpec, "n must be at least 1");
    if (!(spec.sigma > 0.0)) throw Error(kModule, Errc::InvalidSpec, "sigma must be positive");

    GaussianSource rng(spec.seed);
    std::vector<double> values;

    switch (spec.kind) {
        case GenKind::WhiteNoise: {
            values = rng.normals(spec.n);
            for (auto& v : values) v *= spec.sigma;
            break;
        }
        case GenKind::RandomWalk: {
            values = rng.normals(spec.n);
            double level = 0.0;
            for (auto& v : values) {
                level += spec.sigma * v;
                v = level;
            }
            break;
        }
        case GenKind::Arma: {
            check_arma(spec);
            auto noise = rng.normals(spec.n + kBurnIn);
            for (auto& v : noise) v *= spec.sigma;
            auto full = arma_filter(noise, spec.phi, spec.theta);
            values.assign(full.begin() + kBurnIn, full.end());
            break;
        }
        case GenKind::Arfima: {
            if (!(spec.d > -0.5 && spec.d < 0.5)) {
                throw Error(kModule, Errc::InvalidD, "ARFIMA requires d in (-0.5, 0.5)");
            }
            check_arma(spec);
            const std::size_t total = spec.n + kBurnIn;
            auto noise = rng.normals(total);
            for (auto& v : noise) v *= spec.sigma;
            const auto coeffs = frac_diff_coeffs(spec.d, total);
            std::vector<double> integrated(total);
            for (std::size_t t = 0; t < total; ++t) {
                double s = 0.0;
                for (std::size_t j = 0; j <= t; ++j) s += coeffs.eta[j] * noise[t - j];
                integrated[t] = s;
            }
            if (!spec.phi.empty() || !spec.theta.empty()) {
                integrated = arma_filter(integrated, spec.phi, spec.theta);
            }
            values.assign(integrated.begin() + kBurnIn, integrated.end());
            break;
        }
        case GenKind::Fgn: {
            if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) {
                throw Error(kModule, Errc::InvalidSpec, "FGN requires H in (0, 1)");
            }
            values = davies_harte(spec.n, spec.hurst, rng);
            for (auto& v : values) v *= spec.sigma;
            break;
        }
    }

    if (spec.offset != 0.0) {
        for (auto& v : values) v += spec.offset;
    }
    return TimeSeries(std::move(values), spec.start_time, spec.interval);
}

}  // namespace qoslrd
