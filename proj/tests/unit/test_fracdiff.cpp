#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qoslrd/fracdiff.hpp"

using namespace qoslrd;
using namespace qoslrd::testing;

namespace {

// eta_j = Gamma(j + d) / (Gamma(j + 1) Gamma(d)) via log-gamma, for d > 0.
double eta_gamma(double d, std::size_t j) {
    const double jd = static_cast<double>(j);
    return std::exp(std::lgamma(jd + d) - std::lgamma(jd + 1.0) - std::lgamma(d));
}

// Binomial series of (1 - B)^d: pi_j = Gamma(j - d) / (Gamma(j + 1) Gamma(-d)),
// written with the sign-aware gamma for 0 < d < 1.
double pi_gamma(double d, std::size_t j) {
    if (j == 0) return 1.0;
    const double jd = static_cast<double>(j);
    int sign_num = 1, sign_den = 1;
    const double num = lgamma_r(jd - d, &sign_num);
    const double den = lgamma_r(-d, &sign_den);
    return sign_num * sign_den * std::exp(num - std::lgamma(jd + 1.0) - den);
}

}  // namespace

TEST_SUITE("fracdiff") {

TEST_CASE("leading coefficients") {
    const auto c = frac_diff_coeffs(0.3, 3);
    CHECK(c.eta[0] == 1.0);
    CHECK(c.eta[1] == doctest::Approx(0.3));
    CHECK(c.eta[2] == doctest::Approx(0.195));
    CHECK(c.pi[0] == 1.0);
    CHECK(c.pi[1] == doctest::Approx(-0.3));

    const auto one = frac_diff_coeffs(1.0, 3);
    CHECK(one.pi == std::vector<double>{1.0, -1.0, 0.0});
}

TEST_CASE("recursions agree with the gamma-function closed form") {
    for (double d : {0.05, 0.2, 0.3, 0.45, 0.7}) {
        const auto c = frac_diff_coeffs(d, 400);
        for (std::size_t j = 0; j < 400; ++j) {
            CHECK(c.eta[j] == doctest::Approx(eta_gamma(d, j)).epsilon(1e-10));
            CHECK(c.pi[j] == doctest::Approx(pi_gamma(d, j)).epsilon(1e-10));
        }
    }
}

TEST_CASE("pi and eta are operator inverses") {
    for (double d : {0.1, 0.25, 0.4, 0.45, -0.3}) {
        constexpr std::size_t kLen = 512;
        const auto c = frac_diff_coeffs(d, kLen);
        const auto prod = convolve(c.pi, c.eta, kLen);
        CHECK(prod[0] == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t j = 1; j < kLen; ++j) CHECK(std::fabs(prod[j]) <= 1e-10);
    }
}

TEST_CASE("invalid arguments") {
    check_errc([] { (void)frac_diff_coeffs(1.2, 5); }, Errc::InvalidD);
    check_errc([] { (void)frac_diff_coeffs(-1.5, 5); }, Errc::InvalidD);
    check_errc([] { (void)frac_diff_coeffs(0.2, 0); }, Errc::InvalidSpec);
    check_errc([] { (void)frac_difference(std::vector<double>{1, 2}, std::nan("")); }, Errc::InvalidD);
}

TEST_CASE("frac_difference examples") {
    const std::vector<double> x{1, 4, 9, 16};
    CHECK(frac_difference(x, 0.0) == x);
    CHECK(frac_difference(x, 1.0) == std::vector<double>{1, 3, 5, 7});

    const TimeSeries s(x, 0, 60.0, "lbl");
    const auto y = frac_difference(s, 0.3);
    CHECK(y.size() == 4);
    CHECK(y.label() == "lbl");
    CHECK(y[1] == doctest::Approx(4.0 - 0.3 * 1.0));
}

TEST_CASE("frac_difference round trip") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto x = arfima(0.3, 1000, seed).data();
        for (double d : {0.1, 0.3, 0.45}) {
            const auto back = frac_difference(frac_difference(x, d), -d);
            for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(back[i] - x[i]) <= 1e-8);
        }
    }
}

TEST_CASE("d = 1 matches integer differencing after the first sample") {
    const auto x = white_noise(300, 3).data();
    const auto y = frac_difference(x, 1.0);
    const auto dx = difference(x, 1);
    CHECK(y[0] == x[0]);
    for (std::size_t t = 1; t < x.size(); ++t) CHECK(y[t] == dx[t - 1]);
}

}
