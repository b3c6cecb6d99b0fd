#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include <cmath>

#include "../../src/polynomial.hpp"
#include "helpers.hpp"
#include "qoslrd/fracdiff.hpp"
#include "qoslrd/models.hpp"
#include "qoslrd/report_io.hpp"

using namespace qoslrd;
using namespace qoslrd::testing;

namespace {

bool admissible(const FittedModel& m) {
    std::vector<double> neg(m.theta.size());
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -m.theta[j];
    return detail::roots_outside_unit_circle(m.phi) && detail::roots_outside_unit_circle(neg);
}

FittedModel fractional_noise(double d, std::vector<double> history) {
    FittedModel m;
    m.spec = {ModelFamily::Arfima, 0, d, 0, true};
    m.mean = 0.0;
    m.sigma2 = 1.0;
    m.n = history.size();
    m.history = std::move(history);
    return m;
}

// Autocovariance of unit-innovation ARFIMA(0, d, 0).
std::vector<double> arfima_autocov(double d, std::size_t max_lag) {
    const double g0 = std::tgamma(1.0 - 2.0 * d) / std::pow(std::tgamma(1.0 - d), 2.0);
    auto rho = theoretical_acf_arfima0d0(d, max_lag);
    for (auto& r : rho) r *= g0;
    return rho;
}

// Weights a with xhat_{n+h} = a . x, obtained by forecasting unit vectors.
std::vector<double> predictor_weights(double d, std::size_t n, std::size_t h) {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        a[i] = forecast(fractional_noise(d, e), h).point_transformed[h - 1];
    }
    return a;
}

double prediction_mse(const std::vector<double>& gamma, const Eigen::VectorXd& a, std::size_t n, std::size_t h) {
    Eigen::MatrixXd g(n, n);
    Eigen::VectorXd c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) g(i, j) = gamma[i > j ? i - j : j - i];
        c(i) = gamma[n - 1 - i + h];  // cov(x_i, x_{n-1+h})
    }
    return gamma[0] - 2.0 * a.dot(c) + a.dot(g * a);
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("naive forecasts the last value") {
    const auto m = fit_naive(series_of({3, 5, 9}));
    const auto f = forecast(m, 5);
    for (double v : f.point) CHECK(v == 9.0);
    CHECK(m.residuals == std::vector<double>{2, 4});

    const auto flat = fit_naive(series_of({7, 7, 7}));
    CHECK(flat.sigma2 == 0.0);
    for (double v : forecast(flat, 3).point) CHECK(v == 7.0);
}

TEST_CASE("mean forecasts the sample mean") {
    const auto m = fit_mean(series_of({1, 2, 3}));
    CHECK(m.sigma2 == doctest::Approx(1.0));
    const auto f = forecast(m, 4);
    for (double v : f.point) CHECK(v == doctest::Approx(2.0));
    const double width = f.upper[0] - f.lower[0];
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(f.upper[k] - f.lower[k] == doctest::Approx(width).epsilon(1e-12));
        CHECK(f.scale_sigma2[k] == doctest::Approx(1.0 * (1.0 + 1.0 / 3.0)));
    }
    check_errc([] { (void)fit_mean(series_of({5})); }, Errc::SeriesTooShort);
    check_errc([] { (void)fit_naive(series_of({5})); }, Errc::SeriesTooShort);
}

TEST_CASE("naive interval width grows like sqrt(h)") {
    const auto m = fit_naive(random_walk(200, 5));
    const auto f = forecast(m, 48);
    const double unit = f.upper[0] - f.lower[0];
    for (std::size_t k = 0; k < 48; ++k) {
        const double ratio = (f.upper[k] - f.lower[k]) / (unit * std::sqrt(static_cast<double>(k + 1)));
        CHECK(std::fabs(ratio - 1.0) <= 1e-9);
        CHECK(f.scale_sigma2[k] == doctest::Approx(m.sigma2 * static_cast<double>(k + 1)));
    }
}

TEST_CASE("naive h-step variance matches a simulated random walk") {
    // Error of the last-value forecast h steps ahead is a sum of h innovations.
    constexpr std::size_t kReps = 4000;
    constexpr std::size_t kH = 10;
    GaussianSource src(77);
    std::vector<double> sq(kH, 0.0);
    for (std::size_t r = 0; r < kReps; ++r) {
        std::vector<double> path(60 + kH);
        double acc = 0.0;
        for (auto& v : path) v = acc += src.normal();
        const auto f = forecast(fit_naive(series_of({path.begin(), path.begin() + 60})), kH);
        for (std::size_t k = 0; k < kH; ++k) sq[k] += std::pow(path[60 + k] - f.point[k], 2.0);
    }
    for (std::size_t k = 0; k < kH; ++k) {
        const double empirical = sq[k] / kReps;
        CHECK(empirical == doctest::Approx(static_cast<double>(k + 1)).epsilon(0.08));
    }
}

TEST_CASE("mean model variance matches simulation") {
    constexpr std::size_t kReps = 4000;
    constexpr std::size_t kN = 20;
    GaussianSource src(78);
    double sq = 0.0;
    for (std::size_t r = 0; r < kReps; ++r) {
        auto x = src.normals(kN + 1);
        const auto f = forecast(fit_mean(series_of({x.begin(), x.begin() + kN})), 1);
        sq += std::pow(x[kN] - f.point[0], 2.0);
    }
    CHECK(sq / kReps == doctest::Approx(1.0 + 1.0 / kN).epsilon(0.08));
}

TEST_CASE("aicc formula") {
    CHECK(aicc(0.0, 100, 0, 0, 0) == doctest::Approx(2.0 * 100.0 / 98.0));
    CHECK(aicc(0.0, 100, 0, 0, 0) == doctest::Approx(2.0408).epsilon(1e-4));
    CHECK(aicc(-50.0, 100, 2, 1, 0) < aicc(-50.0, 100, 3, 1, 0));
    CHECK(aicc(-50.0, 100, 1, 1, 1) < aicc(-50.0, 100, 1, 1, 2));
    const double aic = -2.0 * -10.0 + 2.0 * 4.0;
    CHECK(aicc(-10.0, 10000000, 2, 1, 0) == doctest::Approx(aic).epsilon(1e-6));
    check_errc([] { (void)aicc(0.0, 3, 1, 0, 0); }, Errc::DegenerateSampleSize);
    check_errc([] { (void)aicc(0.0, 5, 1, 1, 1); }, Errc::DegenerateSampleSize);
}

TEST_CASE("model spec validation") {
    CHECK_NOTHROW(ModelSpec({ModelFamily::Arfima, 1, 0.3, 1, true}).validate());
    check_errc([] { ModelSpec({ModelFamily::Arfima, 0, 0.5, 0, true}).validate(); }, Errc::InvalidD);
    check_errc([] { ModelSpec({ModelFamily::Arfima, 0, -0.1, 0, true}).validate(); }, Errc::InvalidD);
    check_errc([] { ModelSpec({ModelFamily::Arima, 0, 0.5, 0, true}).validate(); }, Errc::InvalidD);
    check_errc([] { ModelSpec({ModelFamily::Arima, 0, 3.0, 0, true}).validate(); }, Errc::InvalidD);
    check_errc([] { ModelSpec({ModelFamily::Naive, 1, 0.0, 0, false}).validate(); }, Errc::InvalidSpec);
    CHECK(parse_model_family("arfima") == ModelFamily::Arfima);
    check_errc([] { (void)parse_model_family("sarima"); }, Errc::InvalidSpec);
}

TEST_CASE("length preconditions") {
    check_errc([] { (void)fit_arima(white_noise(29, 1, 10.0)); }, Errc::SeriesTooShort);
    check_errc([] { (void)fit_arfima(white_noise(63, 1, 10.0)); }, Errc::SeriesTooShort);
}

TEST_CASE("forecast argument validation") {
    const auto m = fit_mean(white_noise(50, 1));
    check_errc([&] { (void)forecast(m, 0); }, Errc::InvalidSpec);
    check_errc([&] { (void)forecast(m, 5, 1.0); }, Errc::InvalidLevel);
    check_errc([&] { (void)forecast(m, 5, 0.0); }, Errc::InvalidLevel);
}

TEST_CASE("AR(1) is recovered by fit_arima") {
    int expected_order = 0, ar1_cases = 0, ar1_close = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = fit_arima(ar1(0.6, 2000, 100 + seed));
        CHECK(m.spec.d == 0.0);
        CHECK(m.spec.include_mean);
        expected_order += (m.spec.p == 1 || m.spec.p == 2) && m.spec.q <= 1;
        if (m.spec.p == 1 && m.spec.q == 0) {
            ++ar1_cases;
            ar1_close += std::fabs(m.phi[0] - 0.6) <= 0.07;
        }
    }
    MESSAGE("AR(1) order hits " << expected_order << "/50, (1,0) fits " << ar1_cases);
    CHECK(expected_order >= 40);
    CHECK(ar1_cases > 0);
    CHECK(ar1_close == ar1_cases);
}

TEST_CASE("random walk is differenced once") {
    // The unit-root decision is an ADF test at 5%, so an occasional d = 0 is
    // the expected type-I error.
    int once = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = fit_arima(random_walk(500, 40 + seed, 100.0));
        CHECK(m.spec.d <= 1.0);
        CHECK(m.spec.include_mean == (m.spec.d == 0.0));
        once += m.spec.d == 1.0;
    }
    CHECK(once >= 45);
}

TEST_CASE("exhaustive order search never scores worse than stepwise") {
    ArimaOptions full;
    full.search = OrderSearch::Exhaustive;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto x = ar1(0.6, 500, 300 + seed);
        CHECK(fit_arima(x, full).aicc <= fit_arima(x).aicc + 1e-9);
    }
}

TEST_CASE("white noise selects the empty ARMA order") {
    int empty = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = fit_arima(white_noise(500, 60 + seed));
        empty += m.spec.p == 0 && m.spec.q == 0 && m.spec.d == 0.0;
    }
    CHECK(empty >= 30);
}

TEST_CASE("ARFIMA on white noise finds little memory") {
    int small = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) small += fit_arfima(white_noise(1000, 80 + seed)).spec.d <= 0.1;
    CHECK(small >= 16);
}

TEST_CASE("ARFIMA d estimate for fractional noise") {
    ArfimaOptions opts;
    opts.max_p = 0;
    opts.max_q = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = fit_arfima(arfima(0.3, 2000, seed), opts);
        CHECK(m.spec.d >= 0.2);
        CHECK(m.spec.d <= 0.4);
        CHECK(m.residuals.size() == 2000);
    }
    opts.fixed_d = 0.25;
    CHECK(fit_arfima(arfima(0.3, 500, 1), opts).spec.d == 0.25);
}

TEST_CASE("d = 0 reduction") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto x = ar1(0.5, 400, 10 + seed);
        for (auto [p, q] : {std::pair<std::size_t, std::size_t>{1, 0}, {1, 1}, {2, 1}}) {
            const auto a = fit_fixed(x, {ModelFamily::Arima, p, 0.0, q, true});
            const auto f = fit_fixed(x, {ModelFamily::Arfima, p, 0.0, q, true});
            CHECK(a.residuals == f.residuals);
            for (std::size_t i = 0; i < p; ++i) CHECK(std::fabs(a.phi[i] - f.phi[i]) <= 1e-4);
            for (std::size_t j = 0; j < q; ++j) CHECK(std::fabs(a.theta[j] - f.theta[j]) <= 1e-4);
        }
        ArfimaOptions fixed0;
        fixed0.fixed_d = 0.0;
        fixed0.max_p = 1;
        fixed0.max_q = 0;
        const auto sel = fit_arfima(x, fixed0);
        CHECK(sel.spec.d == 0.0);
    }
}

TEST_CASE("returned models are causal and invertible") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GenSpec spec;
        spec.kind = GenKind::Arma;
        spec.n = 300;
        spec.seed = seed;
        spec.phi = {0.7, -0.2};
        spec.theta = {0.4};
        spec.offset = 20.0;
        const auto x = generate(spec);
        const auto a = fit_arima(x);
        const auto f = fit_arfima(x);
        CHECK(admissible(a));
        CHECK(admissible(f));
        CHECK(a.sigma2 > 0.0);
        CHECK(f.sigma2 > 0.0);
        CHECK(admissible(fit_arfima(arfima(0.35, 96, seed, 10.0))));
        CHECK(admissible(fit_arima(transform(arfima(0.35, 96, seed, 10.0), TransformSpec::box_cox(0.0)))));
    }
}

TEST_CASE("fits are bit-identical across runs") {
    const auto x = transform(arfima(0.3, 96, 4, 10.0), TransformSpec::box_cox(0.0));
    const auto a = fit_arfima(x);
    const auto b = fit_arfima(x);
    CHECK(a.spec.d == b.spec.d);
    CHECK(a.phi == b.phi);
    CHECK(a.theta == b.theta);
    CHECK(a.residuals == b.residuals);
    CHECK(a.aicc == b.aicc);
    const auto c = fit_arima(x);
    const auto d = fit_arima(x);
    CHECK(c.phi == d.phi);
    CHECK(c.theta == d.theta);
    CHECK(forecast(c, 24).point == forecast(d, 24).point);
}

TEST_CASE("interval shape on the transformed scale") {
    const auto raw = arfima(0.3, 300, 21, 10.0);
    const auto x = transform(raw, TransformSpec::box_cox(0.0));
    for (const auto& m : {fit_arfima(x), fit_arima(x)}) {
        const auto f = forecast(m, 48);
        for (std::size_t k = 0; k < 48; ++k) {
            CHECK(f.lower[k] <= f.point[k]);
            CHECK(f.point[k] <= f.upper[k]);
            CHECK(f.lower[k] > 0.0);
            if (k > 0) CHECK(f.scale_sigma2[k] >= f.scale_sigma2[k - 1]);
        }
        CHECK(f.psi[0] == 1.0);
    }
}

TEST_CASE("stationary interval is bounded by the unconditional variance") {
    for (double d : {0.1, 0.3, 0.45}) {
        const auto m = fractional_noise(d, arfima(d, 200, 3).data());
        const double gamma0 = arfima_autocov(d, 0)[0];
        const auto f = forecast(m, 200);
        for (std::size_t k = 0; k < 200; ++k) CHECK(f.scale_sigma2[k] <= gamma0 + 1e-12);
        if (d <= 0.1) CHECK(f.scale_sigma2.back() == doctest::Approx(gamma0).epsilon(1e-3));
    }
    FittedModel ar;
    ar.spec = {ModelFamily::Arima, 1, 0.0, 0, true};
    ar.phi = {0.8};
    ar.sigma2 = 2.0;
    ar.mean = 1.0;
    ar.history = {1.0, 2.0, 3.0};
    ar.n = 3;
    const auto f = forecast(ar, 60);
    for (std::size_t k = 0; k < 60; ++k) CHECK(f.scale_sigma2[k] <= 2.0 / (1.0 - 0.64) + 1e-12);
    CHECK(f.scale_sigma2.back() == doctest::Approx(2.0 / (1.0 - 0.64)).epsilon(1e-6));
    CHECK(f.point[0] == doctest::Approx(1.0 + 0.8 * 2.0));
}

TEST_CASE("log-scale intervals are asymmetric after back-transform") {
    const auto m = fit_mean(transform(white_noise(100, 2, 10.0), TransformSpec::box_cox(0.0)));
    const auto f = forecast(m, 3);
    CHECK(f.upper[0] - f.point[0] > f.point[0] - f.lower[0]);
    const boost::math::normal_distribution<double> n01;
    const double z = boost::math::quantile(n01, 0.975);
    CHECK(std::log(f.upper[0]) - std::log(f.point[0]) == doctest::Approx(z * std::sqrt(f.scale_sigma2[0])));
}

TEST_CASE("AR(inf) and MA(inf) weights are reciprocal") {
    const auto x = arfima(0.3, 300, 5);
    const auto m = fit_fixed(x, {ModelFamily::Arfima, 1, 0.3, 1, true});
    const auto pi = ar_infinity_weights(m, 100);
    const auto psi = ma_infinity_weights(m, 100);
    const auto prod = convolve(pi, psi, 100);
    CHECK(prod[0] == doctest::Approx(1.0));
    for (std::size_t j = 1; j < 100; ++j) CHECK(std::fabs(prod[j]) <= 1e-10);

    // Pure fractional noise: weights are exactly the frac-diff coefficients.
    const auto fn = fractional_noise(0.3, {1.0, 2.0});
    const auto c = frac_diff_coeffs(0.3, 50);
    const auto w = ar_infinity_weights(fn, 50);
    const auto v = ma_infinity_weights(fn, 50);
    for (std::size_t j = 0; j < 50; ++j) {
        CHECK(w[j] == doctest::Approx(c.pi[j]).epsilon(1e-14));
        CHECK(v[j] == doctest::Approx(c.eta[j]).epsilon(1e-10));
    }
}

TEST_CASE("fractional noise forecast equals eta-integration with zero future innovations") {
    // Independent route: innovations u = (1 - B)^d x; append h zeros; map
    // back through (1 - B)^-d with the same expanding-window truncation.
    for (double d : {0.1, 0.25, 0.4}) {
        for (std::size_t n : {10u, 30u, 50u}) {
            const auto x = arfima(d, n, 8).data();
            const std::size_t h = 12;
            auto u = frac_difference(x, d);
            u.resize(n + h, 0.0);
            const auto path = frac_difference(u, -d);
            const auto f = forecast(fractional_noise(d, x), h);
            for (std::size_t k = 0; k < h; ++k) {
                CHECK(std::fabs(f.point_transformed[k] - path[n + k]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("truncated AR(inf) predictor versus the exact finite-sample predictor") {
    // The exact best linear predictor solves Gamma a = gamma(h..) from the
    // theoretical autocovariances. The truncated AR(inf) predictor cannot
    // beat it, and its excess prediction error must vanish as n grows.
    for (double d : {0.1, 0.25, 0.4}) {
        double previous_excess = std::numeric_limits<double>::infinity();
        for (std::size_t n : {10u, 25u, 50u}) {
            for (std::size_t h : {1u, 5u}) {
                const auto gamma = arfima_autocov(d, n + h);
                Eigen::MatrixXd g(n, n);
                Eigen::VectorXd c(n);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) g(i, j) = gamma[i > j ? i - j : j - i];
                    c(i) = gamma[n - 1 - i + h];
                }
                const Eigen::VectorXd blp = g.ldlt().solve(c);
                const auto w = predictor_weights(d, n, h);
                const Eigen::VectorXd trunc = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(n));
                const double mse_blp = prediction_mse(gamma, blp, n, h);
                const double mse_trunc = prediction_mse(gamma, trunc, n, h);
                CHECK(mse_trunc >= mse_blp - 1e-12);
                const double excess = mse_trunc / mse_blp - 1.0;
                CHECK_MESSAGE(excess < 0.06, "d=" << d << " n=" << n << " h=" << h << " excess " << excess);
                if (n == 50) CHECK(excess < 0.02);
                if (h == 1) {
                    CHECK(excess <= previous_excess + 1e-15);
                    previous_excess = excess;
                }
            }
        }
    }
}

TEST_CASE("model document round trip") {
    const auto x = transform(arfima(0.3, 200, 6, 10.0), TransformSpec::box_cox(0.0));
    const auto m = fit_arfima(x);
    const auto doc = to_json(m);
    const auto back = rebind_history(model_from_json(doc), x.values());
    CHECK(back.spec.family == ModelFamily::Arfima);
    CHECK(back.transform == m.transform);
    CHECK(back.n == m.n);
    const auto f1 = forecast(m, 24);
    const auto f2 = forecast(back, 24);
    for (std::size_t k = 0; k < 24; ++k) CHECK(f2.point[k] == doctest::Approx(f1.point[k]).epsilon(1e-6));

    auto broken = doc;
    broken["phi"] = nlohmann::json::array({0.1, 0.2, 0.3});
    check_errc([&] { (void)model_from_json(broken); }, Errc::InvalidSpec);
    check_errc([] { (void)model_from_json(nlohmann::json::object()); }, Errc::InvalidSpec);
}

TEST_CASE("rebind_history re-anchors naive") {
    const auto m = fit_naive(series_of({1, 2, 3}));
    const std::vector<double> fresh{4, 8};
    CHECK(forecast(rebind_history(m, fresh), 2).point[0] == 8.0);
}

}
