#include "qoslrd/models.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "qoslrd/error.hpp"
#include "qoslrd/fracdiff.hpp"
#include "qoslrd/lrd.hpp"
#include "polynomial.hpp"

namespace qoslrd {

namespace {

constexpr std::string_view kModule = "models";
constexpr double kMaxArfimaD = 0.4999;
constexpr double kGridStep = 0.05;
constexpr double kGoldenTolerance = 1e-4;
// Order selection drops fits with an AR or MA root inside |z| = 1.01.
constexpr double kSelectionRootMargin = 0.01;

struct Candidate {
    std::size_t p = 0;
    std::size_t q = 0;
    double d = 0.0;
    ArmaFit arma;
    double loglik = 0.0;
    double aicc = std::numeric_limits<double>::infinity();
};

// Strict improvement in AICc, then fewer parameters, then smaller p, then smaller d.
bool better(const Candidate& a, const Candidate& b) {
    if (a.aicc != b.aicc) return a.aicc < b.aicc;
    if (a.p + a.q != b.p + b.q) return a.p + a.q < b.p + b.q;
    if (a.p != b.p) return a.p < b.p;
    return a.d < b.d;
}

// `condition` leading observations are excluded from every candidate's
// objective so likelihoods of different orders are comparable.
std::optional<Candidate> score(std::span<const double> w, std::size_t p, std::size_t q, double d,
                               std::size_t extra, std::size_t condition) {
    condition = std::max(condition, p);
    if (w.size() <= condition) return std::nullopt;
    const std::size_t usable = w.size() - condition;
    if (usable <= p + q + 2 + extra) return std::nullopt;
    auto arma = fit_arma_css(w, p, q, condition);
    if (!arma) return std::nullopt;
    Candidate c;
    c.p = p;
    c.q = q;
    c.d = d;
    c.loglik = conditional_loglik(arma->sse, arma->residuals.size());
    c.aicc = aicc(c.loglik, arma->residuals.size(), p, q, extra);
    c.arma = std::move(*arma);
    return c;
}

bool clear_of_unit_circle(const Candidate& c) {
    std::vector<double> neg(c.arma.theta.size());
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -c.arma.theta[j];
    return detail::roots_outside_unit_circle(c.arma.phi, kSelectionRootMargin) &&
           detail::roots_outside_unit_circle(neg, kSelectionRootMargin);
}

void require_length(const TimeSeries& series, std::size_t min_len, std::string_view what) {
    if (series.size() < min_len) {
        throw Error(kModule, Errc::SeriesTooShort,
                    std::string(what) + " needs at least " + std::to_string(min_len) + " observations");
    }
}

FittedModel finish(const TimeSeries& series, ModelSpec spec, double mean, const Candidate& c) {
    FittedModel m;
    m.spec = spec;
    m.spec.p = c.p;
    m.spec.q = c.q;
    m.phi = c.arma.phi;
    m.theta = c.arma.theta;
    m.mean = mean;
    m.residuals = c.arma.residuals;
    m.sigma2 = c.arma.sse / static_cast<double>(c.arma.residuals.size());
    m.loglik = c.loglik;
    m.aicc = c.aicc;
    m.transform = series.transform();
    m.n = series.size();
    m.history = series.data();
    return m;
}

std::vector<double> centered(std::span<const double> x, double mu) {
    std::vector<double> out(x.begin(), x.end());
    for (auto& v : out) v -= mu;
    return out;
}

// Best ARMA(p, q) on the fractionally differenced series, searching d.
std::optional<Candidate> best_over_d(std::span<const double> adjusted, std::size_t p, std::size_t q,
                                     std::size_t condition, const std::vector<std::vector<double>>& grid_series,
                                     const std::vector<double>& grid_d) {
    constexpr std::size_t kExtra = 2;  // d and the mean
    std::optional<Candidate> best;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < grid_d.size(); ++i) {
        auto c = score(grid_series[i], p, q, grid_d[i], kExtra, condition);
        if (c && (!best || c->arma.sse < best->arma.sse)) {
            best = std::move(c);
            best_idx = i;
        }
    }
    if (!best) return std::nullopt;

    // Golden-section refinement of the profile CSS around the best grid cell.
    auto eval = [&](double d) -> std::optional<Candidate> {
        const auto u = frac_difference(adjusted, d);
        return score(u, p, q, d, kExtra, condition);
    };
    auto objective = [](const std::optional<Candidate>& c) {
        return c ? c->arma.sse : std::numeric_limits<double>::infinity();
    };
    const double centre = grid_d[best_idx];
    double a = std::max(0.0, centre - kGridStep);
    double b = std::min(kMaxArfimaD, centre + kGridStep);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    auto c1 = eval(x1);
    auto c2 = eval(x2);
    while (b - a > kGoldenTolerance) {
        if (objective(c1) <= objective(c2)) {
            b = x2;
            x2 = x1;
            c2 = std::move(c1);
            x1 = b - ratio * (b - a);
            c1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            c1 = std::move(c2);
            x2 = a + ratio * (b - a);
            c2 = eval(x2);
        }
    }
    auto& refined = objective(c1) <= objective(c2) ? c1 : c2;
    if (refined && refined->arma.sse < best->arma.sse) best = std::move(refined);
    return best;
}

}  // namespace

std::string_view to_string(ModelFamily family) noexcept {
    switch (family) {
        case ModelFamily::Naive: return "NAIVE";
        case ModelFamily::Mean: return "MEAN";
        case ModelFamily::Arima: return "ARIMA";
        case ModelFamily::Arfima: return "ARFIMA";
    }
    return "UNKNOWN";
}

ModelFamily parse_model_family(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "NAIVE") return ModelFamily::Naive;
    if (upper == "MEAN") return ModelFamily::Mean;
    if (upper == "ARIMA") return ModelFamily::Arima;
    if (upper == "ARFIMA") return ModelFamily::Arfima;
    throw Error(kModule, Errc::InvalidSpec, "unknown model family '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
    switch (family) {
        case ModelFamily::Naive:
        case ModelFamily::Mean:
            if (p != 0 || q != 0 || d != 0.0) {
                throw Error(kModule, Errc::InvalidSpec, "NAIVE and MEAN models have p = d = q = 0");
            }
            break;
        case ModelFamily::Arima:
            if (!(d == 0.0 || d == 1.0 || d == 2.0)) {
                throw Error(kModule, Errc::InvalidD, "ARIMA d must be 0, 1 or 2");
            }
            break;
        case ModelFamily::Arfima:
            if (!(d >= 0.0 && d < 0.5)) throw Error(kModule, Errc::InvalidD, "ARFIMA d must lie in [0, 0.5)");
            break;
    }
}

double aicc(double loglik, std::size_t n, std::size_t p, std::size_t q, std::size_t extra_params) {
    const std::size_t k = p + q + 1 + extra_params;
    if (n <= k + 1) {
        throw Error(kModule, Errc::DegenerateSampleSize,
                    "AICc needs n > " + std::to_string(k + 1) + ", got n = " + std::to_string(n));
    }
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    return -2.0 * loglik + 2.0 * kd * nd / (nd - kd - 1.0);
}

FittedModel fit_naive(const TimeSeries& series) {
    require_length(series, 2, "naive model");
    FittedModel m;
    m.spec = {ModelFamily::Naive, 0, 0.0, 0, false};
    m.mean = series.values().back();
    m.residuals = difference(series.values(), 1);
    m.sigma2 = sample_variance(m.residuals);
    m.transform = series.transform();
    m.n = series.size();
    m.history = series.data();
    if (m.sigma2 > 0.0) {
        double sse = 0.0;
        for (double r : m.residuals) sse += r * r;
        m.loglik = conditional_loglik(sse, m.residuals.size());
        m.aicc = m.residuals.size() > 2 ? aicc(m.loglik, m.residuals.size(), 0, 0)
                                        : std::numeric_limits<double>::quiet_NaN();
    } else {
        m.loglik = std::numeric_limits<double>::quiet_NaN();
        m.aicc = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

FittedModel fit_mean(const TimeSeries& series) {
    require_length(series, 2, "mean model");
    FittedModel m;
    m.spec = {ModelFamily::Mean, 0, 0.0, 0, true};
    m.mean = mean(series.values());
    m.sigma2 = sample_variance(series.values());
    m.residuals = centered(series.values(), m.mean);
    m.transform = series.transform();
    m.n = series.size();
    m.history = series.data();
    if (m.sigma2 > 0.0) {
        double sse = 0.0;
        for (double r : m.residuals) sse += r * r;
        m.loglik = conditional_loglik(sse, m.residuals.size());
        m.aicc = m.residuals.size() > 3 ? aicc(m.loglik, m.residuals.size(), 0, 0, 1)
                                        : std::numeric_limits<double>::quiet_NaN();
    } else {
        m.loglik = std::numeric_limits<double>::quiet_NaN();
        m.aicc = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

FittedModel fit_arima(const TimeSeries& series, const ArimaOptions& options) {
    require_length(series, 30, "ARIMA");
    const auto x = series.values();

    std::size_t d = 0;
    for (; d < options.max_d; ++d) {
        const auto w = difference(x, d);
        if (w.size() < 25) break;
        try {
            if (adf_test(w).stationary_at_5pct) break;
        } catch (const Error& e) {
            // A degenerate regression means the differences are constant:
            // nothing left to difference away.
            if (e.code() == Errc::SingularRegression) break;
            throw;
        }
    }

    const auto diffed = difference(x, d);
    const bool include_mean = d == 0;
    const double mu = include_mean ? mean(diffed) : 0.0;
    const auto w = centered(diffed, mu);
    const std::size_t extra = include_mean ? 1 : 0;

    std::map<std::pair<std::size_t, std::size_t>, std::optional<Candidate>> cache;
    auto candidate = [&](std::size_t p, std::size_t q) -> const std::optional<Candidate>& {
        auto [it, fresh] = cache.try_emplace({p, q});
        if (fresh) {
            auto c = score(w, p, q, static_cast<double>(d), extra, options.max_p);
            if (c && clear_of_unit_circle(*c)) it->second = std::move(c);
        }
        return it->second;
    };
    std::optional<Candidate> best;
    auto offer = [&](std::size_t p, std::size_t q) {
        if (p > options.max_p || q > options.max_q) return false;
        const auto& c = candidate(p, q);
        if (c && (!best || better(*c, *best))) {
            best = c;
            return true;
        }
        return false;
    };
    if (options.search == OrderSearch::Exhaustive) {
        for (std::size_t order = 0; order <= options.max_p + options.max_q; ++order) {
            for (std::size_t p = 0; p <= std::min(order, options.max_p); ++p) offer(p, order - p);
        }
    } else {
        offer(std::min<std::size_t>(2, options.max_p), std::min<std::size_t>(2, options.max_q));
        offer(0, 0);
        offer(1, 0);
        offer(0, 1);
        constexpr std::array<std::pair<int, int>, 8> kMoves{
            {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};
        for (bool moved = best.has_value(); moved;) {
            moved = false;
            const auto p0 = static_cast<int>(best->p), q0 = static_cast<int>(best->q);
            for (const auto& [dp, dq] : kMoves) {
                if (p0 + dp < 0 || q0 + dq < 0) continue;
                if (offer(static_cast<std::size_t>(p0 + dp), static_cast<std::size_t>(q0 + dq))) {
                    moved = true;
                    break;
                }
            }
        }
    }
    if (!best) throw Error(kModule, Errc::NoAdmissibleModel, "no ARIMA order could be fitted");
    return finish(series, {ModelFamily::Arima, 0, static_cast<double>(d), 0, include_mean}, mu, *best);
}

FittedModel fit_arfima(const TimeSeries& series, const ArfimaOptions& options) {
    require_length(series, 64, "ARFIMA");
    const auto x = series.values();
    const double mu = mean(x);
    const auto adjusted = centered(x, mu);

    std::vector<double> grid_d;
    std::vector<std::vector<double>> grid_series;
    if (options.fixed_d) {
        const double d = *options.fixed_d;
        if (!(d >= 0.0 && d < 0.5)) throw Error(kModule, Errc::InvalidD, "ARFIMA d must lie in [0, 0.5)");
        grid_d.push_back(d);
        grid_series.push_back(frac_difference(adjusted, d));
    } else {
        for (int i = 0; i * kGridStep < 0.5 - 1e-9; ++i) {
            grid_d.push_back(i * kGridStep);
            grid_series.push_back(frac_difference(adjusted, grid_d.back()));
        }
    }

    constexpr std::size_t kExtra = 2;
    std::optional<Candidate> best;
    for (std::size_t order = 0; order <= options.max_p + options.max_q; ++order) {
        for (std::size_t p = 0; p <= std::min(order, options.max_p); ++p) {
            const std::size_t q = order - p;
            if (q > options.max_q) continue;
            std::optional<Candidate> c;
            if (options.fixed_d) {
                c = score(grid_series[0], p, q, grid_d[0], kExtra, options.max_p);
            } else {
                c = best_over_d(adjusted, p, q, options.max_p, grid_series, grid_d);
            }
            if (c && !clear_of_unit_circle(*c)) continue;
            if (c && (!best || better(*c, *best))) best = std::move(c);
        }
    }
    if (!best) throw Error(kModule, Errc::NoAdmissibleModel, "no ARFIMA order could be fitted");
    return finish(series, {ModelFamily::Arfima, 0, best->d, 0, true}, mu, *best);
}

FittedModel fit_fixed(const TimeSeries& series, const ModelSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case ModelFamily::Naive: return fit_naive(series);
        case ModelFamily::Mean: return fit_mean(series);
        case ModelFamily::Arima: {
            const auto d = static_cast<std::size_t>(spec.d);
            const auto diffed = difference(series.values(), d);
            const bool include_mean = spec.include_mean && d == 0;
            const double mu = include_mean ? mean(diffed) : 0.0;
            auto c = score(centered(diffed, mu), spec.p, spec.q, spec.d, include_mean ? 1 : 0, spec.p);
            if (!c) throw Error(kModule, Errc::NoAdmissibleModel, "ARIMA order cannot be fitted to this series");
            ModelSpec s = spec;
            s.include_mean = include_mean;
            return finish(series, s, mu, *c);
        }
        case ModelFamily::Arfima: {
            const double mu = spec.include_mean ? mean(series.values()) : 0.0;
            const auto u = frac_difference(centered(series.values(), mu), spec.d);
            auto c = score(u, spec.p, spec.q, spec.d, spec.include_mean ? 2 : 1, spec.p);
            if (!c) throw Error(kModule, Errc::NoAdmissibleModel, "ARFIMA order cannot be fitted to this series");
            return finish(series, spec, mu, *c);
        }
    }
    throw Error(kModule, Errc::InvalidSpec, "unknown model family");
}

FittedModel fit_model(const TimeSeries& series, ModelFamily family) {
    switch (family) {
        case ModelFamily::Naive: return fit_naive(series);
        case ModelFamily::Mean: return fit_mean(series);
        case ModelFamily::Arima: return fit_arima(series);
        case ModelFamily::Arfima: return fit_arfima(series);
    }
    throw Error(kModule, Errc::InvalidSpec, "unknown model family");
}

FittedModel rebind_history(const FittedModel& model, std::span<const double> history) {
    if (history.empty()) throw Error(kModule, Errc::SeriesTooShort, "history must not be empty");
    FittedModel out = model;
    out.history.assign(history.begin(), history.end());
    out.n = history.size();
    if (model.spec.family == ModelFamily::Naive) out.mean = history.back();
    return out;
}

}  // namespace qoslrd
