#include "qoslrd/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "qoslrd/error.hpp"

namespace qoslrd {

using nlohmann::json;

std::string format9(double value) {
    if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

json number9(double value) {
    if (!std::isfinite(value)) return nullptr;
    return std::strtod(format9(value).c_str(), nullptr);
}

namespace {

json numbers9(std::span<const double> values) {
    json arr = json::array();
    for (double v : values) arr.push_back(number9(v));
    return arr;
}

std::string pair_name(const Improvement& imp) {
    return std::string(to_string(imp.candidate)) + "_vs_" + std::string(to_string(imp.baseline));
}

}  // namespace

json to_json(const TransformSpec& spec) {
    return {{"applied", spec.applied}, {"lambda", number9(spec.lambda)}};
}

json to_json(const HurstEstimate& e) {
    json points = json::array();
    for (const auto& p : e.points) points.push_back({number9(p.scale), number9(p.statistic)});
    return {{"method", to_string(e.method)},
            {"h", number9(e.h)},
            {"slope", number9(e.slope)},
            {"intercept", number9(e.intercept)},
            {"r_squared", number9(e.r_squared)},
            {"clamped", e.clamped},
            {"warnings", e.warnings},
            {"points", std::move(points)}};
}

json to_json(const AdfResult& r) {
    return {{"statistic", number9(r.statistic)},
            {"lags_used", r.lags_used},
            {"nobs", r.nobs},
            {"critical_values",
             {{"1%", number9(r.critical_values.one_pct)},
              {"5%", number9(r.critical_values.five_pct)},
              {"10%", number9(r.critical_values.ten_pct)}}},
            {"stationary_at_5pct", r.stationary_at_5pct},
            {"gamma", number9(r.gamma)},
            {"intercept", number9(r.intercept)},
            {"betas", numbers9(r.betas)}};
}

json to_json(const MemoryClassification& c) {
    json methods = json::object();
    for (const auto& e : c.estimates) methods[std::string(to_string(e.method))] = to_json(e);
    return {{"verdict", to_string(c.verdict)}, {"h_median", number9(c.h_median)}, {"threshold", number9(c.threshold)}, {"hurst", std::move(methods)}};
}

json to_json(const SeasonalDiagnostic& s) {
    return {{"present", s.present}, {"peak_lags", s.peak_lags}, {"multiples_checked", s.multiples_checked}};
}

json to_json(const CvConfig& c) {
    json methods = json::array();
    for (auto m : c.methods) methods.push_back(to_string(m));
    return {{"window", c.window},       {"max_horizon", c.max_horizon}, {"step", c.step},
            {"methods", methods},       {"level", number9(c.level)},   {"transform", to_json(c.transform)}};
}

json to_json(const CvReport& r) {
    json methods = json::object();
    for (std::size_t i = 0; i < r.methods.size(); ++i) {
        const auto& ms = r.per_method[i];
        json box = json::array();
        for (const auto& q : ms.abs_pct_quantiles) {
            box.push_back({{"min", number9(q.min)},
                           {"q1", number9(q.q1)},
                           {"median", number9(q.median)},
                           {"q3", number9(q.q3)},
                           {"max", number9(q.max)}});
        }
        methods[std::string(to_string(r.methods[i]))] = {{"count", ms.count},
                                                          {"mean_mape", number9(ms.mean_mape())},
                                                          {"mean_mae", number9(ms.mean_mae())},
                                                          {"mae", numbers9(ms.mae)},
                                                          {"mape", numbers9(ms.mape)},
                                                          {"abs_pct_error_quantiles", std::move(box)}};
    }
    json improvements = json::array();
    for (const auto& imp : r.improvements) {
        improvements.push_back({{"baseline", to_string(imp.baseline)},
                                {"candidate", to_string(imp.candidate)},
                                {"mean", number9(imp.mean)},
                                {"max", number9(imp.max)},
                                {"per_horizon", numbers9(imp.per_horizon)}});
    }
    json excluded = json::array();
    for (const auto& ex : r.excluded) {
        excluded.push_back({{"series", ex.series_label},
                            {"origin", ex.origin},
                            {"method", to_string(ex.method)},
                            {"error", ex.error}});
    }
    return {{"series_label", r.series_label},
            {"config", to_json(r.config)},
            {"origins_attempted", r.origins_attempted},
            {"origins_used", r.origins.size()},
            {"experiment_count", r.experiment_count()},
            {"methods", std::move(methods)},
            {"improvements", std::move(improvements)},
            {"excluded", std::move(excluded)}};
}

json to_json(const FittedModel& m) {
    return {{"family", to_string(m.spec.family)},
            {"p", m.spec.p},
            {"d", number9(m.spec.d)},
            {"q", m.spec.q},
            {"include_mean", m.spec.include_mean},
            {"phi", numbers9(m.phi)},
            {"theta", numbers9(m.theta)},
            {"mean", number9(m.mean)},
            {"sigma2", number9(m.sigma2)},
            {"loglik", number9(m.loglik)},
            {"aicc", number9(m.aicc)},
            {"n", m.n},
            {"transform", to_json(m.transform)}};
}

FittedModel model_from_json(const json& doc) {
    try {
        FittedModel m;
        m.spec.family = parse_model_family(doc.at("family").get<std::string>());
        m.spec.p = doc.value("p", std::size_t{0});
        m.spec.q = doc.value("q", std::size_t{0});
        m.spec.d = doc.value("d", 0.0);
        m.spec.include_mean = doc.value("include_mean", m.spec.family != ModelFamily::Naive);
        m.phi = doc.value("phi", std::vector<double>{});
        m.theta = doc.value("theta", std::vector<double>{});
        m.mean = doc.at("mean").get<double>();
        m.sigma2 = doc.at("sigma2").get<double>();
        m.n = doc.value("n", std::size_t{0});
        if (doc.contains("aicc") && doc["aicc"].is_number()) m.aicc = doc["aicc"].get<double>();
        if (doc.contains("loglik") && doc["loglik"].is_number()) m.loglik = doc["loglik"].get<double>();
        if (doc.contains("transform")) {
            m.transform.applied = doc["transform"].value("applied", false);
            m.transform.lambda = doc["transform"].value("lambda", 0.0);
        }
        m.spec.validate();
        if (m.phi.size() != m.spec.p || m.theta.size() != m.spec.q) {
            throw Error("models", Errc::InvalidSpec, "coefficient counts do not match (p, q)");
        }
        if (!(m.sigma2 >= 0.0)) throw Error("models", Errc::InvalidSpec, "sigma2 must be non-negative");
        return m;
    } catch (const json::exception& e) {
        throw Error("models", Errc::InvalidSpec, std::string("malformed model document: ") + e.what());
    }
}

void write_forecast_csv(std::ostream& out, const ForecastResult& r) {
    out << "horizon,point,lower,upper\n";
    for (std::size_t k = 0; k < r.horizons(); ++k) {
        out << (k + 1) << ',' << format9(r.point[k]) << ',' << format9(r.lower[k]) << ',' << format9(r.upper[k])
            << '\n';
    }
}

void write_metrics_csv(std::ostream& out, const CvReport& r) {
    out << "method,horizon,mae,mape,count\n";
    for (std::size_t i = 0; i < r.methods.size(); ++i) {
        const auto& ms = r.per_method[i];
        for (std::size_t k = 0; k < ms.mape.size(); ++k) {
            out << to_string(r.methods[i]) << ',' << (k + 1) << ',' << format9(ms.mae[k]) << ','
                << format9(ms.mape[k]) << ',' << ms.count << '\n';
        }
    }
}

void write_improvements_csv(std::ostream& out, const CvReport& r) {
    out << "pair,horizon,improvement_pct\n";
    for (const auto& imp : r.improvements) {
        const auto name = pair_name(imp);
        for (std::size_t k = 0; k < imp.per_horizon.size(); ++k) {
            out << name << ',' << (k + 1) << ',' << format9(imp.per_horizon[k]) << '\n';
        }
        out << name << ",mean," << format9(imp.mean) << '\n';
        out << name << ",max," << format9(imp.max) << '\n';
    }
}

void write_boxplot_csv(std::ostream& out, const CvReport& r) {
    out << "method,horizon,min,q1,median,q3,max\n";
    for (std::size_t i = 0; i < r.methods.size(); ++i) {
        const auto& qs = r.per_method[i].abs_pct_quantiles;
        for (std::size_t k = 0; k < qs.size(); ++k) {
            out << to_string(r.methods[i]) << ',' << (k + 1) << ',' << format9(qs[k].min) << ','
                << format9(qs[k].q1) << ',' << format9(qs[k].median) << ',' << format9(qs[k].q3) << ','
                << format9(qs[k].max) << '\n';
        }
    }
}

}  // namespace qoslrd
