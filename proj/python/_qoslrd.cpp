// Thin bindings; structured results cross as JSON text and are decoded in
// the Python package.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "qoslrd/cli.hpp"
#include "qoslrd/error.hpp"
#include "qoslrd/evaluation.hpp"
#include "qoslrd/fracdiff.hpp"
#include "qoslrd/lrd.hpp"
#include "qoslrd/models.hpp"
#include "qoslrd/report_io.hpp"
#include "qoslrd/synthgen.hpp"

namespace py = pybind11;
using namespace qoslrd;
using Vec = std::vector<double>;

namespace {

HurstMethod parse_method(const std::string& name) {
    if (name == "aggvar") return HurstMethod::AggregatedVariance;
    if (name == "rs") return HurstMethod::RescaledRange;
    if (name == "periodogram") return HurstMethod::Periodogram;
    throw py::value_error("method must be aggvar, rs or periodogram");
}

GenKind parse_kind(const std::string& k) {
    if (k == "white") return GenKind::WhiteNoise;
    if (k == "arma") return GenKind::Arma;
    if (k == "arfima") return GenKind::Arfima;
    if (k == "fgn") return GenKind::Fgn;
    if (k == "walk") return GenKind::RandomWalk;
    throw py::value_error("kind must be white, arma, arfima, fgn or walk");
}

TransformSpec transform_for(std::optional<double> lambda) {
    return lambda ? TransformSpec::box_cox(*lambda) : TransformSpec::identity();
}

TimeSeries series(const Vec& values, std::optional<double> lambda) {
    return transform(TimeSeries(values, 0, 1.0, "py"), transform_for(lambda));
}

}  // namespace

PYBIND11_MODULE(_qoslrd, m) {
    m.doc() = "Long-memory analysis and ARFIMA forecasting";

    static py::exception<Error> exc(m, "QoslrdError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(exc, (e.qualified_code() + ": " + e.what()).c_str());
        }
    });

    m.def("hurst", [](const Vec& x, const std::string& method) {
        HurstEstimate e;
        switch (parse_method(method)) {
            case HurstMethod::AggregatedVariance: e = hurst_aggregated_variance(x); break;
            case HurstMethod::RescaledRange: e = hurst_rescaled_range(x); break;
            case HurstMethod::Periodogram: e = hurst_periodogram(x); break;
        }
        return to_json(e).dump();
    }, py::arg("values"), py::arg("method"));

    m.def("classify_memory", [](const Vec& x, double margin) {
        ClassifyOptions o;
        o.decision_margin = margin;
        return to_json(classify_memory(x, o)).dump();
    }, py::arg("values"), py::arg("margin") = ClassifyOptions{}.decision_margin);

    m.def("adf_test", [](const Vec& x, std::optional<std::size_t> max_lag) {
        return to_json(adf_test(x, max_lag)).dump();
    }, py::arg("values"), py::arg("max_lag") = py::none());

    m.def("acf", [](const Vec& x, std::size_t max_lag) { return acf(x, max_lag).rho; },
          py::arg("values"), py::arg("max_lag"));

    m.def("frac_diff_coeffs", [](double d, std::size_t length) {
        auto c = frac_diff_coeffs(d, length);
        return std::make_pair(c.pi, c.eta);
    }, py::arg("d"), py::arg("length"));
    m.def("frac_difference", [](const Vec& x, double d) { return frac_difference(x, d); },
          py::arg("values"), py::arg("d"));

    m.def("generate", [](const std::string& kind, std::size_t n, std::uint64_t seed, double d, double hurst,
                         const Vec& phi, const Vec& theta, double sigma, double offset) {
        GenSpec s;
        s.kind = parse_kind(kind);
        s.n = n;
        s.seed = seed;
        s.d = d;
        s.hurst = hurst;
        s.phi = phi;
        s.theta = theta;
        s.sigma = sigma;
        s.offset = offset;
        return generate(s).data();
    }, py::arg("kind"), py::arg("n"), py::arg("seed") = 0, py::arg("d") = 0.0, py::arg("hurst") = 0.5,
       py::arg("phi") = Vec{}, py::arg("theta") = Vec{}, py::arg("sigma") = 1.0, py::arg("offset") = 0.0);

    m.def("fit", [](const Vec& x, const std::string& family, std::optional<double> lambda) {
        return to_json(fit_model(series(x, lambda), parse_model_family(family))).dump();
    }, py::arg("values"), py::arg("family"), py::arg("box_cox_lambda") = py::none());

    m.def("forecast", [](const Vec& x, const std::string& family, std::size_t horizon, double level,
                         std::optional<double> lambda, std::optional<std::string> model_json) {
        FittedModel model = [&] {
            if (!model_json) return fit_model(series(x, lambda), parse_model_family(family));
            const auto loaded = model_from_json(nlohmann::json::parse(*model_json));
            return rebind_history(loaded, transform(TimeSeries(x, 0, 1.0, "py"), loaded.transform).values());
        }();
        const auto f = forecast(model, horizon, level);
        py::dict out;
        out["point"] = f.point;
        out["lower"] = f.lower;
        out["upper"] = f.upper;
        out["model"] = to_json(model).dump();
        return out;
    }, py::arg("values"), py::arg("family") = "ARFIMA", py::arg("horizon") = 24, py::arg("level") = 0.95,
       py::arg("box_cox_lambda") = py::none(), py::arg("model_json") = py::none());

    m.def("rolling_cv", [](const Vec& x, std::size_t window, std::size_t horizon, std::size_t step,
                           const std::vector<std::string>& methods, std::optional<double> lambda, std::size_t threads) {
        CvConfig c;
        c.window = window;
        c.max_horizon = horizon;
        c.step = step;
        c.methods.clear();
        for (const auto& name : methods) c.methods.push_back(parse_model_family(name));
        c.transform = transform_for(lambda);
        c.threads = threads;
        CvReport r;
        {
            py::gil_scoped_release release;
            r = rolling_cv(TimeSeries(x, 0, 1.0, "py"), c);
        }
        return to_json(r).dump();
    }, py::arg("values"), py::arg("window") = 96, py::arg("horizon") = 48, py::arg("step") = 1,
       py::arg("methods") = std::vector<std::string>{"NAIVE", "MEAN", "ARIMA", "ARFIMA"},
       py::arg("box_cox_lambda") = 0.0, py::arg("threads") = 1);

    m.def("mape", [](const Vec& a, const Vec& f) { return mape(a, f); }, py::arg("actual"), py::arg("forecast"));
    m.def("mae", [](const Vec& a, const Vec& f) { return mae(a, f); }, py::arg("actual"), py::arg("forecast"));
    m.def("improvement", &improvement, py::arg("mape_baseline"), py::arg("mape_candidate"));

    m.def("cli_run", [](const std::vector<std::string>& args) { return cli::run(args); }, py::arg("args"));
}
