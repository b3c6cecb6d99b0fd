#include "qoslrd/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qoslrd/error.hpp"
#include "qoslrd/evaluation.hpp"
#include "qoslrd/lrd.hpp"
#include "qoslrd/models.hpp"
#include "qoslrd/report_io.hpp"
#include "qoslrd/series.hpp"
#include "qoslrd/synthgen.hpp"

#ifndef QOSLRD_VERSION
#define QOSLRD_VERSION "0.0.0"
#endif

namespace qoslrd::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
    UsageError(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
    std::string code;
};

void usage_check(bool ok, const std::string& msg) {
    if (!ok) throw UsageError("cli.InvalidArgument", msg);
}

enum class LogLevel { Error, Info, Debug };

struct Common {
    std::string out_dir = ".";
    std::string log_level = "error";
    std::size_t threads = 1;
    std::string format = "json";
};

struct SeriesOptions {
    std::optional<double> interval;
    bool locf = false;
    double lambda = 0.0;
    bool no_transform = false;
};

struct AnalyzeArgs {
    std::string input;
    std::size_t max_lag = 0;
    double margin = ClassifyOptions{}.decision_margin;
};

struct FitArgs {
    std::string input;
    std::string family = "arfima";
    std::optional<std::size_t> max_p, max_q;
    std::size_t max_d = ArimaOptions{}.max_d;
    std::string search = "stepwise";
};

struct ForecastArgs {
    std::string input;
    std::string model;
    std::size_t horizon = 24;
    double level = 0.95;
};

struct CrossvalArgs {
    std::vector<std::string> inputs;
    std::size_t window = 96;
    std::size_t horizon = 48;
    std::size_t step = 1;
    std::string methods = "naive,mean,arima,arfima";
    double level = 0.95;
};

struct SimulateArgs {
    std::string kind = "arfima";
    std::size_t n = 4096;
    std::uint64_t seed = 1;
    double d = 0.3;
    double hurst = 0.75;
    std::vector<double> phi, theta;
    double sigma = 1.0;
    double offset = 0.0;
    double interval = 3600.0;
    std::int64_t start = 0;
    std::string out;
};

// Files are staged in memory and written only after the command succeeds.
struct Artifacts {
    std::vector<std::pair<fs::path, std::string>> files;
    void add(fs::path path, std::string content) { files.emplace_back(std::move(path), std::move(content)); }
};

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Runner {
public:
    explicit Runner(Common common) : common_(std::move(common)) {
        if (common_.log_level == "info") level_ = LogLevel::Info;
        if (common_.log_level == "debug") level_ = LogLevel::Debug;
    }

    void log(LogLevel lvl, const std::string& msg) const {
        if (lvl <= level_) std::cerr << "[qoslrd] " << msg << '\n';
    }

    void note_input(const fs::path& path) { inputs_.push_back(path); }

    TimeSeries load(const fs::path& path, const SeriesOptions& so, bool require_positive) {
        note_input(path);
        IngestOptions io;
        io.interval_hint = so.interval;
        io.gap_policy = so.locf ? GapPolicy::LastObservationCarriedForward : GapPolicy::Reject;
        io.require_positive = require_positive;
        log(LogLevel::Info, "reading " + path.string());
        return ingest_csv(path, io);
    }

    void emit(const std::string& name, const std::string& subcommand, const json& config, Artifacts artifacts,
              const json& summary) {
        const fs::path dir(common_.out_dir);
        json outputs = json::array();
        for (const auto& [path, content] : artifacts.files) {
            outputs.push_back({{"path", path.generic_string()}, {"sha256", sha256_hex(content)}});
        }
        json inputs = json::array();
        for (const auto& p : inputs_) inputs.push_back({{"path", p.generic_string()}, {"sha256", sha256_hex(read_file(p))}});
        json manifest = {{"tool", "qoslrd"},
                         {"version", QOSLRD_VERSION},
                         {"subcommand", subcommand},
                         {"config", config},
                         {"inputs", std::move(inputs)},
                         {"outputs", std::move(outputs)}};
        artifacts.add((dir / name).lexically_normal(), manifest.dump(2) + "\n");

        for (const auto& [path, content] : artifacts.files) {
            if (path.has_parent_path()) fs::create_directories(path.parent_path());
            std::ofstream out(path, std::ios::binary);
            out << content;
            if (!out) throw std::runtime_error("cannot write " + path.string());
            log(LogLevel::Debug, "wrote " + path.string());
        }
        std::cout << summary.dump() << std::endl;
    }

    [[nodiscard]] const Common& common() const { return common_; }
    [[nodiscard]] fs::path out(const std::string& file) const {
        return (fs::path(common_.out_dir) / file).lexically_normal();
    }

private:
    Common common_;
    LogLevel level_ = LogLevel::Error;
    std::vector<fs::path> inputs_;
};

TransformSpec transform_of(const SeriesOptions& so) {
    return so.no_transform ? TransformSpec::identity() : TransformSpec::box_cox(so.lambda);
}

json series_config(const SeriesOptions& so) {
    return {{"interval", so.interval ? json(number9(*so.interval)) : json(nullptr)},
            {"locf", so.locf},
            {"transform", to_json(transform_of(so))}};
}

json common_config(const Common& c) {
    // threads never changes results, so it stays out of the echo.
    return {{"out_dir", c.out_dir}, {"format", c.format}};
}

void require_file(const std::string& path, const std::string& what) {
    if (!fs::is_regular_file(path)) throw UsageError("cli.MissingInput", what + " not found: " + path);
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(in)) {
                if (entry.is_regular_file() && entry.path().extension() == ".csv") found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            if (found.empty()) throw UsageError("cli.MissingInput", "no *.csv files in " + in);
            files.insert(files.end(), found.begin(), found.end());
        } else {
            require_file(in, "input");
            files.emplace_back(in);
        }
    }
    return files;
}

std::vector<ModelFamily> parse_methods(const std::string& list) {
    std::vector<ModelFamily> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(parse_model_family(item));
        } catch (const Error&) {
            throw UsageError("cli.InvalidArgument", "unknown method '" + item + "'");
        }
        usage_check(std::count(out.begin(), out.end(), out.back()) == 1, "duplicate method '" + item + "'");
    }
    usage_check(!out.empty(), "--methods is empty");
    return out;
}

void validate_series_options(const SeriesOptions& so) {
    usage_check(!so.interval || *so.interval > 0.0, "--interval must be positive");
    usage_check(std::isfinite(so.lambda), "--lambda must be finite");
}

// ---------------------------------------------------------------------------

void cmd_analyze(Runner& run, const AnalyzeArgs& a, const SeriesOptions& so) {
    require_file(a.input, "input");
    validate_series_options(so);
    usage_check(a.margin >= 0.0 && a.margin < 0.5, "--margin must lie in [0, 0.5)");

    const auto x = run.load(a.input, so, false);
    ClassifyOptions co;
    co.decision_margin = a.margin;
    const auto cls = classify_memory(x.values(), co);
    const auto adf = adf_test(x.values());
    const std::size_t daily = daily_lag_for_interval(x.interval());
    json seasonal = nullptr;
    if (daily >= 2) {
        const std::size_t lag = a.max_lag > 0 ? a.max_lag : 4 * daily + 2;
        if (lag < x.size()) seasonal = to_json(seasonal_peak_diagnostic(acf(x, lag), daily));
    }

    json doc = {{"series", x.label()},
                {"n", x.size()},
                {"interval", number9(x.interval())},
                {"start_time", x.start_time()},
                {"classification", to_json(cls)},
                {"adf", to_json(adf)},
                {"daily_lag", daily},
                {"seasonal", seasonal}};
    Artifacts art;
    if (run.common().format == "csv") {
        std::ostringstream csv;
        csv << "method,h,slope,r_squared,clamped\n";
        for (const auto& e : cls.estimates) {
            csv << to_string(e.method) << ',' << format9(e.h) << ',' << format9(e.slope) << ','
                << format9(e.r_squared) << ',' << (e.clamped ? 1 : 0) << '\n';
        }
        art.add(run.out("analysis.csv"), csv.str());
    } else {
        art.add(run.out("analysis.json"), doc.dump(2) + "\n");
    }
    json config = common_config(run.common());
    auto series = series_config(so);
    series.erase("transform");  // analysis runs on the raw values
    config.update({{"input", a.input}, {"max_lag", a.max_lag}, {"margin", number9(a.margin)}, {"series", series}});
    run.emit("run-manifest.json", "analyze", config, std::move(art),
             {{"series", x.label()},
              {"verdict", to_string(cls.verdict)},
              {"h_median", number9(cls.h_median)},
              {"adf_stationary", adf.stationary_at_5pct}});
}

FittedModel fit_with(const TimeSeries& x, const FitArgs& a) {
    const auto family = parse_model_family(a.family);
    switch (family) {
        case ModelFamily::Arima: {
            ArimaOptions o;
            if (a.max_p) o.max_p = *a.max_p;
            if (a.max_q) o.max_q = *a.max_q;
            o.max_d = a.max_d;
            o.search = a.search == "exhaustive" ? OrderSearch::Exhaustive : OrderSearch::Stepwise;
            return fit_arima(x, o);
        }
        case ModelFamily::Arfima: {
            ArfimaOptions o;
            if (a.max_p) o.max_p = *a.max_p;
            if (a.max_q) o.max_q = *a.max_q;
            return fit_arfima(x, o);
        }
        default: return fit_model(x, family);
    }
}

void validate_fit(const FitArgs& a) {
    try {
        (void)parse_model_family(a.family);
    } catch (const Error&) {
        throw UsageError("cli.InvalidArgument", "unknown --family '" + a.family + "'");
    }
    usage_check(a.search == "stepwise" || a.search == "exhaustive", "--search must be stepwise or exhaustive");
}

json fit_config(const FitArgs& a) {
    auto opt = [](const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); };
    return {{"family", a.family}, {"max_p", opt(a.max_p)}, {"max_q", opt(a.max_q)}, {"max_d", a.max_d}, {"search", a.search}};
}

void cmd_fit(Runner& run, const FitArgs& a, const SeriesOptions& so) {
    require_file(a.input, "input");
    validate_series_options(so);
    validate_fit(a);
    const auto raw = run.load(a.input, so, !so.no_transform);
    const auto model = fit_with(transform(raw, transform_of(so)), a);
    json doc = to_json(model);
    doc["series"] = raw.label();
    Artifacts art;
    art.add(run.out("model.json"), doc.dump(2) + "\n");
    json config = common_config(run.common());
    config.update({{"input", a.input}, {"fit", fit_config(a)}, {"series", series_config(so)}});
    run.emit("run-manifest.json", "fit", config, std::move(art),
             {{"series", raw.label()},
              {"family", to_string(model.spec.family)},
              {"p", model.spec.p},
              {"d", number9(model.spec.d)},
              {"q", model.spec.q},
              {"aicc", number9(model.aicc)}});
}

void cmd_forecast(Runner& run, const ForecastArgs& a, const FitArgs& f, const SeriesOptions& so) {
    require_file(a.input, "input");
    if (!a.model.empty()) require_file(a.model, "model");
    validate_series_options(so);
    validate_fit(f);
    usage_check(a.horizon >= 1, "--horizon must be at least 1");
    usage_check(a.level > 0.0 && a.level < 1.0, "--level must lie in (0, 1)");

    FittedModel model;
    std::optional<TimeSeries> loaded_series;
    if (!a.model.empty()) {
        run.note_input(a.model);
        json doc;
        try {
            doc = json::parse(read_file(a.model));
        } catch (const json::exception& e) {
            throw UsageError("cli.InvalidModel", std::string("model document: ") + e.what());
        }
        const auto loaded = model_from_json(doc);
        loaded_series = run.load(a.input, so, loaded.transform.applied);
        model = rebind_history(loaded, transform(*loaded_series, loaded.transform).values());
    } else {
        loaded_series = run.load(a.input, so, !so.no_transform);
        model = fit_with(transform(*loaded_series, transform_of(so)), f);
    }
    const TimeSeries& raw = *loaded_series;
    const auto fc = forecast(model, a.horizon, a.level);

    Artifacts art;
    if (run.common().format == "csv") {
        std::ostringstream csv;
        write_forecast_csv(csv, fc);
        art.add(run.out("forecast.csv"), csv.str());
    } else {
        json pts = json::array();
        for (std::size_t k = 0; k < fc.point.size(); ++k) {
            pts.push_back({{"horizon", k + 1},
                           {"point", number9(fc.point[k])},
                           {"lower", number9(fc.lower[k])},
                           {"upper", number9(fc.upper[k])}});
        }
        json doc = {{"series", raw.label()}, {"level", number9(a.level)}, {"model", to_json(model)}, {"forecast", pts}};
        art.add(run.out("forecast.json"), doc.dump(2) + "\n");
    }
    json config = common_config(run.common());
    config.update({{"input", a.input},
                   {"model", a.model.empty() ? json(nullptr) : json(a.model)},
                   {"horizon", a.horizon},
                   {"level", number9(a.level)},
                   {"series", series_config(so)}});
    if (a.model.empty()) config["fit"] = fit_config(f);
    run.emit("run-manifest.json", "forecast", config, std::move(art),
             {{"series", raw.label()}, {"family", to_string(model.spec.family)}, {"horizon", a.horizon}});
}

void cmd_crossval(Runner& run, const CrossvalArgs& a, const SeriesOptions& so) {
    usage_check(!a.inputs.empty(), "crossval needs at least one input");
    validate_series_options(so);
    CvConfig cfg;
    cfg.window = a.window;
    cfg.max_horizon = a.horizon;
    cfg.step = a.step;
    cfg.methods = parse_methods(a.methods);
    cfg.level = a.level;
    cfg.transform = transform_of(so);
    cfg.threads = run.common().threads;
    usage_check(cfg.window >= 2, "--window must be at least 2");
    usage_check(cfg.max_horizon >= 1, "--horizon must be at least 1");
    usage_check(cfg.step >= 1, "--step must be at least 1");
    usage_check(cfg.level > 0.0 && cfg.level < 1.0, "--level must lie in (0, 1)");
    const auto files = expand_inputs(a.inputs);

    json per_series = json::array();
    std::vector<CvReport> reports;
    for (const auto& file : files) {
        const auto x = run.load(file, so, !so.no_transform);
        json memory = nullptr;
        try {
            const auto cls = classify_memory(x.values());
            memory = {{"verdict", to_string(cls.verdict)}, {"h_median", number9(cls.h_median)}};
        } catch (const Error& e) {
            memory = {{"error", e.qualified_code()}};
        }
        run.log(LogLevel::Info, "cross-validating " + x.label());
        reports.push_back(rolling_cv(x, cfg));
        per_series.push_back({{"series", x.label()}, {"n", x.size()}, {"memory", memory}, {"report", to_json(reports.back())}});
    }
    const auto pooled = aggregate_reports(reports);

    std::ostringstream metrics, imps, box;
    write_metrics_csv(metrics, pooled);
    write_improvements_csv(imps, pooled);
    write_boxplot_csv(box, pooled);
    json doc = {{"config", to_json(cfg)}, {"series", per_series}, {"aggregate", to_json(pooled)}};
    Artifacts art;
    art.add(run.out("report.json"), doc.dump(2) + "\n");
    art.add(run.out("metrics.csv"), metrics.str());
    art.add(run.out("improvements.csv"), imps.str());
    art.add(run.out("boxplot.csv"), box.str());

    json mean_mape = json::object();
    for (auto m : cfg.methods) mean_mape[std::string(to_string(m))] = number9(pooled.metrics(m).mean_mape());
    json config = common_config(run.common());
    json inputs = json::array();
    for (const auto& in : a.inputs) inputs.push_back(in);
    config.update({{"inputs", inputs}, {"cv", to_json(cfg)}, {"series", series_config(so)}});
    run.emit("run-manifest.json", "crossval", config, std::move(art),
             {{"series", files.size()}, {"origins", pooled.origins.size()}, {"mean_mape", mean_mape}});
}

GenKind parse_kind(const std::string& k) {
    if (k == "white") return GenKind::WhiteNoise;
    if (k == "arma") return GenKind::Arma;
    if (k == "arfima") return GenKind::Arfima;
    if (k == "fgn") return GenKind::Fgn;
    if (k == "walk") return GenKind::RandomWalk;
    throw UsageError("cli.InvalidArgument", "unknown --kind '" + k + "'");
}

void cmd_simulate(Runner& run, const SimulateArgs& a) {
    GenSpec spec;
    spec.kind = parse_kind(a.kind);
    spec.n = a.n;
    spec.seed = a.seed;
    spec.phi = a.phi;
    spec.theta = a.theta;
    spec.d = a.d;
    spec.hurst = a.hurst;
    spec.sigma = a.sigma;
    spec.offset = a.offset;
    spec.start_time = a.start;
    spec.interval = a.interval;
    usage_check(a.n >= 1, "--n must be at least 1");
    usage_check(a.sigma > 0.0, "--sigma must be positive");
    usage_check(a.interval > 0.0, "--interval must be positive");
    const auto x = generate(spec);
    std::ostringstream csv;
    write_csv(csv, x);
    const fs::path target = a.out.empty() ? run.out("series.csv") : fs::path(a.out);
    Artifacts art;
    art.add(target, csv.str());
    json config = common_config(run.common());
    config.update({{"kind", a.kind},
                   {"n", a.n},
                   {"seed", a.seed},
                   {"d", number9(a.d)},
                   {"hurst", number9(a.hurst)},
                   {"phi", a.phi},
                   {"theta", a.theta},
                   {"sigma", number9(a.sigma)},
                   {"offset", number9(a.offset)},
                   {"interval", number9(a.interval)},
                   {"start", a.start},
                   {"out", target.generic_string()}});
    run.emit("run-manifest.json", "simulate", config, std::move(art),
             {{"out", target.generic_string()}, {"n", x.size()}});
}

// ---------------------------------------------------------------------------

// `--config FILE` holds flat `key = value` lines named after long options.
// Its entries are spliced in right after the subcommand, so flags given on
// the command line still win.
std::vector<std::string> expand_config(const std::vector<std::string>& args, std::optional<fs::path>& config_file) {
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 == args.size()) throw UsageError("cli.UsageError", "--config needs a file");
            config_file = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_file = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!config_file) return rest;
    require_file(config_file->string(), "config file");
    std::ifstream in(*config_file);
    std::vector<std::string> injected;
    std::string line;
    auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t\r");
        const auto e = v.find_last_not_of(" \t\r");
        v = b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) v = v.substr(1, v.size() - 2);
        return v;
    };
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("cli.InvalidConfig",
                             config_file->string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (value == "true") {
            injected.push_back("--" + key);
        } else if (value != "false") {
            injected.push_back("--" + key);
            injected.push_back(value);
        }
    }
    const auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) { return !a.empty() && a[0] != '-'; });
    const auto at = sub == rest.end() ? rest.end() : sub + 1;
    rest.insert(at, injected.begin(), injected.end());
    return rest;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out-dir", c.out_dir, "directory for outputs and run-manifest.json")->capture_default_str();
    sub->add_option("--log-level", c.log_level, "error, info or debug")
        ->check(CLI::IsMember({"error", "info", "debug"}))
        ->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads")->envname("QOSLRD_THREADS")->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

void add_series(CLI::App* sub, SeriesOptions& so) {
    sub->add_option("--interval", so.interval, "sampling interval in seconds (default: inferred)");
    sub->add_flag("--locf", so.locf, "fill gaps by carrying the last observation forward");
    sub->add_option("--lambda", so.lambda, "Box-Cox lambda (0 = log)")->capture_default_str();
    sub->add_flag("--no-transform", so.no_transform, "model the raw values");
}

void add_fit(CLI::App* sub, FitArgs& f) {
    sub->add_option("--family", f.family, "naive, mean, arima or arfima")->capture_default_str();
    sub->add_option("--max-p", f.max_p, "largest AR order");
    sub->add_option("--max-q", f.max_q, "largest MA order");
    sub->add_option("--max-d", f.max_d, "largest ARIMA differencing order")->capture_default_str();
    sub->add_option("--search", f.search, "ARIMA order search: stepwise or exhaustive")->capture_default_str();
}

void error_line(int exit_code, const std::string& code, const std::string& message) {
    std::cerr << json{{"error", {{"code", code}, {"message", message}, {"exit_code", exit_code}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Long-memory analysis and forecasting of QoS time series", "qoslrd"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", QOSLRD_VERSION);
    app.require_subcommand(1);
    app.footer("Every subcommand also takes --config FILE: `key = value` lines named after its long options.");

    Common common;
    SeriesOptions so;
    AnalyzeArgs aa;
    FitArgs fa;
    ForecastArgs fo;
    CrossvalArgs ca;
    SimulateArgs sa;

    auto* analyze = app.add_subcommand("analyze", "Hurst estimates, memory verdict, ADF and daily seasonality");
    analyze->add_option("input", aa.input, "timestamp,value CSV")->required();
    analyze->add_option("--max-lag", aa.max_lag, "ACF lags for the seasonal check (default 4 days + 2)");
    analyze->add_option("--margin", aa.margin, "H above 0.5 + margin is long memory")->capture_default_str();
    add_common(analyze, common);
    add_series(analyze, so);

    auto* fit = app.add_subcommand("fit", "Fit a model and write model.json");
    fit->add_option("input", fa.input, "timestamp,value CSV")->required();
    add_fit(fit, fa);
    add_common(fit, common);
    add_series(fit, so);

    auto* fc = app.add_subcommand("forecast", "Forecast with a saved model or a fresh fit");
    fc->add_option("input", fo.input, "timestamp,value CSV (the history)")->required();
    fc->add_option("--model", fo.model, "model.json from `fit`");
    fc->add_option("--horizon", fo.horizon, "steps ahead")->capture_default_str();
    fc->add_option("--level", fo.level, "interval coverage")->capture_default_str();
    add_fit(fc, fa);
    add_common(fc, common);
    add_series(fc, so);

    auto* cv = app.add_subcommand("crossval", "Rolling-origin cross-validation over files or directories");
    cv->add_option("inputs", ca.inputs, "CSV files or directories of *.csv")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    cv->add_option("--window", ca.window, "fit window length")->capture_default_str();
    cv->add_option("--horizon", ca.horizon, "largest forecast horizon")->capture_default_str();
    cv->add_option("--step", ca.step, "origin stride")->capture_default_str();
    cv->add_option("--methods", ca.methods, "comma-separated methods")->capture_default_str();
    cv->add_option("--level", ca.level, "interval coverage")->capture_default_str();
    add_common(cv, common);
    add_series(cv, so);

    auto* sim = app.add_subcommand("simulate", "Write a synthetic series");
    sim->add_option("--kind", sa.kind, "white, arma, arfima, fgn or walk")->capture_default_str();
    sim->add_option("--n", sa.n, "length")->capture_default_str();
    sim->add_option("--seed", sa.seed, "RNG seed")->capture_default_str();
    sim->add_option("--d", sa.d, "fractional order (arfima)")->capture_default_str();
    sim->add_option("--hurst", sa.hurst, "Hurst exponent (fgn)")->capture_default_str();
    sim->add_option("--phi", sa.phi, "AR coefficients")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sim->add_option("--theta", sa.theta, "MA coefficients")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sim->add_option("--sigma", sa.sigma, "innovation / marginal standard deviation")->capture_default_str();
    sim->add_option("--offset", sa.offset, "added to every value")->capture_default_str();
    sim->add_option("--interval", sa.interval, "seconds between samples")->capture_default_str();
    sim->add_option("--start", sa.start, "first timestamp (unix seconds)")->capture_default_str();
    sim->add_option("--out", sa.out, "output CSV (default <out-dir>/series.csv)");
    add_common(sim, common);

    std::optional<fs::path> config_file;
    std::vector<std::string> expanded;
    try {
        expanded = expand_config(args, config_file);
    } catch (const UsageError& e) {
        error_line(kExitValidation, e.code, e.what());
        return kExitValidation;
    }
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_line(kExitValidation, "cli.UsageError", e.what());
        return kExitValidation;
    }

    try {
        Runner runner(common);
        if (config_file) runner.note_input(*config_file);
        if (*analyze) cmd_analyze(runner, aa, so);
        if (*fit) cmd_fit(runner, fa, so);
        if (*fc) cmd_forecast(runner, fo, fa, so);
        if (*cv) cmd_crossval(runner, ca, so);
        if (*sim) cmd_simulate(runner, sa);
    } catch (const UsageError& e) {
        error_line(kExitValidation, e.code, e.what());
        return kExitValidation;
    } catch (const Error& e) {
        // Out-of-range parameters are caller mistakes, whatever module spots them.
        const bool invalid =
            e.code() == Errc::InvalidSpec || e.code() == Errc::InvalidD || e.code() == Errc::InvalidLevel;
        const int code = invalid ? kExitValidation : kExitRuntime;
        error_line(code, e.qualified_code(), e.what());
        return code;
    } catch (const std::exception& e) {
        error_line(kExitRuntime, "cli.RuntimeError", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace qoslrd::cli
