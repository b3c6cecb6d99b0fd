#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "qoslrd/evaluation.hpp"
#include "qoslrd/lrd.hpp"
#include "qoslrd/models.hpp"

namespace qoslrd {

/// Rounds to 9 significant digits so serialized output is stable; non-finite
/// values become JSON null.
[[nodiscard]] nlohmann::json number9(double value);
[[nodiscard]] std::string format9(double value);

[[nodiscard]] nlohmann::json to_json(const TransformSpec& spec);
[[nodiscard]] nlohmann::json to_json(const HurstEstimate& estimate);
[[nodiscard]] nlohmann::json to_json(const AdfResult& result);
[[nodiscard]] nlohmann::json to_json(const MemoryClassification& classification);
[[nodiscard]] nlohmann::json to_json(const SeasonalDiagnostic& diagnostic);
[[nodiscard]] nlohmann::json to_json(const CvConfig& config);
[[nodiscard]] nlohmann::json to_json(const CvReport& report);

/// The model document {family, p, d, q, phi, theta, mean, sigma2, aicc,
/// loglik, n, include_mean, transform}.
[[nodiscard]] nlohmann::json to_json(const FittedModel& model);

/// Parses a model document. The result has no history; use
/// rebind_history() before forecasting. Throws models.InvalidSpec.
[[nodiscard]] FittedModel model_from_json(const nlohmann::json& doc);

/// `horizon,point,lower,upper`
void write_forecast_csv(std::ostream& out, const ForecastResult& result);
/// `method,horizon,mae,mape,count`
void write_metrics_csv(std::ostream& out, const CvReport& report);
/// `pair,horizon,improvement_pct`; horizon "mean" and "max" rows close each pair.
void write_improvements_csv(std::ostream& out, const CvReport& report);
/// `method,horizon,min,q1,median,q3,max` of |P| per horizon.
void write_boxplot_csv(std::ostream& out, const CvReport& report);

}  // namespace qoslrd
