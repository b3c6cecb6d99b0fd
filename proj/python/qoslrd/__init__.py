"""Long-memory analysis and ARFIMA forecasting of QoS time series."""

import json

from . import _qoslrd
from ._qoslrd import (
    QoslrdError,
    acf,
    cli_run,
    frac_diff_coeffs,
    frac_difference,
    generate,
    improvement,
    mae,
    mape,
)

__all__ = [
    "QoslrdError",
    "acf",
    "adf_test",
    "classify_memory",
    "cli_run",
    "fit",
    "forecast",
    "frac_diff_coeffs",
    "frac_difference",
    "generate",
    "hurst",
    "improvement",
    "mae",
    "mape",
    "rolling_cv",
]


def hurst(values, method="rs"):
    """Hurst estimate; method is "aggvar", "rs" or "periodogram"."""
    return json.loads(_qoslrd.hurst(list(values), method))


def classify_memory(values, margin=0.1):
    return json.loads(_qoslrd.classify_memory(list(values), margin))


def adf_test(values, max_lag=None):
    return json.loads(_qoslrd.adf_test(list(values), max_lag))


def fit(values, family="ARFIMA", box_cox_lambda=None):
    """Fit NAIVE, MEAN, ARIMA or ARFIMA; returns the model document."""
    return json.loads(_qoslrd.fit(list(values), family, box_cox_lambda))


def forecast(values, family="ARFIMA", horizon=24, level=0.95, box_cox_lambda=None, model=None):
    """Forecast `horizon` steps. Pass `model` (a document from fit) to reuse it on new history."""
    doc = json.dumps(model) if model is not None else None
    out = _qoslrd.forecast(list(values), family, horizon, level, box_cox_lambda, doc)
    out["model"] = json.loads(out["model"])
    return out


def rolling_cv(values, window=96, horizon=48, step=1, methods=("NAIVE", "MEAN", "ARIMA", "ARFIMA"),
               box_cox_lambda=0.0, threads=1):
    return json.loads(_qoslrd.rolling_cv(list(values), window, horizon, step, list(methods), box_cox_lambda, threads))
