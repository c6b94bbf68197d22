"""Exercise-evaluation analytics: surveys, regression, prospective scenarios."""

from .regression import (
    MODEL_ACCURACY_VARS,
    PREDICTOR_NAMES,
    PROSPECTIVE_SCENARIOS,
    FitError,
    ProspectiveScenario,
    RegressionModel,
    classify_scenario,
    descriptive_stats,
    fit_linear,
    fit_ols,
    predict,
    predict_clamped,
    reference_model,
)
from .surveys import (
    BINARY_COLUMNS,
    COLUMNS,
    NUMERIC_COLUMNS,
    SurveyError,
    SurveyResponse,
    parse_row,
    parse_survey_csv,
    to_csv,
    validate_cell,
)

__all__ = [
    "MODEL_ACCURACY_VARS",
    "PREDICTOR_NAMES",
    "PROSPECTIVE_SCENARIOS",
    "FitError",
    "ProspectiveScenario",
    "RegressionModel",
    "classify_scenario",
    "descriptive_stats",
    "fit_linear",
    "fit_ols",
    "predict",
    "predict_clamped",
    "reference_model",
    "BINARY_COLUMNS",
    "COLUMNS",
    "NUMERIC_COLUMNS",
    "SurveyError",
    "SurveyResponse",
    "parse_row",
    "parse_survey_csv",
    "to_csv",
    "validate_cell",
]
