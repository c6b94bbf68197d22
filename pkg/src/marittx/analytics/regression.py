"""Exercise-evaluation statistics: OLS, the reference model, and scenarios.

The reference model is the published multiple linear regression of overall
satisfaction on participant background and exercise-perception variables
(X1..X13), shipped with its reported fit statistics; its underlying raw
responses are not published, so those statistics are carried as metadata,
not recomputed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .surveys import SurveyResponse

PREDICTOR_NAMES = tuple(f"X{i}" for i in range(1, 14))


class FitError(ValueError):
    """Raised when a regression cannot be fitted as requested."""


@dataclass(frozen=True)
class RegressionModel:
    intercept: float
    coefficients: tuple[float, ...]
    r_squared: float
    adjusted_r_squared: float
    residual_std_dev: float
    multiple_correlation: float
    n: int
    p: int
    predictor_names: tuple[str, ...] = PREDICTOR_NAMES
    fitted: bool = True  # False for stored published models

    def to_wire(self) -> dict:
        return {
            "intercept": self.intercept,
            "coefficients": dict(zip(self.predictor_names, self.coefficients)),
            "rSquared": self.r_squared,
            "adjustedRSquared": self.adjusted_r_squared,
            "residualStdDev": self.residual_std_dev,
            "multipleCorrelation": self.multiple_correlation,
            "n": self.n,
            "p": self.p,
        }


_REFERENCE_COEFFICIENTS = (
    -0.0252, 0.8471, -0.7636, -0.0959, 0.1139, 0.2345, 0.4938,
    0.1171, 0.0975, -0.0491, 0.0090, 0.1979, -0.0631,
)
_REFERENCE_INTERCEPT = -0.5722


def reference_model() -> RegressionModel:
    """The published satisfaction model with its reported fit statistics."""
    return RegressionModel(
        intercept=_REFERENCE_INTERCEPT,
        coefficients=_REFERENCE_COEFFICIENTS,
        r_squared=0.8743,
        adjusted_r_squared=0.80,
        residual_std_dev=0.26,
        multiple_correlation=0.935,
        n=36,
        p=13,
        fitted=False,
    )


def predict(model: RegressionModel, x) -> float:
    """Raw linear prediction b0 + sum(b_k * x_k); no clamping."""
    x = tuple(float(v) for v in x)
    if len(x) != model.p:
        raise FitError(f"expected {model.p} predictors, got {len(x)}")
    return model.intercept + sum(b * v for b, v in zip(model.coefficients, x))


def predict_clamped(model: RegressionModel, x) -> float:
    """Display variant of predict, clamped to the 0-5 response scale."""
    return min(max(predict(model, x), 0.0), 5.0)


def fit_linear(X, y, names=None) -> RegressionModel:
    """Least-squares fit of y on X plus an intercept.

    Uses an SVD-based solver (numpy lstsq), never explicit normal-equation
    inversion. Raises FitError for too-few rows, rank deficiency (naming the
    first dependent column), or a constant response.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise FitError("X must be a 2-d design matrix")
    n, p = X.shape
    if y.shape != (n,):
        raise FitError(f"y must have {n} entries, got {y.shape}")
    names = tuple(names) if names is not None else tuple(f"X{i}" for i in range(1, p + 1))
    if len(names) != p:
        raise FitError(f"expected {p} predictor names, got {len(names)}")
    if n < p + 2:
        raise FitError(f"insufficient sample size: n={n} must exceed p+1={p + 1}")

    design = np.column_stack([np.ones(n), X])
    rank = np.linalg.matrix_rank(design)
    if rank < p + 1:
        for j in range(1, p + 1):
            if np.linalg.matrix_rank(design[:, : j + 1]) < j + 1:
                raise FitError(f"design matrix is rank deficient: column {names[j - 1]} "
                               "is linearly dependent on earlier columns")
        raise FitError("design matrix is rank deficient")

    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        raise FitError("constant response: R-squared is undefined")

    solution, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ solution
    ssr = float(residuals @ residuals)
    r_squared = 1.0 - ssr / sst
    dof = n - p - 1
    return RegressionModel(
        intercept=float(solution[0]),
        coefficients=tuple(float(b) for b in solution[1:]),
        r_squared=r_squared,
        adjusted_r_squared=1.0 - (1.0 - r_squared) * (n - 1) / dof,
        residual_std_dev=math.sqrt(ssr / dof),
        multiple_correlation=math.sqrt(max(r_squared, 0.0)),
        n=n,
        p=p,
        predictor_names=names,
    )


def fit_ols(rows: list[SurveyResponse]) -> RegressionModel:
    """Fit overall satisfaction on X1..X13 over survey rows (needs n >= 15)."""
    if len(rows) < 15:
        raise FitError(f"insufficient sample size: need at least 15 rows, got {len(rows)}")
    X = np.array([row.predictors() for row in rows], dtype=np.float64)
    y = np.array([row.y for row in rows], dtype=np.float64)
    return fit_linear(X, y, names=PREDICTOR_NAMES)


# Section composites reported by the live exercises: general evaluation,
# scenario evaluation, and simulation-model accuracy.
GENERAL_EVALUATION_VARS = ("X5", "X6", "X7", "Y")
SCENARIO_EVALUATION_VARS = tuple(f"X{i}" for i in range(8, 14))
MODEL_ACCURACY_VARS = tuple(f"X{i}" for i in range(14, 19))


def descriptive_stats(rows: list[SurveyResponse]) -> dict:
    """Binary proportions, numeric means, and section composites.

    Proportions are rounded to 3 decimals (reporting convention); means are
    kept at full precision.
    """
    if not rows:
        raise FitError("descriptive_stats requires at least one row")
    count = len(rows)
    proportions = {
        f"X{k}": round(sum(row.x(k) for row in rows) / count, 3) for k in range(1, 5)
    }
    means = {"Y": sum(row.y for row in rows) / count}
    for k in range(5, 19):
        means[f"X{k}"] = sum(row.x(k) for row in rows) / count

    def composite(variables):
        return sum(means[v] if v != "Y" else means["Y"] for v in variables) / len(variables)

    return {
        "n": count,
        "proportions": proportions,
        "means": means,
        "composites": {
            "generalEvaluation": composite(GENERAL_EVALUATION_VARS),
            "scenarioEvaluation": composite(SCENARIO_EVALUATION_VARS),
            "modelAccuracy": composite(MODEL_ACCURACY_VARS),
        },
    }


@dataclass(frozen=True)
class ProspectiveScenario:
    """A reference predictor vector future exercises are compared against."""

    name: str
    values: tuple[float, ...]  # X1..X13
    reference_y: float


# Ordered most to least pessimistic; ties in classification resolve to the
# earlier entry.
PROSPECTIVE_SCENARIOS = (
    ProspectiveScenario("Pessimistic", (1, 0, 0, 0, 3, 3, 3, 3, 3, 2, 1, 2, 1), 2.8),
    ProspectiveScenario("TrendBased", (1, 0, 0, 1, 4, 4, 4, 4, 4, 4, 3, 3, 2), 3.8),
    ProspectiveScenario("Optimistic", (1, 1, 1, 1, 5, 4, 5, 4, 5, 4, 4, 4, 3), 4.8),
)

# Coordinate scale widths: X1..X4 binary (width 1), X5..X13 rated 0-5.
_SCALE = np.array([1.0] * 4 + [5.0] * 9)


def classify_scenario(x) -> tuple[str, float]:
    """Nearest prospective scenario by range-scaled Euclidean distance."""
    x = np.asarray([float(v) for v in x], dtype=np.float64)
    if x.shape != (13,):
        raise FitError(f"expected a 13-vector, got shape {x.shape}")
    for k in range(4):
        if x[k] not in (0.0, 1.0):
            raise FitError(f"X{k + 1} must be 0 or 1")
    for k in range(4, 13):
        if not 0.0 <= x[k] <= 5.0:
            raise FitError(f"X{k + 1} must be in [0,5]")
    best_name, best_distance = None, math.inf
    for scenario in PROSPECTIVE_SCENARIOS:
        diff = (x - np.asarray(scenario.values)) / _SCALE
        distance = float(np.sqrt(diff @ diff))
        if distance < best_distance:
            best_name, best_distance = scenario.name, distance
    return best_name, best_distance
