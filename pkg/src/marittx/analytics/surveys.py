"""Closure-phase survey schema, validation, and CSV parsing.

One response row carries overall satisfaction (Y), four binary background
variables (X1-X4), fourteen 0-5 ratings (X5-X18), and free-text observations
(X19). The wire format is a comma-separated table with header
``Y,X1,...,X19``; X19 is quoted free text.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

COLUMNS = ("Y",) + tuple(f"X{i}" for i in range(1, 20))
BINARY_COLUMNS = ("X1", "X2", "X3", "X4")
NUMERIC_COLUMNS = ("Y",) + tuple(f"X{i}" for i in range(5, 19))


class SurveyError(ValueError):
    """Raised for malformed survey rows or tables."""


@dataclass(frozen=True)
class SurveyResponse:
    y: float
    xs: tuple[float, ...]  # X1..X18, 1-indexed via x()
    comment: str = ""

    def __post_init__(self):
        if len(self.xs) != 18:
            raise SurveyError(f"expected 18 X values, got {len(self.xs)}")
        for column, value in zip(COLUMNS, (self.y, *self.xs)):
            validate_cell(column, value)

    def x(self, k: int) -> float:
        """X_k for k in 1..18."""
        return self.xs[k - 1]

    def predictors(self) -> tuple[float, ...]:
        """The regression predictor vector X1..X13."""
        return self.xs[:13]

    def to_row(self) -> list:
        return [self.y, *self.xs, self.comment]


def validate_cell(column: str, value) -> float | str:
    """Range-check one cell; returns the parsed value or raises SurveyError."""
    if column == "X19":
        return "" if value is None else str(value)
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise SurveyError(f"{column} must be numeric, got {value!r}") from None
    if column in BINARY_COLUMNS:
        if number not in (0.0, 1.0):
            raise SurveyError(f"{column} must be 0 or 1")
    else:
        if not 0.0 <= number <= 5.0:
            raise SurveyError(f"{column} must be in [0,5]")
    return number


def parse_row(values, row_number: int | None = None) -> SurveyResponse:
    """Build a response from one row of COLUMNS-ordered values."""
    where = f"row {row_number}: " if row_number is not None else ""
    if len(values) != len(COLUMNS):
        raise SurveyError(f"{where}expected {len(COLUMNS)} columns, got {len(values)}")
    parsed = []
    for column, value in zip(COLUMNS, values):
        try:
            parsed.append(validate_cell(column, value))
        except SurveyError as exc:
            raise SurveyError(f"{where}{exc}") from None
    return SurveyResponse(y=parsed[0], xs=tuple(parsed[1:19]), comment=parsed[19])


def parse_survey_csv(text: str) -> list[SurveyResponse]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SurveyError("empty survey table") from None
    if tuple(h.strip() for h in header) != COLUMNS:
        raise SurveyError(f"header must be {','.join(COLUMNS)}")
    rows = []
    for line_number, row in enumerate(reader, start=2):
        if not row:
            continue
        rows.append(parse_row(row, row_number=line_number - 1))
    return rows


def to_csv(rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.to_row())
    return buffer.getvalue()
