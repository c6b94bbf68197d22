import pytest

from marittx.analytics import (
    COLUMNS,
    SurveyError,
    SurveyResponse,
    parse_row,
    parse_survey_csv,
    to_csv,
    validate_cell,
)


def good_row():
    return [5, 1, 0, 0, 1] + [4] * 14 + ["ok"]


def test_in_range_row_accepted():
    response = parse_row(good_row())
    assert response.y == 5.0
    assert response.x(1) == 1.0
    assert response.x(18) == 4.0
    assert response.comment == "ok"


def test_binary_violation_addressed():
    row = good_row()
    row[2] = 3  # X2
    with pytest.raises(SurveyError, match="X2 must be 0 or 1"):
        parse_row(row)


def test_numeric_range_violation_addressed():
    row = good_row()
    row[11] = 6  # X11
    with pytest.raises(SurveyError, match=r"X11 must be in \[0,5\]"):
        parse_row(row)


def test_row_number_in_message():
    row = good_row()
    row[0] = -1
    with pytest.raises(SurveyError, match=r"row 7: Y must be in \[0,5\]"):
        parse_row(row, row_number=7)


def test_wrong_column_count():
    with pytest.raises(SurveyError, match="expected 20 columns, got 3"):
        parse_row([1, 2, 3])


def test_non_numeric_cell():
    row = good_row()
    row[5] = "lots"
    with pytest.raises(SurveyError, match="X5 must be numeric"):
        parse_row(row)


def test_blank_comment_allowed():
    row = good_row()
    row[19] = ""
    assert parse_row(row).comment == ""


def test_csv_roundtrip_with_quoted_free_text():
    rows = [
        SurveyResponse(y=4.5, xs=(1, 0, 1, 0) + (3.5,) * 14, comment='great, "really"'),
        SurveyResponse(y=2.0, xs=(0, 0, 0, 1) + (2.0,) * 14, comment="line one, line two"),
    ]
    text = to_csv(rows)
    assert text.splitlines()[0] == ",".join(COLUMNS)
    parsed = parse_survey_csv(text)
    assert len(parsed) == 2
    assert parsed[0].comment == 'great, "really"'
    assert parsed[1].x(4) == 1.0


def test_csv_header_enforced():
    with pytest.raises(SurveyError, match="header"):
        parse_survey_csv("A,B,C\n1,2,3\n")


def test_csv_empty_rejected():
    with pytest.raises(SurveyError, match="empty"):
        parse_survey_csv("")


def test_csv_row_errors_carry_row_number():
    lines = [",".join(COLUMNS)]
    lines.append(",".join(str(v) for v in good_row()))
    bad = good_row()
    bad[1] = 2  # X1
    lines.append(",".join(str(v) for v in bad))
    with pytest.raises(SurveyError, match="row 2: X1 must be 0 or 1"):
        parse_survey_csv("\n".join(lines))


def test_validate_cell_boundaries():
    assert validate_cell("Y", 0) == 0.0
    assert validate_cell("Y", 5) == 5.0
    assert validate_cell("X3", 1) == 1.0
    with pytest.raises(SurveyError):
        validate_cell("X14", 5.01)
