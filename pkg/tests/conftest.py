import json

import pytest

from metasheet import parse_template

SAMPLE_TEMPLATE_DOC = {
    "id": "tmpl-sample-v1",
    "name": "Sample",
    "version": "1.0.0",
    "fields": [
        {"name": "donor_id", "datatype": "text", "required": True},
        {
            "name": "time_unit",
            "datatype": "controlled",
            "required": True,
            "value_set": {"kind": "inline", "labels": ["Year", "Month", "Day"]},
        },
    ],
}

# Five data rows seeded with the canonical error mix: two blank required
# donor_id cells and three "days" cells in the controlled time_unit column.
FIVE_ISSUE_SHEET = (
    b"donor_id\ttime_unit\tmetadata_schema_id\n"
    b"D1\tdays\ttmpl-sample-v1\n"
    b"\tYear\ttmpl-sample-v1\n"
    b"D3\tdays\ttmpl-sample-v1\n"
    b"\tMonth\ttmpl-sample-v1\n"
    b"D5\tdays\ttmpl-sample-v1\n"
)


@pytest.fixture
def sample_template_doc() -> bytes:
    return json.dumps(SAMPLE_TEMPLATE_DOC).encode("utf-8")

@pytest.fixture
def sample_template(sample_template_doc):
    return parse_template(sample_template_doc)


@pytest.fixture
def five_issue_sheet() -> bytes:
    return FIVE_ISSUE_SHEET


@pytest.fixture
def fixtures_dir(tmp_path):
    """Terminology fixture tree with a units/time value set and synonyms."""
    branch = tmp_path / "terminology" / "units"
    branch.mkdir(parents=True)
    (branch / "time.json").write_text(json.dumps({
        "id": "units/time",
        "labels": ["Year", "Month", "Day"],
        "synonyms": {"Year": ["yr", "years"], "Month": ["mo"], "Day": ["d"]},
        "term_iris": {"Year": "http://example.org/units/year"},
    }), encoding="utf-8")
    return tmp_path / "terminology"
