import functools
import random
import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from metasheet import (
    ConflictingActionsError,
    Datatype,
    FieldSpec,
    IssueGroup,
    IssueKind,
    CellAddress,
    RepairAction,
    RepairSuggestion,
    SuggestionSource,
    UnknownTargetError,
    ValueSet,
    action_from_dict,
    apply_repairs,
    attach_suggestions,
    edit_distance,
    read_tsv,
    similarity,
    suggest_for_group,
    validate_table,
)

from helpers import inline_sets

TIME_SET = ValueSet(id="inline", labels=("Year", "Month", "Day"))
TIME_SET_SYNONYMS = ValueSet(
    id="units/time",
    labels=("Year", "Month", "Day"),
    synonyms={"Year": ("yr", "years"), "Day": ("d",)},
)


@functools.cache
def oracle_distance(a: str, b: str) -> int:
    """Plain recursive definition, the reference for the DP implementation."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    if a[0] == b[0]:
        return oracle_distance(a[1:], b[1:])
    return 1 + min(
        oracle_distance(a[1:], b),
        oracle_distance(a, b[1:]),
        oracle_distance(a[1:], b[1:]),
    )


def group(column, kind, observed, rows=(1,)):
    return IssueGroup(
        column=column,
        kind=kind,
        observed=observed,
        members=tuple(CellAddress(row=r, column=column) for r in rows),
    )


# ---------------------------------------------------------------------------
# edit distance and similarity


def test_edit_distance_examples():
    assert edit_distance("days", "day") == 1
    assert edit_distance("", "abc") == 3
    assert edit_distance("kitten", "sitting") == 3


def test_edit_distance_unicode_scalars():
    assert edit_distance("café", "cafe") == 1
    assert edit_distance("日本", "日") == 1


@given(st.text(alphabet="abc", max_size=8), st.text(alphabet="abc", max_size=8))
def test_edit_distance_matches_recursive_oracle(a, b):
    assert edit_distance(a, b) == oracle_distance(a, b)


@given(
    st.text(alphabet="abcd", max_size=6),
    st.text(alphabet="abcd", max_size=6),
    st.text(alphabet="abcd", max_size=6),
)
def test_edit_distance_metric_axioms(a, b, c):
    assert edit_distance(a, b) == 0 if a == b else edit_distance(a, b) > 0
    assert edit_distance(a, b) == edit_distance(b, a)
    assert edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c)


def test_similarity_examples():
    assert similarity("days", "Day") == 0.75
    assert similarity("whatever", "whatever") == 1.0
    assert similarity(" DAYS ", "days") == 1.0
    assert similarity("days", "Month") == 0.0
    assert similarity("", "") == 1.0


def test_similarity_bounds():
    rng = random.Random(5)
    for _ in range(200):
        a = "".join(rng.choice(string.ascii_letters) for _ in range(rng.randint(0, 8)))
        b = "".join(rng.choice(string.ascii_letters) for _ in range(rng.randint(0, 8)))
        assert 0.0 <= similarity(a, b) <= 1.0


# ---------------------------------------------------------------------------
# suggestions


def controlled_spec(name="time_unit"):
    return FieldSpec(name=name, datatype=Datatype.CONTROLLED, required=True)


def test_paper_worked_example_days_to_day():
    suggestions = suggest_for_group(
        group("time_unit", IssueKind.NOT_IN_VALUE_SET, "days"), controlled_spec(), TIME_SET
    )
    assert suggestions == [RepairSuggestion("Day", 0.75, SuggestionSource.EDIT_DISTANCE)]


def test_synonym_match_ranks_first():
    suggestions = suggest_for_group(
        group("time_unit", IssueKind.NOT_IN_VALUE_SET, "yr"), controlled_spec(), TIME_SET_SYNONYMS
    )
    assert suggestions[0] == RepairSuggestion("Year", 1.0, SuggestionSource.EXACT_SYNONYM)
    assert all(s.provenance is not SuggestionSource.EXACT_SYNONYM for s in suggestions[1:])


def test_case_only_difference_scores_one():
    suggestions = suggest_for_group(
        group("time_unit", IssueKind.NOT_IN_VALUE_SET, "day"), controlled_spec(), TIME_SET
    )
    assert suggestions[0] == RepairSuggestion("Day", 1.0, SuggestionSource.EDIT_DISTANCE)


def test_threshold_and_top_k_configurable():
    everything = suggest_for_group(
        group("time_unit", IssueKind.NOT_IN_VALUE_SET, "days"),
        controlled_spec(), TIME_SET, threshold=0.0,
    )
    assert [s.value for s in everything] == ["Day", "Month", "Year"]  # score desc, value asc
    top_one = suggest_for_group(
        group("time_unit", IssueKind.NOT_IN_VALUE_SET, "days"),
        controlled_spec(), TIME_SET, threshold=0.0, top_k=1,
    )
    assert [s.value for s in top_one] == ["Day"]


def test_suggestion_ordering_score_desc_value_asc():
    vs = ValueSet(id="x", labels=("ab", "ba", "aa"))
    suggestions = suggest_for_group(
        group("c", IssueKind.NOT_IN_VALUE_SET, "aa"), controlled_spec("c"), vs, threshold=0.0
    )
    assert [s.value for s in suggestions] == ["aa", "ab", "ba"]
    assert suggestions[0].score == 1.0
    assert suggestions[1].score == suggestions[2].score == 0.5


def test_quote_coercion_integer():
    field = FieldSpec(name="age", datatype=Datatype.INTEGER)
    suggestions = suggest_for_group(group("age", IssueKind.TYPE_MISMATCH, '"42"'), field)
    assert suggestions == [RepairSuggestion("42", 1.0, SuggestionSource.TYPE_COERCION)]


def test_quote_coercion_single_quotes_and_whitespace():
    field = FieldSpec(name="ratio", datatype=Datatype.DECIMAL)
    suggestions = suggest_for_group(group("ratio", IssueKind.TYPE_MISMATCH, "' 3.5 '"), field)
    assert suggestions == [RepairSuggestion("3.5", 1.0, SuggestionSource.TYPE_COERCION)]


def test_unfixable_type_mismatch_no_suggestions():
    field = FieldSpec(name="age", datatype=Datatype.INTEGER)
    assert suggest_for_group(group("age", IssueKind.TYPE_MISMATCH, '"forty-two"'), field) == []


def test_boolean_mapping():
    field = FieldSpec(name="living", datatype=Datatype.BOOLEAN)
    for observed, expected in [("yes", "true"), ("y", "true"), ("1", "true"),
                               ("no", "false"), ("n", "false"), ("0", "false")]:
        suggestions = suggest_for_group(group("living", IssueKind.TYPE_MISMATCH, observed), field)
        assert suggestions == [RepairSuggestion(expected, 1.0, SuggestionSource.TYPE_COERCION)]
    assert suggest_for_group(group("living", IssueKind.TYPE_MISMATCH, "maybe"), field) == []


def test_sole_option_for_missing_required_controlled():
    sole = ValueSet(id="x", labels=("OnlyOption",))
    suggestions = suggest_for_group(
        group("site", IssueKind.MISSING_REQUIRED, ""), controlled_spec("site"), sole
    )
    assert suggestions == [RepairSuggestion("OnlyOption", 1.0, SuggestionSource.SOLE_OPTION)]
    # more than one label: the user must decide
    assert suggest_for_group(
        group("site", IssueKind.MISSING_REQUIRED, ""), controlled_spec("site"), TIME_SET
    ) == []
    # plain text field: nothing to offer
    assert suggest_for_group(
        group("donor_id", IssueKind.MISSING_REQUIRED, ""),
        FieldSpec(name="donor_id", datatype=Datatype.TEXT, required=True),
    ) == []


def test_no_suggestions_for_out_of_range_and_pattern():
    field = FieldSpec(name="age", datatype=Datatype.INTEGER, range=(0, 10))
    assert suggest_for_group(group("age", IssueKind.OUT_OF_RANGE, "99"), field) == []
    patterned = FieldSpec(name="code", datatype=Datatype.TEXT, pattern="[a-z]+")
    assert suggest_for_group(group("code", IssueKind.PATTERN_MISMATCH, "UPPER"), patterned) == []


def test_suggested_values_always_valid():
    suggestions = suggest_for_group(
        group("time_unit", IssueKind.NOT_IN_VALUE_SET, "days"),
        controlled_spec(), TIME_SET_SYNONYMS, threshold=0.0,
    )
    assert all(s.value in TIME_SET_SYNONYMS.labels for s in suggestions)
    assert all(0.0 <= s.score <= 1.0 for s in suggestions)


# ---------------------------------------------------------------------------
# apply_repairs


def fixture_report(sample_template, five_issue_sheet):
    table = read_tsv(five_issue_sheet)
    return table, validate_table(sample_template, table, inline_sets(sample_template))


def test_batch_repair_rewrites_all_members(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    action = RepairAction(
        replacement="Day", group=("time_unit", "not_in_value_set", "days")
    )
    repaired = apply_repairs(table, report, [action])
    idx = repaired.column_index("time_unit")
    assert [row.cells[idx] for row in repaired.rows] == ["Day", "Year", "Day", "Month", "Day"]
    # input untouched
    assert table.rows[0].cells[idx] == "days"
    # repaired cells re-validate clean
    fresh = validate_table(sample_template, repaired, inline_sets(sample_template))
    assert all(i.column != "time_unit" for i in fresh.issues)


def test_empty_actions_identity(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    assert apply_repairs(table, report, []) is table


def test_single_cell_repair(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    action = RepairAction(replacement="D2", cell=CellAddress(row=2, column="donor_id"))
    repaired = apply_repairs(table, report, [action])
    assert repaired.cell(2, "donor_id") == "D2"
    assert repaired.cell(4, "donor_id") == ""


def test_conflicting_actions_atomic(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    actions = [
        RepairAction(replacement="Day", cell=CellAddress(row=1, column="time_unit")),
        RepairAction(replacement="Month", cell=CellAddress(row=1, column="time_unit")),
    ]
    with pytest.raises(ConflictingActionsError) as excinfo:
        apply_repairs(table, report, actions)
    assert excinfo.value.cells == [CellAddress(row=1, column="time_unit")]


def test_duplicate_identical_replacements_are_not_conflicts(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    actions = [
        RepairAction(replacement="Day", cell=CellAddress(row=1, column="time_unit")),
        RepairAction(replacement="Day", group=("time_unit", "not_in_value_set", "days")),
    ]
    repaired = apply_repairs(table, report, actions)
    assert repaired.cell(1, "time_unit") == "Day"


def test_unknown_group_key(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    action = RepairAction(replacement="x", group=("time_unit", "not_in_value_set", "nope"))
    with pytest.raises(UnknownTargetError):
        apply_repairs(table, report, [action])


def test_cell_out_of_bounds_and_non_issue_cells(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    with pytest.raises(UnknownTargetError):
        apply_repairs(table, report, [RepairAction(replacement="x", cell=CellAddress(99, "donor_id"))])
    with pytest.raises(UnknownTargetError):
        apply_repairs(table, report, [RepairAction(replacement="x", cell=CellAddress(1, "nosuch"))])
    # row 1 donor_id has no issue: repairs may only touch reported errors
    with pytest.raises(UnknownTargetError):
        apply_repairs(table, report, [RepairAction(replacement="x", cell=CellAddress(1, "donor_id"))])


def test_frame_property_untouched_cells_identical(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    action = RepairAction(replacement="Day", group=("time_unit", "not_in_value_set", "days"))
    repaired = apply_repairs(table, report, [action])
    touched = {(m.row, "time_unit") for m in report.group("time_unit", "not_in_value_set", "days").members}
    for row, fresh_row in zip(table.rows, repaired.rows):
        for column, old, new in zip(table.columns, row.cells, fresh_row.cells):
            if (row.index, column) in touched:
                assert new == "Day"
            else:
                assert new == old


def test_action_validation():
    with pytest.raises(ValueError):
        RepairAction(replacement="x")
    with pytest.raises(ValueError):
        RepairAction(replacement="x", group=("a", "b", "c"), cell=CellAddress(1, "a"))


def test_action_from_dict_shapes():
    action = action_from_dict({"group": {"column": "c", "kind": "type_mismatch", "observed": "x"},
                               "replacement": "y"})
    assert action.group == ("c", "type_mismatch", "x")
    action = action_from_dict({"cell": {"row": 3, "column": "c"}, "replacement": "y"})
    assert action.cell == CellAddress(row=3, column="c")
    for bad in [
        {},
        {"replacement": "y"},
        {"replacement": 5, "cell": {"row": 1, "column": "c"}},
        {"replacement": "y", "group": {"column": "c"}, "cell": {"row": 1, "column": "c"}},
        {"replacement": "y", "group": {"column": "c"}},
        {"replacement": "y", "cell": {"row": "x"}},
        "not an object",
    ]:
        with pytest.raises(ValueError):
            action_from_dict(bad)


def test_attach_suggestions_fills_every_group(sample_template, five_issue_sheet):
    table, report = fixture_report(sample_template, five_issue_sheet)
    enriched = attach_suggestions(report, sample_template, inline_sets(sample_template))
    assert all(g.suggestions is not None for g in enriched.groups)
    days = enriched.group("time_unit", "not_in_value_set", "days")
    assert [s.value for s in days.suggestions] == ["Day"]
    # original report untouched
    assert all(g.suggestions is None for g in report.groups)
