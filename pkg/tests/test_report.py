import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sciprofile import (CountryProfile, LoadingTable, SCOPUS27, compare_schemes, extract_factors,
                        load_fixture, membership, profile_table, rank_by_factor)
from sciprofile.report import DOWN, UP, membership_table, rankings_table


@pytest.fixture(scope="module")
def annex_a():
    return load_fixture("annexA_loadings")


@pytest.mark.parametrize("f, first", [(3, ("Costa Rica", 0.96094)), (2, ("Ukraine", 0.96722))])
def test_rank_first(annex_a, f, first):
    assert rank_by_factor(annex_a, f)[0] == first


def test_rank_last(annex_a):
    assert rank_by_factor(annex_a, 3)[-1] == ("Algeria", 0.00098)


def test_rank_is_permutation_in_order(annex_a):
    for f in (1, 2, 3):
        ranked = rank_by_factor(annex_a, f)
        assert sorted(c for c, _ in ranked) == sorted(annex_a.labels)
        values = [v for _, v in ranked]
        assert values == sorted(values, reverse=True)


def test_rank_factor_out_of_range(annex_a):
    with pytest.raises(IndexError):
        rank_by_factor(annex_a, 4)
    with pytest.raises(IndexError):
        rank_by_factor(annex_a, 0)


@pytest.mark.parametrize("f, count, first, last", [
    (1, 16, ("Lebanon", 0.92467), ("Denmark", 0.80126)),
    (2, 15, ("Ukraine", 0.96722), ("Poland", 0.80981)),
    (3, 11, ("Costa Rica", 0.96094), ("South Africa", 0.80199)),
])
def test_membership(annex_a, f, count, first, last):
    members = membership(annex_a, f)
    assert len(members) == count
    assert members[0] == first and members[-1] == last


def test_membership_above_range_is_empty(annex_a):
    assert membership(annex_a, 1, 1.01) == []


@given(st.floats(0, 1), st.floats(0, 1))
def test_membership_monotone(t1, t2):
    table = load_fixture("annexA_loadings")
    lo, hi = sorted((t1, t2))
    for f in (1, 2, 3):
        assert set(membership(table, f, hi)) <= set(membership(table, f, lo))


def test_rankings_table_long_format(annex_a):
    t = rankings_table(annex_a)
    assert len(t.row_labels) == 3 * 93
    lines = t.to_tsv().splitlines()
    assert lines[0] == "factor\trank\tcountry\tloading"
    assert "3\t1\tCosta Rica\t0.96094" in lines


def test_membership_table_exclusions(annex_a):
    t = membership_table(annex_a, excluded={1: ["Lebanon", "Luxembourg"]})
    assert t.column("country").count("Lebanon") == 0
    assert len([lab for lab in t.row_labels if lab == "1"]) == 14
    assert any("Lebanon" in note for note in t.footnotes)


def test_profile_table_kenya():
    m = load_fixture("annexB_f3")
    t = profile_table(m, m.without_world().codes, m.row("WD"))
    agri = "Agricultural and Biological Sciences"
    assert t.cell("Kenya", agri) == "24.3%"
    col = t.columns.index(agri)
    assert t.marks[t.row_labels.index("Kenya")][col] == UP
    assert "24.3%" + UP in t.to_text()


def test_profile_table_empty_members():
    m = load_fixture("annexB_f3")
    t = profile_table(m, [], m.row("WD"))
    assert list(t.row_labels) == ["World"]


def test_profile_table_world_member_has_no_flags():
    m = load_fixture("annexB_f3")
    world = m.row("WD")
    t = profile_table(m, ["WD"], world)
    assert all(mark == "" for mark in t.marks[0])


def test_profile_table_down_flag():
    m = load_fixture("annexB_f3")
    t = profile_table(m, ["PH"], m.row("WD"))
    assert DOWN in t.marks[0]


def test_profile_table_row_order_independent():
    m = load_fixture("annexB_f3")
    members = ["KE", "PH", "CR"]
    reordered = m.select(list(reversed(m.codes)))
    a = profile_table(m, members, m.row("WD"))
    b = profile_table(reordered, members, m.row("WD"))
    assert a.to_tsv() == b.to_tsv()


def test_profile_table_notes_suspect_rows():
    m = load_fixture("annexB_f3")
    t = profile_table(m, ["ID"], m.row("WD"))
    assert any("ID" in note for note in t.footnotes)


def test_profile_table_unknown_member():
    m = load_fixture("annexB_f3")
    with pytest.raises(KeyError):
        profile_table(m, ["ZZ"], m.row("WD"))


def test_compare_printed_tables():
    t = compare_schemes(load_fixture("table2_sjr_variance"), load_fixture("table3_esi_variance"))
    assert t.column("A cum. %") == ["71.31771", "85.40496", "91.71536"]
    assert t.column("B cum. %") == ["62.68682", "82.42916", "89.13931"]
    assert "91.71536 vs 89.13931" in t.footnotes[0]


def test_compare_model_with_itself():
    model = extract_factors(load_fixture("annexB_all").without_world())
    t = compare_schemes(model, model)
    assert t.column("cum. difference") == ["0.00000"] * 3


def test_compare_top_one():
    t = compare_schemes(load_fixture("table2_sjr_variance"), load_fixture("table3_esi_variance"), top=1)
    assert len(t.row_labels) == 1


def test_compare_too_few_rows():
    with pytest.raises(ValueError):
        compare_schemes(load_fixture("table2_sjr_variance"), load_fixture("table3_esi_variance"), top=4)


def test_report_on_computed_loadings():
    model = extract_factors(load_fixture("annexB_all").without_world())
    table = model.loading_table()
    assert isinstance(table, LoadingTable)
    assert len(rank_by_factor(table, 1)) == 35
