import csv
from pathlib import Path

import pytest

from conglat.combinatorics import IntegerPartition
from conglat.errors import GroupTooLarge, MissingQ, OutOfValidityRange
from conglat.families import chain_semilattice
from conglat.heights import (
    SIDES,
    DClassData,
    Expr,
    acts_heights,
    brute_heights,
    closed_form,
    family_dclass_data,
    formula_heights,
    fstar_heights,
    general_heights,
    observed_dclass_data,
    valid_from,
)
from tests.conftest import built

GOLDEN = Path(__file__).parent / "golden" / "table3.csv"
CLOSED_FAMILIES = ("tn", "ptn", "in", "on", "pn", "bn", "tln", "instar", "pbn", "fnstar")


def golden():
    with open(GOLDEN) as fh:
        return {(r["family"], int(r["n"]), r["side"]): int(r["height"]) for r in csv.DictReader(fh)}


def test_general_heights_t3():
    data = [DClassData(1, 3, 1, 1, 1, True), DClassData(2, 3, 3, 2, 2), DClassData(3, 1, 1, 3, 3)]
    r = general_heights(data)
    assert (r.lcong, r.rcong, r.cong) == (12, 11, 7)
    assert r.corrections == {"left": 0, "right": 1, "two": 1}


def test_general_heights_trivial():
    r = general_heights([DClassData(0, 1, 1, 1, 1, True)])
    assert (r.lcong, r.rcong, r.cong) == (1, 1, 1)


def test_general_heights_b3():
    r = formula_heights("bn", 3)
    assert (r.lcong, r.rcong, r.cong) == (9, 9, 6)


def test_general_heights_needs_one_minimal_class():
    with pytest.raises(ValueError):
        general_heights([DClassData(0, 1, 1, 1, 1, False)])


@pytest.mark.parametrize("family,n,expected", [
    ("pn", 2, [(0, 2), (1, 3), (2, 1)]),
    ("tln", 4, [(0, 2), (2, 3), (4, 1)]),
    ("instar", 3, [(1, 1), (2, 3), (3, 1)]),
])
def test_family_dclass_data_examples(family, n, expected):
    data = family_dclass_data(family, n)
    assert [(d.label, d.m_L) for d in data] == expected
    assert all(d.m_L == d.m_R for d in data)


def test_missing_q():
    with pytest.raises(MissingQ):
        family_dclass_data("mnq", 2)


def test_formula_matches_table3_everywhere():
    table = golden()
    for (family, n, side), value in table.items():
        assert formula_heights(family, n).value(side) == value


def test_closed_form_examples():
    assert closed_form("tn", 10, side="left") == 6080
    assert closed_form("pn", 5, side="two") == 16
    for n in range(4, 11):
        assert closed_form("on", n, side="two") == n + 1


@pytest.mark.parametrize("family", CLOSED_FAMILIES)
def test_closed_forms_agree_with_general_engine(family):
    for side in SIDES:
        for n in range(valid_from(family, side), 11):
            if family == "fnstar" and side == "two" and n > 6:
                continue  # S_7 and up exceed the default group-order limit
            assert closed_form(family, n, side=side) == formula_heights(family, n).value(side)


def test_closed_form_below_validity_reports_both_values():
    with pytest.raises(OutOfValidityRange) as info:
        closed_form("tn", 2, side="two")
    err = info.value
    assert err.general_value == 4
    assert err.formula_value == 5
    assert not err.agrees
    with pytest.raises(OutOfValidityRange) as info:
        closed_form("tln", 2, side="two")
    assert info.value.general_value == 2 and info.value.formula_value == 4
    with pytest.raises(OutOfValidityRange) as info:
        closed_form("in", 3, side="left")
    assert info.value.agrees


def test_tn_one_sided_closed_forms_hold_from_small_n():
    for n in range(1, 11):
        closed_form("tn", n, side="left")
    for n in range(2, 11):
        closed_form("tn", n, side="right")


def test_mnq_closed_form_matches_engine():
    for q in (2, 3):
        for n in range(3):
            for side in SIDES:
                try:
                    v = closed_form("mnq", n, q, side)
                except OutOfValidityRange as e:
                    v = e.formula_value
                assert v == formula_heights("mnq", n, q).value(side)


def test_mnq_symbolic_above_group_limit():
    r = formula_heights("mnq", 2, 7)
    assert isinstance(r.lcong, Expr)
    assert str(r.lcong) == "Ht(Sub(GL(2,7))) + 25"
    d = r.to_dict()
    assert d["lcong"] == "Ht(Sub(GL(2,7))) + 25"


@pytest.mark.parametrize("family", ["in", "instar", "fnstar", "pn", "bn", "pbn"])
def test_inverse_and_symmetric_families_have_equal_sides(family):
    for n in range(8):
        r = formula_heights(family, n)
        assert r.lcong == r.rcong


@pytest.mark.parametrize("family", ["on", "tln"])
def test_h_trivial_specialisation(family):
    for n in range(1, 11):
        r = formula_heights(family, n)
        data = family_dclass_data(family, n)
        assert r.lcong - r.corrections["left"] == sum(d.m_L for d in data)
        assert r.rcong - r.corrections["right"] == sum(d.m_R for d in data)


def test_h_trivial_totals():
    # O_n has 2^n - 1 L-classes and 2^(n-1) R-classes
    for n in range(1, 11):
        data = family_dclass_data("on", n)
        assert sum(d.m_L for d in data) == 2 ** n - 1
        assert sum(d.m_R for d in data) == 2 ** (n - 1)


@pytest.mark.parametrize("k", range(1, 7))
def test_chain_semilattice_heights(k):
    S = chain_semilattice(k)
    b = brute_heights(S)
    assert (b.lcong, b.rcong, b.cong) == (k, k, k)
    a = acts_heights(S)
    assert (a.lcong, a.rcong, a.cong) == (k, k, k)


def test_fstar_heights():
    r = fstar_heights(1)
    assert (r.lcong, r.rcong, r.cong) == (1, 1, 1)
    r = fstar_heights(3)
    assert (r.lcong, r.rcong, r.cong) == (7, 7, 5)
    assert r.corrections == {"left": 0, "right": 0, "two": 0}
    with pytest.raises(GroupTooLarge):
        fstar_heights(7)
    assert fstar_heights(7, side="left").lcong == formula_heights("fnstar", 7).lcong


def test_fstar_against_brute_force():
    b = brute_heights(built("fnstar", 3))
    assert (b.lcong, b.rcong, b.cong) == (7, 7, 5)


ORACLE_CASES = [("tn", n) for n in range(4)] + [("ptn", n) for n in range(3)] \
    + [("in", n) for n in range(4)] + [("on", n) for n in range(5)] + [("pn", n) for n in range(3)] \
    + [("bn", n) for n in range(4)] + [("tln", n) for n in range(6)] + [("pbn", n) for n in range(3)] \
    + [("instar", n) for n in range(4)] + [("fnstar", n) for n in range(4)]


@pytest.mark.parametrize("family,n", ORACLE_CASES)
def test_formula_equals_acts(family, n):
    S = built(family, n)
    f = formula_heights(family, n)
    a = acts_heights(S)
    assert [f.value(s) for s in SIDES] == [a.value(s) for s in SIDES]


@pytest.mark.parametrize("family,n", [("tn", 4), ("ptn", 3), ("pn", 3), ("bn", 4), ("pbn", 3),
                                      ("instar", 4), ("fnstar", 4), ("tln", 6)])
def test_formula_equals_acts_larger(family, n):
    # beyond the brute-force range, the decomposition tier still checks the engine
    f = formula_heights(family, n)
    a = acts_heights(built(family, n))
    assert [f.value(s) for s in SIDES] == [a.value(s) for s in SIDES]


@pytest.mark.parametrize("family,n,q", [("tn", 3, None), ("bn", 3, None), ("mnq", 2, 2), ("pbn", 2, None)])
def test_observed_dclass_data_reproduces_heights(family, n, q):
    S = built(family, n, q)
    r = general_heights(observed_dclass_data(S))
    f = formula_heights(family, n, q)
    assert (r.lcong, r.rcong, r.cong) == (f.lcong, f.rcong, f.cong)


def test_report_json_schema():
    import json

    d = json.loads(formula_heights("tn", 3).to_json())
    assert set(d) == {"family", "n", "mode", "lcong", "rcong", "cong", "terms", "corrections", "assumptions"}
    assert d["terms"][0] == {"r": 1, "m_L": 3, "m_R": 1, "ht_sub": 1, "ht_nsub": 1}
    assert d["corrections"] == {"left": 0, "right": 1, "two": 1}
    fd = json.loads(formula_heights("fnstar", 2).to_json())
    assert fd["terms"][0]["r"] == "(1,1)"


def test_expr_arithmetic():
    x = Expr.symbol("X")
    assert str(2 * x + 3) == "2*X + 3"
    assert (x + 1) - x == Expr(1)
    assert str(Expr(0)) == "0"
    assert IntegerPartition((2, 1)) == IntegerPartition((2, 1))
