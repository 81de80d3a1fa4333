import random

import numpy as np
import pytest

from conglat.errors import IndexOutOfRange, NotAssociative
from conglat.families import chain_semilattice, left_zero
from conglat.groups import brute_sub_height
from conglat.semigroup import (
    check_stability,
    column_faithful,
    format_cayley_text,
    from_cayley_table,
    green,
    is_h_separable,
    parse_cayley_text,
    row_faithful,
    schutzenberger,
)
from tests.conftest import SMALL, built


def test_trivial_monoid():
    S = from_cayley_table([[0]])
    assert S.identity == 0
    gs = green(S)
    assert len(gs.d_classes) == 1
    d = gs.d_classes[0]
    assert (d.num_L, d.num_R) == (1, 1)
    assert check_stability(S)


def test_left_zero_has_no_identity():
    S = from_cayley_table([[0, 0], [1, 1]])
    assert S.identity is None


def test_rejects_non_associative_table_with_witness():
    # x*y = 1 - x is not associative on {0, 1}
    table = [[1, 1], [0, 0]]
    with pytest.raises(NotAssociative) as info:
        from_cayley_table(table)
    a, b, c = info.value.witness
    t = np.array(table)
    assert t[t[a, b], c] != t[a, t[b, c]]


def test_rejects_ragged_and_out_of_range():
    with pytest.raises(IndexOutOfRange):
        from_cayley_table([[0, 0], [0]])
    with pytest.raises(IndexOutOfRange):
        from_cayley_table([[0, 2], [0, 0]])


def test_cayley_text_round_trip():
    S = built("tn", 2)
    text = format_cayley_text(S)
    again = from_cayley_table(parse_cayley_text(text))
    assert np.array_equal(again.table, S.table)


def test_green_t3():
    gs = green(built("tn", 3))
    assert [(d.rank, d.num_L, d.num_R) for d in gs.d_classes] == [(1, 3, 1), (2, 3, 3), (3, 1, 1)]
    assert gs.minimal_d_class.rank == 1


def test_green_b3():
    gs = green(built("bn", 3))
    assert sorted((d.rank, d.num_L, d.num_R) for d in gs.d_classes) == [(1, 3, 3), (3, 1, 1)]


def test_schutzenberger_t3():
    S = built("tn", 3)
    gs = green(S)
    orders = {d.rank: d.schutz.order for d in gs.d_classes}
    assert orders == {1: 1, 2: 2, 3: 6}


def test_row_and_column_faithful():
    assert row_faithful([[1, 0], [0, 1]])
    assert not row_faithful([[1, 1], [1, 1]])
    rank2 = next(d for d in green(built("tn", 3)).d_classes if d.rank == 2)
    assert row_faithful(rank2.idempotent_matrix)
    assert column_faithful(rank2.idempotent_matrix)


def test_h_separable_examples():
    S = built("tn", 3)
    gs = green(S)
    for d in gs.d_classes:
        if not d.is_minimal:
            assert all(is_h_separable(S, gs, c, "left") for c in d.l_ids)
    lz = left_zero(2)
    gz = green(lz)
    assert len(gz.l_classes) == 1
    assert not is_h_separable(lz, gz, 0, "left")
    # the right zero's single L-class of size... each H-class alone: vacuous
    triv = from_cayley_table([[0]])
    assert is_h_separable(triv, green(triv), 0, "left")


@pytest.mark.parametrize("family,n,q", [("tn", 2, None), ("pn", 2, None), ("on", 3, None)])
def test_stability(family, n, q):
    assert check_stability(built(family, n, q))


def random_semigroup(rng):
    # a random subsemigroup of T_4 generated by a few maps
    gens = [tuple(rng.randrange(4) for _ in range(4)) for _ in range(rng.randint(1, 3))]
    elems = list(dict.fromkeys(gens))
    seen = set(elems)
    for x in elems:
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                seen.add(y)
                elems.append(y)
    idx = {x: i for i, x in enumerate(elems)}
    table = [[idx[tuple(b[i] for i in a)] for b in elems] for a in elems]
    return from_cayley_table(table)


def test_green_invariants_on_random_semigroups():
    rng = random.Random(7)
    for _ in range(40):
        S = random_semigroup(rng)
        gs = green(S)
        assert check_stability(S, gs)
        check_green_invariants(S, gs)


def check_green_invariants(S, gs):
    t = S.table.tolist()
    n = S.size
    # L and R from principal ideals, independently of the Cayley-graph SCCs
    left_ideal = [frozenset([x] + [t[s][x] for s in range(n)]) for x in range(n)]
    right_ideal = [frozenset([x] + [t[x][s] for s in range(n)]) for x in range(n)]
    for x in range(n):
        for y in range(n):
            assert (gs.l_class[x] == gs.l_class[y]) == (left_ideal[x] == left_ideal[y])
            assert (gs.r_class[x] == gs.r_class[y]) == (right_ideal[x] == right_ideal[y])
            h_same = gs.l_class[x] == gs.l_class[y] and gs.r_class[x] == gs.r_class[y]
            assert (gs.h_class[x] == gs.h_class[y]) == h_same
            assert (gs.d_class[x] == gs.d_class[y]) == (gs.j_class[x] == gs.j_class[y])
    for d in gs.d_classes:
        assert len(d.elements) == d.num_L * d.num_R * d.h_size
        assert d.schutz.right_translations.order == d.h_size
        has_one = any(any(row) for row in d.idempotent_matrix)
        assert d.is_regular == has_one
        if d.is_regular:
            assert all(any(row) for row in d.idempotent_matrix)
            assert all(any(col) for col in zip(*d.idempotent_matrix))
    assert sum(1 for d in gs.d_classes if d.is_minimal) == 1


@pytest.mark.parametrize("family,n,q", SMALL)
def test_green_invariants_on_families(family, n, q):
    S = built(family, n, q)
    check_green_invariants(S, green(S))


@pytest.mark.parametrize("family,n,q", SMALL)
def test_schutzenberger_groups(family, n, q):
    S = built(family, n, q)
    gs = green(S)
    for d in gs.d_classes:
        hs = sorted({gs.h_class[x] for x in d.elements})
        groups = [schutzenberger(S, gs, h) for h in hs]
        heights = {brute_sub_height(g.right_translations) for g in groups}
        assert {g.order for g in groups} == {d.h_size}
        assert len(heights) == 1
        for g in groups:
            check_star(S, g)


def check_star(S, g):
    H = g.h_class
    h0 = g.base_point
    R = g.right_translations
    assert R.order == len(H)
    # simply transitive
    assert sorted(p[0] for p in R.elements) == list(range(len(H)))
    # (H, star) is a group with identity h0
    for a in H:
        assert g.star(h0, a) == a and g.star(a, h0) == a
        assert any(g.star(a, b) == h0 for b in H)
        for b in H:
            for c in H:
                assert g.star(g.star(a, b), c) == g.star(a, g.star(b, c))
    # left and right translations commute
    for lt in g.left_translations.generators:
        for rt in R.generators:
            assert tuple(rt[i] for i in lt) == tuple(lt[i] for i in rt)
    # us = u * h for one u in H iff for all u in H
    pos = set(H)
    for s in range(S.size):
        h = S.mul(h0, s)
        if h in pos:
            assert all(S.mul(u, s) == g.star(u, h) for u in H)


@pytest.mark.parametrize("family,n,q", SMALL)
def test_separability_agrees_with_faithfulness(family, n, q):
    S = built(family, n, q)
    gs = green(S)
    for d in gs.d_classes:
        if not d.is_regular:
            continue
        left = {is_h_separable(S, gs, c, "left") for c in d.l_ids}
        right = {is_h_separable(S, gs, c, "right") for c in d.r_ids}
        assert left == {row_faithful(d.idempotent_matrix)}
        assert right == {column_faithful(d.idempotent_matrix)}


def test_chain_semilattice_structure():
    S = chain_semilattice(4)
    gs = green(S)
    assert len(gs.d_classes) == 4
    assert all(d.num_L == d.num_R == d.h_size == 1 for d in gs.d_classes)


def test_generators_generate():
    S = built("pn", 2)
    gens = S.generators
    seen = set(gens)
    frontier = list(gens)
    for x in frontier:
        for g in gens:
            y = S.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    assert len(seen) == S.size
