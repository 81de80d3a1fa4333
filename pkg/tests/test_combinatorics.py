from collections import Counter
from itertools import permutations, product
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from conglat.combinatorics import (
    IntegerPartition,
    bell,
    binary_ones,
    catalan,
    double_factorial,
    gaussian_binomial,
    integer_partitions,
    involutions,
    prime_power,
    shape_count,
    stirling2,
)
from conglat.errors import QNotPrimePower
from conglat.families import _matchings, set_partitions


def stirling_explicit(n, k):
    # inclusion-exclusion count of surjections divided by k!
    return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1)) // factorial(k)


@given(st.integers(0, 12), st.integers(0, 12))
def test_stirling_matches_inclusion_exclusion(n, k):
    assert stirling2(n, k) == stirling_explicit(n, k)


def test_stirling_small_values():
    assert stirling2(0, 0) == 1
    assert stirling2(4, 2) == 7
    assert stirling2(5, 3) == 25
    assert stirling2(3, 0) == 0


@pytest.mark.parametrize("n", range(8))
def test_bell_counts_set_partitions(n):
    assert bell(n) == sum(1 for _ in set_partitions(range(n)))


def test_catalan_values():
    assert [catalan(n) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(5) == 15
    assert double_factorial(6) == 48
    with pytest.raises(ValueError):
        double_factorial(-3)


@pytest.mark.parametrize("k", range(8))
def test_involutions_count_permutations(k):
    brute = sum(1 for p in permutations(range(k)) if all(p[p[i]] == i for i in range(k)))
    assert involutions(k) == brute


def count_subspaces(n, r, p):
    # distinct row spaces of r x n matrices of rank r over F_p (p prime)
    def span(rows):
        out = set()
        for coeffs in product(range(p), repeat=len(rows)):
            out.add(tuple(sum(c * row[i] for c, row in zip(coeffs, rows)) % p for i in range(n)))
        return frozenset(out)

    vectors = list(product(range(p), repeat=n))
    spaces = set()
    for rows in product(vectors, repeat=r):
        s = span(rows)
        if len(s) == p ** r:
            spaces.add(s)
    return len(spaces)


@pytest.mark.parametrize("n,r,p", [(2, 1, 2), (3, 1, 2), (3, 2, 2), (2, 1, 3), (3, 2, 3), (4, 2, 2)])
def test_gaussian_binomial_counts_subspaces(n, r, p):
    assert gaussian_binomial(n, r, p) == count_subspaces(n, r, p)


def test_gaussian_binomial_edges():
    assert gaussian_binomial(3, 0, 4) == 1
    assert gaussian_binomial(3, 4, 4) == 0
    with pytest.raises(QNotPrimePower):
        gaussian_binomial(3, 1, 6)


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_binary_ones():
    assert [binary_ones(r) for r in range(8)] == [0, 1, 1, 2, 1, 2, 2, 3]


def test_integer_partitions_order_and_count():
    assert [str(mu) for mu in integer_partitions(4)] == ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]
    assert [len(integer_partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]


def test_partition_multiplicities():
    mu = IntegerPartition((3, 1, 1))
    assert mu.n == 5
    assert mu.multiplicities == (2, 0, 1, 0, 0)
    with pytest.raises(ValueError):
        IntegerPartition((1, 2))


@pytest.mark.parametrize("n", range(1, 7))
def test_shape_count_matches_enumeration(n):
    shapes = Counter(tuple(sorted((len(b) for b in p), reverse=True)) for p in set_partitions(range(n)))
    for mu in integer_partitions(n):
        assert shape_count(mu) == shapes[mu.parts]


@pytest.mark.parametrize("n", range(11))
def test_shape_counts_sum_to_bell(n):
    assert sum(shape_count(mu) for mu in integer_partitions(n)) == bell(n)


@pytest.mark.parametrize("n", range(13))
def test_stirling_row_sums_to_bell(n):
    assert sum(stirling2(n, r) for r in range(n + 1)) == bell(n)


@given(st.integers(0, 8), st.integers(0, 8), st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
def test_gaussian_binomial_symmetry(n, r, q):
    if r <= n:
        assert gaussian_binomial(n, r, q) == gaussian_binomial(n, n - r, q)


@pytest.mark.parametrize("k", range(1, 7))
def test_double_factorial_counts_perfect_matchings(k):
    assert double_factorial(2 * k - 1) == sum(1 for _ in _matchings(list(range(2 * k))))


def test_large_values_are_exact():
    # Python ints never wrap; check against an independent recurrence
    row = [1]
    for n in range(1, 101):
        new = [0] * (n + 1)
        for r in range(1, n + 1):
            new[r] = (row[r - 1] if r - 1 < len(row) else 0) + r * (row[r] if r < len(row) else 0)
        row = new
    assert stirling2(100, 50) == row[50]
    assert stirling2(100, 50) > 2 ** 64
