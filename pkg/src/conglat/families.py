"""Transformation, matrix and diagram monoids built by full enumeration.

Products compose left to right: for transformations ``x(ab) = (xa)b``, and
for diagrams ``ab`` stacks ``a`` above ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb, factorial

from conglat.combinatorics import (
    IntegerPartition,
    bell,
    catalan,
    double_factorial,
    integer_partitions,
    involutions,
    prime_power,
    shape_count,
    stirling2,
)
from conglat.errors import MissingQ, QNotPrimePower, TooLarge
from conglat.groups import young_order
from conglat.semigroup import FiniteSemigroup

FAMILIES = ("tn", "ptn", "in", "on", "mnq", "pn", "bn", "tln", "pbn", "instar", "fnstar")
DEFAULT_MAX_ELEMENTS = 20000
MAX_FIELD_ORDER = 16


# --- transformations ---------------------------------------------------------

@dataclass(frozen=True)
class Transformation:
    """A (partial) map on ``0..n-1``; ``-1`` marks an undefined image."""

    images: tuple

    def __mul__(self, other):
        b = other.images
        return Transformation(tuple(b[x] if x >= 0 else -1 for x in self.images))

    @property
    def rank(self):
        return len({x for x in self.images if x >= 0})

    @property
    def image(self):
        return frozenset(x for x in self.images if x >= 0)

    @property
    def kernel(self):
        blocks = {}
        for i, x in enumerate(self.images):
            if x >= 0:
                blocks.setdefault(x, []).append(i)
        return frozenset(tuple(b) for b in blocks.values())


def _transformations(family, n):
    if family == "tn":
        it = product(range(n), repeat=n)
    elif family == "ptn":
        it = product(range(-1, n), repeat=n)
    elif family == "on":
        it = (t for t in product(range(n), repeat=n) if all(t[i] <= t[i + 1] for i in range(n - 1)))
    elif family == "in":
        it = (t for t in product(range(-1, n), repeat=n)
              if len([x for x in t if x >= 0]) == len({x for x in t if x >= 0}))
    else:
        raise ValueError(family)
    return [Transformation(t) for t in it]


# --- finite fields and matrices ---------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteField:
    """``F_q`` on ``0..q-1``; for ``q = p^k`` elements are base-``p`` polynomial codes."""

    q: int
    add: tuple = field(repr=False)
    mul: tuple = field(repr=False)

    def neg(self, a):
        return self.add[a].index(0)

    def inv(self, a):
        return self.mul[a].index(1)


def _irreducible(p, k):
    """Some monic irreducible polynomial of degree ``k`` over ``F_p`` (low-to-high coefficients)."""
    def polymod(a, m):
        a = list(a)
        while len(a) >= len(m):
            c = a[-1]
            if c:
                shift = len(a) - len(m)
                for i, mc in enumerate(m):
                    a[shift + i] = (a[shift + i] - c * mc) % p
            a.pop()
        return a

    for tail in product(range(p), repeat=k):
        cand = list(tail) + [1]
        reducible = False
        for d in range(1, k // 2 + 1):
            for low in product(range(p), repeat=d):
                if not any(polymod(cand, list(low) + [1])):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return cand
    raise AssertionError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def finite_field(q) -> FiniteField:
    pk = prime_power(q)
    if pk is None:
        raise QNotPrimePower(f"q={q} is not a prime power")
    if q > MAX_FIELD_ORDER:
        raise QNotPrimePower(f"fields of order above {MAX_FIELD_ORDER} are not supported")
    p, k = pk
    if k == 1:
        add = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
        mul = tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
        return FiniteField(q, add, mul)
    modulus = _irreducible(p, k)

    def digits(a):
        return [(a // p ** i) % p for i in range(k)]

    def code(ds):
        return sum(d * p ** i for i, d in enumerate(ds))

    def pmul(a, b):
        da, db = digits(a), digits(b)
        out = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                out[i + j] = (out[i + j] + x * y) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = out[deg]
            if c:
                for i, mc in enumerate(modulus):
                    out[deg - k + i] = (out[deg - k + i] - c * mc) % p
        return code(out[:k])

    add = tuple(tuple(code([(x + y) % p for x, y in zip(digits(a), digits(b))]) for b in range(q))
                for a in range(q))
    mul = tuple(tuple(pmul(a, b) for b in range(q)) for a in range(q))
    return FiniteField(q, add, mul)


@dataclass(frozen=True)
class MatrixOverFq:
    n: int
    entries: tuple  # row-major
    field: FiniteField = field(compare=False, repr=False)

    def __mul__(self, other):
        n, F = self.n, self.field
        add, mul = F.add, F.mul
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            for j in range(n):
                s = 0
                for k in range(n):
                    s = add[s][mul[a[i * n + k]][b[k * n + j]]]
                out.append(s)
        return MatrixOverFq(n, tuple(out), F)

    @property
    def rank(self):
        return matrix_rank([list(self.entries[i * self.n:(i + 1) * self.n]) for i in range(self.n)],
                           self.field)


def matrix_rank(rows, F: FiniteField) -> int:
    """Rank by Gaussian elimination with exact field arithmetic."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul[inv][x] for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = F.neg(rows[i][col])
                rows[i] = [F.add[x][F.mul[c][y]] for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def general_linear_group(r, q):
    """``GL(r, q)`` as a permutation group on the nonzero row vectors of ``F_q^r``."""
    from conglat.groups import PermutationGroup

    F = finite_field(q)
    if r == 0:
        return PermutationGroup(0)
    vectors = [v for v in product(range(q), repeat=r) if any(v)]
    index = {v: i for i, v in enumerate(vectors)}

    def act(mat):
        out = []
        for v in vectors:
            w = []
            for j in range(r):
                s = 0
                for k in range(r):
                    s = F.add[s][F.mul[v[k]][mat[k][j]]]
                w.append(s)
            out.append(index[tuple(w)])
        return tuple(out)

    gens = []
    for a in range(2, q):
        m = [[int(i == j) for j in range(r)] for i in range(r)]
        m[0][0] = a
        gens.append(act(m))
    for i, j in permutations(range(r), 2):
        for a in range(1, q):
            m = [[int(x == y) for y in range(r)] for x in range(r)]
            m[i][j] = a
            gens.append(act(m))
    return PermutationGroup(len(vectors), gens)


def gl_order(r, q):
    out = 1
    for i in range(r):
        out *= q ** r - q ** i
    return out


# --- diagrams ---------------------------------------------------------------

@dataclass(frozen=True)
class PartitionDiagram:
    """A set partition of ``{0..n-1}`` (top row) and ``{n..2n-1}`` (bottom row)."""

    n: int
    blocks: tuple

    @classmethod
    def from_blocks(cls, n, blocks):
        return cls(n, tuple(sorted(tuple(sorted(b)) for b in blocks)))

    @classmethod
    def identity(cls, n):
        return cls.from_blocks(n, [(i, n + i) for i in range(n)])

    def __mul__(self, other):
        return compose_diagrams(self, other)

    def is_transversal(self, block):
        return block[0] < self.n <= block[-1]

    @property
    def rank(self):
        return sum(1 for b in self.blocks if self.is_transversal(b))

    @property
    def shape(self):
        """Upper block sizes of the transversals, as an integer partition."""
        sizes = sorted((sum(1 for p in b if p < self.n) for b in self.blocks if self.is_transversal(b)),
                       reverse=True)
        return IntegerPartition(tuple(sizes))

    def is_planar(self):
        n = self.n
        pos = {i: i for i in range(n)}
        pos.update({n + j: 2 * n - 1 - j for j in range(n)})
        arcs = sorted(tuple(sorted(pos[p] for p in b)) for b in self.blocks)
        stack = []
        partner = {}
        for a, b in arcs:
            partner[a] = b
        for x in range(2 * n):
            if x in partner:
                stack.append(partner[x])
            elif not stack or stack.pop() != x:
                return False
        return True


def compose_diagrams(a: PartitionDiagram, b: PartitionDiagram) -> PartitionDiagram:
    """Stack ``a`` over ``b`` and keep the components that meet the outer rows."""
    n = a.n
    parent = list(range(3 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in a.blocks:
        r = find(block[0])
        for p in block[1:]:
            parent[find(p)] = r
    for block in b.blocks:
        r = find(block[0] + n)
        for p in block[1:]:
            rp = find(p + n)
            if rp != r:
                parent[rp] = r
    comps = {}
    for p in range(n):
        comps.setdefault(find(p), []).append(p)
    for p in range(2 * n, 3 * n):
        comps.setdefault(find(p), []).append(p - n)
    return PartitionDiagram.from_blocks(n, comps.values())


def set_partitions(points):
    """All set partitions of a list, as lists of blocks."""
    points = list(points)
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _diagrams(family, n):
    pts = range(2 * n)
    if family == "bn" or family == "tln":
        out = [PartitionDiagram.from_blocks(n, m) for m in _matchings(list(pts))]
        if family == "tln":
            out = [d for d in out if d.is_planar()]
        return out
    if family == "pbn":
        return [PartitionDiagram.from_blocks(n, m) for m in _partial_matchings(list(pts))]
    out = []
    for blocks in set_partitions(pts):
        d = PartitionDiagram.from_blocks(n, blocks)
        if family == "instar" or family == "fnstar":
            if not all(d.is_transversal(b) for b in d.blocks):
                continue
            if family == "fnstar" and any(2 * sum(1 for p in b if p < n) != len(b) for b in d.blocks):
                continue
        out.append(d)
    return out


def _matchings(points):
    if not points:
        yield []
        return
    a = points[0]
    for i in range(1, len(points)):
        rest = points[1:i] + points[i + 1:]
        for m in _matchings(rest):
            yield [(a, points[i])] + m


def _partial_matchings(points):
    if not points:
        yield []
        return
    a, rest = points[0], points[1:]
    for m in _partial_matchings(rest):
        yield [(a,)] + m
    for i in range(len(rest)):
        others = rest[:i] + rest[i + 1:]
        for m in _partial_matchings(others):
            yield [(a, rest[i])] + m


# --- builders ---------------------------------------------------------------

def family_size(family, n, q=None) -> int:
    if family == "tn":
        return n ** n
    if family == "ptn":
        return (n + 1) ** n
    if family == "in":
        return sum(comb(n, r) ** 2 * factorial(r) for r in range(n + 1))
    if family == "on":
        return comb(2 * n - 1, n - 1) if n else 1
    if family == "mnq":
        return q ** (n * n)
    if family == "pn":
        return bell(2 * n)
    if family == "bn":
        return double_factorial(2 * n - 1)
    if family == "tln":
        return catalan(n)
    if family == "pbn":
        return involutions(2 * n)
    if family == "instar":
        return sum(stirling2(n, k) ** 2 * factorial(k) for k in range(n + 1))
    if family == "fnstar":
        if n == 0:
            return 1
        return sum(shape_count(mu) ** 2 * young_order(mu) for mu in integer_partitions(n))
    raise ValueError(f"unknown family {family!r}")


def _check_q(family, q):
    if family == "mnq":
        if q is None:
            raise MissingQ("family mnq needs q")
        if prime_power(q) is None:
            raise QNotPrimePower(f"q={q} is not a prime power")
    elif q is not None:
        raise ValueError(f"family {family} takes no q")


def elements(family, n, q=None):
    """All elements of the family, in a fixed enumeration order."""
    if family in ("tn", "ptn", "in", "on"):
        return _transformations(family, n)
    if family == "mnq":
        F = finite_field(q)
        return [MatrixOverFq(n, e, F) for e in product(range(q), repeat=n * n)]
    if family in ("pn", "bn", "tln", "pbn", "instar", "fnstar"):
        return _diagrams(family, n)
    raise ValueError(f"unknown family {family!r}")


def identity_element(family, n, q=None):
    if family in ("tn", "ptn", "in", "on"):
        return Transformation(tuple(range(n)))
    if family == "mnq":
        return MatrixOverFq(n, tuple(int(i == j) for i in range(n) for j in range(n)), finite_field(q))
    return PartitionDiagram.identity(n)


def rank(element):
    """Image size, matrix rank, or number of transversal blocks."""
    return element.rank


def build(family, n, q=None, max_elements=DEFAULT_MAX_ELEMENTS) -> FiniteSemigroup:
    """Enumerate a family monoid and wrap it as a :class:`FiniteSemigroup`.

    Each element's label is its :class:`Transformation`, :class:`MatrixOverFq`
    or :class:`PartitionDiagram`. D-class labels are ranks, or shapes for
    ``fnstar``.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    _check_q(family, q)
    size = family_size(family, n, q)
    if size > max_elements:
        raise TooLarge(f"{family}({n}) has {size} elements, above the limit {max_elements}")
    labels = elements(family, n, q)
    assert len(labels) == size, (family, n, len(labels), size)
    index = {x: i for i, x in enumerate(labels)}

    def mul(a, b):
        return index[labels[a] * labels[b]]

    ranks = [x.rank for x in labels]
    order = sorted(range(size), key=lambda i: (-ranks[i], i))
    name = f"{family}({n})" if q is None else f"{family}({n},{q})"
    S = FiniteSemigroup(size, mul=mul, labels=labels, identity=index[identity_element(family, n, q)],
                        generator_order=order, name=name)
    S.family, S.n, S.q = family, n, q
    if family == "fnstar":
        S.element_rank = lambda i: labels[i].shape
    else:
        S.element_rank = lambda i: ranks[i]
    return S


def chain_semilattice(k) -> FiniteSemigroup:
    """The chain ``0 < 1 < ... < k-1`` under ``min``."""
    return FiniteSemigroup(k, table=[[min(a, b) for b in range(k)] for a in range(k)],
                           name=f"chain({k})")


def left_zero(m) -> FiniteSemigroup:
    return FiniteSemigroup(m, table=[[a] * m for a in range(m)], name=f"leftzero({m})")


def right_zero(m) -> FiniteSemigroup:
    return FiniteSemigroup(m, table=[list(range(m)) for _ in range(m)], name=f"rightzero({m})")


__all__ = [
    "FAMILIES", "Transformation", "MatrixOverFq", "PartitionDiagram", "FiniteField",
    "build", "compose_diagrams", "rank", "family_size", "finite_field", "matrix_rank",
    "general_linear_group", "gl_order", "chain_semilattice", "left_zero", "right_zero",
    "set_partitions", "elements", "combinations",
]
