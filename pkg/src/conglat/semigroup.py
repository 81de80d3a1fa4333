"""Finite semigroups, Green's relations and Schützenberger groups.

Elements are the indices ``0..size-1``. A semigroup carries either a full
Cayley table or a product callback; Green's relations are computed from the
left and right Cayley graphs with respect to a generating set, so the full
table is only materialised when something asks for it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from graphlib import TopologicalSorter

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from conglat.errors import IndexOutOfRange, NotAssociative, TooLarge
from conglat.groups import PermutationGroup

FULL_ASSOCIATIVITY_LIMIT = 500
TABLE_LIMIT = 4000


class FiniteSemigroup:
    def __init__(self, size, mul=None, table=None, labels=None, identity=None,
                 generators=None, generator_order=None, name=None):
        if (mul is None) == (table is None):
            raise ValueError("give exactly one of mul or table")
        self.size = size
        self.name = name
        self.labels = labels
        self._table = None
        if table is not None:
            self._table = np.asarray(table, dtype=np.int64).reshape(size, size)
            rows = self._table.tolist()
            self._mul = lambda a, b: rows[a][b]
        else:
            self._mul = mul
        if identity is None and table is not None:
            identity = _find_identity(self._table)
        self.identity = identity
        self._generator_order = generator_order
        if generators is not None:
            self.__dict__["generators"] = tuple(generators)

    def __repr__(self):
        name = self.name or "FiniteSemigroup"
        return f"<{name} of size {self.size}>"

    def mul(self, a, b):
        return self._mul(a, b)

    @property
    def table(self):
        """The full Cayley table as an ``int64`` array (row = left factor)."""
        if self._table is None:
            if self.size > TABLE_LIMIT:
                raise TooLarge(f"refusing to build a {self.size}x{self.size} Cayley table")
            mul = self._mul
            n = self.size
            self._table = np.array([[mul(a, b) for b in range(n)] for a in range(n)],
                                   dtype=np.int64).reshape(n, n)
        return self._table

    @cached_property
    def generators(self):
        order = self._generator_order
        if order is None:
            if self._table is not None:
                products = set(np.unique(self._table).tolist())
                irreducible = [x for x in range(self.size) if x not in products]
                order = irreducible + [x for x in range(self.size) if x in products]
            else:
                order = range(self.size)
        return tuple(greedy_generators(self.size, self._mul, order))

    @cached_property
    def left_graph(self):
        """``left_graph[x][k]`` is ``g_k * x`` for the k-th generator ``g_k``."""
        mul = self._mul
        gens = self.generators
        return [[mul(g, x) for g in gens] for x in range(self.size)]

    @cached_property
    def right_graph(self):
        mul = self._mul
        gens = self.generators
        return [[mul(x, g) for g in gens] for x in range(self.size)]

    @cached_property
    def idempotents(self):
        mul = self._mul
        return frozenset(x for x in range(self.size) if mul(x, x) == x)

    def check_associative(self, limit=FULL_ASSOCIATIVITY_LIMIT, samples=200000, seed=0):
        """Raise :class:`NotAssociative` with a witness if the product fails associativity.

        Exhaustive up to ``limit`` elements, sampled beyond.
        """
        n = self.size
        if n <= limit:
            t = self.table
            for a in range(n):
                lhs = t[t[a]]          # (ab)c indexed [b, c]
                rhs = t[a][t]          # a(bc) indexed [b, c]
                bad = np.argwhere(lhs != rhs)
                if len(bad):
                    b, c = bad[0]
                    raise NotAssociative(a, int(b), int(c))
            return
        rng = random.Random(seed)
        mul = self._mul
        for _ in range(samples):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if mul(mul(a, b), c) != mul(a, mul(b, c)):
                raise NotAssociative(a, b, c)


def _find_identity(table):
    n = len(table)
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(table[e], ar) and np.array_equal(table[:, e], ar):
            return e
    return None


def greedy_generators(size, mul, order):
    """Pick generators in the given candidate order, skipping ones already generated."""
    gens = []
    members = set()
    members_list = []
    for cand in order:
        if cand in members:
            continue
        gens.append(cand)
        queue = []
        if cand not in members:
            members.add(cand)
            members_list.append(cand)
            queue.append(cand)
        # old elements times the new generator
        for x in list(members_list):
            y = mul(x, cand)
            if y not in members:
                members.add(y)
                members_list.append(y)
                queue.append(y)
        for x in queue:
            for g in gens:
                y = mul(x, g)
                if y not in members:
                    members.add(y)
                    members_list.append(y)
                    queue.append(y)
        if len(members) == size:
            break
    return gens


def from_cayley_table(table, name=None) -> FiniteSemigroup:
    """Validate a Cayley table (row = left factor) and wrap it as a semigroup."""
    rows = [list(r) for r in table]
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise IndexOutOfRange(f"row {i} has {len(row)} entries, expected {n}")
        for j, v in enumerate(row):
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise IndexOutOfRange(f"entry ({i}, {j}) = {v!r} is outside 0..{n - 1}")
    S = FiniteSemigroup(n, table=rows if n else np.zeros((0, 0), dtype=np.int64), name=name)
    S.check_associative()
    return S


def parse_cayley_text(text: str):
    """Parse the Cayley-table text format: ``n`` then ``n`` rows of ``n`` indices."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise IndexOutOfRange("first line must hold the element count")
    n = int(lines[0][0])
    body = lines[1:]
    if len(body) != n:
        raise IndexOutOfRange(f"expected {n} rows, found {len(body)}")
    table = []
    for i, row in enumerate(body):
        if len(row) != n:
            raise IndexOutOfRange(f"row {i} has {len(row)} entries, expected {n}")
        table.append([int(v) for v in row])
    return table


def format_cayley_text(S: FiniteSemigroup) -> str:
    t = S.table.tolist()
    lines = [str(S.size)] + [" ".join(map(str, row)) for row in t]
    return "\n".join(lines) + "\n"


# --- Green's structure -------------------------------------------------------

def _scc(size, adjacency):
    """Strongly connected components of ``x -> y for y in adjacency[x]``.

    Returns canonical class ids (numbered by smallest member) and the
    classes as sorted element lists.
    """
    if size == 0:
        return [], []
    rows, cols = [], []
    for x, targets in enumerate(adjacency):
        for y in targets:
            rows.append(x)
            cols.append(y)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    _, labels = connected_components(graph, directed=True, connection="strong")
    return _canonical(labels.tolist())


def _canonical(labels):
    relabel = {}
    ids = []
    for lab in labels:
        if lab not in relabel:
            relabel[lab] = len(relabel)
        ids.append(relabel[lab])
    classes = [[] for _ in relabel]
    for x, c in enumerate(ids):
        classes[c].append(x)
    return ids, classes


def _down_sets(ids, nclasses, adjacency):
    """Bitmask of classes reachable from each class (reflexive)."""
    succ = [set() for _ in range(nclasses)]
    for x, targets in enumerate(adjacency):
        cx = ids[x]
        for y in targets:
            cy = ids[y]
            if cy != cx:
                succ[cx].add(cy)
    below = [1 << c for c in range(nclasses)]
    # static_order yields successors before the classes that reach them
    for c in TopologicalSorter({c: succ[c] for c in range(nclasses)}).static_order():
        for d in succ[c]:
            below[c] |= below[d]
    return below


@dataclass
class SchutzGroup:
    """Right Schützenberger group of an H-class, acting on positions in ``h_class``."""

    h_class: list
    base_point: int
    right_translations: PermutationGroup
    left_translations: PermutationGroup
    # alpha[i] is the unique right translation sending the base point to h_class[i]
    alpha: list = field(repr=False)

    @property
    def order(self):
        return len(self.h_class)

    def star(self, h1, h2):
        """``h1 * h2`` in the group structure on H with identity ``base_point``."""
        pos = {h: i for i, h in enumerate(self.h_class)}
        return self.h_class[self.alpha[pos[h2]][pos[h1]]]


@dataclass
class DClassSummary:
    id: int
    elements: list
    l_ids: list
    r_ids: list
    num_L: int
    num_R: int
    h_size: int
    idempotent_matrix: tuple
    is_regular: bool
    is_minimal: bool
    schutz: SchutzGroup = field(repr=False)
    rank: object = None


@dataclass
class GreenStructure:
    l_class: list
    r_class: list
    d_class: list
    h_class: list
    j_class: list
    l_classes: list
    r_classes: list
    d_classes_elements: list
    h_classes: list
    l_below: list
    r_below: list
    d_below: list
    d_classes: list = field(default_factory=list)

    def l_leq(self, a, b):
        """``L_a <= L_b`` for class ids ``a``, ``b``."""
        return bool(self.l_below[b] >> a & 1)

    def r_leq(self, a, b):
        return bool(self.r_below[b] >> a & 1)

    def d_leq(self, a, b):
        return bool(self.d_below[b] >> a & 1)

    @property
    def minimal_d_class(self):
        return next(d for d in self.d_classes if d.is_minimal)


def green(S: FiniteSemigroup, rank=None) -> GreenStructure:
    """Compute Green's L, R, H, D (= J) classes, their orders and D-class data.

    ``rank`` optionally maps an element index to a label recorded on each
    D-class summary; family monoids supply their own.
    """
    if rank is None:
        rank = getattr(S, "element_rank", None)
    n = S.size
    left = S.left_graph
    right = S.right_graph
    l_ids, l_classes = _scc(n, left)
    r_ids, r_classes = _scc(n, right)
    both = [lt + rt for lt, rt in zip(left, right)]
    j_ids, _ = _scc(n, both)

    # D = L o R: union the L- and R-classes
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cls in l_classes + r_classes:
        root = find(cls[0])
        for x in cls[1:]:
            rx = find(x)
            if rx != root:
                parent[rx] = root
    d_ids, d_elems = _canonical([find(x) for x in range(n)])
    h_ids, h_classes = _canonical(list(zip(l_ids, r_ids)))

    l_below = _down_sets(l_ids, len(l_classes), left)
    r_below = _down_sets(r_ids, len(r_classes), right)
    d_below = _down_sets(d_ids, len(d_elems), both)

    gs = GreenStructure(l_ids, r_ids, d_ids, h_ids, j_ids, l_classes, r_classes,
                        d_elems, h_classes, l_below, r_below, d_below)
    idem = S.idempotents
    for d, elems in enumerate(d_elems):
        ls = sorted({l_ids[x] for x in elems})
        rs = sorted({r_ids[x] for x in elems})
        lpos = {c: j for j, c in enumerate(ls)}
        rpos = {c: i for i, c in enumerate(rs)}
        matrix = [[0] * len(ls) for _ in rs]
        for x in elems:
            if x in idem:
                matrix[rpos[r_ids[x]]][lpos[l_ids[x]]] = 1
        is_min = d_below[d] == 1 << d
        schutz = schutzenberger(S, gs, h_ids[elems[0]])
        gs.d_classes.append(DClassSummary(
            id=d, elements=elems, l_ids=ls, r_ids=rs, num_L=len(ls), num_R=len(rs),
            h_size=len(h_classes[h_ids[elems[0]]]),
            idempotent_matrix=tuple(tuple(r) for r in matrix),
            is_regular=any(x in idem for x in elems), is_minimal=is_min,
            schutz=schutz, rank=rank(elems[0]) if rank else None))
    return gs


def schutzenberger(S: FiniteSemigroup, gs: GreenStructure, h: int) -> SchutzGroup:
    """Right Schützenberger group of H-class ``h`` with base point its smallest element."""
    H = gs.h_classes[h]
    pos = {x: i for i, x in enumerate(H)}
    h0 = H[0]
    mul = S.mul
    k = len(H)
    right = [None] * k
    left = [None] * k
    right[0] = left[0] = tuple(range(k))
    missing_r, missing_l = k - 1, k - 1
    for t in range(S.size):
        if not missing_r and not missing_l:
            break
        i = pos.get(mul(h0, t))
        if i is not None and right[i] is None:
            right[i] = tuple(pos[mul(u, t)] for u in H)
            missing_r -= 1
        i = pos.get(mul(t, h0))
        if i is not None and left[i] is None:
            left[i] = tuple(pos[mul(t, u)] for u in H)
            missing_l -= 1
    return SchutzGroup(H, h0, PermutationGroup(k, right), PermutationGroup(k, left), right)


def row_faithful(matrix) -> bool:
    rows = [tuple(r) for r in matrix]
    return len(set(rows)) == len(rows)


def column_faithful(matrix) -> bool:
    return row_faithful(list(zip(*matrix))) if matrix else True


def _separated_pairs(members, graph):
    """Pairs of ``members`` split by some multiplier: one image stays inside, one leaves."""
    inside = set(members)
    ngens = len(graph[members[0]]) if members else 0
    pairs = [(x, y) for i, x in enumerate(members) for y in members[i + 1:]]
    sep = set()
    changed = True
    while changed:
        changed = False
        for x, y in pairs:
            if (x, y) in sep:
                continue
            gx, gy = graph[x], graph[y]
            for k in range(ngens):
                a, b = gx[k], gy[k]
                ia, ib = a in inside, b in inside
                if ia != ib or (ia and a != b and (min(a, b), max(a, b)) in sep):
                    sep.add((x, y))
                    changed = True
                    break
    return sep


def is_h_separable(S: FiniteSemigroup, gs: GreenStructure, cls: int, side="left") -> bool:
    """H-separability of an L-class (``side="left"``) or an R-class (``side="right"``).

    For an L-class: every pair of non-H-related elements ``x, y`` admits some
    ``s`` with exactly one of ``sx, sy`` in the class. Multipliers are words
    over the generators, explored as a fixpoint over pairs.
    """
    if side == "left":
        members, graph, other = gs.l_classes[cls], S.left_graph, gs.r_class
    else:
        members, graph, other = gs.r_classes[cls], S.right_graph, gs.l_class
    sep = _separated_pairs(members, graph)
    for i, x in enumerate(members):
        for y in members[i + 1:]:
            if other[x] != other[y] and (x, y) not in sep:
                return False
    return True


def check_stability(S: FiniteSemigroup, gs: GreenStructure | None = None) -> bool:
    """Check ``x J sx => x L sx`` and ``x J xs => x R xs`` for all ``x, s``."""
    gs = gs or green(S)
    t = S.table.tolist()
    J, L, R = gs.d_class, gs.l_class, gs.r_class
    for x in range(S.size):
        for s in range(S.size):
            sx, xs = t[s][x], t[x][s]
            if J[sx] == J[x] and L[sx] != L[x]:
                return False
            if J[xs] == J[x] and R[xs] != R[x]:
                return False
    return True
