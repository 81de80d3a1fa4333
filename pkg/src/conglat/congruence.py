"""Unary algebras, their congruences, and congruence-lattice enumeration.

Left, right and two-sided congruences of a semigroup are the congruences of
its left act, right act and biact, each of which is a unary algebra.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from conglat.errors import LatticeTooLarge, NotASubalgebra
from conglat.semigroup import FiniteSemigroup, _down_sets, _scc

DEFAULT_MAX_LATTICE = 100000
GENERATOR_MODE_THRESHOLD = 200


def max_lattice_default():
    env = os.environ.get("CONGLAT_MAX_LATTICE")
    return int(env) if env else DEFAULT_MAX_LATTICE


@dataclass
class UnaryAlgebra:
    size: int
    ops: list  # each a list of images, ops[k][x] = f_k(x)
    op_labels: list | None = None

    def __post_init__(self):
        self.ops = [list(f) for f in self.ops]
        for f in self.ops:
            if len(f) != self.size or any(not 0 <= y < self.size for y in f):
                raise ValueError("operation is not a total map on the carrier")

    def is_closed(self, subset) -> bool:
        inside = set(subset)
        return all(f[x] in inside for f in self.ops for x in inside)

    def restrict(self, subset):
        """The subalgebra on ``subset``, re-indexed in sorted order."""
        members = sorted(subset)
        if not self.is_closed(members):
            raise NotASubalgebra(f"{members} is not closed under the operations")
        pos = {x: i for i, x in enumerate(members)}
        return UnaryAlgebra(len(members), [[pos[f[x]] for x in members] for f in self.ops])


@dataclass(frozen=True)
class EqPartition:
    """An equivalence as class ids numbered by first occurrence."""

    labels: tuple

    @classmethod
    def from_labels(cls, labels):
        return cls(canonical(labels))

    @classmethod
    def from_blocks(cls, size, blocks):
        labels = list(range(size))
        for block in blocks:
            block = list(block)
            for x in block:
                labels[x] = block[0]
        return cls.from_labels(labels)

    @property
    def num_classes(self):
        return max(self.labels) + 1 if self.labels else 0

    @property
    def blocks(self):
        out = [[] for _ in range(self.num_classes)]
        for x, c in enumerate(self.labels):
            out[c].append(x)
        return out

    def related(self, a, b):
        return self.labels[a] == self.labels[b]

    def refines(self, other) -> bool:
        seen = {}
        for a, b in zip(self.labels, other.labels):
            if seen.setdefault(a, b) != b:
                return False
        return True


def canonical(labels):
    relabel = {}
    return tuple(relabel.setdefault(x, len(relabel)) for x in labels)


def delta(size):
    return EqPartition(tuple(range(size)))


def nabla(size):
    return EqPartition((0,) * size)


def meet(a: EqPartition, b: EqPartition) -> EqPartition:
    return EqPartition(canonical(list(zip(a.labels, b.labels))))


# --- acts ------------------------------------------------------------------

def _act_elements(S: FiniteSemigroup, use_generators):
    if use_generators is None:
        use_generators = S.size > GENERATOR_MODE_THRESHOLD
    return list(S.generators) if use_generators else list(range(S.size))


def left_act(S: FiniteSemigroup, use_generators=None) -> UnaryAlgebra:
    """``S`` acting on itself by left multiplication ``x -> s x``."""
    elems = _act_elements(S, use_generators)
    mul = S.mul
    return UnaryAlgebra(S.size, [[mul(s, x) for x in range(S.size)] for s in elems],
                        [("left", s) for s in elems])


def right_act(S: FiniteSemigroup, use_generators=None) -> UnaryAlgebra:
    elems = _act_elements(S, use_generators)
    mul = S.mul
    return UnaryAlgebra(S.size, [[mul(x, s) for x in range(S.size)] for s in elems],
                        [("right", s) for s in elems])


def biact(S: FiniteSemigroup, use_generators=None) -> UnaryAlgebra:
    left = left_act(S, use_generators)
    right = right_act(S, use_generators)
    return UnaryAlgebra(S.size, left.ops + right.ops, left.op_labels + right.op_labels)


def act(S: FiniteSemigroup, side, use_generators=None) -> UnaryAlgebra:
    return {"left": left_act, "right": right_act, "two": biact}[side](S, use_generators)


# --- G-classes and principal factors ---------------------------------------

@dataclass
class GClasses:
    ids: list
    classes: list
    below: list  # below[c] is a bitmask of the classes reachable from c

    def leq(self, a, b):
        return bool(self.below[b] >> a & 1)

    def is_minimal(self, c):
        return self.below[c] == 1 << c

    def is_maximal(self, c):
        return not any(self.below[d] >> c & 1 for d in range(len(self.classes)) if d != c)


def g_classes(A: UnaryAlgebra) -> GClasses:
    """Strongly connected components of ``a -> f(a)``, ordered by reachability."""
    adjacency = [[f[x] for f in A.ops] for x in range(A.size)]
    ids, classes = _scc(A.size, adjacency)
    return GClasses(ids, classes, _down_sets(ids, len(classes), adjacency))


def principal_factor(A: UnaryAlgebra, G) -> UnaryAlgebra:
    """``G ∪ {0}`` where every move out of ``G`` lands on the absorbing ``0``.

    Members of ``G`` keep their sorted order; ``0`` is the last index.
    """
    members = sorted(G)
    pos = {x: i for i, x in enumerate(members)}
    zero = len(members)
    ops = [[pos.get(f[x], zero) for x in members] + [zero] for f in A.ops]
    return UnaryAlgebra(zero + 1, ops)


# --- closure ---------------------------------------------------------------

def _closure(ops, labels, pairs):
    """Close the equivalence ``labels`` plus ``pairs`` under the operations."""
    parent = list(labels)
    # labels are canonical: the first member of each class is its representative
    first = {}
    for x, c in enumerate(labels):
        parent[x] = first.setdefault(c, x)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    stack = list(pairs)
    while stack:
        a, b = stack.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if rb < ra:
            ra, rb = rb, ra
        parent[rb] = ra
        for f in ops:
            fa, fb = f[a], f[b]
            if fa != fb:
                stack.append((fa, fb))
    return canonical([find(x) for x in range(len(parent))])


def cong_closure(A: UnaryAlgebra, pairs, base: EqPartition | None = None) -> EqPartition:
    """Smallest congruence containing ``pairs`` (and ``base``, which must be a congruence)."""
    labels = base.labels if base is not None else tuple(range(A.size))
    return EqPartition(_closure(A.ops, labels, pairs))


def is_congruence(A: UnaryAlgebra, sigma: EqPartition) -> bool:
    lab = sigma.labels
    for f in A.ops:
        image = {}
        for x, c in enumerate(lab):
            if image.setdefault(c, lab[f[x]]) != lab[f[x]]:
                return False
    return True


# --- lattices --------------------------------------------------------------

@dataclass
class CongLattice:
    """All congruences of a unary algebra, with edges containing every cover."""

    algebra: UnaryAlgebra
    congruences: list
    edges: list = field(repr=False)  # (i, j): congruence j strictly contains i

    def __len__(self):
        return len(self.congruences)

    @cached_property
    def index(self):
        return {c.labels: i for i, c in enumerate(self.congruences)}

    @property
    def bottom(self):
        return 0

    @cached_property
    def top(self):
        return self.index[nabla(self.algebra.size).labels]

    def leq(self, i, j) -> bool:
        return self.congruences[i].refines(self.congruences[j])

    def meet(self, i, j):
        return self.index[meet(self.congruences[i], self.congruences[j]).labels]

    def join(self, i, j):
        a, b = self.congruences[i], self.congruences[j]
        pairs = [(blk[0], x) for blk in b.blocks for x in blk[1:]]
        return self.index[cong_closure(self.algebra, pairs, a).labels]

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.congruences)))
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def hasse(self) -> nx.DiGraph:
        """Cover relation, obtained by transitive reduction of the edge DAG."""
        return nx.transitive_reduction(self.graph)

    def height(self) -> int:
        return lattice_height(self)

    def interval(self, lo, hi):
        return [k for k in range(len(self)) if self.leq(lo, k) and self.leq(k, hi)]

    def interval_height(self, lo, hi) -> int:
        return _longest_chain(self, set(self.interval(lo, hi)))

    def to_dot(self) -> str:
        """Hasse diagram in DOT, nodes labelled by class counts, bottom = Δ."""
        lines = ["digraph congruences {", "  rankdir=BT;"]
        for i, c in enumerate(self.congruences):
            lines.append(f'  n{i} [label="{c.num_classes}"];')
        for i, j in sorted(self.hasse.edges()):
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def congruence_lattice(A: UnaryAlgebra, limit=None) -> CongLattice:
    """Enumerate ``Cong(A)`` by joining congruences with principal ones.

    Starting from Δ, every congruence σ is joined with the principal
    congruence of each pair of σ-classes (represented by their first
    members). Each strict cover σ < τ arises this way, so the recorded
    edges contain the whole cover relation.
    """
    limit = max_lattice_default() if limit is None else limit
    ops = A.ops
    bottom = tuple(range(A.size))
    congs = [bottom]
    index = {bottom: 0}
    edges = []
    for i, lab in enumerate(congs):
        reps = sorted(set(canonical_reps(lab)))
        found = set()
        for a_pos, a in enumerate(reps):
            for b in reps[a_pos + 1:]:
                new = _closure(ops, lab, [(a, b)])
                j = index.get(new)
                if j is None:
                    j = len(congs)
                    if j >= limit:
                        raise LatticeTooLarge(f"more than {limit} congruences")
                    index[new] = j
                    congs.append(new)
                if j not in found:
                    found.add(j)
                    edges.append((i, j))
    return CongLattice(A, [EqPartition(c) for c in congs], edges)


def canonical_reps(labels):
    """First member of each class."""
    seen = set()
    out = []
    for x, c in enumerate(labels):
        if c not in seen:
            seen.add(c)
            out.append(x)
    return out


def _longest_chain(L: CongLattice, members=None):
    """Longest chain, counted in elements, over edges among ``members``."""
    if members is None:
        members = set(range(len(L)))
    if not members:
        return 0
    # coarser congruences have fewer classes, which gives a topological order
    order = sorted(members, key=lambda k: -L.congruences[k].num_classes)
    succ = {}
    for i, j in L.edges:
        if i in members and j in members:
            succ.setdefault(i, []).append(j)
    best = {k: 1 for k in members}
    for k in order:
        for j in succ.get(k, ()):
            if best[k] + 1 > best[j]:
                best[j] = best[k] + 1
    return max(best.values())


def lattice_height(L) -> int:
    """Number of elements in a longest chain.

    Accepts a :class:`CongLattice` or a ``networkx`` DAG whose edges go up.
    """
    if isinstance(L, CongLattice):
        return _longest_chain(L)
    if len(L) == 0:
        return 0
    return nx.dag_longest_path_length(L) + 1


def is_modular_element(L: CongLattice, x) -> bool:
    n = len(L)
    for a in range(n):
        for b in range(n):
            if a != b and L.leq(a, b):
                if L.join(a, L.meet(x, b)) != L.meet(L.join(a, x), b):
                    return False
    return True


# --- Rees congruences and decomposition ------------------------------------

def rees_congruence(A: UnaryAlgebra, B) -> EqPartition:
    """One block ``B`` and singletons elsewhere; ``B`` must be a subuniverse."""
    B = sorted(B)
    if not A.is_closed(B):
        raise NotASubalgebra(f"{B} is not closed under the operations")
    return EqPartition.from_blocks(A.size, [B] if B else [])


def is_delta_cep(A: UnaryAlgebra, B, limit=None) -> bool:
    """Every congruence of the subalgebra ``B``, padded with Δ, is a congruence of ``A``."""
    members = sorted(B)
    sub = A.restrict(members)
    for sigma in congruence_lattice(sub, limit).congruences:
        labels = list(range(A.size))
        for blk in sigma.blocks:
            for x in blk:
                labels[members[x]] = members[blk[0]]
        if not is_congruence(A, EqPartition.from_labels(labels)):
            return False
    return True


def theorem_g_check(A: UnaryAlgebra, limit=None):
    """``(Ht(Cong A), sum of Ht(Cong of each principal factor) - k)``."""
    lhs = lattice_height(congruence_lattice(A, limit))
    gc = g_classes(A)
    rhs = sum(lattice_height(congruence_lattice(principal_factor(A, G), limit))
              for G in gc.classes) - len(gc.classes)
    return lhs, rhs


def unique_max_congruence_is(A: UnaryAlgebra, ref: EqPartition, limit=None) -> bool:
    """``ref`` is a proper congruence containing every congruence other than ∇."""
    L = congruence_lattice(A, limit)
    if ref.labels not in L.index or ref.num_classes == 1:
        return False
    return all(c.num_classes == 1 or c.refines(ref) for c in L.congruences)


def random_unary_algebra(rng: random.Random, max_size=8, max_ops=3) -> UnaryAlgebra:
    size = rng.randint(1, max_size)
    nops = rng.randint(1, max_ops)
    return UnaryAlgebra(size, [[rng.randrange(size) for _ in range(size)] for _ in range(nops)])
