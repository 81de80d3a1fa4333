"""Subgroup and normal-subgroup chain heights of finite permutation groups.

Permutations are tuples ``p`` of images, acting on the right: the product
``p * q`` first applies ``p`` and then ``q``.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from math import factorial

import numpy as np

from conglat.combinatorics import IntegerPartition, binary_ones
from conglat.errors import GroupTooLarge

DEFAULT_MAX_GROUP_ORDER = 1000


def compose(p, q):
    return tuple(q[i] for i in p)


def identity_perm(degree):
    return tuple(range(degree))


class PermutationGroup:
    """A permutation group on ``0..degree-1`` given by generators."""

    def __init__(self, degree, generators=()):
        self.degree = degree
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError(f"{g} is not a permutation of {degree} points")
            gens.append(g)
        self.generators = tuple(gens)

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, order={self.order})"

    @cached_property
    def elements(self):
        e = identity_perm(self.degree)
        seen = {e}
        out = [e]
        for x in out:
            for g in self.generators:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return tuple(out)

    @property
    def order(self):
        return len(self.elements)

    @classmethod
    def symmetric(cls, r):
        if r <= 1:
            return cls(max(r, 0))
        cycle = tuple(range(1, r)) + (0,)
        swap = (1, 0) + tuple(range(2, r))
        return cls(r, [cycle, swap])

    @classmethod
    def alternating(cls, r):
        if r <= 2:
            return cls(max(r, 0))
        gens = []
        for i in range(r - 2):
            g = list(range(r))
            g[i], g[i + 1], g[i + 2] = g[i + 1], g[i + 2], g[i]
            gens.append(tuple(g))
        return cls(r, gens)

    @classmethod
    def cyclic(cls, m):
        if m <= 1:
            return cls(0)
        return cls(m, [tuple(range(1, m)) + (0,)])

    @classmethod
    def direct_product(cls, *groups):
        """The product acting on the disjoint union of the point sets."""
        degree = sum(g.degree for g in groups)
        gens = []
        offset = 0
        for g in groups:
            for p in g.generators:
                full = list(range(degree))
                for i, image in enumerate(p):
                    full[offset + i] = offset + image
                gens.append(tuple(full))
            offset += g.degree
        return cls(degree, gens)

    @classmethod
    def young(cls, mu: IntegerPartition):
        """``S_{mu_1} x ... x S_{mu_n}`` where ``mu_i`` counts parts equal to ``i``."""
        return cls.direct_product(*(cls.symmetric(m) for m in mu.multiplicities if m > 1))


class _GroupTable:
    """Elements of a group indexed ``0..order-1`` with a multiplication table."""

    def __init__(self, group: PermutationGroup, limit):
        elements = group.elements
        if limit is not None and len(elements) > limit:
            raise GroupTooLarge(f"group of order {len(elements)} exceeds limit {limit}")
        self.elements = elements
        self.index = {g: i for i, g in enumerate(elements)}
        n = len(elements)
        if group.degree == 0:
            self.table = [[0]]
        else:
            perms = np.array(elements, dtype=np.int64)
            # mixed-radix codes identify elements after vectorised composition
            radix = group.degree ** np.arange(group.degree, dtype=np.int64)
            lookup = {int(c): i for i, c in enumerate(perms @ radix)}
            columns = [[lookup[int(c)] for c in perms[j][perms] @ radix] for j in range(n)]
            self.table = np.array(columns, dtype=np.int64).T.tolist()
        self.gens = sorted({self.index[g] for g in group.generators} - {0})
        self.inverse = [row.index(0) for row in self.table]

    def closure(self, members: set, gens, extra):
        """Subgroup generated by subgroup ``members`` (with generators ``gens``) and ``extra``."""
        members = set(members)
        table = self.table
        all_gens = list(gens) + [extra]
        queue = []
        for x in list(members):
            y = table[x][extra]
            if y not in members:
                members.add(y)
                queue.append(y)
        for x in queue:
            row = table[x]
            for g in all_gens:
                y = row[g]
                if y not in members:
                    members.add(y)
                    queue.append(y)
        return members


def _mask(members):
    m = 0
    for x in members:
        m |= 1 << x
    return m


def _members(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _chain_height(masks, edges):
    """Longest chain (in elements) given strict covering-superset edges."""
    order = sorted(range(len(masks)), key=lambda i: masks[i].bit_count())
    height = [1] * len(masks)
    for i in order:
        for j in edges.get(i, ()):
            if height[i] + 1 > height[j]:
                height[j] = height[i] + 1
    return max(height)


def _chain_height_by_inclusion(masks):
    order = sorted(range(len(masks)), key=lambda i: masks[i].bit_count())
    height = {}
    for pos, i in enumerate(order):
        best = 1
        for j in order[:pos]:
            if masks[j] != masks[i] and masks[j] & masks[i] == masks[j]:
                best = max(best, height[j] + 1)
        height[i] = best
    return max(height.values())


def subgroups(group: PermutationGroup, limit=DEFAULT_MAX_GROUP_ORDER):
    """Enumerate all subgroups as bitmasks over the group's element list.

    Seeds with the cyclic subgroups and closes under join with cyclic
    subgroups until nothing new appears; every subgroup is a join of cyclic
    ones, so this is the closure under pairwise joins. Returns the masks and
    a dict of strict-containment edges ``H -> <H, g>``.
    """
    gt = _GroupTable(group, limit)
    n = len(gt.elements)
    cyclic_reps = {}
    for g in range(n):
        c = gt.closure({0}, [], g)
        cyclic_reps.setdefault(_mask(c), g)
    reps = list(cyclic_reps.values())
    masks = [1]
    gens = {1: []}
    index = {1: 0}
    edges = {}
    for mask in masks:
        i = index[mask]
        for g in reps:
            if mask >> g & 1:
                continue
            joined = _mask(gt.closure(set(_members(mask)), gens[mask], g))
            if joined not in index:
                index[joined] = len(masks)
                masks.append(joined)
                gens[joined] = gens[mask] + [g]
            edges.setdefault(i, set()).add(index[joined])
    return gt, masks, edges


def normal_subgroups(group: PermutationGroup, limit=DEFAULT_MAX_GROUP_ORDER):
    """All normal subgroups as bitmasks, built as joins of normal closures."""
    gt = _GroupTable(group, limit)
    n = len(gt.elements)
    table, inv = gt.table, gt.inverse
    conj_gens = gt.gens

    def normal_closure(members, gens, extra):
        members = gt.closure(members, gens, extra)
        gens = gens + [extra]
        changed = True
        while changed:
            changed = False
            for x in list(gens):
                for s in conj_gens:
                    y = table[table[inv[s]][x]][s]
                    if y not in members:
                        members = gt.closure(members, gens, y)
                        gens = gens + [y]
                        changed = True
        return members, gens

    base = {}
    for g in range(n):
        m, gens = normal_closure({0}, [], g)
        base.setdefault(_mask(m), gens)
    masks = [1]
    gens_of = {1: []}
    seen = {1}
    for mask in masks:
        for other, ogens in base.items():
            if other & mask == other:
                continue
            members = set(_members(mask))
            mgens = gens_of[mask]
            for y in ogens:
                members = gt.closure(members, mgens, y)
                mgens = mgens + [y]
            joined = _mask(members)
            if joined not in seen:
                seen.add(joined)
                masks.append(joined)
                gens_of[joined] = mgens
    return gt, masks


def is_normal(gt: _GroupTable, mask) -> bool:
    members = _members(mask)
    for s in gt.gens:
        for x in members:
            y = gt.table[gt.table[gt.inverse[s]][x]][s]
            if not mask >> y & 1:
                return False
    return True


def brute_sub_height(group: PermutationGroup, limit=DEFAULT_MAX_GROUP_ORDER) -> int:
    """Length, in subgroups, of the longest chain in the subgroup lattice."""
    _, masks, edges = subgroups(group, limit)
    return _chain_height(masks, edges)


def brute_nsub_height(group: PermutationGroup, limit=DEFAULT_MAX_GROUP_ORDER) -> int:
    """Length of the longest chain of normal subgroups."""
    _, masks = normal_subgroups(group, limit)
    return _chain_height_by_inclusion(masks)


def ht_sub_symmetric(r: int) -> int:
    if r <= 0:
        return 1
    return -(-3 * r // 2) - binary_ones(r)


_NSUB_SMALL = {0: 1, 1: 1, 2: 2, 3: 3, 4: 4}


def ht_nsub_symmetric(r: int) -> int:
    return _NSUB_SMALL.get(r, 3)


def ht_sub_young(mu: IntegerPartition) -> int:
    """Subgroup height of a Young subgroup via ``Ht(G x H) = Ht(G) + Ht(H) - 1``."""
    factors = mu.multiplicities
    return sum(ht_sub_symmetric(m) for m in factors) - (len(factors) - 1)


@lru_cache(maxsize=None)
def ht_nsub_young(mu: IntegerPartition, limit=DEFAULT_MAX_GROUP_ORDER) -> int:
    """Normal-subgroup height of a Young subgroup, by brute force only."""
    return brute_nsub_height(PermutationGroup.young(mu), limit)


def young_order(mu: IntegerPartition) -> int:
    out = 1
    for m in mu.multiplicities:
        out *= factorial(m)
    return out

