"""Height formulas driven by D-class data, plus per-family closed forms.

Three tiers compute the same numbers:

* ``formula``: :func:`general_heights` over the D-class data of a family;
* ``acts``: the decomposition over L-, R- or J-classes, enumerating only
  the congruence lattices of the principal factors (:func:`acts_heights`);
* ``brute``: the whole congruence lattice of each act (:func:`brute_heights`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from conglat.combinatorics import (
    IntegerPartition,
    bell,
    catalan,
    double_factorial,
    gaussian_binomial,
    integer_partitions,
    involutions,
    shape_count,
    stirling2,
)
from conglat.congruence import act, congruence_lattice, g_classes, lattice_height, principal_factor
from conglat.errors import GroupTooLarge, MissingQ, OutOfValidityRange
from conglat.groups import (
    DEFAULT_MAX_GROUP_ORDER,
    PermutationGroup,
    brute_nsub_height,
    brute_sub_height,
    ht_nsub_symmetric,
    ht_sub_symmetric,
    ht_sub_young,
    young_order,
)
from conglat.semigroup import FiniteSemigroup, green

SIDES = ("left", "right", "two")
TABLE3_FAMILIES = ("tn", "ptn", "in", "on", "pn", "bn", "tln", "instar")
ASSUMPTIONS = [
    "every non-minimal L-class and R-class is H-separable",
    "the minimal L-class act has H as its unique maximal congruence, or is a single H-class",
    "the minimal R-class act has H as its unique maximal congruence, or is a single H-class",
    "the minimal ideal has congruences [Δ, H] ∪ {L, R, ∇}",
]


class Expr:
    """An integer plus a formal sum of named unknown heights."""

    def __init__(self, const=0, terms=None):
        self.const = const
        self.terms = dict(terms or {})

    @classmethod
    def symbol(cls, name):
        return cls(0, {name: 1})

    @staticmethod
    def lift(x):
        return x if isinstance(x, Expr) else Expr(x)

    def __add__(self, other):
        other = Expr.lift(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return Expr(self.const + other.const, {k: v for k, v in terms.items() if v})

    __radd__ = __add__

    def __sub__(self, other):
        return self + Expr.lift(other) * -1

    def __mul__(self, k):
        return Expr(self.const * k, {name: v * k for name, v in self.terms.items() if v * k})

    __rmul__ = __mul__

    def __eq__(self, other):
        other = Expr.lift(other)
        return self.const == other.const and self.terms == other.terms

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.terms.items()))))

    def __str__(self):
        parts = [name if v == 1 else f"{v}*{name}" for name, v in sorted(self.terms.items())]
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)

    __repr__ = __str__


def simplify(x):
    """Collapse an :class:`Expr` without unknowns to a plain integer."""
    if isinstance(x, Expr) and not x.terms:
        return x.const
    return x


def _add(a, b):
    if isinstance(a, Expr) or isinstance(b, Expr):
        return simplify(Expr.lift(a) + b)
    return a + b


def _mul(k, x):
    return simplify(x * k) if isinstance(x, Expr) else k * x


def _sum(values):
    total = 0
    for v in values:
        total = _add(total, v)
    return total


@dataclass
class DClassData:
    label: object
    m_L: int
    m_R: int
    ht_sub: object
    ht_nsub: object
    is_minimal: bool = False
    group: str = "1"


@dataclass
class HeightReport:
    family: str | None
    n: int | None
    q: int | None
    mode: str
    lcong: object = None
    rcong: object = None
    cong: object = None
    terms: list = field(default_factory=list)
    corrections: dict | None = None
    assumptions: list = field(default_factory=list)
    counts: dict | None = None

    def value(self, side):
        return {"left": self.lcong, "right": self.rcong, "two": self.cong}[side]

    def to_dict(self, sides=SIDES):
        def enc(x):
            return x if isinstance(x, int) else str(x)

        out = {"family": self.family, "n": self.n}
        if self.q is not None:
            out["q"] = self.q
        out["mode"] = self.mode
        for side, key in zip(SIDES, ("lcong", "rcong", "cong")):
            if side in sides:
                out[key] = enc(self.value(side))
        out["terms"] = [{"r": str(t.label) if isinstance(t.label, IntegerPartition) else t.label,
                         "m_L": t.m_L, "m_R": t.m_R,
                         "ht_sub": enc(t.ht_sub), "ht_nsub": enc(t.ht_nsub)} for t in self.terms]
        out["corrections"] = self.corrections
        out["assumptions"] = list(self.assumptions)
        if self.counts is not None:
            out["counts"] = dict(self.counts)
        return out

    def to_json(self, sides=SIDES):
        return json.dumps(self.to_dict(sides), ensure_ascii=False)


def general_heights(data, family=None, n=None, q=None) -> HeightReport:
    """Heights of the left, right and two-sided congruence lattices from D-class data.

    The correction terms come from the minimal D-class: its L-class act
    contributes an extra ``m_L`` links exactly when an L-class there holds
    more than one H-class, that is when ``m_R > 1``; dually on the right.
    """
    if not data:
        raise ValueError("need at least one D-class")
    minimal = [d for d in data if d.is_minimal]
    if len(minimal) != 1:
        raise ValueError("exactly one D-class must be marked minimal")
    mn = minimal[0]
    left_corr = mn.m_L if mn.m_R > 1 else 0
    right_corr = mn.m_R if mn.m_L > 1 else 0
    two_corr = int(mn.m_R > 1) + int(mn.m_L > 1)
    lcong = _add(_sum(_mul(d.m_L, d.ht_sub) for d in data), left_corr)
    rcong = _add(_sum(_mul(d.m_R, d.ht_sub) for d in data), right_corr)
    cong = _add(_sum(d.ht_nsub for d in data), two_corr)
    return HeightReport(family, n, q, "formula", lcong, rcong, cong, list(data),
                        {"left": left_corr, "right": right_corr, "two": two_corr},
                        list(ASSUMPTIONS))


# --- group heights ---------------------------------------------------------

_GROUP_CACHE = {}


def _brute_or_symbol(key, builder, order, limit):
    if limit is not None and order > limit:
        name = key
        return Expr.symbol(f"Ht(Sub({name}))"), Expr.symbol(f"Ht(NSub({name}))")
    if key not in _GROUP_CACHE:
        g = builder()
        _GROUP_CACHE[key] = (brute_sub_height(g, None), brute_nsub_height(g, None))
    return _GROUP_CACHE[key]


def gl_heights(r, q, limit=DEFAULT_MAX_GROUP_ORDER):
    from conglat.families import general_linear_group, gl_order

    if r == 0:
        return 1, 1
    return _brute_or_symbol(f"GL({r},{q})", lambda: general_linear_group(r, q), gl_order(r, q), limit)


def young_heights(mu: IntegerPartition, limit=DEFAULT_MAX_GROUP_ORDER):
    """Subgroup height by the additive law; normal-subgroup height by brute force."""
    sub = ht_sub_young(mu)
    order = young_order(mu)
    if limit is not None and order > limit:
        return sub, Expr.symbol(f"Ht(NSub(S_{mu}))")
    key = f"S_{mu}"
    if key not in _GROUP_CACHE:
        _GROUP_CACHE[key] = (sub, brute_nsub_height(PermutationGroup.young(mu), None))
    return _GROUP_CACHE[key]


# --- D-class data ------------------------------------------------------------

def _sym(r, m_L, m_R, minimal):
    return DClassData(r, m_L, m_R, ht_sub_symmetric(r), ht_nsub_symmetric(r), minimal, f"S_{r}")


def _trivial(r, m_L, m_R, minimal):
    return DClassData(r, m_L, m_R, 1, 1, minimal, "1")


def family_dclass_data(family, n, q=None, max_group_order=DEFAULT_MAX_GROUP_ORDER):
    """The D-class data of a family monoid, one entry per D-class, smallest first."""
    if family == "mnq":
        if q is None:
            raise MissingQ("family mnq needs q")
        out = []
        for r in range(n + 1):
            m = gaussian_binomial(n, r, q)
            sub, nsub = gl_heights(r, q, max_group_order)
            out.append(DClassData(r, m, m, sub, nsub, r == 0, f"GL({r},{q})"))
        return out
    if n == 0:
        label = IntegerPartition(()) if family == "fnstar" else 0
        return [_trivial(label, 1, 1, True)]
    if family == "tn":
        return [_sym(r, comb(n, r), stirling2(n, r), r == 1) for r in range(1, n + 1)]
    if family == "ptn":
        return [_sym(r, comb(n, r), stirling2(n + 1, r + 1), r == 0) for r in range(n + 1)]
    if family == "in":
        return [_sym(r, comb(n, r), comb(n, r), r == 0) for r in range(n + 1)]
    if family == "on":
        return [_trivial(r, comb(n, r), comb(n - 1, r - 1), r == 1) for r in range(1, n + 1)]
    if family == "pn":
        out = []
        for r in range(n + 1):
            m = sum(stirling2(n, k) * comb(k, r) for k in range(r, n + 1))
            out.append(_sym(r, m, m, r == 0))
        return out
    if family == "pbn":
        out = []
        for r in range(n + 1):
            m = comb(n, r) * involutions(n - r)
            out.append(_sym(r, m, m, r == 0))
        return out
    if family == "bn":
        out = []
        for r in range(n % 2, n + 1, 2):
            m = comb(n, r) * double_factorial(n - r - 1)
            out.append(_sym(r, m, m, r == n % 2))
        return out
    if family == "tln":
        out = []
        for r in range(n % 2, n + 1, 2):
            m = (r + 1) * comb(n + 1, (n - r) // 2) // (n + 1)
            out.append(_trivial(r, m, m, r == n % 2))
        return out
    if family == "instar":
        return [_sym(r, stirling2(n, r), stirling2(n, r), r == 1) for r in range(1, n + 1)]
    if family == "fnstar":
        out = []
        for mu in reversed(integer_partitions(n)):
            m = shape_count(mu)
            sub, nsub = young_heights(mu, max_group_order)
            out.append(DClassData(mu, m, m, sub, nsub, mu.parts == (n,), f"S_{mu}"))
        return out
    raise ValueError(f"unknown family {family!r}")


def formula_heights(family, n, q=None, max_group_order=DEFAULT_MAX_GROUP_ORDER) -> HeightReport:
    return general_heights(family_dclass_data(family, n, q, max_group_order), family, n, q)


def fstar_heights(n, side="all", max_group_order=DEFAULT_MAX_GROUP_ORDER) -> HeightReport:
    """Heights for the uniform block bijection monoid.

    Raises :class:`GroupTooLarge` when the two-sided height is requested but
    some Young subgroup is too large for a brute-force normal-subgroup count.
    """
    report = formula_heights("fnstar", n, None, max_group_order)
    if side in ("two", "all") and isinstance(report.cong, Expr):
        raise GroupTooLarge(f"normal-subgroup heights of the Young subgroups for n={n} "
                            f"exceed the group-order limit {max_group_order}")
    return report


# --- closed forms ------------------------------------------------------------

# smallest n at which each closed form is claimed; below it callers get both values
_VALID_FROM = {("tn", "left"): 1, ("tn", "right"): 2}
DEFAULT_VALID_FROM = 4


def valid_from(family, side):
    return _VALID_FROM.get((family, side), DEFAULT_VALID_FROM)


def _h(r):
    return ht_sub_symmetric(r)


def _literal(family, n, q, side, max_group_order):
    if family == "tn":
        if side == "left":
            return sum(comb(n, r) * _h(r) for r in range(1, n + 1))
        if side == "right":
            return 1 + sum(stirling2(n, r) * _h(r) for r in range(1, n + 1))
        return 3 * n - 1
    if family == "ptn":
        if side == "left":
            return sum(comb(n, r) * _h(r) for r in range(n + 1))
        if side == "right":
            return sum(stirling2(n + 1, r + 1) * _h(r) for r in range(n + 1))
        return 3 * n - 1
    if family == "in":
        if side == "two":
            return 3 * n - 1
        return sum(comb(n, r) * _h(r) for r in range(n + 1))
    if family == "on":
        return {"left": 2 ** n - 1, "right": 2 ** (n - 1) + 1, "two": n + 1}[side]
    if family == "mnq":
        if q is None:
            raise MissingQ("family mnq needs q")
        if side == "two":
            return _sum(gl_heights(r, q, max_group_order)[1] for r in range(n + 1))
        return _sum(_mul(gaussian_binomial(n, r, q), gl_heights(r, q, max_group_order)[0])
                    for r in range(n + 1))
    if family == "pn":
        if side == "two":
            return 3 * n + 1
        return bell(n) + sum(stirling2(n, k) * comb(k, r) * _h(r)
                             for r in range(n + 1) for k in range(r, n + 1))
    if family == "pbn":
        if side == "two":
            return 3 * n + 1
        return involutions(n) + sum(comb(n, r) * involutions(n - r) * _h(r) for r in range(n + 1))
    if family == "bn":
        if side == "two":
            return 3 * (n // 2) + 3
        return double_factorial(2 * ((n - 1) // 2) + 1) + sum(
            comb(n, 2 * k) * double_factorial(2 * k - 1) * _h(n - 2 * k) for k in range(n // 2 + 1))
    if family == "tln":
        if side == "two":
            return n // 2 + 3
        return catalan(-(-n // 2)) + comb(n, n // 2)
    if family == "instar":
        if side == "two":
            return 3 * n - 2
        return sum(stirling2(n, r) * _h(r) for r in range(1, n + 1))
    if family == "fnstar":
        parts = integer_partitions(n)
        if side == "two":
            return _sum(young_heights(mu, max_group_order)[1] for mu in parts)
        return sum(shape_count(mu) * ht_sub_young(mu) for mu in parts)
    raise ValueError(f"unknown family {family!r}")


def closed_form(family, n, q=None, side="left", max_group_order=DEFAULT_MAX_GROUP_ORDER):
    """Evaluate the closed formula for one family and side.

    Below the formula's validity range this raises
    :class:`OutOfValidityRange` carrying both the formula's value and the
    general-engine value, so callers can see whether they happen to agree.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    value = simplify(_literal(family, n, q, side, max_group_order))
    if n < valid_from(family, side):
        general = formula_heights(family, n, q, max_group_order).value(side)
        raise OutOfValidityRange(
            f"closed form for {family} ({side}) is stated for n >= {valid_from(family, side)}",
            general, value)
    return value


# --- decomposition and brute-force tiers ---------------------------------------

def acts_heights(S: FiniteSemigroup, sides=SIDES, limit=None, family=None, n=None, q=None):
    """Heights via the principal factors of the L-, R- or J-classes."""
    report = HeightReport(family, n, q, "acts", counts={})
    for side in sides:
        A = act(S, side, use_generators=True)
        gc = g_classes(A)
        total = 0
        for G in gc.classes:
            total += lattice_height(congruence_lattice(principal_factor(A, G), limit))
        value = total - len(gc.classes)
        report.counts[side] = len(gc.classes)
        setattr(report, {"left": "lcong", "right": "rcong", "two": "cong"}[side], value)
    return report


def brute_lattices(S: FiniteSemigroup, sides=SIDES, limit=None):
    return {side: congruence_lattice(act(S, side, use_generators=True), limit) for side in sides}


def brute_heights(S: FiniteSemigroup, sides=SIDES, limit=None, family=None, n=None, q=None):
    """Heights (and sizes, under ``counts``) of the full congruence lattices."""
    report = HeightReport(family, n, q, "brute", counts={})
    for side, L in brute_lattices(S, sides, limit).items():
        report.counts[side] = len(L)
        setattr(report, {"left": "lcong", "right": "rcong", "two": "cong"}[side], lattice_height(L))
    return report


def observed_dclass_data(S: FiniteSemigroup, max_group_order=DEFAULT_MAX_GROUP_ORDER):
    """D-class data read off a built semigroup, with group heights by brute force."""
    gs = green(S)
    out = []
    for d in gs.d_classes:
        g = d.schutz.right_translations
        if g.order > max_group_order:
            raise GroupTooLarge(f"Schützenberger group of order {g.order}")
        out.append(DClassData(d.rank if d.rank is not None else d.id, d.num_L, d.num_R,
                              brute_sub_height(g, None), brute_nsub_height(g, None),
                              d.is_minimal, f"order {g.order}"))
    return out


def table3_rows(families=TABLE3_FAMILIES, ns=range(11)):
    """``(family, n, side, height)`` for the formula tier over a grid."""
    rows = []
    for family in families:
        for n in ns:
            report = formula_heights(family, n)
            for side in SIDES:
                rows.append((family, n, side, report.value(side)))
    return rows


__all__ = [
    "DClassData", "HeightReport", "Expr", "general_heights", "family_dclass_data",
    "formula_heights", "closed_form", "fstar_heights", "acts_heights", "brute_heights",
    "brute_lattices", "observed_dclass_data", "table3_rows", "SIDES", "TABLE3_FAMILIES",
    "valid_from", "gl_heights", "young_heights",
]
