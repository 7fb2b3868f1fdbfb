"""Daseinised operators as maps into lower/upper-real sections over the poset.

A point of the spectral bundle is a pair (context index, atom index). Values of
daseinised operators at such points are read off per atom, so every check here
reduces to finite set comparisons over the poset.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .contexts import Context, ContextPoset, SpectrumPoint
from .daseinise import inner_values, outer_values
from .errors import CapExceeded, PreconditionViolated, QLogicError
from .linalg import (
    BorelSet,
    check_hermitian,
    eig_tolerance,
    proj_leq,
    spectral_resolution,
    spectral_resolution_left,
    spectrum,
)
from .logic import Variant, elementary_prop, heyting_meet

SECTION_CAP = 10_000


@dataclass(frozen=True)
class IntervalValue:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi + 1e-12:
            raise QLogicError(f"interval [{self.lo}, {self.hi}] is reversed")


@dataclass(frozen=True)
class MonotoneSection:
    """Real-valued function on the contexts below (or above) a base context.

    ``kind`` is ``lower`` or ``upper``; ``source`` says which daseinisation
    produced the values.
    """

    base_context: Context
    kind: str
    source: str
    values: Dict[str, float] = field(default_factory=dict)
    order: Tuple[Tuple[str, str], ...] = ()  # pairs (smaller, larger) among the keys

    def is_order_reversing(self, tol: float = 1e-9) -> bool:
        return all(self.values[a] >= self.values[b] - tol for a, b in self.order)

    def is_order_preserving(self, tol: float = 1e-9) -> bool:
        return all(self.values[a] <= self.values[b] + tol for a, b in self.order)


class _Values:
    """Per-context atom values of outer and inner daseinisation of one operator."""

    def __init__(self, a, poset: ContextPoset):
        self.a = check_hermitian(a)
        self.poset = poset
        self.outer = [outer_values(self.a, c) for c in poset]
        self.inner = [inner_values(self.a, c) for c in poset]


def _order_pairs(poset: ContextPoset, idx) -> Tuple[Tuple[str, str], ...]:
    idx = list(idx)
    return tuple((poset[d].label, poset[c].label) for c in idx for d in idx
                 if d != c and poset.leq(d, c))


def das_map(a, point: SpectrumPoint, poset: ContextPoset, variant) -> Tuple[MonotoneSection, MonotoneSection]:
    """Lower and upper sections of the daseinised operator at a point.

    Contravariant: over the contexts below, the lower section reads the outer
    daseinisation at the restricted point and the upper one the inner
    daseinisation. Covariant: over the contexts above, the lower section is the
    least inner value over all points lying over the given one and the upper
    section the greatest outer value.
    """
    variant = Variant.parse(variant)
    vals = _Values(a, poset)
    i = poset.index(point.context)
    k = point.atom_index
    if variant is Variant.CONTRAVARIANT:
        near = poset.down(i)
        lo = {poset[j].label: float(vals.outer[j][poset.restrict(i, k, j)]) for j in near}
        up = {poset[j].label: float(vals.inner[j][poset.restrict(i, k, j)]) for j in near}
        order = _order_pairs(poset, near)
        return (MonotoneSection(poset[i], "lower", "outer", lo, order),
                MonotoneSection(poset[i], "upper", "inner", up, order))
    near = poset.up(i)
    lo, up = {}, {}
    for e in near:
        fib = poset.fibre(e, i, k)
        lo[poset[e].label] = float(min(vals.inner[e][m] for m in fib))
        up[poset[e].label] = float(max(vals.outer[e][m] for m in fib))
    order = _order_pairs(poset, near)
    return (MonotoneSection(poset[i], "lower", "inner", lo, order),
            MonotoneSection(poset[i], "upper", "outer", up, order))


def interval_values(lower: MonotoneSection, upper: MonotoneSection) -> Dict[str, IntervalValue]:
    """Pair the two sections stagewise as [inner value, outer value]."""
    inner, outer = (lower, upper) if lower.source == "inner" else (upper, lower)
    return {k: IntervalValue(inner.values[k], outer.values[k]) for k in inner.values}


# ---------------------------------------------------------------------------
# Continuity


def _grid(a) -> List[float]:
    spec = spectrum(a)
    pts = set(spec)
    pts.update((x + y) / 2 for x, y in zip(spec, spec[1:]))
    pts.add(spec[0] - 1.0)
    pts.add(spec[-1] + 1.0)
    return sorted(pts)


@dataclass
class Report:
    checked: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"checked": self.checked, "failures": self.failures}


def check_continuity(a, poset: ContextPoset, variant) -> Report:
    """Preimages of subbasic opens under both daseinised maps are open.

    Contravariant opens are closed under restriction to smaller contexts;
    covariant opens are closed under passing to any point lying over a given
    one in a larger context.
    """
    variant = Variant.parse(variant)
    vals = _Values(a, poset)
    rep = Report()
    tests = {
        Variant.CONTRAVARIANT: (("outer", vals.outer, lambda v, x: v > x), ("inner", vals.inner, lambda v, x: v < x)),
        Variant.COVARIANT: (("outer", vals.outer, lambda v, x: v < x), ("inner", vals.inner, lambda v, x: v > x)),
    }[variant]
    for x in _grid(a):
        for i in range(len(poset)):
            near = poset.down(i) if variant is Variant.CONTRAVARIANT else poset.up(i)
            for name, table, pred in tests:
                rep.checked += 1
                pre = {(j, m) for j in near for m in range(poset[j].size) if pred(table[j][m], x)}
                for (j, m) in pre:
                    if variant is Variant.CONTRAVARIANT:
                        moves = [(d, poset.restrict(j, m, d)) for d in poset.down(j)]
                    else:
                        moves = [(e, mm) for e in poset.up(j) for mm in poset.fibre(e, j, m)]
                    missing = [mv for mv in moves if mv not in pre]
                    if missing:
                        rep.failures.append({"x": x, "context": poset[i].label, "map": name,
                                             "point": [poset[j].label, m],
                                             "missing": [[poset[d].label, t] for d, t in missing]})
    return rep


# ---------------------------------------------------------------------------
# Sandwich


def sandwich_check(a, s: float, r: float, eps: float, poset: ContextPoset, variant) -> Report:
    """Inclusions L subset M subset R per context.

    L and R are preimages of the interval (s, r), resp. (s - eps, r + eps), under
    the daseinised map; M is built from elementary propositions.
    """
    if not s < r:
        raise PreconditionViolated(f"need s < r, got s={s}, r={r}")
    if not eps > 0:
        raise PreconditionViolated(f"need eps > 0, got {eps}")
    variant = Variant.parse(variant)
    vals = _Values(a, poset)
    if variant is Variant.CONTRAVARIANT:
        mid = heyting_meet(elementary_prop(a, BorelSet.below(r), poset, variant),
                           elementary_prop(a, BorelSet.above(s), poset, variant))
    else:
        mid = elementary_prop(a, BorelSet.open(s, r), poset, variant)

    tol = eig_tolerance(a)

    def band(j, lo, hi):
        # strict comparisons with the same endpoint snapping as spectral projections
        below, above = BorelSet.below(hi), BorelSet.above(lo)
        if variant is Variant.CONTRAVARIANT:
            return {m for m in range(poset[j].size)
                    if below.contains(vals.inner[j][m], tol) and above.contains(vals.outer[j][m], tol)}
        return {m for m in range(poset[j].size)
                if above.contains(vals.inner[j][m], tol) and below.contains(vals.outer[j][m], tol)}

    rep = Report()
    for j in range(len(poset)):
        rep.checked += 1
        left = band(j, s, r)
        right = band(j, s - eps, r + eps)
        m = set(mid.family[j])
        if not left <= m or not m <= right:
            rep.failures.append({"context": poset[j].label, "left": sorted(left), "middle": sorted(m),
                                 "right": sorted(right), "s": s, "r": r, "eps": eps})
    return rep


def interval_vs_bounds(a, s: float, r: float, poset: ContextPoset, variant) -> Dict[str, str]:
    """Compare [a in (s, r)] with [a < r] ∧ [a > s] stage by stage.

    Values are ``equal``, ``strict`` (the interval proposition is strictly
    smaller) or ``other``.
    """
    variant = Variant.parse(variant)
    whole = elementary_prop(a, BorelSet.open(s, r), poset, variant)
    both = heyting_meet(elementary_prop(a, BorelSet.below(r), poset, variant),
                        elementary_prop(a, BorelSet.above(s), poset, variant))
    out = {}
    for j, c in enumerate(poset):
        x, y = whole.family[j], both.family[j]
        out[c.label] = "equal" if x == y else "strict" if x < y else "other"
    return out


# ---------------------------------------------------------------------------
# Boolean-algebra characterizations of the daseinised values at a point


def check_ujelly(a, c: Context, point: SpectrumPoint) -> Tuple[bool, bool]:
    """Compare daseinised values at a point with sup/inf over the projections of C.

    Inner side: sup of r in spec(a) such that some projection p of C with
    <point, p> = 1 lies under 1 - chi_(-inf, r)(a). Outer side: inf of r such that
    some such p lies under chi_(-inf, r)(a); this set is open below, so its inf
    is the least spectral value x with p under chi_(-inf, x](a).
    """
    if point.context is not c and point.context != c:
        raise QLogicError("point does not live at the given context")
    a = check_hermitian(a)
    spec = spectrum(a)
    eye = np.eye(c.dim)
    others = [m for m in range(c.size) if m != point.atom_index]
    projections = []
    for bits in itertools.product((0, 1), repeat=len(others)):
        chosen = [point.atom_index] + [m for m, b in zip(others, bits) if b]
        projections.append(c.projection(chosen))

    inner_hits = [x for x in spec
                  if any(proj_leq(p, eye - spectral_resolution_left(a, x)) for p in projections)]
    sup = max(inner_hits) if inner_hits else -math.inf
    if sup == -math.inf:
        sup = spec[0]
    outer_hits = [x for x in spec if any(proj_leq(p, spectral_resolution(a, x)) for p in projections)]
    inf = min(outer_hits) if outer_hits else math.inf
    if inf == math.inf:
        inf = spec[-1]
    k = point.atom_index
    return bool(sup == inner_values(a, c)[k]), bool(inf == outer_values(a, c)[k])


# ---------------------------------------------------------------------------
# Sections of the spectral bundle over a down-set


@dataclass
class SectionCensus:
    candidates: int
    continuous: List[Tuple[int, ...]]
    compatible: List[Tuple[int, ...]]
    stages: Tuple[int, ...]

    @property
    def agree(self) -> bool:
        return self.continuous == self.compatible


def _candidate_count(poset: ContextPoset, stages) -> int:
    return math.prod(poset[j].size for j in stages)


def _is_continuous(poset: ContextPoset, stages, sec) -> bool:
    # Opens of the bundle are generated by V(D0, l0) = {(D, l0|D) : D <= D0};
    # a section is continuous iff each preimage is a down-set of the base.
    pos = {j: t for t, j in enumerate(stages)}
    for d0 in stages:
        for l0 in range(poset[d0].size):
            pre = {d for d in poset.down(d0) if sec[pos[d]] == poset.restrict(d0, l0, d)}
            for d in pre:
                if any(e not in pre for e in poset.down(d)):
                    return False
    return True


def _is_compatible(poset: ContextPoset, stages, sec) -> bool:
    pos = {j: t for t, j in enumerate(stages)}
    return all(sec[pos[d]] == poset.restrict(c, sec[pos[c]], d)
               for c in stages for d in poset.down(c))


def section_census(poset: ContextPoset, c, cap: int = SECTION_CAP) -> SectionCensus:
    i = poset.index(c)
    stages = poset.down(i)
    total = _candidate_count(poset, stages)
    if total > cap:
        raise CapExceeded(f"{total} candidate sections over the contexts below {poset[i].label} (cap {cap})")
    cont, comp = [], []
    for sec in itertools.product(*(range(poset[j].size) for j in stages)):
        if _is_continuous(poset, stages, sec):
            cont.append(sec)
        if _is_compatible(poset, stages, sec):
            comp.append(sec)
    return SectionCensus(total, cont, comp, stages)


def enumerate_sections(poset: ContextPoset, c, cap: int = SECTION_CAP) -> List[Dict[str, int]]:
    """All continuous sections over the contexts below C, as label -> atom index."""
    census = section_census(poset, c, cap)
    if not census.agree:
        raise QLogicError("a continuous section is not a compatible family")
    return [{poset[j].label: m for j, m in zip(census.stages, sec)} for sec in census.continuous]
