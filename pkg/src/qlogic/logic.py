"""Clopen subobjects of the spectral presheaf and opens of the covariant spectrum.

Both are stored the same way: one frozenset of atom indices per context of a
fixed poset. They differ in the closure condition and in how implication and
negation quantify over neighbouring contexts.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from .contexts import ContextPoset
from .daseinise import inner_atoms, outer_atoms
from .errors import PosetNotDownClosed, QLogicError, VariantMismatch
from .linalg import BorelSet, proj_leq, spectral_projection


class Variant(str, enum.Enum):
    CONTRAVARIANT = "contravariant"
    COVARIANT = "covariant"

    @classmethod
    def parse(cls, v) -> "Variant":
        if isinstance(v, cls):
            return v
        try:
            return cls(str(v).lower())
        except ValueError:
            raise QLogicError(f"unknown variant {v!r}") from None

    @property
    def sieve_direction(self) -> str:
        return "down" if self is Variant.CONTRAVARIANT else "up"


@dataclass(frozen=True, eq=False)
class Subobject:
    variant: Variant
    poset: ContextPoset
    family: tuple  # frozenset of atom indices per poset index

    def __post_init__(self):
        if len(self.family) != len(self.poset):
            raise QLogicError("family length does not match the poset")
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        object.__setattr__(self, "family", tuple(frozenset(s) for s in self.family))

    @classmethod
    def from_labels(cls, variant, poset: ContextPoset, family: Mapping[str, Iterable[int]]) -> "Subobject":
        fam: List[frozenset] = [frozenset()] * len(poset)
        for label, idx in family.items():
            fam[poset.index(label)] = frozenset(int(i) for i in idx)
        return cls(Variant.parse(variant), poset, tuple(fam))

    @classmethod
    def top(cls, variant, poset: ContextPoset) -> "Subobject":
        return cls(Variant.parse(variant), poset, tuple(frozenset(range(c.size)) for c in poset))

    @classmethod
    def bottom(cls, variant, poset: ContextPoset) -> "Subobject":
        return cls(Variant.parse(variant), poset, tuple(frozenset() for _ in poset))

    def at(self, c) -> frozenset:
        return self.family[self.poset.index(c)]

    def projection(self, c) -> np.ndarray:
        i = self.poset.index(c)
        return self.poset[i].projection(sorted(self.family[i]))

    def leq(self, other: "Subobject") -> bool:
        _compatible(self, other)
        return all(a <= b for a, b in zip(self.family, other.family))

    def to_labels(self) -> Dict[str, List[int]]:
        return {c.label: sorted(s) for c, s in zip(self.poset, self.family)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subobject):
            return NotImplemented
        return self.variant == other.variant and self.poset is other.poset and self.family == other.family

    def __hash__(self) -> int:
        return hash((self.variant, id(self.poset), self.family))

    def __and__(self, other):
        return heyting_meet(self, other)

    def __or__(self, other):
        return heyting_join(self, other)

    def __invert__(self):
        return heyting_neg(self)

    def __rshift__(self, other):
        return heyting_impl(self, other)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.to_labels().items())
        return f"Subobject({self.variant.value}; {body})"


def _compatible(s: Subobject, t: Subobject) -> None:
    if s.variant != t.variant:
        raise VariantMismatch(f"{s.variant.value} vs {t.variant.value}")
    if s.poset is not t.poset:
        raise QLogicError("subobjects live over different posets")


def _require_down_closed(p: ContextPoset) -> None:
    if not p.is_down_closed():
        raise PosetNotDownClosed("contravariant implication needs a down-closed poset")


def elementary_prop(a, delta: BorelSet, poset: ContextPoset, variant) -> Subobject:
    """[a in delta]: outer daseinisation of chi_delta(a) (contravariant) or inner (covariant)."""
    variant = Variant.parse(variant)
    chi = spectral_projection(a, delta)
    pick = outer_atoms if variant is Variant.CONTRAVARIANT else inner_atoms
    return Subobject(variant, poset, tuple(frozenset(pick(chi, c)) for c in poset))


def heyting_meet(s: Subobject, t: Subobject) -> Subobject:
    _compatible(s, t)
    return Subobject(s.variant, s.poset, tuple(a & b for a, b in zip(s.family, t.family)))


def heyting_join(s: Subobject, t: Subobject) -> Subobject:
    _compatible(s, t)
    return Subobject(s.variant, s.poset, tuple(a | b for a, b in zip(s.family, t.family)))


def heyting_impl(s: Subobject, t: Subobject) -> Subobject:
    _compatible(s, t)
    p = s.poset
    fam = []
    if s.variant is Variant.CONTRAVARIANT:
        _require_down_closed(p)
        for i, c in enumerate(p):
            keep = set(range(c.size))
            for j in p.down(i):
                r = p.restriction(i, j)
                bad = s.family[j] - t.family[j]
                keep -= {k for k in keep if r[k] in bad}
            fam.append(frozenset(keep))
    else:
        for i, c in enumerate(p):
            keep = set(range(c.size))
            for e in p.up(i):
                r = p.restriction(e, i)
                bad = s.family[e] - t.family[e]
                keep -= {r[k] for k in bad}
            fam.append(frozenset(keep))
    return Subobject(s.variant, p, tuple(fam))


def heyting_neg(s: Subobject) -> Subobject:
    return heyting_impl(s, Subobject.bottom(s.variant, s.poset))


def covariant_negation_projection(s: Subobject, c) -> np.ndarray:
    """Largest projection of C orthogonal to the projection of S at every E above C."""
    if s.variant is not Variant.COVARIANT:
        raise VariantMismatch("projection form of negation is for the covariant variant")
    p = s.poset
    i = p.index(c)
    ctx = p[i]
    eye = np.eye(ctx.dim)
    keep = []
    for k, q in enumerate(ctx.atoms):
        if all(proj_leq(q, eye - s.projection(e)) for e in p.up(i)):
            keep.append(k)
    return ctx.projection(keep)


def validate_subobject(s: Subobject) -> bool:
    p = s.poset
    for i, c in enumerate(p):
        if any(not 0 <= k < c.size for k in s.family[i]):
            return False
        for j in p.down(i):
            if j == i:
                continue
            r = p.restriction(i, j)
            if s.variant is Variant.CONTRAVARIANT:
                if not {r[k] for k in s.family[i]} <= s.family[j]:
                    return False
            else:
                if not {k for k in range(c.size) if r[k] in s.family[j]} <= s.family[i]:
                    return False
    return True


def close_family(variant, poset: ContextPoset, raw: Sequence[Iterable[int]]) -> Subobject:
    """Smallest valid subobject containing the given per-context atom sets."""
    variant = Variant.parse(variant)
    fam = [set(x) for x in raw]
    out = [set(x) for x in fam]
    for i in range(len(poset)):
        for j in poset.down(i):
            if i == j:
                continue
            r = poset.restriction(i, j)
            if variant is Variant.CONTRAVARIANT:
                out[j] |= {r[k] for k in fam[i]}
            else:
                out[i] |= {k for k in range(poset[i].size) if r[k] in fam[j]}
    return Subobject(variant, poset, tuple(frozenset(x) for x in out))


def random_subobject(variant, poset: ContextPoset, rng: np.random.Generator,
                     density: Optional[float] = None) -> Subobject:
    """A random valid subobject obtained by closing random atom sets."""
    if density is None:
        density = float(rng.uniform(0.05, 0.5))
    raw = []
    for c in poset:
        raw.append([k for k in range(c.size) if rng.random() < density])
    return close_family(variant, poset, raw)
