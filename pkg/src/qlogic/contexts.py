"""Contexts, their spectra, and finite posets of contexts.

A context is an abelian subalgebra of M_n(C), stored as its partition of unity:
the list of minimal projections (atoms). Each atom is also a point of the
Gelfand spectrum of the context, so spectra need no separate representation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import tolerances
from .errors import (
    NonCommuting,
    NotComparable,
    NotInContext,
    PosetTooLarge,
    QLogicError,
)
from .linalg import (
    check_hermitian,
    commutator_norm,
    eigendecompose,
    inf_norm,
    proj_leq,
)

DEFAULT_CAP = 5000
BOTTOM_LABEL = "C1"


def _atom_key(p: np.ndarray) -> tuple:
    flat = np.round(p.ravel(), 6)
    parts = []
    for z in flat:
        parts.append(float(z.real) + 0.0)
        parts.append(float(z.imag) + 0.0)
    return (int(round(np.trace(p).real)), tuple(parts))


class Context:
    """A partition of unity in M_n(C).

    Atoms are sorted canonically (rank first, then entries rounded to six
    decimals). Equality compares atom sets within tolerance and ignores the
    label.
    """

    __slots__ = ("atoms", "label", "dim", "_ranks", "_keys")

    def __init__(self, atoms: Sequence, label: Optional[str] = None, validate: bool = True):
        mats = [np.array(a, dtype=complex) for a in atoms]
        if not mats:
            raise QLogicError("a context needs at least one atom")
        n = mats[0].shape[0]
        keys = [_atom_key(m) for m in mats]
        order = sorted(range(len(mats)), key=lambda i: keys[i])
        mats = [mats[i] for i in order]
        for m in mats:
            m.setflags(write=False)
        self.atoms: Tuple[np.ndarray, ...] = tuple(mats)
        self._keys = tuple(keys[i] for i in order)
        self.label = label
        self.dim = n
        self._ranks = tuple(k[0] for k in self._keys)
        if validate:
            self._validate()

    def _validate(self):
        tol = tolerances.get()
        n = self.dim
        total = np.zeros((n, n), dtype=complex)
        for i, p in enumerate(self.atoms):
            if p.shape != (n, n):
                raise QLogicError("atoms of a context must share one dimension")
            if inf_norm(p - p.conj().T) > tol.herm or inf_norm(p @ p - p) > 10 * tol.proj:
                raise QLogicError(f"atom {i} is not a projection")
            if np.trace(p).real < 0.5:
                raise QLogicError(f"atom {i} is zero")
            for j in range(i):
                if inf_norm(p @ self.atoms[j]) > tol.ord:
                    raise QLogicError(f"atoms {j} and {i} are not orthogonal")
            total = total + p
        if inf_norm(total - np.eye(n)) > tol.ord:
            raise QLogicError("atoms do not sum to the identity")

    # ------------------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def ranks(self) -> Tuple[int, ...]:
        return self._ranks

    @property
    def sort_key(self) -> tuple:
        return (len(self.atoms), self._keys)

    @property
    def is_bottom(self) -> bool:
        return len(self.atoms) == 1

    def projection(self, indices: Iterable[int]) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in indices:
            out = out + self.atoms[i]
        return out

    def points(self) -> List["SpectrumPoint"]:
        return [SpectrumPoint(self, i) for i in range(self.size)]

    def contains_operator(self, a) -> bool:
        """True if ``a`` is diagonal in this context's atoms."""
        a = np.asarray(a, dtype=complex)
        tol = tolerances.get().ord * (1 + inf_norm(a))
        for q in self.atoms:
            c = np.trace(q @ a) / np.trace(q)
            if inf_norm(q @ a - c * q) > tol:
                return False
        return True

    def coefficients(self, a) -> np.ndarray:
        """Per-atom values tr(q a)/tr(q) of an operator lying in the context."""
        a = np.asarray(a, dtype=complex)
        return np.array([(np.trace(q @ a) / np.trace(q)).real for q in self.atoms])

    def operator(self, values: Sequence[float]) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for v, q in zip(values, self.atoms):
            out = out + v * q
        return out

    def coarsen(self, blocks: Sequence[Sequence[int]], label: Optional[str] = None) -> "Context":
        return Context([self.projection(b) for b in blocks], label=label, validate=False)

    def with_label(self, label: Optional[str]) -> "Context":
        c = Context.__new__(Context)
        c.atoms, c._keys, c.dim, c._ranks = self.atoms, self._keys, self.dim, self._ranks
        c.label = label
        return c

    # ------------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Context):
            return NotImplemented
        if self.dim != other.dim or self._ranks != other._ranks:
            return False
        tol = 10 * tolerances.get().ord
        unmatched = list(other.atoms)
        for p in self.atoms:
            for j, q in enumerate(unmatched):
                if inf_norm(p - q) <= tol:
                    del unmatched[j]
                    break
            else:
                return False
        return True

    def __hash__(self) -> int:
        return hash((self.dim, self._ranks))

    def __repr__(self) -> str:
        name = self.label if self.label is not None else "?"
        return f"Context({name}, dim={self.dim}, ranks={list(self._ranks)})"


@dataclass(frozen=True)
class SpectrumPoint:
    """Point of a context's Gelfand spectrum: the functional that is 1 on one atom."""

    context: Context
    atom_index: int

    def __post_init__(self):
        if not 0 <= self.atom_index < self.context.size:
            raise QLogicError(f"atom index {self.atom_index} out of range")

    @property
    def atom(self) -> np.ndarray:
        return self.context.atoms[self.atom_index]


def bottom_context(n: int, label: str = BOTTOM_LABEL) -> Context:
    return Context([np.eye(n, dtype=complex)], label=label)


def context_from_commuting(ops: Sequence, label: Optional[str] = None) -> Context:
    """Smallest context containing every operator of a commuting family.

    The atoms are the nonzero joint eigenspaces.
    """
    mats = [check_hermitian(a) for a in ops]
    if not mats:
        raise QLogicError("need at least one operator")
    n = mats[0].shape[0]
    tol = tolerances.get()
    for i, a in enumerate(mats):
        if a.shape != (n, n):
            raise QLogicError("operators must share one dimension")
        for j in range(i):
            c = commutator_norm(a, mats[j])
            if c > tol.ord * (1 + inf_norm(a)) * (1 + inf_norm(mats[j])):
                raise NonCommuting(j, i, c)
    atoms = [np.eye(n, dtype=complex)]
    for a in mats:
        refined = []
        for q in atoms:
            for _, e in eigendecompose(a):
                r = q @ e
                r = (r + r.conj().T) / 2
                if np.trace(r).real > 0.5:
                    refined.append(r)
        atoms = refined
    return Context(atoms, label=label)


def context_leq(d: Context, c: Context) -> bool:
    """D is a subalgebra of C: every atom of D is a sum of atoms of C."""
    if d.dim != c.dim:
        raise QLogicError("contexts of different dimension")
    if d.size > c.size:
        return False
    tol = tolerances.get().ord
    for dp in d.atoms:
        below = []
        for q in c.atoms:
            if proj_leq(q, dp):
                below.append(q)
            elif inf_norm(q @ dp) > tol:
                return False
        if not below or inf_norm(sum(below) - dp) > tol * len(below):
            return False
    return True


def restriction_map(c: Context, d: Context) -> Tuple[int, ...]:
    """For D <= C, the image under restriction of each point of C."""
    out = []
    for q in c.atoms:
        for j, dp in enumerate(d.atoms):
            if proj_leq(q, dp):
                out.append(j)
                break
        else:
            raise NotComparable(f"{d!r} is not below {c!r}")
    return tuple(out)


def restrict(point: SpectrumPoint, d: Context) -> SpectrumPoint:
    """rho_CD: the unique point of D lying over ``point``."""
    if not context_leq(d, point.context):
        raise NotComparable(f"{d!r} is not below {point.context!r}")
    for j, dp in enumerate(d.atoms):
        if proj_leq(point.atom, dp):
            return SpectrumPoint(d, j)
    raise NotComparable("no atom of D lies above the point")  # unreachable for valid contexts


def eval_point(point: SpectrumPoint, a) -> float:
    """<lambda, a> for ``a`` in the point's context."""
    a = np.asarray(a, dtype=complex)
    q = point.atom
    val = np.trace(q @ a) / np.trace(q)
    if inf_norm(q @ a - val * q) > tolerances.get().ord * (1 + inf_norm(a)):
        raise NotInContext("operator is not in the point's context")
    return float(val.real)


# ---------------------------------------------------------------------------
# Set partitions


def set_partitions(k: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """All partitions of range(k), as tuples of sorted blocks (restricted growth strings)."""
    if k == 0:
        yield ()
        return
    labels = [0] * k

    def rec(i, m):
        if i == k:
            blocks = [[] for _ in range(m)]
            for idx, b in enumerate(labels):
                blocks[b].append(idx)
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(m + 1):
            labels[i] = b
            yield from rec(i + 1, max(m, b + 1))

    yield from rec(1, 1) if k > 1 else iter([((0,),)])


def bell(k: int) -> int:
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def coarsenings(c: Context) -> List[Context]:
    """Every subalgebra of C, one per partition of its atoms."""
    out = []
    for blocks in set_partitions(c.size):
        if len(blocks) == 1:
            label = BOTTOM_LABEL
        elif len(blocks) == c.size:
            label = c.label
        else:
            label = f"{c.label or 'C'}/" + "|".join("".join(str(i) for i in b) for b in blocks)
        out.append(c.coarsen(blocks, label=label))
    return out


# ---------------------------------------------------------------------------
# Posets


class ContextPoset:
    """A finite set of contexts ordered by inclusion.

    Contexts are stored in canonical order (by atom count, then atom keys) and
    addressed by index. Restriction maps between comparable contexts are
    precomputed.
    """

    def __init__(self, contexts: Iterable[Context], include_bottom: bool = True,
                 down_closed: bool = False):
        uniq: List[Context] = []
        seen: Dict[Context, int] = {}
        for c in contexts:
            if c not in seen:
                seen[c] = len(uniq)
                uniq.append(c)
        if not uniq:
            raise QLogicError("empty poset")
        n = uniq[0].dim
        if any(c.dim != n for c in uniq):
            raise QLogicError("contexts of different dimension in one poset")
        if include_bottom:
            bot = bottom_context(n)
            if bot not in seen:
                uniq.append(bot)
        else:
            uniq = [c for c in uniq if not c.is_bottom]
        uniq.sort(key=lambda c: c.sort_key)
        used = set()
        labelled = []
        for i, c in enumerate(uniq):
            label = c.label
            if label is None or label in used:
                stem, k = ("C", i) if c.label is None else (f"{c.label}#", i)
                label = f"{stem}{k}"
                while label in used:
                    k += 1
                    label = f"{stem}{k}"
            used.add(label)
            labelled.append(c.with_label(label))
        self.contexts: Tuple[Context, ...] = tuple(labelled)
        self.dim = n
        self.include_bottom = include_bottom
        self.down_closed = down_closed
        self._index = {c: i for i, c in enumerate(self.contexts)}
        self._closed: Optional[bool] = True if down_closed else None
        self._build_order()

    def _build_order(self):
        m = len(self.contexts)
        leq = np.zeros((m, m), dtype=bool)
        restr: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        for i, c in enumerate(self.contexts):
            for j, d in enumerate(self.contexts):
                if i == j:
                    leq[j, i] = True
                    restr[(i, j)] = tuple(range(c.size))
                elif d.size <= c.size and context_leq(d, c):
                    leq[j, i] = True
                    restr[(i, j)] = restriction_map(c, d)
        self.leq_matrix = leq
        self._restr = restr
        self._down = [tuple(j for j in range(m) if leq[j, i]) for i in range(m)]
        self._up = [tuple(j for j in range(m) if leq[i, j]) for i in range(m)]
        self._fibres: Dict[Tuple[int, int], Tuple[Tuple[int, ...], ...]] = {}

    # construction helpers -------------------------------------------------
    @classmethod
    def build(cls, contexts: Iterable[Context], down_close: bool = False, include_bottom: bool = True,
              cap: int = DEFAULT_CAP) -> "ContextPoset":
        base = list(contexts)
        if down_close:
            base = _down_closed_list(base, cap)
        return cls(base, include_bottom=include_bottom, down_closed=down_close)

    def __len__(self) -> int:
        return len(self.contexts)

    def __iter__(self):
        return iter(self.contexts)

    def __getitem__(self, i) -> Context:
        return self.contexts[self.index(i)]

    def __contains__(self, c: Context) -> bool:
        return c in self._index

    def index(self, c) -> int:
        if isinstance(c, int):
            return c
        if isinstance(c, str):
            for i, ctx in enumerate(self.contexts):
                if ctx.label == c:
                    return i
            raise KeyError(c)
        try:
            return self._index[c]
        except KeyError:
            raise KeyError(f"{c!r} is not in the poset") from None

    def labels(self) -> List[str]:
        return [c.label for c in self.contexts]

    def leq(self, d, c) -> bool:
        return bool(self.leq_matrix[self.index(d), self.index(c)])

    def down(self, c) -> Tuple[int, ...]:
        """Indices of D <= C (C included)."""
        return self._down[self.index(c)]

    def up(self, c) -> Tuple[int, ...]:
        """Indices of E >= C (C included)."""
        return self._up[self.index(c)]

    def restrict(self, c, atom: int, d) -> int:
        """Index in D of the restriction of atom ``atom`` of C."""
        i, j = self.index(c), self.index(d)
        try:
            return self._restr[(i, j)][atom]
        except KeyError:
            raise NotComparable(f"{self.contexts[j]!r} is not below {self.contexts[i]!r}") from None

    def restriction(self, c, d) -> Tuple[int, ...]:
        i, j = self.index(c), self.index(d)
        try:
            return self._restr[(i, j)]
        except KeyError:
            raise NotComparable(f"{self.contexts[j]!r} is not below {self.contexts[i]!r}") from None

    def fibre(self, e, d, atom: int) -> Tuple[int, ...]:
        """Atoms of E (>= D) restricting to atom ``atom`` of D."""
        i, j = self.index(e), self.index(d)
        key = (i, j)
        if key not in self._fibres:
            r = self.restriction(i, j)
            self._fibres[key] = tuple(
                tuple(k for k, v in enumerate(r) if v == a) for a in range(self.contexts[j].size)
            )
        return self._fibres[key][atom]

    def maximal(self) -> List[int]:
        return [i for i in range(len(self)) if self._up[i] == (i,)]

    def is_down_closed(self) -> bool:
        """Every coarsening of every member is present (bottom exempt if excluded)."""
        if self._closed is None:
            self._closed = all(
                d in self._index
                for c in self.contexts
                for d in coarsenings(c)
                if self.include_bottom or not d.is_bottom
            )
        return self._closed

    def describe(self) -> List[dict]:
        return [
            {
                "label": c.label,
                "atoms": c.size,
                "ranks": list(c.ranks),
                "below": [self.contexts[j].label for j in self._down[i] if j != i],
            }
            for i, c in enumerate(self.contexts)
        ]


def _down_closed_list(contexts: List[Context], cap: int) -> List[Context]:
    out: List[Context] = []
    seen = set()
    for c in contexts:
        if bell(c.size) > cap:
            raise PosetTooLarge(f"context with {c.size} atoms has {bell(c.size)} subalgebras (cap {cap})")
        for d in coarsenings(c):
            if d not in seen:
                seen.add(d)
                out.append(d)
                if len(out) > cap:
                    raise PosetTooLarge(f"down-closure exceeds {cap} contexts")
    return out


def down_closure(poset: ContextPoset, cap: int = DEFAULT_CAP) -> ContextPoset:
    """Add every subalgebra of every member context."""
    return ContextPoset(_down_closed_list(list(poset.contexts), cap),
                        include_bottom=poset.include_bottom, down_closed=True)


# ---------------------------------------------------------------------------
# Sieves


@dataclass(frozen=True)
class Sieve:
    """Down-closed (``down``) or up-closed (``up``) set of poset indices."""

    poset: ContextPoset
    members: frozenset
    direction: str = "down"

    def __post_init__(self):
        if self.direction not in ("down", "up"):
            raise QLogicError(f"bad sieve direction {self.direction!r}")
        object.__setattr__(self, "members", frozenset(self.members))

    @classmethod
    def generated(cls, poset: ContextPoset, seeds: Iterable, direction: str = "down") -> "Sieve":
        out = set()
        for s in seeds:
            i = poset.index(s)
            out.update(poset.down(i) if direction == "down" else poset.up(i))
        return cls(poset, frozenset(out), direction)

    def is_valid(self) -> bool:
        for i in self.members:
            near = self.poset.down(i) if self.direction == "down" else self.poset.up(i)
            if not set(near) <= self.members:
                return False
        return True

    def complement(self) -> "Sieve":
        rest = frozenset(range(len(self.poset))) - self.members
        return Sieve(self.poset, rest, "up" if self.direction == "down" else "down")

    def labels(self) -> List[str]:
        return [self.poset[i].label for i in sorted(self.members)]

    def __contains__(self, c) -> bool:
        return self.poset.index(c) in self.members
