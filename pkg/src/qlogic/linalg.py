"""Hermitian spectral calculus on small dense complex matrices.

Operators are plain ``numpy`` arrays of shape (n, n). Projections are
hermitian idempotents; the order on them is range inclusion.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import tolerances
from .errors import NonHermitian, QLogicError

__all__ = [
    "Interval",
    "BorelSet",
    "as_matrix",
    "check_hermitian",
    "check_projection",
    "is_projection",
    "eigendecompose",
    "spectrum",
    "spectral_projection",
    "spectral_resolution",
    "spectral_resolution_left",
    "proj_leq",
    "spectral_leq",
    "proj_meet",
    "proj_join",
    "inf_norm",
]


def inf_norm(m: np.ndarray) -> float:
    """Largest absolute entry."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise QLogicError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def check_hermitian(m) -> np.ndarray:
    a = as_matrix(m)
    dev = inf_norm(a - a.conj().T)
    if dev > tolerances.get().herm:
        raise NonHermitian(f"||M - M^dagger|| = {dev:.3g}")
    return a


def is_projection(m) -> bool:
    a = np.asarray(m, dtype=complex)
    tol = tolerances.get()
    return inf_norm(a - a.conj().T) <= tol.herm and inf_norm(a @ a - a) <= tol.proj


def check_projection(m) -> np.ndarray:
    a = check_hermitian(m)
    dev = inf_norm(a @ a - a)
    if dev > tolerances.get().proj:
        raise QLogicError(f"not a projection: ||P^2 - P|| = {dev:.3g}")
    return a


# ---------------------------------------------------------------------------
# Borel sets: finite unions of intervals


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        # infinite endpoints are never closed
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @property
    def empty(self) -> bool:
        if self.lo > self.hi:
            return True
        if self.lo == self.hi:
            return not (self.lo_closed and self.hi_closed)
        return False

    def contains(self, x: float, tol: float = 0.0) -> bool:
        # snap to an endpoint first, then let the closed flag decide
        if not math.isinf(self.lo) and abs(x - self.lo) <= tol:
            if not self.lo_closed:
                return False
            x = self.lo
        if not math.isinf(self.hi) and abs(x - self.hi) <= tol:
            if not self.hi_closed:
                return False
            x = self.hi
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def __str__(self) -> str:
        lo = "-inf" if self.lo == -math.inf else repr(float(self.lo))
        hi = "inf" if self.hi == math.inf else repr(float(self.hi))
        return f"{'[' if self.lo_closed else '('}{lo},{hi}{']' if self.hi_closed else ')'}"


def _touch(a: Interval, b: Interval) -> bool:
    """True if the union of a and b (a.lo <= b.lo) is a single interval."""
    if b.lo < a.hi:
        return True
    if b.lo == a.hi:
        return a.hi_closed or b.lo_closed
    return False


@dataclass(frozen=True)
class BorelSet:
    """Finite disjoint union of intervals, kept sorted and merged."""

    pieces: Tuple[Interval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", _normalize(self.pieces))

    @classmethod
    def interval(cls, lo, hi, lo_closed=False, hi_closed=False) -> "BorelSet":
        return cls((Interval(float(lo), float(hi), lo_closed, hi_closed),))

    @classmethod
    def open(cls, lo, hi) -> "BorelSet":
        return cls.interval(lo, hi)

    @classmethod
    def real_line(cls) -> "BorelSet":
        return cls.interval(-math.inf, math.inf)

    @classmethod
    def below(cls, r, closed=False) -> "BorelSet":
        return cls.interval(-math.inf, r, False, closed)

    @classmethod
    def above(cls, s, closed=False) -> "BorelSet":
        return cls.interval(s, math.inf, closed, False)

    def union(self, other: "BorelSet") -> "BorelSet":
        return BorelSet(self.pieces + other.pieces)

    def complement(self) -> "BorelSet":
        out = []
        lo, lo_closed = -math.inf, False
        for p in self.pieces:
            out.append(Interval(lo, p.lo, lo_closed, not p.lo_closed))
            lo, lo_closed = p.hi, not p.hi_closed
        out.append(Interval(lo, math.inf, lo_closed, False))
        return BorelSet(tuple(out))

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(p.contains(x, tol) for p in self.pieces)

    def __str__(self) -> str:
        return " u ".join(str(p) for p in self.pieces) if self.pieces else "{}"

    # JSON -----------------------------------------------------------------
    def to_json(self) -> dict:
        def end(x):
            if x == math.inf:
                return "+inf"
            if x == -math.inf:
                return "-inf"
            return x

        return {
            "pieces": [
                {"lo": end(p.lo), "hi": end(p.hi), "lo_closed": p.lo_closed, "hi_closed": p.hi_closed}
                for p in self.pieces
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BorelSet":
        return cls(tuple(
            Interval(_parse_end(p["lo"]), _parse_end(p["hi"]), bool(p.get("lo_closed", False)),
                     bool(p.get("hi_closed", False)))
            for p in obj["pieces"]
        ))

    @classmethod
    def parse(cls, text: str) -> "BorelSet":
        """Parse ``(a,b)``, ``[a,b]``, ``(a,inf)`` literals joined by ``u``."""
        if text.strip() == "{}":
            return cls(())
        pieces = []
        for chunk in text.replace("U", "u").split("u"):
            chunk = chunk.strip()
            if not chunk or chunk[0] not in "([" or chunk[-1] not in ")]" or chunk.count(",") != 1:
                raise QLogicError(f"bad interval literal {chunk!r} in {text!r}")
            lo, hi = (_parse_end(x) for x in chunk[1:-1].split(","))
            if lo > hi:
                raise QLogicError(f"reversed interval {chunk!r}")
            pieces.append(Interval(lo, hi, chunk[0] == "[", chunk[-1] == "]"))
        return cls(tuple(pieces))


def _parse_end(x) -> float:
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return math.inf
        if s in ("-inf", "-infinity"):
            return -math.inf
        try:
            return float(s)
        except ValueError:
            raise QLogicError(f"bad interval endpoint {x!r}") from None
    return float(x)


def _normalize(pieces: Iterable[Interval]) -> Tuple[Interval, ...]:
    live = sorted((p for p in pieces if not p.empty), key=lambda p: (p.lo, not p.lo_closed))
    merged: List[Interval] = []
    for p in live:
        if merged and _touch(merged[-1], p):
            last = merged[-1]
            if p.hi > last.hi or (p.hi == last.hi and p.hi_closed):
                hi, hi_closed = p.hi, p.hi_closed
            else:
                hi, hi_closed = last.hi, last.hi_closed
            merged[-1] = Interval(last.lo, hi, last.lo_closed, hi_closed)
        else:
            merged.append(p)
    return tuple(merged)


# ---------------------------------------------------------------------------
# Spectral data


@lru_cache(maxsize=4096)
def _eig_cached(key: bytes, n: int, tol_key: Tuple[float, ...]):
    a = np.frombuffer(key, dtype=complex).reshape(n, n)
    tol = tolerances.Tolerances(*tol_key)
    h = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(h)
    eps = tol.eig(float(np.linalg.norm(h, 2)))
    groups: List[List[int]] = []
    for i, lam in enumerate(w):
        if groups and lam - w[groups[-1][-1]] <= eps:
            groups[-1].append(i)
        else:
            groups.append([i])
    out = []
    for g in groups:
        vecs = v[:, g]
        proj = vecs @ vecs.conj().T
        proj = (proj + proj.conj().T) / 2
        proj.setflags(write=False)
        out.append((float(np.mean(w[g])), proj))
    return tuple(out), eps


def _decompose(a: np.ndarray):
    tol = tolerances.get()
    a = np.ascontiguousarray(a, dtype=complex)
    return _eig_cached(a.tobytes(), a.shape[0], dataclasses.astuple(tol))


def eigendecompose(a) -> List[Tuple[float, np.ndarray]]:
    """Distinct eigenvalues (ascending) paired with their eigenprojections.

    Eigenvalues closer than the clustering tolerance are merged and the
    projection is taken over the whole cluster, so the result does not depend
    on the eigenvector basis chosen inside a degenerate eigenspace.
    """
    a = check_hermitian(a)
    pairs, _ = _decompose(a)
    return [(lam, p.copy()) for lam, p in pairs]


def spectrum(a) -> List[float]:
    a = check_hermitian(a)
    pairs, _ = _decompose(a)
    return [lam for lam, _ in pairs]


def eig_tolerance(a) -> float:
    """Clustering tolerance used for the eigenvalues of ``a``."""
    return _decompose(check_hermitian(a))[1]


def spectral_projection(a, delta: BorelSet) -> np.ndarray:
    """chi_Delta(a): sum of eigenprojections with eigenvalue in ``delta``."""
    a = check_hermitian(a)
    pairs, eps = _decompose(a)
    out = np.zeros(a.shape, dtype=complex)
    for lam, p in pairs:
        if delta.contains(lam, eps):
            out = out + p
    return out


def spectral_resolution(a, x: float) -> np.ndarray:
    """e^a_x = chi_{(-inf, x]}(a)."""
    return spectral_projection(a, BorelSet.below(x, closed=True))


def spectral_resolution_left(a, x: float) -> np.ndarray:
    """e^a_{x-} = chi_{(-inf, x)}(a)."""
    return spectral_projection(a, BorelSet.below(x, closed=False))


def proj_leq(p, q) -> bool:
    """Range inclusion p <= q, tested as q p = p."""
    p = np.asarray(p)
    q = np.asarray(q)
    return inf_norm(q @ p - p) <= tolerances.get().ord


def spectral_leq(a, b) -> bool:
    """a <=_s b iff e^b_x <= e^a_x for every x.

    Both resolutions are right-continuous step families, so checking the
    merged set of jump points is exact.
    """
    a = check_hermitian(a)
    b = check_hermitian(b)
    if a.shape != b.shape:
        raise QLogicError("spectral_leq needs operators of equal dimension")
    pa, eps_a = _decompose(a)
    pb, eps_b = _decompose(b)
    # eigenvalues of a and b closer than the clustering tolerance count as the same jump
    eps = max(eps_a, eps_b)
    jumps = sorted({lam for lam, _ in pa} | {lam for lam, _ in pb})
    for x in jumps:
        ea = sum((p for lam, p in pa if lam <= x + eps), np.zeros(a.shape, dtype=complex))
        eb = sum((p for lam, p in pb if lam <= x + eps), np.zeros(b.shape, dtype=complex))
        if not proj_leq(eb, ea):
            return False
    return True


def _range_projection(vectors: np.ndarray, n: int) -> np.ndarray:
    if vectors.shape[1] == 0:
        return np.zeros((n, n), dtype=complex)
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    r = int(np.sum(s > 1e-7))
    u = u[:, :r]
    return u @ u.conj().T


def proj_join(p, q) -> np.ndarray:
    """Projection onto range(p) + range(q)."""
    p = np.asarray(p, dtype=complex)
    return _range_projection(np.hstack([p, np.asarray(q, dtype=complex)]), p.shape[0])


def proj_meet(p, q) -> np.ndarray:
    """Projection onto range(p) intersected with range(q)."""
    p = np.asarray(p, dtype=complex)
    n = p.shape[0]
    eye = np.eye(n)
    return eye - proj_join(eye - p, eye - np.asarray(q, dtype=complex))


def commutator_norm(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    return inf_norm(a @ b - b @ a)


def sum_projections(projs: Sequence[np.ndarray], n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=complex)
    for p in projs:
        out = out + p
    return out
