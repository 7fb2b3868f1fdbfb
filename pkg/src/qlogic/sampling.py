"""Seeded random operators, contexts, states and posets for property checks."""
from __future__ import annotations

from typing import List, Optional

import numpy as np

from .contexts import Context, ContextPoset
from .dynamics import image_context
from .errors import QLogicError
from .linalg import BorelSet, spectrum
from .states import State


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_partition(n: int, rng: np.random.Generator, blocks: Optional[int] = None) -> List[List[int]]:
    k = blocks if blocks is not None else int(rng.integers(1, n + 1))
    labels = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    rng.shuffle(labels)
    return [sorted(np.flatnonzero(labels == b).tolist()) for b in range(k)]


def context_from_basis(u: np.ndarray, partition, label: Optional[str] = None) -> Context:
    atoms = []
    for block in partition:
        v = u[:, block]
        atoms.append(v @ v.conj().T)
    return Context(atoms, label=label)


def random_context(n: int, rng: np.random.Generator, basis: Optional[np.ndarray] = None,
                   blocks: Optional[int] = None, label: Optional[str] = None) -> Context:
    u = basis if basis is not None else random_unitary(n, rng)
    return context_from_basis(u, random_partition(n, rng, blocks), label)


def random_hermitian(n: int, rng: np.random.Generator, basis: Optional[np.ndarray] = None,
                     degenerate: Optional[bool] = None) -> np.ndarray:
    """Hermitian matrix; with ``degenerate`` its eigenvalues are small integers (repeats likely)."""
    u = basis if basis is not None else random_unitary(n, rng)
    if degenerate is None:
        degenerate = bool(rng.random() < 0.5)
    if degenerate:
        vals = rng.integers(-2, 3, size=n).astype(float)
    else:
        vals = np.round(rng.normal(size=n) * 2, 3)
    a = (u * vals) @ u.conj().T
    return (a + a.conj().T) / 2


def random_projection(n: int, rng: np.random.Generator, basis: Optional[np.ndarray] = None) -> np.ndarray:
    u = basis if basis is not None else random_unitary(n, rng)
    k = int(rng.integers(0, n + 1))
    idx = rng.permutation(n)[:k]
    v = u[:, idx]
    return v @ v.conj().T


def related_basis(u: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """A basis sharing a random subset of vectors with ``u``; the rest are mixed."""
    n = u.shape[0]
    keep = int(rng.integers(0, n))
    perm = rng.permutation(n)
    mixed = perm[keep:]
    out = u[:, perm].copy()
    if len(mixed) > 1:
        out[:, keep:] = u[:, mixed] @ random_unitary(len(mixed), rng)
    return out


def random_state(n: int, rng: np.random.Generator, pure: Optional[bool] = None,
                 basis: Optional[np.ndarray] = None) -> State:
    if pure is None:
        pure = bool(rng.random() < 0.5)
    if basis is not None and rng.random() < 0.5:
        return State.from_pure(basis[:, int(rng.integers(0, n))])
    if pure:
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        return State.from_pure(v)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = z @ z.conj().T
    return State(rho / np.trace(rho).real)


def random_interval(a, rng: np.random.Generator) -> BorelSet:
    """Open or closed interval with endpoints near the spectrum of ``a``."""
    spec = spectrum(a)
    pts = sorted(set(spec) | {x + 0.5 for x in spec} | {x - 0.5 for x in spec})
    lo, hi = sorted(rng.choice(pts, size=2, replace=True).tolist())
    if lo == hi:
        hi = lo + 0.25
    return BorelSet.interval(lo, hi, bool(rng.random() < 0.5), bool(rng.random() < 0.5))


def random_poset(n: int, rng: np.random.Generator, generators: int = 2,
                 include_bottom: bool = True, cap: int = 20) -> ContextPoset:
    """Down-closed poset from a few maximal contexts whose bases overlap."""
    u = random_unitary(n, rng)
    for _ in range(20):
        gens = [context_from_basis(u, [[i] for i in range(n)], label="G0")]
        basis = u
        for g in range(1, generators):
            basis = related_basis(basis if rng.random() < 0.5 else u, rng)
            gens.append(random_context(n, rng, basis=basis, blocks=int(rng.integers(2, n + 1)),
                                       label=f"G{g}"))
        p = ContextPoset.build(gens, down_close=True, include_bottom=include_bottom)
        if len(p) <= cap:
            return p
    return ContextPoset.build(gens[:1], down_close=True, include_bottom=include_bottom)


def finite_order_unitary(n: int, order: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary u with u^order = 1 (eigenvalues are order-th roots of unity)."""
    v = random_unitary(n, rng)
    phases = np.exp(2j * np.pi * rng.integers(0, order, size=n) / order)
    return (v * phases) @ v.conj().T


def orbit_poset(h, contexts, include_bottom: bool = True, max_orbit: int = 12) -> ContextPoset:
    """Down-closure of the orbit of ``contexts`` under repeated application of ``h``."""
    orbit = list(contexts)
    frontier = list(contexts)
    while frontier:
        nxt = []
        for c in frontier:
            img = image_context(h, c, label=f"h{c.label}")
            if img not in orbit:
                orbit.append(img)
                nxt.append(img)
        if len(orbit) > max_orbit:
            raise QLogicError("orbit does not close; use a finite-order automorphism")
        frontier = nxt
    return ContextPoset.build(orbit, down_close=True, include_bottom=include_bottom)
