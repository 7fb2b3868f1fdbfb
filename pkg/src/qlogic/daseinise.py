"""Outer and inner daseinisation with respect to a context.

Projections are approximated in the projection lattice of the context; self-adjoint
operators in the spectral order. Both use closed forms per atom, so results are
returned as operators together with (optionally) the supporting atom indices.
"""
from __future__ import annotations

from typing import List, Tuple

import numpy as np

from . import tolerances
from .contexts import Context
from .errors import NotInContext
from .linalg import (
    check_hermitian,
    check_projection,
    eigendecompose,
    inf_norm,
    proj_leq,
    spectral_leq,
    spectral_resolution,
    spectral_resolution_left,
)


def outer_atoms(p, c: Context) -> List[int]:
    """Atoms of C not orthogonal to p."""
    p = np.asarray(p, dtype=complex)
    tol = tolerances.get().ord
    return [i for i, q in enumerate(c.atoms) if inf_norm(q @ p) > tol]


def inner_atoms(p, c: Context) -> List[int]:
    """Atoms of C lying under p."""
    p = np.asarray(p, dtype=complex)
    return [i for i, q in enumerate(c.atoms) if proj_leq(q, p)]


def daseinise_proj_outer(p, c: Context) -> np.ndarray:
    p = check_projection(p)
    return c.projection(outer_atoms(p, c))


def daseinise_proj_inner(p, c: Context) -> np.ndarray:
    p = check_projection(p)
    return c.projection(inner_atoms(p, c))


def outer_values(a, c: Context) -> np.ndarray:
    """Per-atom eigenvalue of the outer daseinisation: the first jump that covers the atom."""
    a = check_hermitian(a)
    spec = [x for x, _ in eigendecompose(a)]
    out = np.empty(c.size)
    for i, q in enumerate(c.atoms):
        for x in spec:
            if proj_leq(q, spectral_resolution(a, x)):
                out[i] = x
                break
        else:  # e^a at max spec is the identity, so unreachable
            out[i] = spec[-1]
    return out


def inner_values(a, c: Context) -> np.ndarray:
    """Per-atom eigenvalue of the inner daseinisation."""
    a = check_hermitian(a)
    spec = [x for x, _ in eigendecompose(a)]
    n = a.shape[0]
    out = np.empty(c.size)
    for i, q in enumerate(c.atoms):
        for x in reversed(spec):
            if proj_leq(q, np.eye(n) - spectral_resolution_left(a, x)):
                out[i] = x
                break
        else:
            out[i] = spec[0]
    return out


def daseinise_sa_outer(a, c: Context) -> np.ndarray:
    return c.operator(outer_values(a, c))


def daseinise_sa_inner(a, c: Context) -> np.ndarray:
    return c.operator(inner_values(a, c))


def check_adjunction(a, b, c: Context) -> Tuple[bool, bool]:
    """Truth of the two Galois equivalences for b in C.

    Returns ``(b <=s inner(a) iff b <=s a, outer(a) <=s b iff a <=s b)``.
    """
    a = check_hermitian(a)
    b = check_hermitian(b)
    if not c.contains_operator(b):
        raise NotInContext("b does not lie in the context")
    inner = daseinise_sa_inner(a, c)
    outer = daseinise_sa_outer(a, c)
    left = spectral_leq(b, inner) == spectral_leq(b, a)
    right = spectral_leq(outer, b) == spectral_leq(a, b)
    return left, right
