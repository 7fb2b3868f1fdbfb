"""Unital *-homomorphisms M_n -> M_{kn} and what they induce on contexts and truth values.

Every unital *-homomorphism between full matrix algebras has the form
f(a) = w (a ⊗ I_k) w† for a unitary w, so that is the only representation used.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import tolerances
from .contexts import Context, ContextPoset, Sieve, SpectrumPoint, context_leq
from .daseinise import daseinise_sa_inner, daseinise_sa_outer, inner_atoms, outer_atoms
from .errors import DoesNotReflect, NotInImage, PosetNotClosed, QLogicError
from .linalg import (
    BorelSet,
    as_matrix,
    check_hermitian,
    commutator_norm,
    inf_norm,
    proj_leq,
    spectral_leq,
    spectral_projection,
)
from .logic import Subobject, Variant, elementary_prop
from .states import State, truth_sieve


class StarHom:
    """f(a) = w (a ⊗ I_k) w†."""

    def __init__(self, w, k: int = 1, source_dim: Optional[int] = None):
        w = as_matrix(w)
        m = w.shape[0]
        if k < 1 or m % k:
            raise QLogicError(f"target dimension {m} is not a multiple of k={k}")
        n = m // k if source_dim is None else source_dim
        if n * k != m:
            raise QLogicError("source_dim * k must equal the unitary's dimension")
        if inf_norm(w.conj().T @ w - np.eye(m)) > 1e-8:
            raise QLogicError("w is not unitary")
        self.w = w
        self.k = k
        self.source_dim = n
        self.target_dim = m

    @classmethod
    def automorphism(cls, u) -> "StarHom":
        return cls(u, 1)

    @classmethod
    def embedding(cls, n: int, k: int) -> "StarHom":
        return cls(np.eye(n * k), k, n)

    @property
    def is_automorphism(self) -> bool:
        return self.k == 1

    def apply(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=complex)
        return self.w @ np.kron(a, np.eye(self.k)) @ self.w.conj().T

    __call__ = apply

    def preimage(self, b) -> np.ndarray:
        """The unique a with f(a) = b, or NotInImage."""
        b = np.asarray(b, dtype=complex)
        x = self.w.conj().T @ b @ self.w
        n, k = self.source_dim, self.k
        a = np.trace(x.reshape(n, k, n, k), axis1=1, axis2=3) / k
        if inf_norm(np.kron(a, np.eye(k)) - x) > tolerances.get().ord * (1 + inf_norm(b)):
            raise NotInImage("operator is not in the image of the homomorphism")
        return a

    def in_image(self, b) -> bool:
        try:
            self.preimage(b)
        except NotInImage:
            return False
        return True

    def check_hom(self, rng: np.random.Generator, samples: int = 5) -> float:
        """Largest deviation from unitality, *-preservation and multiplicativity on samples."""
        n = self.source_dim
        dev = inf_norm(self.apply(np.eye(n)) - np.eye(self.target_dim))
        for _ in range(samples):
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            dev = max(dev, inf_norm(self.apply(a.conj().T) - self.apply(a).conj().T))
            dev = max(dev, inf_norm(self.apply(a @ b) - self.apply(a) @ self.apply(b)))
        return dev


def hadamard() -> StarHom:
    return StarHom.automorphism(np.array([[1, 1], [1, -1]]) / np.sqrt(2))


# ---------------------------------------------------------------------------
# Context maps


def image_context(f: StarHom, c: Context, label: Optional[str] = None) -> Context:
    """f[C]: its atoms are the images of the atoms of C."""
    return Context([f.apply(q) for q in c.atoms], label=label)


@dataclass(frozen=True)
class ContextMap:
    source: ContextPoset
    target: ContextPoset
    index: Tuple[Optional[int], ...]  # target index per source index (None where undefined)

    def __call__(self, c) -> Optional[int]:
        return self.index[self.source.index(c)]

    def is_order_preserving(self) -> bool:
        pairs = [(i, j) for i in range(len(self.source)) for j in range(len(self.source))
                 if self.index[i] is not None and self.index[j] is not None]
        return all(self.target.leq(self.index[j], self.index[i])
                   for i, j in pairs if self.source.leq(j, i))

    def image_sieve(self, s: Sieve) -> frozenset:
        return frozenset(self.index[i] for i in s.members if self.index[i] is not None)


def induced_context_map(f: StarHom, source: ContextPoset, target: Optional[ContextPoset] = None) -> ContextMap:
    """C -> f[C]. Without a target poset, the images form a new one."""
    images = [image_context(f, c, label=f"f({c.label})") for c in source]
    if target is None:
        target = ContextPoset(images, include_bottom=source.include_bottom)
    idx = []
    for img in images:
        if img not in target:
            raise PosetNotClosed(f"{img!r} is not in the target poset")
        idx.append(target.index(img))
    return ContextMap(source, target, tuple(idx))


@dataclass
class ReflectReport:
    ok: bool
    pairs: int
    witness: Optional[Tuple[np.ndarray, np.ndarray]] = None
    norm: float = 0.0

    @property
    def verdict(self) -> str:
        return "not refuted" if self.ok else "refuted"


def _random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (x + x.conj().T) / 2


def reflect_commutativity(f, ops: Sequence = (), rounds: int = 50,
                          rng: Optional[np.random.Generator] = None) -> ReflectReport:
    """Search for a pair with commuting images but non-commuting preimages.

    Pairs come from ``ops`` and from ``rounds`` random hermitian pairs. ``f`` may
    be any object with ``apply`` and ``source_dim``. A pass only means no
    counterexample was found.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    n = f.source_dim
    tol = tolerances.get().ord
    ops = [check_hermitian(a) for a in ops]
    pairs = list(itertools.combinations(ops, 2))
    for _ in range(rounds):
        pairs.append((_random_hermitian(n, rng), _random_hermitian(n, rng)))
    for a, b in pairs:
        fa, fb = f.apply(a), f.apply(b)
        scale = (1 + inf_norm(fa)) * (1 + inf_norm(fb))
        if commutator_norm(fa, fb) <= tol * scale:
            c = commutator_norm(a, b)
            if c > tol * (1 + inf_norm(a)) * (1 + inf_norm(b)):
                return ReflectReport(False, len(pairs), (a, b), c)
    return ReflectReport(True, len(pairs))


@dataclass(frozen=True)
class InverseContextMap:
    source: ContextPoset  # contexts of the target algebra
    contexts: Tuple[Context, ...]  # preimage context per source index

    def __call__(self, d) -> Context:
        return self.contexts[self.source.index(d)]


def _preimage_context(f: StarHom, d: Context) -> Context:
    """Context of A generated by f^{-1}(D ∩ f[A])."""
    k = d.size
    members = []
    for bits in itertools.product((0, 1), repeat=k):
        idx = [i for i, b in enumerate(bits) if b]
        if not idx:
            continue
        if f.in_image(d.projection(idx)):
            members.append(frozenset(idx))
    # atoms of the Boolean algebra: minimal nonempty members
    atoms = [m for m in members if not any(o < m for o in members)]
    return Context([f.preimage(d.projection(sorted(a))) for a in atoms])


def inverse_context_map(f: StarHom, poset: ContextPoset, ops: Sequence = (),
                        rng: Optional[np.random.Generator] = None) -> InverseContextMap:
    rep = reflect_commutativity(f, ops, rng=rng)
    if not rep.ok:
        raise DoesNotReflect(rep.witness, rep.norm)
    return InverseContextMap(poset, tuple(_preimage_context(f, d) for d in poset))


# ---------------------------------------------------------------------------
# Spectra


def sigma_map(f: StarHom, point: SpectrumPoint, c: Context) -> SpectrumPoint:
    """lambda -> lambda ∘ f on C: the atom q of C whose image lies above the point's atom."""
    for i, q in enumerate(c.atoms):
        if proj_leq(point.atom, f.apply(q)):
            return SpectrumPoint(c, i)
    raise NotInImage("the point's context does not refine f[C]")


def pull_back_family(f: StarHom, s: Subobject, source: ContextPoset) -> Subobject:
    """Family C -> {q in C : f(q) in S_{f[C]}} over the source poset."""
    cmap = induced_context_map(f, source, s.poset)
    fam = []
    for i, c in enumerate(source):
        j = cmap.index[i]
        d = s.poset[j]
        keep = set()
        for m in s.family[j]:
            keep.add(sigma_map(f, SpectrumPoint(d, m), c).atom_index)
        fam.append(frozenset(keep))
    return Subobject(s.variant, source, tuple(fam))


def sigma_preimage(f: StarHom, u: Subobject, c) -> List[int]:
    """Atoms of f[C] mapped by sigma into U_C (atom indices of the image context)."""
    i = u.poset.index(c)
    ctx = u.poset[i]
    img = image_context(f, ctx)
    return [m for m in range(img.size)
            if sigma_map(f, SpectrumPoint(img, m), ctx).atom_index in u.family[i]]


def contexts_above_image(f: StarHom, c: Context, target: ContextPoset) -> List[int]:
    """Indices of D in the target poset with f[C] ⊆ D."""
    img = image_context(f, c)
    return [j for j, d in enumerate(target) if context_leq(img, d)]


def images_of_contexts_above(f: StarHom, c: Context, source: ContextPoset,
                             target: ContextPoset) -> List[int]:
    """Indices of f[C'] in the target poset for C' ⊇ C in the source poset."""
    i = source.index(c)
    out = []
    for e in source.up(i):
        img = image_context(f, source[e])
        if img in target:
            out.append(target.index(img))
    return sorted(set(out))


# ---------------------------------------------------------------------------
# Equivariance and transformed truth values


@dataclass
class EquivarianceReport:
    chi: float
    outer: float
    inner: float
    order_preserved: bool

    @property
    def ok(self) -> bool:
        tol = 1e-8
        return self.chi <= tol and self.outer <= tol and self.inner <= tol and self.order_preserved


def check_equivariance(h: StarHom, a, delta: BorelSet, c: Context) -> EquivarianceReport:
    if not h.is_automorphism:
        raise QLogicError("equivariance needs an automorphism")
    a = check_hermitian(a)
    ha = h.apply(a)
    hc = image_context(h, c)
    chi = inf_norm(h.apply(spectral_projection(a, delta)) - spectral_projection(ha, delta))
    out = daseinise_sa_outer(a, c)
    inn = daseinise_sa_inner(a, c)
    outer = inf_norm(h.apply(out) - daseinise_sa_outer(ha, hc))
    inner = inf_norm(h.apply(inn) - daseinise_sa_inner(ha, hc))
    order = (spectral_leq(a, out) == spectral_leq(ha, h.apply(out))
             and spectral_leq(inn, a) == spectral_leq(h.apply(inn), ha)
             and spectral_leq(out, a) == spectral_leq(h.apply(out), ha))
    return EquivarianceReport(chi, outer, inner, order)


@dataclass
class TruthTransform:
    sieve1: Sieve
    sieve2: Sieve
    equivalent: bool
    closed_form: Sieve
    closed_form_agrees: bool


def transform_truth(h: StarHom, psi: State, a, delta: BorelSet, poset: ContextPoset, variant) -> TruthTransform:
    """Compare the pulled-back proposition at C with [h(a) in delta] at h[C].

    sieve1 is computed through the spectral map: at C, psi evaluated on the
    atoms of h[C] whose sigma-image lies in [a in delta]_C. sieve2 is the truth
    sieve of [h(a) in delta]. The flag says whether h maps sieve1 onto sieve2.
    """
    if not h.is_automorphism:
        raise QLogicError("truth transformation needs an automorphism")
    variant = Variant.parse(variant)
    cmap = induced_context_map(h, poset, poset)
    if len(set(cmap.index)) != len(poset):
        raise PosetNotClosed("h does not permute the poset")
    tol = tolerances.get().state
    u = elementary_prop(a, delta, poset, variant)
    s1 = set()
    for i, c in enumerate(poset):
        img = image_context(h, c)
        if psi(img.projection(sigma_preimage(h, u, i))) >= 1 - tol:
            s1.add(i)
    direction = variant.sieve_direction
    sieve1 = Sieve(poset, frozenset(s1), direction)
    ha = h.apply(check_hermitian(a))
    sieve2 = truth_sieve(psi, elementary_prop(ha, delta, poset, variant), 1.0)
    chi = spectral_projection(ha, delta)
    pick = outer_atoms if variant is Variant.CONTRAVARIANT else inner_atoms
    closed = set()
    for i, c in enumerate(poset):
        img = poset[cmap.index[i]]
        if psi(img.projection(pick(chi, img))) >= 1 - tol:
            closed.add(i)
    closed_form = Sieve(poset, frozenset(closed), direction)
    return TruthTransform(sieve1, sieve2, cmap.image_sieve(sieve1) == sieve2.members,
                          closed_form, closed_form.members == sieve1.members)
