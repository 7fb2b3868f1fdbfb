"""Density-matrix states, the probability valuations they induce, and truth sieves."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import tolerances
from .contexts import Context, ContextPoset, Sieve
from .errors import InvalidState
from .linalg import as_matrix, inf_norm
from .logic import Subobject, Variant, heyting_join, heyting_meet, random_subobject


class State:
    """A density matrix rho; psi(a) = tr(rho a)."""

    def __init__(self, rho):
        rho = as_matrix(rho)
        tol = tolerances.get().state
        if inf_norm(rho - rho.conj().T) > tol:
            raise InvalidState("density matrix is not hermitian")
        rho = (rho + rho.conj().T) / 2
        if abs(np.trace(rho).real - 1) > tol * rho.shape[0]:
            raise InvalidState(f"trace is {np.trace(rho).real:.6g}, expected 1")
        if np.linalg.eigvalsh(rho).min() < -tol * 10:
            raise InvalidState("density matrix is not positive semidefinite")
        self.rho = rho
        self.rho.setflags(write=False)

    @classmethod
    def from_pure(cls, amplitudes) -> "State":
        v = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidState("zero state vector")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, n: int) -> "State":
        return cls(np.eye(n) / n)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def __call__(self, a) -> float:
        return float(np.trace(self.rho @ np.asarray(a)).real)


@dataclass(frozen=True)
class ValuationValue:
    """Section of [0,1] over the contexts below (or above) a base context."""

    base_context: Context
    variant: Variant
    values: Dict[str, float] = field(default_factory=dict)


def _stage_probability(psi: State, s: Subobject, i: int) -> float:
    return psi(s.projection(i))


def valuation(psi: State, s: Subobject, c) -> ValuationValue:
    p = s.poset
    i = p.index(c)
    near = p.down(i) if s.variant is Variant.CONTRAVARIANT else p.up(i)
    vals = {p[j].label: _stage_probability(psi, s, j) for j in near}
    return ValuationValue(p[i], s.variant, vals)


def truth_sieve(psi: State, s: Subobject, x: float = 1.0) -> Sieve:
    """Contexts where psi gives the proposition probability at least x."""
    tol = tolerances.get().state
    members = frozenset(i for i in range(len(s.poset)) if _stage_probability(psi, s, i) >= x - tol)
    return Sieve(s.poset, members, s.variant.sieve_direction)


def measure(psi: State, s: Subobject) -> np.ndarray:
    """Stagewise probabilities psi(P(S_C)) for every context of the poset."""
    return np.array([_stage_probability(psi, s, i) for i in range(len(s.poset))])


@dataclass
class AxiomReport:
    trials: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"trials": self.trials, "failures": self.failures}


def check_valuation_axioms(psi: State, poset: ContextPoset, trials: int = 100,
                           rng: Optional[np.random.Generator] = None,
                           variants=(Variant.CONTRAVARIANT, Variant.COVARIANT)) -> AxiomReport:
    """Monotonicity, strictness, modularity and chain continuity on random subobjects."""
    rng = rng if rng is not None else np.random.default_rng(0)
    tol = tolerances.get().state
    rep = AxiomReport()
    for variant in variants:
        variant = Variant.parse(variant)
        top = measure(psi, Subobject.top(variant, poset))
        bot = measure(psi, Subobject.bottom(variant, poset))
        if np.max(np.abs(top - 1)) > tol or np.max(np.abs(bot)) > tol:
            rep.failures.append({"axiom": "strict", "variant": variant.value})
        for _ in range(trials):
            rep.trials += 1
            s = random_subobject(variant, poset, rng)
            t = random_subobject(variant, poset, rng)
            ms, mt = measure(psi, s), measure(psi, t)
            meet, join = heyting_meet(s, t), heyting_join(s, t)
            mm, mj = measure(psi, meet), measure(psi, join)
            if np.any(mm > ms + tol) or np.any(ms > mj + tol):
                rep.failures.append({"axiom": "monotone", "variant": variant.value})
            if np.max(np.abs(ms + mt - mm - mj)) > tol:
                rep.failures.append({"axiom": "modular", "variant": variant.value,
                                     "deviation": float(np.max(np.abs(ms + mt - mm - mj)))})
            chain = [s]
            for _ in range(3):
                chain.append(heyting_join(chain[-1], random_subobject(variant, poset, rng)))
            values = [measure(psi, x) for x in chain]
            sup = np.max(np.stack(values), axis=0)
            if any(np.any(values[k] > values[k + 1] + tol) for k in range(len(values) - 1)) \
                    or np.max(np.abs(measure(psi, chain[-1]) - sup)) > tol:
                rep.failures.append({"axiom": "continuity", "variant": variant.value})
    return rep
