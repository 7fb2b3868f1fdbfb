"""Seeded property suite behind ``qlogic check``.

Each section returns a dict with a ``checked`` count and a ``failures`` list of
witnesses. Everything draws from one ``numpy`` generator, so a seed fixes the
whole report.
"""
from __future__ import annotations

from typing import Callable, Dict, List

import numpy as np

from . import sampling as smp
from .contexts import ContextPoset, SpectrumPoint
from .daseinise import (
    check_adjunction,
    daseinise_proj_inner,
    daseinise_proj_outer,
    daseinise_sa_inner,
    daseinise_sa_outer,
)
from .dynamics import StarHom, check_equivariance, transform_truth
from .linalg import inf_norm, spectral_leq
from .logic import (
    Subobject,
    Variant,
    elementary_prop,
    heyting_impl,
    heyting_join,
    heyting_meet,
    heyting_neg,
    random_subobject,
    validate_subobject,
)
from .states import check_valuation_axioms, truth_sieve
from .valuemaps import check_continuity, check_ujelly, interval_vs_bounds, sandwich_check, section_census

VARIANTS = (Variant.CONTRAVARIANT, Variant.COVARIANT)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _section(checked: int, failures: List[dict], **extra) -> dict:
    out = {"checked": checked, "failures": failures}
    out.update(extra)
    return out


def _dim(rng) -> int:
    return int(rng.integers(2, 4))


def _poset_operator(p: ContextPoset, rng) -> np.ndarray:
    """Random operator, half the time lying in a maximal context of the poset."""
    if rng.random() < 0.5:
        c = p[int(rng.choice(p.maximal()))]
        return c.operator(rng.integers(-2, 3, size=c.size).astype(float))
    return smp.random_hermitian(p.dim, rng)


def heyting_law_failures(r: Subobject, s: Subobject, t: Subobject) -> List[str]:
    bad = []
    if heyting_meet(r, s).leq(t) != r.leq(heyting_impl(s, t)):
        bad.append("residuation")
    if heyting_meet(r, heyting_join(s, t)) != heyting_join(heyting_meet(r, s), heyting_meet(r, t)):
        bad.append("distributivity")
    if heyting_meet(s, heyting_neg(s)) != Subobject.bottom(s.variant, s.poset):
        bad.append("noncontradiction")
    if not s.leq(heyting_neg(heyting_neg(s))):
        bad.append("double negation")
    for x in (heyting_impl(s, t), heyting_neg(s), heyting_meet(r, s), heyting_join(r, s)):
        if not validate_subobject(x):
            bad.append("closure")
    return bad


def adjunction(rng, trials: int) -> dict:
    fails = []
    for _ in range(trials):
        n = _dim(rng)
        u = smp.random_unitary(n, rng)
        c = smp.random_context(n, rng, basis=smp.related_basis(u, rng))
        a = smp.random_hermitian(n, rng, basis=u)
        b = c.operator(rng.choice(np.arange(-2, 3), size=c.size).astype(float))
        ok = check_adjunction(a, b, c)
        if not all(ok):
            fails.append({"n": n, "result": list(ok)})
    return _section(trials, fails)


def projections(rng, trials: int) -> dict:
    fails = []
    for _ in range(trials):
        n = _dim(rng)
        u = smp.random_unitary(n, rng)
        c = smp.random_context(n, rng, basis=smp.related_basis(u, rng))
        p = smp.random_projection(n, rng, basis=u)
        eye = np.eye(n)
        dev = max(inf_norm(daseinise_proj_inner(eye - p, c) - (eye - daseinise_proj_outer(p, c))),
                  inf_norm(daseinise_sa_outer(p, c) - daseinise_proj_outer(p, c)),
                  inf_norm(daseinise_sa_inner(p, c) - daseinise_proj_inner(p, c)))
        if dev > 1e-8:
            fails.append({"n": n, "deviation": dev})
    return _section(trials, fails)


def chain(rng, trials: int) -> dict:
    fails, checked = [], 0
    for _ in range(max(1, trials // 20)):
        n = _dim(rng)
        p = smp.random_poset(n, rng)
        a = _poset_operator(p, rng)
        outer = [daseinise_sa_outer(a, c) for c in p]
        inner = [daseinise_sa_inner(a, c) for c in p]
        for i in range(len(p)):
            for j in p.down(i):
                checked += 1
                ok = (spectral_leq(inner[j], inner[i]) and spectral_leq(inner[i], a)
                      and spectral_leq(a, outer[i]) and spectral_leq(outer[i], outer[j]))
                if not ok:
                    fails.append({"C": p[i].label, "D": p[j].label})
    return _section(checked, fails)


def heyting(rng, trials: int) -> dict:
    fails, witnesses, checked = [], 0, 0
    for variant in VARIANTS:
        for _ in range(max(1, trials // 25)):
            p = smp.random_poset(_dim(rng), rng, generators=int(rng.integers(2, 4)),
                                 include_bottom=bool(rng.random() < 0.7))
            for _ in range(25):
                checked += 1
                r, s, t = (random_subobject(variant, p, rng) for _ in range(3))
                bad = heyting_law_failures(r, s, t)
                if bad:
                    fails.append({"variant": variant.value, "laws": bad})
                if heyting_neg(heyting_neg(s)) != s:
                    witnesses += 1
    return _section(checked, fails, double_negation_witnesses=witnesses)


def sandwich(rng, trials: int) -> dict:
    fails, checked = [], 0
    a3 = smp.random_hermitian(3, rng)
    sz_poset = ContextPoset.build(
        [smp.context_from_basis(np.eye(2), [[0], [1]], "Cz"),
         smp.context_from_basis(np.array([[1, 1], [1, -1]]) / np.sqrt(2), [[0], [1]], "Cx")],
        down_close=True)
    cases = [(SIGMA_Z, sz_poset), (SIGMA_X, sz_poset), (a3, smp.random_poset(3, rng))]
    for a, p in cases:
        spec = np.linalg.eigvalsh(a)
        grid = sorted(set(spec) | set(spec + 0.5) | set(spec - 0.5))
        for s in grid:
            for r in grid:
                if not s < r:
                    continue
                for eps in (0.01, 0.1, 1.0):
                    for variant in VARIANTS:
                        checked += 1
                        rep = sandwich_check(a, s, r, eps, p, variant)
                        fails.extend(rep.failures)
    return _section(checked, fails)


def strictness(rng, trials: int) -> dict:
    """Search M_2 and M_3 for stages where [a in (s,r)] is strictly below [a<r] ∧ [a>s]."""
    fails, witnesses, checked = [], [], 0
    poset2 = smp.random_poset(2, rng)
    cases = [(SIGMA_Z, poset2), (SIGMA_X, poset2)]
    for _ in range(3):
        p = smp.random_poset(3, rng)
        cases.append((_poset_operator(p, rng), p))
    for a, p in cases:
        spec = np.linalg.eigvalsh(a)
        grid = sorted(set(spec) | set(spec + 0.5) | set(spec - 0.5))
        for s in grid:
            for r in grid:
                if not s < r:
                    continue
                checked += 1
                contra = interval_vs_bounds(a, s, r, p, Variant.CONTRAVARIANT)
                co = interval_vs_bounds(a, s, r, p, Variant.COVARIANT)
                if any(v == "other" for v in contra.values()) or any(v != "equal" for v in co.values()):
                    fails.append({"n": p.dim, "s": float(s), "r": float(r), "contravariant": contra,
                                  "covariant": co})
                witnesses += [{"n": p.dim, "s": float(s), "r": float(r), "context": c}
                              for c, v in contra.items() if v == "strict" and not p[c].is_bottom]
    if not witnesses:
        fails.append({"reason": "no strict contravariant instance found"})
    return _section(checked, fails, strict_witnesses=len(witnesses), example=witnesses[:1])


def ujelly(rng, trials: int) -> dict:
    fails = []
    for _ in range(trials):
        n = _dim(rng)
        u = smp.random_unitary(n, rng)
        c = smp.random_context(n, rng, basis=smp.related_basis(u, rng))
        a = smp.random_hermitian(n, rng, basis=u)
        pt = SpectrumPoint(c, int(rng.integers(0, c.size)))
        ok = check_ujelly(a, c, pt)
        if not all(ok):
            fails.append({"n": n, "result": list(ok)})
    return _section(trials, fails)


def continuity(rng, trials: int) -> dict:
    fails, checked = [], 0
    for _ in range(max(1, trials // 20)):
        n = _dim(rng)
        p = smp.random_poset(n, rng)
        a = _poset_operator(p, rng)
        for variant in VARIANTS:
            rep = check_continuity(a, p, variant)
            checked += rep.checked
            fails.extend(rep.failures)
    return _section(checked, fails)


def sections(rng, trials: int) -> dict:
    fails, checked = [], 0
    for _ in range(max(1, trials // 40)):
        p = smp.random_poset(_dim(rng), rng)
        for i in range(len(p)):
            census = section_census(p, i)
            checked += census.candidates
            if not census.agree:
                fails.append({"context": p[i].label})
    return _section(checked, fails)


def valuations(rng, trials: int) -> dict:
    fails, checked = [], 0
    for _ in range(5):
        n = _dim(rng)
        p = smp.random_poset(n, rng)
        psi = smp.random_state(n, rng)
        rep = check_valuation_axioms(psi, p, max(1, trials // 4), rng)
        checked += rep.trials
        fails.extend(rep.failures)
    return _section(checked, fails)


def sieves(rng, trials: int) -> dict:
    fails = []
    for _ in range(trials):
        n = _dim(rng)
        p = smp.random_poset(n, rng)
        basis = smp.random_unitary(n, rng)
        a = smp.random_hermitian(n, rng, basis=basis)
        psi = smp.random_state(n, rng, basis=basis)
        delta = smp.random_interval(a, rng)
        for variant in VARIANTS:
            sv = truth_sieve(psi, elementary_prop(a, delta, p, variant), float(rng.choice([1.0, 0.5, 0.9])))
            if not sv.is_valid():
                fails.append({"variant": variant.value, "sieve": sv.labels()})
    return _section(trials, fails)


def dynamics(rng, trials: int) -> dict:
    fails, checked = [], 0
    for _ in range(max(1, trials // 4)):
        n = _dim(rng)
        h = StarHom.automorphism(smp.random_unitary(n, rng))
        a = smp.random_hermitian(n, rng)
        c = smp.random_context(n, rng)
        rep = check_equivariance(h, a, smp.random_interval(a, rng), c)
        checked += 1
        if not rep.ok:
            fails.append({"check": "equivariance", "chi": rep.chi, "outer": rep.outer, "inner": rep.inner})
    for _ in range(max(1, trials // 8)):
        n = _dim(rng)
        h = StarHom.automorphism(smp.finite_order_unitary(n, int(rng.integers(2, 4)), rng))
        p = smp.orbit_poset(h, [smp.random_context(n, rng, blocks=n, label="G")])
        basis = smp.random_unitary(n, rng)
        a = smp.random_hermitian(n, rng, basis=basis)
        psi = smp.random_state(n, rng, basis=h.apply(basis))
        delta = smp.random_interval(a, rng)
        for variant in VARIANTS:
            checked += 1
            t = transform_truth(h, psi, a, delta, p, variant)
            if not (t.equivalent and t.closed_form_agrees):
                fails.append({"check": "transform", "variant": variant.value})
    return _section(checked, fails)


SECTIONS: Dict[str, Callable] = {
    "adjunction": adjunction,
    "projections": projections,
    "chain": chain,
    "heyting": heyting,
    "sandwich": sandwich,
    "strictness": strictness,
    "ujelly": ujelly,
    "continuity": continuity,
    "sections": sections,
    "valuations": valuations,
    "sieves": sieves,
    "dynamics": dynamics,
}


def run_suite(seed: int = 0, trials: int = 100) -> dict:
    rng = np.random.default_rng(seed)
    report = {name: fn(rng, trials) for name, fn in SECTIONS.items()}
    total = sum(len(sec["failures"]) for sec in report.values())
    return {"seed": seed, "trials": trials, "sections": report, "failures": total}
