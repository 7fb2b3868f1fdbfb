import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import SZ
from qlogic import sampling as smp
from qlogic.errors import QLogicError
from qlogic.linalg import BorelSet
from qlogic.logic import Subobject, Variant, elementary_prop, heyting_join, heyting_meet, random_subobject
from qlogic.states import State, check_valuation_axioms, measure, truth_sieve, valuation

seeds = st.integers(0, 2**32 - 1)
CONTRA, CO = Variant.CONTRAVARIANT, Variant.COVARIANT
KET0 = State.from_pure([1, 0])


def pz(poset, v):
    return elementary_prop(SZ, BorelSet.open(0.5, 1.5), poset, v)


def test_state_validation():
    with pytest.raises(QLogicError):
        State(np.diag([1.0, 1.0]))
    with pytest.raises(QLogicError):
        State(np.diag([1.5, -0.5]))
    s = State.from_pure([3, 4j])
    assert s(np.eye(2)) == pytest.approx(1)
    assert State.maximally_mixed(3)(np.diag([1, 0, 0])) == pytest.approx(1 / 3)


def test_valuation_examples(zx):
    for v in Variant:
        assert all(x == pytest.approx(1) for x in valuation(KET0, Subobject.top(v, zx), "Cz").values.values())
        assert all(x == pytest.approx(0) for x in valuation(KET0, Subobject.bottom(v, zx), "Cz").values.values())
    val = valuation(KET0, pz(zx, CONTRA), "Cx")
    assert val.values == pytest.approx({"C1": 1.0, "Cx": 1.0})


def test_truth_sieve_examples(zx):
    assert truth_sieve(KET0, pz(zx, CONTRA)).labels() == ["C1", "Cz", "Cx"]
    assert truth_sieve(KET0, pz(zx, CO)).labels() == ["Cz"]
    mixed = State.maximally_mixed(2)
    assert truth_sieve(mixed, pz(zx, CONTRA)).labels() == ["C1", "Cx"]


def test_modularity_orthogonal_example(zx):
    mixed = State.maximally_mixed(2)
    s = elementary_prop(SZ, BorelSet.above(0), zx, CO)
    t = elementary_prop(SZ, BorelSet.below(0), zx, CO)
    i = zx.index("Cz")
    ms, mt = measure(mixed, s)[i], measure(mixed, t)[i]
    mm, mj = measure(mixed, heyting_meet(s, t))[i], measure(mixed, heyting_join(s, t))[i]
    assert (ms, mt, mm, mj) == pytest.approx((0.5, 0.5, 0.0, 1.0))


def test_axiom_harness_pure_state(zx):
    rep = check_valuation_axioms(KET0, zx, trials=100, rng=np.random.default_rng(1))
    assert rep.ok and rep.trials == 200


@given(seeds)
def test_measure_matches_trace(seed):
    rng = np.random.default_rng(seed)
    p = smp.random_poset(3, rng)
    psi = smp.random_state(3, rng)
    for v in Variant:
        s = random_subobject(v, p, rng)
        ref = [oracles.expectation(psi.rho, oracles.project(c.atoms, s.family[i])) for i, c in enumerate(p)]
        assert np.allclose(measure(psi, s), ref)


@given(seeds, st.sampled_from([1.0, 0.9, 0.5]))
def test_sieves_are_closed(seed, x):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    p = smp.random_poset(n, rng)
    u = smp.random_unitary(n, rng)
    a = smp.random_hermitian(n, rng, basis=u)
    psi = smp.random_state(n, rng, basis=u)
    d = smp.random_interval(a, rng)
    for v in Variant:
        sv = truth_sieve(psi, elementary_prop(a, d, p, v), x)
        assert sv.is_valid() and sv.direction == v.sieve_direction
