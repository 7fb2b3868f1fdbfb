import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import H, PX, PZ, SZ
from qlogic import sampling as smp
from qlogic.contexts import Context, ContextPoset, SpectrumPoint
from qlogic.dynamics import (
    StarHom,
    check_equivariance,
    contexts_above_image,
    hadamard,
    image_context,
    images_of_contexts_above,
    induced_context_map,
    inverse_context_map,
    reflect_commutativity,
    sigma_map,
    transform_truth,
)
from qlogic.errors import DoesNotReflect, NotInImage, PosetNotClosed, QLogicError
from qlogic.linalg import BorelSet
from qlogic.logic import Variant
from qlogic.states import State

seeds = st.integers(0, 2**32 - 1)
CONTRA, CO = Variant.CONTRAVARIANT, Variant.COVARIANT
KET0 = State.from_pure([1, 0])
PLUS = State.from_pure([1, 1])


class TraceMap:
    """Unital, positive, not multiplicative: a -> tr(a)/n on the diagonal of M_2."""

    source_dim = 2

    def apply(self, a):
        a = np.asarray(a)
        return np.trace(a) / 2 * np.eye(2)


def test_hom_constructors():
    with pytest.raises(QLogicError):
        StarHom(np.ones((2, 2)))
    with pytest.raises(QLogicError):
        StarHom(np.eye(3), k=2)
    f = StarHom.embedding(2, 2)
    assert np.allclose(f(SZ), np.kron(SZ, np.eye(2)))
    assert np.allclose(f.preimage(f(SZ)), SZ)
    assert f.in_image(np.diag([1, 1, 0, 0])) and not f.in_image(np.diag([1, 0, 0, 0]))
    assert f.check_hom(np.random.default_rng(0)) < 1e-10


def test_context_map_examples(zx, cz):
    ident = induced_context_map(StarHom.automorphism(np.eye(2)), zx, zx)
    assert ident.index == (0, 1, 2)
    had = induced_context_map(hadamard(), zx, zx)
    assert zx[had("Cz")].label == "Cx" and zx[had("Cx")].label == "Cz"
    assert had.is_order_preserving()
    img = image_context(StarHom.embedding(2, 2), cz)
    assert img == Context([np.diag([1, 1, 0, 0]), np.diag([0, 0, 1, 1])])


def test_context_map_requires_closed_target(cz):
    small = ContextPoset.build([cz], down_close=True)
    with pytest.raises(PosetNotClosed):
        induced_context_map(hadamard(), small, small)


def test_inverse_map_examples(zx):
    h = hadamard()
    g = inverse_context_map(h, zx)
    for i, c in enumerate(zx):
        assert g(c) == image_context(StarHom.automorphism(H.conj().T), c)
    f = StarHom.embedding(2, 2)
    target = ContextPoset.build([image_context(f, zx["Cz"], "fz"),
                                 Context([np.diag([1, 0, 0, 0]), np.diag([0, 1, 0, 0]), np.diag([0, 0, 1, 1])],
                                         label="fine")], down_close=True)
    g = inverse_context_map(f, target)
    assert g("fz") == zx["Cz"]
    assert g("fine") == zx["Cz"]


def test_reflection_negative_control():
    rep = reflect_commutativity(TraceMap(), ops=[SZ, PX])
    assert rep.verdict == "refuted" and rep.norm > 0
    assert reflect_commutativity(StarHom.embedding(2, 2)).verdict == "not refuted"


def test_inverse_map_raises_on_non_reflecting(zx):
    with pytest.raises(DoesNotReflect):
        inverse_context_map(TraceMap(), zx, ops=[SZ, PX])


def test_sigma_examples(zx):
    ident = StarHom.automorphism(np.eye(2))
    for k in range(2):
        assert sigma_map(ident, SpectrumPoint(zx["Cz"], k), zx["Cz"]).atom_index == k
    h = hadamard()
    px = [k for k, q in enumerate(zx["Cx"].atoms) if np.allclose(q, PX)][0]
    back = sigma_map(h, SpectrumPoint(zx["Cx"], px), zx["Cz"])
    assert np.allclose(back.atom, PZ)
    f = StarHom.embedding(2, 2)
    img = image_context(f, zx["Cz"])
    k = [m for m, q in enumerate(img.atoms) if np.allclose(q, np.diag([1, 1, 0, 0]))][0]
    assert np.allclose(sigma_map(f, SpectrumPoint(img, k), zx["Cz"]).atom, PZ)
    with pytest.raises(NotInImage):
        sigma_map(h, SpectrumPoint(zx["Cz"], 0), zx["Cz"])


def test_index_sets(zx):
    h = hadamard()
    assert [zx[j].label for j in contexts_above_image(h, zx["C1"], zx)] == ["C1", "Cz", "Cx"]
    assert [zx[j].label for j in images_of_contexts_above(h, zx["Cz"], zx, zx)] == ["Cx"]


def test_equivariance_examples(cx):
    ident = StarHom.automorphism(np.eye(2))
    assert check_equivariance(ident, SZ, BorelSet.open(0.5, 1.5), cx).ok
    rep = check_equivariance(hadamard(), SZ, BorelSet.open(0.5, 1.5), cx)
    assert rep.ok


def test_transform_truth_hadamard(zx):
    t = transform_truth(hadamard(), PLUS, SZ, BorelSet.open(0.5, 1.5), zx, CO)
    assert t.sieve1.labels() == ["Cz"] and t.sieve2.labels() == ["Cx"] and t.equivalent
    t0 = transform_truth(hadamard(), KET0, SZ, BorelSet.open(0.5, 1.5), zx, CO)
    assert t0.sieve1.labels() == t0.sieve2.labels() == [] and t0.equivalent
    mixed = transform_truth(hadamard(), State.maximally_mixed(2), SZ, BorelSet.open(0.5, 1.5), zx, CO)
    assert not ({"Cz", "Cx"} & set(mixed.sieve1.labels() + mixed.sieve2.labels()))
    ident = transform_truth(StarHom.automorphism(np.eye(2)), KET0, SZ, BorelSet.open(0.5, 1.5), zx, CONTRA)
    assert ident.sieve1 == ident.sieve2


def test_transform_truth_rejects_open_poset(cz):
    p = ContextPoset.build([cz], down_close=True)
    with pytest.raises(PosetNotClosed):
        transform_truth(hadamard(), PLUS, SZ, BorelSet.open(0.5, 1.5), p, CO)


@given(seeds)
def test_equivariance_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    u = smp.random_unitary(n, rng)
    h = StarHom.automorphism(u)
    a = smp.random_hermitian(n, rng)
    d = smp.random_interval(a, rng)
    c = smp.random_context(n, rng)
    assert check_equivariance(h, a, d, c).ok
    # oracle side: conjugating the brute-force spectral projection
    def member(x):
        return d.contains(x, 1e-8)

    ref = oracles.chi(u @ a @ u.conj().T, member)
    assert np.allclose(u @ oracles.chi(a, member) @ u.conj().T, ref, atol=1e-8)


@given(seeds)
def test_induced_map_is_order_isomorphism(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    h = StarHom.automorphism(smp.finite_order_unitary(n, int(rng.integers(2, 4)), rng))
    p = smp.orbit_poset(h, [smp.random_context(n, rng, blocks=n, label="G")])
    m = induced_context_map(h, p, p)
    assert sorted(m.index) == list(range(len(p)))
    for i in range(len(p)):
        for j in range(len(p)):
            assert p.leq(j, i) == p.leq(m.index[j], m.index[i])
    g = inverse_context_map(h, p)
    for c in p:
        assert image_context(h, g(c)) == c


@given(seeds)
def test_transform_truth_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    h = StarHom.automorphism(smp.finite_order_unitary(n, int(rng.integers(2, 4)), rng))
    p = smp.orbit_poset(h, [smp.random_context(n, rng, blocks=n, label="G")])
    basis = smp.random_unitary(n, rng)
    a = smp.random_hermitian(n, rng, basis=basis)
    psi = smp.random_state(n, rng, basis=h.apply(basis))
    d = smp.random_interval(a, rng)
    for v in Variant:
        t = transform_truth(h, psi, a, d, p, v)
        assert t.equivalent and t.closed_form_agrees
