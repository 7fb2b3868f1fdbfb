import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import SX, SZ
from qlogic import sampling as smp
from qlogic.contexts import (
    Context,
    ContextPoset,
    Sieve,
    SpectrumPoint,
    bell,
    bottom_context,
    context_from_commuting,
    context_leq,
    down_closure,
    eval_point,
    restrict,
    set_partitions,
)
from qlogic.errors import NonCommuting, NotInContext, PosetTooLarge, QLogicError

seeds = st.integers(0, 2**32 - 1)


def diag(*x):
    return np.diag(x).astype(complex)


def test_context_from_commuting_examples():
    c = context_from_commuting([SZ])
    assert sorted(tuple(np.diag(q).real) for q in c.atoms) == [(0, 1), (1, 0)]
    b = context_from_commuting([np.eye(2)])
    assert b.is_bottom and b.size == 1
    c3 = context_from_commuting([diag(1, 1, -1), diag(1, -1, -1)])
    assert c3.size == 3
    assert sorted(tuple(np.diag(q).real) for q in c3.atoms) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_non_commuting_generators():
    with pytest.raises(NonCommuting):
        context_from_commuting([SZ, SX])


def test_bad_atoms_rejected():
    with pytest.raises(QLogicError):
        Context([diag(1, 0), diag(1, 0)])
    with pytest.raises(QLogicError):
        Context([diag(1, 0)])


def test_context_leq_examples(cz, cx):
    b = bottom_context(2)
    assert context_leq(b, cz) and context_leq(b, cx)
    assert context_leq(cz, cz)
    assert not context_leq(cz, cx) and not context_leq(cx, cz)


def test_restrict_examples(cz):
    b = bottom_context(2)
    for pt in cz.points():
        assert restrict(pt, b).atom_index == 0
        assert restrict(pt, cz) == pt
    full = context_from_commuting([diag(1, 2, 3)])
    d = Context([diag(1, 1, 0), diag(0, 0, 1)])
    e22 = [i for i, q in enumerate(full.atoms) if np.isclose(q[1, 1], 1)][0]
    image = restrict(SpectrumPoint(full, e22), d)
    assert np.allclose(image.atom, diag(1, 1, 0))


def test_down_closure_examples(cz):
    p = ContextPoset.build([cz], down_close=True)
    assert len(p) == 2 and p.is_down_closed()
    assert len(ContextPoset.build([bottom_context(2)], down_close=True)) == 1
    full = context_from_commuting([diag(1, 2, 3)])
    assert len(ContextPoset.build([full], down_close=True)) == 5
    loose = ContextPoset([full])
    assert not loose.is_down_closed()
    assert len(down_closure(loose)) == 5


def test_down_closure_cap():
    with pytest.raises(PosetTooLarge):
        ContextPoset.build([context_from_commuting([diag(1, 2, 3, 4)])], down_close=True, cap=10)


def test_eval_point_examples(cz):
    up = [pt for pt in cz.points() if np.isclose(pt.atom[0, 0], 1)][0]
    assert eval_point(up, SZ) == pytest.approx(1)
    assert eval_point(up, np.eye(2)) == pytest.approx(1)
    with pytest.raises(NotInContext):
        eval_point(bottom_context(2).points()[0], SZ)


def test_poset_describe_and_labels(zx):
    assert zx.labels() == ["C1", "Cz", "Cx"]
    assert zx.down("Cz") == (0, 1) and zx.up("C1") == (0, 1, 2)
    assert [zx[i].label for i in zx.maximal()] == ["Cz", "Cx"]
    assert zx["Cx"] is zx[2]


def test_unlabelled_contexts_get_distinct_labels():
    p = ContextPoset.build([context_from_commuting([diag(1, 2, 3)])], down_close=True)
    assert len(set(p.labels())) == len(p)


@pytest.mark.parametrize("k", range(1, 7))
def test_set_partitions_bell(k):
    parts = list(set_partitions(k))
    assert len(parts) == bell(k) == len({tuple(sorted(map(tuple, p))) for p in parts})
    for p in parts:
        assert sorted(i for b in p for i in b) == list(range(k))


def test_sieve_validity(zx):
    assert Sieve(zx, frozenset({0, 1}), "down").is_valid()
    assert not Sieve(zx, frozenset({1}), "down").is_valid()
    assert Sieve(zx, frozenset({1}), "up").is_valid()
    s = Sieve.generated(zx, [2], "down")
    assert s.labels() == ["C1", "Cx"] and s.complement().is_valid()


@given(seeds)
def test_restriction_functorial(seed):
    rng = np.random.default_rng(seed)
    p = smp.random_poset(int(rng.integers(2, 5)), rng, cap=30)
    for c in range(len(p)):
        for k in range(p[c].size):
            assert p.restrict(c, k, c) == k
            for d in p.down(c):
                for e in p.down(d):
                    assert p.restrict(c, k, e) == p.restrict(d, p.restrict(c, k, d), e)


@given(seeds)
def test_restriction_is_projection_order(seed):
    # the atom of D that an atom of C restricts to is the unique one above it
    rng = np.random.default_rng(seed)
    p = smp.random_poset(int(rng.integers(2, 4)), rng)
    for c in range(len(p)):
        for d in p.down(c):
            for k, q in enumerate(p[c].atoms):
                above = [m for m, r in enumerate(p[d].atoms) if np.allclose(r @ q, q, atol=1e-7)]
                assert above == [p.restrict(c, k, d)]


@given(seeds)
def test_order_is_partial_order(seed):
    rng = np.random.default_rng(seed)
    p = smp.random_poset(int(rng.integers(2, 4)), rng, generators=3)
    m = p.leq_matrix
    assert m.diagonal().all()
    assert not np.any(m & m.T & ~np.eye(len(p), dtype=bool))
    assert np.array_equal((m.astype(int) @ m.astype(int)) > 0, m)
