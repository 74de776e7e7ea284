import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from weakor import matroid as M
from weakor.matroid import (
    EmptyBases,
    ElementOutOfRange,
    ExchangeViolation,
    MixedCardinality,
    check_exchange,
    check_exchange_naive,
    circuits_by_enumeration,
)

from conftest import matroids

# circuits and cocircuits of the Fano plane as tabulated, 1-based
FANO_CIRCUITS = [
    "167", "356", "257", "347", "145", "246", "123",
    "4567", "2367", "1256", "1346", "1357", "1247", "2345",
]
FANO_COCIRCUITS = ["2345", "1247", "1357", "1346", "1256", "2367", "4567"]


def _sets(strings):
    return {frozenset(int(ch) - 1 for ch in s) for s in strings}


def test_fano_basic(fano):
    assert (fano.n, fano.r) == (7, 3)
    assert len(fano.bases) == 28
    assert {frozenset(c) for c in fano.circuits} == _sets(FANO_CIRCUITS)
    assert {frozenset(d) for d in fano.cocircuits} == _sets(FANO_COCIRCUITS)


def test_fano_profile_and_binary(fano):
    prof = M.intersection_profile(fano)
    assert set(prof) <= {0, 2, 4}
    assert sum(prof.values()) == 14 * 7
    assert M.is_binary_by_intersections(fano)
    assert M.is_simple(fano)


def test_u24_not_binary(u24):
    assert not M.is_binary_by_intersections(u24)
    assert 3 in M.intersection_profile(u24)


def test_free_matroid():
    m = M.free(3)
    assert m.circuits == ()
    assert set(m.cocircuits) == {(0,), (1,), (2,)}
    assert m.coloops() == (0, 1, 2) or set(m.coloops()) == {0, 1, 2}


def test_uniform_counts():
    m = M.uniform(3, 6)
    assert len(m.bases) == 20
    assert len(m.circuits) == 15  # all 4-subsets
    assert len(m.cocircuits) == 15  # all 4-subsets


def test_from_bases_errors():
    with pytest.raises(EmptyBases):
        M.from_bases(3, 1, [])
    with pytest.raises(MixedCardinality):
        M.from_bases(3, 2, [(0, 1), (2,)])
    with pytest.raises(ElementOutOfRange):
        M.from_bases(3, 1, [(5,)])
    with pytest.raises(ExchangeViolation):
        # {0,1} and {2,3} with nothing in between
        M.from_bases(4, 2, [(0, 1), (2, 3)])


def test_exchange_violation_reports_witness():
    with pytest.raises(ExchangeViolation) as info:
        M.from_bases(4, 2, [(0, 1), (2, 3)])
    exc = info.value
    assert exc.a != exc.b


def test_circuits_match_enumeration_oracle(fano, u24):
    for m in (fano, u24, M.uniform(3, 6), M.free(4)):
        assert set(m.circuits) == set(circuits_by_enumeration(m))


@given(matroids())
def test_circuits_oracle_property(m):
    assert set(m.circuits) == set(circuits_by_enumeration(m))
    assert set(m.cocircuits) == set(circuits_by_enumeration(M.dual(m)))


@given(matroids())
def test_dual_involution(m):
    d = M.dual(m)
    assert d.r == m.n - m.r
    assert M.dual(d) == m
    assert set(d.circuits) == set(m.cocircuits)


@given(matroids(), st.data())
def test_minors_are_matroids(m, data):
    if m.n == 0:
        return
    e = data.draw(st.integers(0, m.n - 1))
    for minor in (M.delete(m, e), M.contract(m, e)):
        assert minor.n == m.n - 1
        assert check_exchange(minor.n, minor.basis_masks) is None
    # deletion and contraction are swapped by duality
    assert M.dual(M.delete(m, e)) == M.contract(M.dual(m), e)


def test_delete_coloop_and_contract_loop():
    m = M.from_bases(3, 1, [(0,), (1,)])  # 2 is a loop
    assert M.contract(m, 2) == M.delete(m, 2)
    c = M.from_bases(2, 1, [(0,)])  # 0 coloop, 1 loop
    assert M.delete(c, 0).r == 0


@given(matroids(), st.randoms(use_true_random=False))
def test_relabel_preserves_structure(m, rnd):
    perm = list(range(m.n))
    rnd.shuffle(perm)
    r = M.relabel(m, perm)
    assert sorted(len(c) for c in r.circuits) == sorted(len(c) for c in m.circuits)
    assert M.intersection_profile(r) == M.intersection_profile(m)


def test_fast_exchange_matches_naive():
    rng = random.Random(7)
    for _ in range(400):
        n = rng.randint(1, 6)
        r = rng.randint(0, n)
        subsets = [M.mask_of(s) for s in combinations(range(n), r)]
        fam = {s for s in subsets if rng.random() < 0.6} or {subsets[0]}
        assert (check_exchange(n, fam) is None) == (check_exchange_naive(n, fam) is None)


@given(matroids())
def test_independence_and_rank(m):
    full = m.ground_mask
    assert m.rank_of(full) == m.r
    for b in m.basis_masks:
        assert m.is_independent(b) and m.is_basis(b)
    for c in m.circuit_masks:
        assert not m.is_independent(c)
        assert m.rank_of(c) == c.bit_count() - 1
