from itertools import combinations

import pytest

from weakor import matroid as M
from weakor.families import MIFamilySpec, SizeOverBudget, mi_n, minor_minimality_check, verify_mi_nonweak
from weakor.weak import is_weakly_orientable

# non-bases of MI_0 with x0, y0, z0 read as 5, 6, 7
FANO_LINES = ["123", "145", "246", "347", "167", "257", "356"]


def nonbases(m):
    have = set(m.basis_masks)
    return {frozenset(s) for s in combinations(range(m.n), m.r) if M.mask_of(s) not in have}


def test_mi0_is_fano(fano):
    m = mi_n(0)
    want = {frozenset(int(ch) - 1 for ch in line) for line in FANO_LINES}
    assert nonbases(m) == want
    assert set(m.basis_masks) == set(fano.basis_masks)
    assert len(m.bases) == 28


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_spec_sizes(n):
    spec = MIFamilySpec(n)
    assert spec.size == 3 * n + 7 and spec.rank == n + 3
    assert all(len(h) == 2 * n + 3 for h in spec.H)
    assert all(len(c) == n + 3 for c in spec.C)
    assert spec.labels()[spec.x(n)] == f"x{n}"


@pytest.mark.parametrize("n", [1, 2])
def test_mi_n_shape(n):
    m = mi_n(n)
    assert (m.n, m.r) == (3 * n + 7, n + 3)
    assert M.check_exchange(m.n, m.basis_masks) is None


@pytest.mark.parametrize("n", [0, 1, 2])
def test_distinguished_sets(n):
    spec = MIFamilySpec(n)
    m = mi_n(n)
    circuits = {frozenset(c) for c in m.circuits}
    cocircuits = {frozenset(d) for d in m.cocircuits}
    assert frozenset({0, 1, 2}) in circuits
    assert set(spec.C) <= circuits
    assert {frozenset(range(m.n)) - h for h in spec.H} <= cocircuits


def test_negative_n_and_budget():
    with pytest.raises(ValueError):
        mi_n(-1)
    with pytest.raises(SizeOverBudget):
        mi_n(50)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_verify_nonweak(n):
    rep = verify_mi_nonweak(n)
    assert rep["passed"]
    assert rep["bland_jensen_infeasible"] and rep["odd_list_verified"]
    assert rep["odd_list_length"] % 2 == 1
    assert rep["construction_witness_valid"]


def test_verify_nonweak_catches_a_corrupted_family():
    # U_{3,7} in place of MI_0: weakly orientable, so the check must not pass
    rep = verify_mi_nonweak(0, M.uniform(3, 7))
    assert not rep["passed"] and not rep["bland_jensen_infeasible"]


def test_corrupted_basis_list_fails_validation():
    bases = [b for b in mi_n(0).bases][1:]
    with pytest.raises(M.MatroidError):
        M.from_bases(7, 3, bases)


@pytest.mark.parametrize("n", [0, 1])
def test_minor_minimality(n):
    rep = minor_minimality_check(n)
    assert rep["passed"] and len(rep["minors"]) == 6


@pytest.mark.slow
def test_minor_minimality_two():
    assert minor_minimality_check(2)["passed"]


@pytest.mark.parametrize("n", [0, 1])
def test_symmetry_consequences(n):
    spec = MIFamilySpec(n)
    m = mi_n(n)
    for op in (M.contract, M.delete):
        outer = {is_weakly_orientable(op(m, e)).weakly_orientable for e in spec.X | spec.Y | spec.Z}
        inner = {is_weakly_orientable(op(m, e)).weakly_orientable for e in (0, 1, 2)}
        assert len(outer) == 1 and len(inner) == 1
