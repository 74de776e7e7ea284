import random

import pytest

from weakor import matroid as M
from weakor.enumeration import (
    enumerate_all,
    enumerate_brute_force,
    enumerate_small,
    is_valid_family,
    random_rank3_paving,
    rank3_paving,
)
from weakor.families import SizeOverBudget


def test_n_one():
    ms = enumerate_all(1)
    assert len(ms) == 2
    assert sorted((m.r, len(m.bases)) for m in ms) == [(0, 1), (1, 1)]


@pytest.mark.parametrize("n", range(5))
def test_agrees_with_unpruned_filter(n):
    for r in range(n + 1):
        got = {frozenset(m.basis_masks) for m in enumerate_small(n, r)}
        assert got == set(enumerate_brute_force(n, r))


def test_counts_up_to_five():
    assert [len(enumerate_all(n)) for n in range(6)] == [1, 2, 5, 16, 68, 406]


def test_outputs_validate():
    for m in enumerate_small(5, 2):
        assert is_valid_family(m.n, m.basis_masks)
        M.from_bases(m.n, m.r, m.bases)


def test_budget():
    with pytest.raises(SizeOverBudget):
        enumerate_small(7, 3)
    with pytest.raises(SizeOverBudget):
        enumerate_brute_force(6, 3)
    with pytest.raises(ValueError):
        enumerate_small(3, 4)


def test_paving(fano):
    lines = [(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 3, 6), (0, 5, 6), (1, 4, 6), (2, 4, 5)]
    assert set(rank3_paving(7, lines).basis_masks) == set(fano.basis_masks)
    with pytest.raises(ValueError):
        rank3_paving(5, [(0, 1, 2), (0, 1, 3)])
    rng = random.Random(1)
    for _ in range(20):
        m = random_rank3_paving(7, rng)
        assert m.r == 3 and M.check_exchange(7, m.basis_masks) is None
