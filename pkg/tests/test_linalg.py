import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from weakor.linalg import (
    DimensionMismatch,
    Feasible,
    GF2Eliminator,
    Infeasible,
    NonPrimeModulus,
    PrimeFieldMatrix,
    SparseSpanSolver,
    nullspace_dimension,
    rank,
    rref,
    solve,
    verify_outcome,
)


def systems(primes=(2, 3, 5)):
    @st.composite
    def build(draw):
        p = draw(st.sampled_from(primes))
        rows = draw(st.integers(1, 6))
        cols = draw(st.integers(1, 6))
        A = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols), min_size=rows, max_size=rows))
        b = draw(st.lists(st.integers(0, p - 1), min_size=rows, max_size=rows))
        return PrimeFieldMatrix(A, p), b

    return build()


def brute_feasible(A: PrimeFieldMatrix, b):
    p = A.p
    target = np.mod(np.asarray(b), p)
    for x in itertools.product(range(p), repeat=A.cols):
        if np.array_equal(A.matvec(x), target):
            return True
    return False


def test_small_gf2():
    A = PrimeFieldMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 2)
    out = solve(A, [1, 1, 1])
    assert isinstance(out, Infeasible)
    assert list(out.certificate) == [1, 1, 1]
    out = solve(A, [1, 1, 0])
    assert isinstance(out, Feasible) and len(out.nullspace_basis) == 1


def test_mod5():
    A = PrimeFieldMatrix([[1, 2, 3], [2, 4, 1]], 5)
    out = solve(A, [1, 2])
    assert out.feasible
    assert verify_outcome(A, [1, 2], out)


def test_errors():
    with pytest.raises(NonPrimeModulus):
        PrimeFieldMatrix([[1]], 4)
    with pytest.raises(DimensionMismatch):
        solve(PrimeFieldMatrix([[1, 0]], 2), [1, 1])


@given(systems())
def test_solve_matches_brute_force(sys_):
    A, b = sys_
    if A.cols > 4 and A.p > 2:
        return
    out = solve(A, b)
    assert verify_outcome(A, b, out)
    assert out.feasible == brute_feasible(A, b)


@given(systems(primes=(2,)))
def test_packed_and_generic_agree(sys_):
    A, b = sys_
    a = solve(A, b, packed=True)
    g = solve(A, b, packed=False)
    assert a.feasible == g.feasible
    if a.feasible:
        assert len(a.nullspace_basis) == len(g.nullspace_basis)


@given(systems())
def test_rank_nullity(sys_):
    A, _ = sys_
    assert rank(A) + nullspace_dimension(A) == A.cols
    R = rref(A)
    assert rank(R) == rank(A)


@given(systems(primes=(2,)))
def test_eliminator_agrees_with_solve(sys_):
    A, b = sys_
    elim = GF2Eliminator(A.cols)
    bad = None
    for row, rhs in zip(A.packed_rows(), b):
        got = elim.add_row(row, rhs)
        if got is not None and bad is None:
            bad = got
            break
    out = solve(A, b)
    assert (bad is None) == out.feasible
    if bad is None:
        x = elim.particular()
        xs = [(x >> k) & 1 for k in range(A.cols)]
        assert np.array_equal(A.matvec(xs), np.mod(b, 2))
        for v in elim.nullspace_basis():
            assert not np.any(A.matvec([(v >> k) & 1 for k in range(A.cols)]))
        assert len(elim.nullspace_basis()) == nullspace_dimension(A)
    else:
        y = [(bad >> k) & 1 for k in range(A.rows)]
        assert not np.any(A.rmatvec(y))
        assert sum(yi * bi for yi, bi in zip(y, b)) % 2 == 1


@given(systems())
def test_sparse_span_solver(sys_):
    A, b = sys_
    # columns of A as sparse dicts, target b
    solver = SparseSpanSolver(A.p, {k: v for k, v in enumerate(b)})
    for j in range(A.cols):
        solver.add_column({k: int(A.entries[k, j]) for k in range(A.rows) if A.entries[k, j]})
    assert solver.solved == solve(A, b).feasible
    if solver.solved:
        x = [0] * A.cols
        for k, c in solver.solution().items():
            x[k] = c
        assert np.array_equal(A.matvec(x), np.mod(b, A.p))
