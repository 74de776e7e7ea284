"""Exact linear algebra over prime fields.

Two dense paths share one interface: a bit-packed GF(2) path (each row is a
Python int, elimination is word-wide XOR) and a generic numpy path for any
prime.  ``GF2Eliminator`` is an online variant for very large sparse GF(2)
systems whose rows arrive one at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class LinalgError(ValueError):
    pass


class DimensionMismatch(LinalgError):
    pass


class NonPrimeModulus(LinalgError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _inv(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


class PrimeFieldMatrix:
    """Dense matrix over F_p with entries reduced into ``[0, p)``."""

    def __init__(self, entries, p: int = 2):
        if not is_prime(p):
            raise NonPrimeModulus(f"{p} is not prime")
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionMismatch("entries must be two-dimensional")
        self.p = p
        self.entries = np.mod(arr, p)
        self.entries.flags.writeable = False

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = 2) -> "PrimeFieldMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, size: int, p: int = 2) -> "PrimeFieldMatrix":
        return cls(np.eye(size, dtype=np.int64), p)

    @classmethod
    def from_packed(cls, rows: Sequence[int], cols: int) -> "PrimeFieldMatrix":
        arr = np.zeros((len(rows), cols), dtype=np.int64)
        for i, r in enumerate(rows):
            for j in _bits(r):
                arr[i, j] = 1
        return cls(arr, 2)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def packed_rows(self) -> list[int]:
        """Rows as ints, bit ``j`` holding column ``j`` (p = 2 only)."""
        if self.p != 2:
            raise LinalgError("bit packing is only defined over F_2")
        weights = [1 << j for j in range(self.cols)]
        out = []
        for row in self.entries:
            v = 0
            for j in np.flatnonzero(row):
                v |= weights[j]
            out.append(v)
        return out

    def matvec(self, x: Sequence[int]) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if x.shape != (self.cols,):
            raise DimensionMismatch(f"vector of length {x.shape} vs {self.cols} columns")
        return (self.entries @ x) % self.p

    def rmatvec(self, y: Sequence[int]) -> np.ndarray:
        y = np.asarray(y, dtype=np.int64)
        if y.shape != (self.rows,):
            raise DimensionMismatch(f"vector of length {y.shape} vs {self.rows} rows")
        return (y @ self.entries) % self.p

    def transpose(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.entries.T, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, PrimeFieldMatrix)
            and self.p == other.p
            and self.shape == other.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __repr__(self):
        return f"PrimeFieldMatrix({self.rows}x{self.cols} over F_{self.p})"


@dataclass(frozen=True)
class Feasible:
    particular: tuple[int, ...]
    nullspace_basis: tuple[tuple[int, ...], ...]

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    certificate: tuple[int, ...]

    feasible = False


SolveOutcome = Feasible | Infeasible


# -- GF(2), bit packed ------------------------------------------------------

def _bits(v: int):
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def _gf2_rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Gauss-Jordan on packed rows; returns (reduced nonzero rows, pivot columns).

    Pivots are taken as the first nonzero column, in column order.  Bits at
    positions >= ncols ride along (augmented columns) but are never pivots.
    """
    work = list(rows)
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        bit = 1 << col
        sel = None
        for i in range(rank, len(work)):
            if work[i] & bit:
                sel = i
                break
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        prow = work[rank]
        for i in range(len(work)):
            if i != rank and work[i] & bit:
                work[i] ^= prow
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work[:rank] + [r for r in work[rank:] if r], pivots


def _gf2_feasible_part(rows: list[int], rhs: list[int], ncols: int):
    """Particular solution and null basis, or None when inconsistent."""
    aug = [r | (b & 1) << ncols for r, b in zip(rows, rhs)]
    red, pivots = _gf2_rref(aug, ncols)
    rbit = 1 << ncols
    colmask = rbit - 1
    for r in red[len(pivots):]:
        if r & rbit and not r & colmask:
            return None
    x = [0] * ncols
    for r, c in zip(red, pivots):
        x[c] = 1 if r & rbit else 0
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [0] * ncols
        v[f] = 1
        fb = 1 << f
        for r, c in zip(red, pivots):
            if r & fb:
                v[c] = 1
        basis.append(tuple(v))
    return tuple(x), tuple(basis)


def solve_gf2_packed(rows: Sequence[int], ncols: int, rhs: Sequence[int]) -> SolveOutcome:
    rows = list(rows)
    rhs = [int(b) & 1 for b in rhs]
    if len(rows) != len(rhs):
        raise DimensionMismatch(f"{len(rows)} rows but rhs of length {len(rhs)}")
    got = _gf2_feasible_part(rows, rhs, ncols)
    if got is not None:
        return Feasible(*got)
    # Fredholm: solve A^T y = 0, b^T y = 1.
    m = len(rows)
    trows = [0] * (ncols + 1)
    for i, r in enumerate(rows):
        bit = 1 << i
        for j in _bits(r):
            trows[j] |= bit
        if rhs[i]:
            trows[ncols] |= bit
    got = _gf2_feasible_part(trows, [0] * ncols + [1], m)
    if got is None:  # pragma: no cover - excluded by the Fredholm alternative
        raise LinalgError("neither the system nor its Fredholm system is solvable")
    return Infeasible(got[0])


# -- generic prime field (numpy) -------------------------------------------

def _modp_rref(M: np.ndarray, p: int, ncols: int) -> tuple[np.ndarray, list[int]]:
    A = M.copy() % p
    rows = A.shape[0]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        if rank == rows:
            break
        nz = np.flatnonzero(A[rank:, col])
        if nz.size == 0:
            continue
        sel = rank + int(nz[0])
        if sel != rank:
            A[[rank, sel]] = A[[sel, rank]]
        A[rank] = (A[rank] * _inv(A[rank, col], p)) % p
        factors = A[:, col].copy()
        factors[rank] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            A[hit] = (A[hit] - np.outer(factors[hit], A[rank])) % p
        pivots.append(col)
        rank += 1
    return A, pivots


def _modp_feasible_part(A: np.ndarray, b: np.ndarray, p: int):
    m, n = A.shape
    aug = np.concatenate([A, b.reshape(m, 1)], axis=1)
    red, pivots = _modp_rref(aug, p, n)
    rank = len(pivots)
    if rank < m and np.any(red[rank:, n] % p):
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = red[i, n]
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-red[i, f]) % p
        basis.append(tuple(int(t) for t in v))
    return tuple(int(t) for t in x), tuple(basis)


def solve_generic(A: PrimeFieldMatrix, b: Sequence[int]) -> SolveOutcome:
    p = A.p
    bv = np.mod(np.asarray(b, dtype=np.int64), p)
    if bv.shape != (A.rows,):
        raise DimensionMismatch(f"rhs of length {bv.shape} vs {A.rows} rows")
    got = _modp_feasible_part(A.entries, bv, p)
    if got is not None:
        return Feasible(*got)
    At = np.concatenate([A.entries.T, bv.reshape(1, -1)], axis=0)
    target = np.zeros(A.cols + 1, dtype=np.int64)
    target[-1] = 1
    got = _modp_feasible_part(At, target, p)
    if got is None:  # pragma: no cover
        raise LinalgError("neither the system nor its Fredholm system is solvable")
    return Infeasible(got[0])


# -- public entry points ----------------------------------------------------

def verify_outcome(A: PrimeFieldMatrix, b: Sequence[int], outcome: SolveOutcome) -> bool:
    p = A.p
    bv = np.mod(np.asarray(b, dtype=np.int64), p)
    if isinstance(outcome, Feasible):
        if A.cols == 0:
            return not np.any(bv)
        if not np.array_equal(A.matvec(outcome.particular), bv):
            return False
        for v in outcome.nullspace_basis:
            if np.any(A.matvec(v)):
                return False
        if outcome.nullspace_basis:
            N = PrimeFieldMatrix(outcome.nullspace_basis, p)
            if rank(N) != len(outcome.nullspace_basis):
                return False
        return len(outcome.nullspace_basis) == nullspace_dimension(A)
    y = np.asarray(outcome.certificate, dtype=np.int64)
    if y.shape != (A.rows,):
        return False
    if np.any(A.rmatvec(y)):
        return False
    yb = int(y @ bv) % p
    return yb == 1 if p == 2 else yb != 0


def solve(A: PrimeFieldMatrix, b: Sequence[int], packed: bool | None = None) -> SolveOutcome:
    """Solve ``A x = b`` over F_p, or return y with ``y^T A = 0, y^T b != 0``.

    For p = 2 the bit-packed path is used unless ``packed=False``.  Either
    outcome is checked against A and b before it is returned.
    """
    if len(b) != A.rows:
        raise DimensionMismatch(f"rhs of length {len(b)} vs {A.rows} rows")
    use_packed = A.p == 2 if packed is None else packed
    if use_packed:
        out = solve_gf2_packed(A.packed_rows(), A.cols, b)
    else:
        out = solve_generic(A, b)
    if not verify_outcome(A, b, out):  # pragma: no cover - defensive
        raise LinalgError("solve produced an outcome that fails verification")
    return out


def rref(A: PrimeFieldMatrix) -> PrimeFieldMatrix:
    if A.p == 2:
        red, _ = _gf2_rref(A.packed_rows(), A.cols)
        out = PrimeFieldMatrix.from_packed(red, A.cols)
        pad = A.rows - out.rows
        if pad:
            out = PrimeFieldMatrix(
                np.concatenate([out.entries, np.zeros((pad, A.cols), dtype=np.int64)]), 2
            )
        return out
    red, _ = _modp_rref(A.entries, A.p, A.cols)
    return PrimeFieldMatrix(red, A.p)


def rank(A: PrimeFieldMatrix) -> int:
    if A.p == 2:
        return len(_gf2_rref(A.packed_rows(), A.cols)[1])
    return len(_modp_rref(A.entries, A.p, A.cols)[1])


def nullspace_dimension(A: PrimeFieldMatrix) -> int:
    return A.cols - rank(A)


# -- online GF(2) elimination ----------------------------------------------

@dataclass
class GF2Eliminator:
    """Row-at-a-time echelon form over GF(2) that remembers row provenance.

    Each stored row keeps, as a second bitset, the set of input rows it was
    built from, so an inconsistency yields its Fredholm support directly.
    """

    ncols: int
    pivots: dict = field(default_factory=dict)
    rows_added: int = 0

    def add_row(self, bits: int, rhs: int) -> int | None:
        """Insert a row; returns the combination bitset if it proves 0 = 1."""
        rbit = 1 << self.ncols
        r = bits | (rbit if rhs & 1 else 0)
        comb = 1 << self.rows_added
        self.rows_added += 1
        pivots = self.pivots
        while r:
            low = r & -r
            if low == rbit:
                return comb
            c = low.bit_length() - 1
            p = pivots.get(c)
            if p is None:
                pivots[c] = (r, comb)
                return None
            r ^= p[0]
            comb ^= p[1]
        return None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def particular(self) -> int:
        """Back-substituted solution as a packed int (free variables zero)."""
        rbit = 1 << self.ncols
        x = 0
        for c in sorted(self.pivots, reverse=True):
            r = self.pivots[c][0]
            val = (1 if r & rbit else 0) ^ ((r & x).bit_count() & 1)
            if val:
                x |= 1 << c
        return x

    def nullspace_basis(self) -> list[int]:
        rbit = 1 << self.ncols
        order = sorted(self.pivots, reverse=True)
        out = []
        for f in range(self.ncols):
            if f in self.pivots:
                continue
            v = 1 << f
            for c in order:
                if c < f:
                    r = self.pivots[c][0] & ~rbit
                    if (r & v).bit_count() & 1:
                        v |= 1 << c
            out.append(v)
        return out


class SparseSpanSolver:
    """Decide whether a target vector lies in the span of sparse columns over F_p.

    Columns are dicts ``{row: coeff}`` and arrive one at a time.  Each is
    reduced against the stored echelon basis (pivot = smallest row index) and
    stored with the combination of input columns it came from.  The target is
    kept reduced alongside, so the solve stops as soon as it is reached.
    """

    def __init__(self, p: int, target: dict):
        if not is_prime(p):
            raise NonPrimeModulus(p)
        self.p = p
        self.basis: dict[int, tuple[dict, dict]] = {}
        self.columns_added = 0
        self.residual = {r: c % p for r, c in target.items() if c % p}
        self.residual_comb: dict = {}
        self._reduce(self.residual, self.residual_comb)

    def _reduce(self, vec: dict, comb: dict):
        p = self.p
        basis = self.basis
        while vec:
            r = min(vec)
            entry = basis.get(r)
            if entry is None:
                return r
            bvec, bcomb = entry
            f = vec[r] * _inv(bvec[r], p) % p
            for k, c in bvec.items():
                s = (vec.get(k, 0) - f * c) % p
                if s:
                    vec[k] = s
                else:
                    vec.pop(k, None)
            for k, c in bcomb.items():
                s = (comb.get(k, 0) - f * c) % p
                if s:
                    comb[k] = s
                else:
                    comb.pop(k, None)
        return None

    def add_column(self, col: dict) -> bool:
        """Insert a column; True once the target is in the span."""
        p = self.p
        vec = {r: c % p for r, c in col.items() if c % p}
        comb = {self.columns_added: 1}  # vec == base + sum comb[k] * column_k
        self.columns_added += 1
        piv = self._reduce(vec, comb)
        if piv is not None:
            self.basis[piv] = (vec, comb)
            if self.residual and min(self.residual) == piv:
                self._reduce(self.residual, self.residual_comb)
        return self.solved

    @property
    def solved(self) -> bool:
        return not self.residual

    @property
    def rank(self) -> int:
        return len(self.basis)

    def solution(self) -> dict:
        """Coefficients u with sum u_k column_k = target (sparse)."""
        if not self.solved:
            raise LinalgError("target not in span")
        p = self.p
        return {k: (-c) % p for k, c in self.residual_comb.items() if (-c) % p}
