"""Matroids given by their bases, with circuits, cocircuits, duals and minors.

Elements are the integers ``0..n-1``.  Subsets are handled internally as
integer bitmasks; the public surface returns sorted tuples.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


class MatroidError(ValueError):
    """Base class for invalid matroid input."""


class EmptyBases(MatroidError):
    pass


class MixedCardinality(MatroidError):
    pass


class ExchangeViolation(MatroidError):
    def __init__(self, a, b, alpha):
        self.a, self.b, self.alpha = tuple(a), tuple(b), alpha
        super().__init__(
            f"basis exchange fails for A={self.a}, B={self.b}, alpha={alpha}"
        )


class ElementOutOfRange(MatroidError):
    pass


def mask_of(subset: Iterable[int]) -> int:
    m = 0
    for e in subset:
        m |= 1 << e
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


@dataclass(frozen=True)
class SignedSubset:
    positive: frozenset
    negative: frozenset

    def __post_init__(self):
        if self.positive & self.negative:
            raise ValueError("positive and negative parts must be disjoint")

    @property
    def support(self) -> frozenset:
        return self.positive | self.negative

    def __neg__(self) -> "SignedSubset":
        return SignedSubset(self.negative, self.positive)

    def is_orthogonal_to(self, other: "SignedSubset") -> bool:
        agree = (self.positive & other.positive) | (self.negative & other.negative)
        disagree = (self.positive & other.negative) | (self.negative & other.positive)
        return bool(agree) == bool(disagree)


@dataclass(frozen=True)
class CircuitSystem:
    """Circuits and cocircuits of one matroid, in canonical order."""

    n: int
    r: int
    circuits: tuple[tuple[int, ...], ...]
    cocircuits: tuple[tuple[int, ...], ...]
    circuit_masks: tuple[int, ...] = field(repr=False, default=())
    cocircuit_masks: tuple[int, ...] = field(repr=False, default=())

    @classmethod
    def of(cls, matroid: "Matroid") -> "CircuitSystem":
        cs = matroid.circuits
        ds = matroid.cocircuits
        return cls(
            matroid.n,
            matroid.r,
            cs,
            ds,
            tuple(mask_of(c) for c in cs),
            tuple(mask_of(d) for d in ds),
        )

    def intersection(self, i: int, j: int) -> tuple[int, ...]:
        """Elements shared by circuit ``i`` and cocircuit ``j``."""
        return elements_of(self.circuit_masks[i] & self.cocircuit_masks[j])

    def intersection_sizes(self) -> np.ndarray:
        """Matrix of |X & Y|, circuits by rows, cocircuits by columns."""
        if self.n > 64:
            raise ValueError("bitmask kernels support at most 64 elements")
        cm = np.array(self.circuit_masks, dtype=np.uint64)
        dm = np.array(self.cocircuit_masks, dtype=np.uint64)
        out = np.empty((cm.size, dm.size), dtype=np.uint8)
        step = max(1, 4_000_000 // max(dm.size, 1))
        for lo in range(0, cm.size, step):
            block = np.bitwise_and(cm[lo : lo + step, None], dm[None, :])
            out[lo : lo + step] = np.bitwise_count(block)
        return out

    def pairs_with_intersection(self, k: int) -> list[tuple[int, int]]:
        """(circuit, cocircuit) index pairs meeting in exactly k elements, row-major."""
        if not self.circuit_masks or not self.cocircuit_masks:
            return []
        ii, jj = np.nonzero(self.intersection_sizes() == k)
        return list(zip(ii.tolist(), jj.tolist()))


class Matroid:
    """A matroid on ``{0..n-1}`` given by its bases.

    Instances are immutable; derived data (circuits, cocircuits) is cached.
    Use :func:`from_bases` to build a validated instance.
    """

    __slots__ = ("n", "r", "_basis_masks", "__dict__")

    def __init__(self, n: int, r: int, basis_masks: Iterable[int]):
        self.n = n
        self.r = r
        self._basis_masks = frozenset(basis_masks)

    # -- basic data -------------------------------------------------------
    @property
    def basis_masks(self) -> frozenset:
        return self._basis_masks

    @cached_property
    def bases(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(elements_of(b) for b in self._basis_masks))

    @property
    def ground_mask(self) -> int:
        return (1 << self.n) - 1

    def __eq__(self, other):
        if not isinstance(other, Matroid):
            return NotImplemented
        return (self.n, self.r, self._basis_masks) == (
            other.n,
            other.r,
            other._basis_masks,
        )

    def __hash__(self):
        return hash((self.n, self.r, self._basis_masks))

    def __repr__(self):
        return f"Matroid(n={self.n}, r={self.r}, bases={len(self._basis_masks)})"

    def is_basis(self, subset: Iterable[int] | int) -> bool:
        m = subset if isinstance(subset, int) else mask_of(subset)
        return m in self._basis_masks

    # -- independence ----------------------------------------------------
    @cached_property
    def _independent_masks(self) -> frozenset:
        # Downward closure of the basis family.
        seen = set(self._basis_masks)
        frontier = list(seen)
        while frontier:
            nxt = []
            for m in frontier:
                x = m
                while x:
                    low = x & -x
                    x ^= low
                    s = m ^ low
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
        return frozenset(seen)

    def is_independent(self, subset: Iterable[int] | int) -> bool:
        m = subset if isinstance(subset, int) else mask_of(subset)
        return m in self._independent_masks

    def rank_of(self, subset: Iterable[int] | int) -> int:
        m = subset if isinstance(subset, int) else mask_of(subset)
        return max((b & m).bit_count() for b in self._basis_masks)

    # -- circuits --------------------------------------------------------
    @cached_property
    def circuit_masks(self) -> tuple[int, ...]:
        return _fundamental_circuits(self.n, self._basis_masks)

    @cached_property
    def cocircuit_masks(self) -> tuple[int, ...]:
        full = self.ground_mask
        dual_bases = frozenset(full ^ b for b in self._basis_masks)
        return _fundamental_circuits(self.n, dual_bases)

    @property
    def circuits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(elements_of(m) for m in self.circuit_masks)

    @property
    def cocircuits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(elements_of(m) for m in self.cocircuit_masks)

    @cached_property
    def circuit_system(self) -> CircuitSystem:
        return CircuitSystem.of(self)

    # -- structure -------------------------------------------------------
    def loops(self) -> tuple[int, ...]:
        union = 0
        for b in self._basis_masks:
            union |= b
        return elements_of(self.ground_mask & ~union)

    def coloops(self) -> tuple[int, ...]:
        inter = self.ground_mask
        for b in self._basis_masks:
            inter &= b
        return elements_of(inter)


def _canonical(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(masks, key=lambda m: elements_of(m)))


def _fundamental_circuits(n: int, basis_masks: frozenset) -> tuple[int, ...]:
    """All circuits, as the fundamental circuits of every (basis, element) pair.

    Every circuit C arises this way: extend C - e to a basis B, then C is the
    unique circuit inside B + e.
    """
    found = set()
    full = (1 << n) - 1
    for b in basis_masks:
        outside = full & ~b
        while outside:
            low = outside & -outside
            outside ^= low
            circ = low
            x = b
            while x:
                f = x & -x
                x ^= f
                if (b ^ f | low) in basis_masks:
                    circ |= f
            found.add(circ)
    return _canonical(found)


def circuits_by_enumeration(matroid: Matroid) -> tuple[tuple[int, ...], ...]:
    """Circuits by scanning subsets in increasing size (reference method)."""
    out = []
    dependent_found: list[int] = []
    for k in range(1, matroid.r + 2):
        for combo in combinations(range(matroid.n), k):
            m = mask_of(combo)
            if matroid.is_independent(m):
                continue
            if any(d & m == d for d in dependent_found):
                continue
            dependent_found.append(m)
            out.append(combo)
    return tuple(sorted(out))


def check_exchange(n: int, basis_masks: Iterable[int]):
    """Return a violating (A, B, alpha) triple, or None if the axiom holds.

    Uses the equivalent local form: for every independent (r-1)-set S = A - alpha,
    the set ext(S) = {e : S + e is a basis} meets every basis.  A basis B
    missing ext(S) cannot complete the exchange for (A, B, alpha) with any
    alpha in ext(S).
    """
    family = frozenset(basis_masks)
    arr = np.fromiter(family, dtype=np.uint64, count=len(family))
    full = (1 << n) - 1
    seen = set()
    for a in family:
        x = a
        while x:
            alpha = x & -x
            x ^= alpha
            s = a ^ alpha
            if s in seen:
                continue
            seen.add(s)
            ext = 0
            y = full & ~s
            while y:
                e = y & -y
                y ^= e
                if s | e in family:
                    ext |= e
            hit = np.flatnonzero((arr & np.uint64(ext)) == 0)
            if hit.size:
                b = int(arr[hit[0]])
                return a, b, alpha.bit_length() - 1
    return None


def check_exchange_naive(n: int, basis_masks: Iterable[int]):
    """Direct pairwise check of the exchange axiom (reference method)."""
    family = frozenset(basis_masks)
    for a in family:
        for b in family:
            a_only = a & ~b
            b_only = b & ~a
            x = a_only
            while x:
                alpha = x & -x
                x ^= alpha
                y = b_only
                ok = False
                while y:
                    beta = y & -y
                    y ^= beta
                    if (a ^ alpha | beta) in family:
                        ok = True
                        break
                if not ok:
                    return a, b, alpha.bit_length() - 1
    return None


def from_bases(n: int, r: int, bases: Iterable[Iterable[int]], validate=True) -> Matroid:
    """Build a validated matroid from an explicit basis family."""
    if n < 0 or not 0 <= r <= n:
        raise MatroidError(f"need 0 <= r <= n, got n={n}, r={r}")
    masks = set()
    for basis in bases:
        basis = tuple(basis)
        for e in basis:
            if not 0 <= e < n:
                raise ElementOutOfRange(f"element {e} not in 0..{n - 1}")
        if len(set(basis)) != len(basis):
            raise MatroidError(f"repeated element in basis {basis}")
        if len(basis) != r:
            raise MixedCardinality(
                f"basis {tuple(sorted(basis))} has {len(basis)} elements, expected {r}"
            )
        masks.add(mask_of(basis))
    if not masks:
        raise EmptyBases("a matroid needs at least one basis")
    if validate:
        bad = check_exchange(n, masks)
        if bad is not None:
            a, b, alpha = bad
            raise ExchangeViolation(elements_of(a), elements_of(b), alpha)
    return Matroid(n, r, masks)


def uniform(r: int, n: int) -> Matroid:
    return Matroid(n, r, (mask_of(c) for c in combinations(range(n), r)))


def free(n: int) -> Matroid:
    return Matroid(n, n, [(1 << n) - 1])


FANO_NONBASES = ((0, 1, 2), (0, 5, 6), (2, 4, 5), (1, 4, 6), (2, 3, 6), (0, 3, 4), (1, 3, 5))


def fano() -> Matroid:
    """The Fano plane matroid F7, elements 0..6 (1..7 shifted down)."""
    nb = {mask_of(t) for t in FANO_NONBASES}
    return Matroid(7, 3, (m for m in map(mask_of, combinations(range(7), 3)) if m not in nb))


def from_nonbases(n: int, r: int, nonbases: Iterable[Iterable[int]], validate=True) -> Matroid:
    nb = {mask_of(t) for t in nonbases}
    bases = [c for c in combinations(range(n), r) if mask_of(c) not in nb]
    return from_bases(n, r, bases, validate=validate)


def dual(m: Matroid) -> Matroid:
    full = m.ground_mask
    return Matroid(m.n, m.n - m.r, (full ^ b for b in m.basis_masks))


def circuits(m: Matroid) -> tuple[tuple[int, ...], ...]:
    return m.circuits


def cocircuits(m: Matroid) -> tuple[tuple[int, ...], ...]:
    return m.cocircuits


def _drop(mask: int, e: int) -> int:
    """Remove element e and shift higher elements down by one."""
    low = mask & ((1 << e) - 1)
    high = mask >> (e + 1)
    return low | (high << e)


def _check_element(m: Matroid, e: int):
    if not 0 <= e < m.n:
        raise ElementOutOfRange(f"element {e} not in 0..{m.n - 1}")


def delete(m: Matroid, e: int) -> Matroid:
    """Deletion M \\ e, relabelled onto 0..n-2.  Deleting a coloop drops the rank."""
    _check_element(m, e)
    bit = 1 << e
    avoiding = [b for b in m.basis_masks if not b & bit]
    if avoiding:
        return Matroid(m.n - 1, m.r, (_drop(b, e) for b in avoiding))
    return Matroid(m.n - 1, m.r - 1, (_drop(b, e) for b in m.basis_masks))


def contract(m: Matroid, e: int) -> Matroid:
    """Contraction M / e, relabelled onto 0..n-2.  Contracting a loop deletes it."""
    _check_element(m, e)
    bit = 1 << e
    through = [b for b in m.basis_masks if b & bit]
    if not through:
        return Matroid(m.n - 1, m.r, (_drop(b, e) for b in m.basis_masks))
    return Matroid(m.n - 1, m.r - 1, (_drop(b, e) for b in through))


def relabel(m: Matroid, perm: Sequence[int]) -> Matroid:
    """Image of m under the element map ``e -> perm[e]``."""
    out = []
    for b in m.basis_masks:
        out.append(mask_of(perm[e] for e in elements_of(b)))
    return Matroid(m.n, m.r, out)


def is_simple(m: Matroid) -> bool:
    return all(c.bit_count() > 2 for c in m.circuit_masks)


def intersection_profile(m: Matroid) -> Counter:
    """Multiset of |X & Y| over all circuit/cocircuit pairs."""
    cs = m.circuit_system
    if not cs.circuit_masks or not cs.cocircuit_masks:
        return Counter()
    sizes, counts = np.unique(cs.intersection_sizes(), return_counts=True)
    return Counter({int(s): int(c) for s, c in zip(sizes, counts)})


def is_binary_by_intersections(m: Matroid) -> bool:
    return intersection_profile(m)[3] == 0
