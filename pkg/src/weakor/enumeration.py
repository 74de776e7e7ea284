"""Exhaustive enumeration of labeled matroids on at most six elements."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .families import SizeOverBudget
from .matroid import Matroid, check_exchange, mask_of

MAX_N = 6


def _triples_by_stage(subsets: list[int]):
    """Exchange obligations (A, B, candidates) keyed by the last subset they mention.

    For A != B and alpha in A - B, one of A - alpha + beta (beta in B - A)
    must be a basis.  The obligation can be judged once every subset it
    mentions has been decided.
    """
    index = {s: k for k, s in enumerate(subsets)}
    stages: list[list[tuple[int, int, tuple[int, ...]]]] = [[] for _ in subsets]
    for ia, a in enumerate(subsets):
        for ib, b in enumerate(subsets):
            if ia == ib:
                continue
            for alpha in _bits(a & ~b):
                cands = tuple(index[(a & ~(1 << alpha)) | (1 << beta)] for beta in _bits(b & ~a))
                last = max((ia, ib) + cands)
                stages[last].append((ia, ib, cands))
    return stages


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def enumerate_small(n: int, r: int) -> list[Matroid]:
    """All labeled matroids of rank r on {0..n-1}, by pruned backtracking.

    Subsets are decided one at a time (lex order of element tuples); after
    each decision every exchange obligation whose subsets are all decided is
    checked, and the branch is cut on the first failure.
    """
    if n > MAX_N:
        raise SizeOverBudget(f"enumeration is capped at n={MAX_N}")
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")
    subsets = [mask_of(s) for s in combinations(range(n), r)]
    stages = _triples_by_stage(subsets)
    chosen = [False] * len(subsets)
    out: list[Matroid] = []

    def ok(k):
        for ia, ib, cands in stages[k]:
            if chosen[ia] and chosen[ib] and not any(chosen[c] for c in cands):
                return False
        return True

    def rec(k):
        if k == len(subsets):
            masks = [s for s, c in zip(subsets, chosen) if c]
            if masks:
                out.append(Matroid(n, r, masks))
            return
        for pick in (False, True):
            chosen[k] = pick
            if ok(k):
                rec(k + 1)
        chosen[k] = False

    rec(0)
    return out


def enumerate_all(n: int) -> list[Matroid]:
    out = []
    for r in range(n + 1):
        out.extend(enumerate_small(n, r))
    return out


def enumerate_brute_force(n: int, r: int, max_subsets: int = 16) -> list[frozenset]:
    """Unpruned filter over every family of r-subsets (reference oracle).

    Tests all 2^C(n,r) families with a vectorised exchange check; returns
    basis-mask sets.  Only for C(n,r) <= ``max_subsets``.
    """
    subsets = [mask_of(s) for s in combinations(range(n), r)]
    k = len(subsets)
    if k > max_subsets:
        raise SizeOverBudget(f"{k} subsets exceed the brute-force cap {max_subsets}")
    fams = np.arange(1, 1 << k, dtype=np.int64)
    good = np.ones(len(fams), dtype=bool)
    index = {s: i for i, s in enumerate(subsets)}
    member = [(fams >> i) & 1 == 1 for i in range(k)]
    for ia, a in enumerate(subsets):
        for ib, b in enumerate(subsets):
            if ia == ib:
                continue
            for alpha in _bits(a & ~b):
                hit = np.zeros(len(fams), dtype=bool)
                for beta in _bits(b & ~a):
                    hit |= member[index[(a & ~(1 << alpha)) | (1 << beta)]]
                good &= ~(member[ia] & member[ib] & ~hit)
    out = []
    for f in fams[good]:
        out.append(frozenset(s for i, s in enumerate(subsets) if (int(f) >> i) & 1))
    return out


def is_valid_family(n: int, masks) -> bool:
    return bool(masks) and check_exchange(n, masks) is None


def rank3_paving(n: int, lines) -> Matroid:
    """Rank-3 matroid whose non-bases are the given 3-point lines.

    Lines must pairwise share at most one point.
    """
    from .matroid import from_nonbases

    lines = [tuple(sorted(l)) for l in lines]
    for a, b in combinations(lines, 2):
        if len(set(a) & set(b)) > 1:
            raise ValueError(f"lines {a} and {b} share two points")
    return from_nonbases(n, 3, lines)


def random_rank3_paving(n: int, rng) -> Matroid:
    """A rank-3 paving matroid on n points from a random maximal-or-less set of lines."""
    triples = list(combinations(range(n), 3))
    rng.shuffle(triples)
    want = rng.randint(0, len(triples))
    lines: list[tuple[int, ...]] = []
    for t in triples:
        if len(lines) >= want:
            break
        if all(len(set(t) & set(l)) <= 1 for l in lines):
            lines.append(t)
    return rank3_paving(n, lines)
