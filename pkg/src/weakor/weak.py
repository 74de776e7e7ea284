"""Weak orientability via the Bland-Jensen parity system over GF(2).

Variables ``a[e,X]`` (element e of circuit X) and ``b[e,Y]`` (element e of
cocircuit Y) encode signs, 0 for ``+`` and 1 for ``-``.  Each circuit/cocircuit
pair meeting in exactly ``{e, f}`` contributes the row

    a[e,X] + b[e,Y] + a[f,X] + b[f,Y] = 1.

The matroid is weakly orientable iff the system is feasible.  Both answers
carry evidence that is checked before it is returned.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .linalg import GF2Eliminator, PrimeFieldMatrix
from .matroid import CircuitSystem, Matroid, elements_of, mask_of


class InvalidFredholmVector(ValueError):
    pass


class NotASolution(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class BJVariable(NamedTuple):
    kind: str  # "a" for circuits, "b" for cocircuits
    element: int
    index: int

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.element}_{self.index}"


@dataclass(eq=False)
class BlandJensenSystem:
    """The GF(2) parity system of a matroid, with row and column provenance."""

    circuits: CircuitSystem
    variables: list[BJVariable]
    row_pairs: list[tuple[int, int]]
    row_vars: list[tuple[int, int, int, int]]

    @cached_property
    def index(self) -> dict[BJVariable, int]:
        return {v: k for k, v in enumerate(self.variables)}

    @property
    def num_rows(self) -> int:
        return len(self.row_pairs)

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    @property
    def rhs(self) -> list[int]:
        return [1] * len(self.row_pairs)

    @cached_property
    def packed_rows(self) -> list[int]:
        return [(1 << a) | (1 << b) | (1 << c) | (1 << d) for a, b, c, d in self.row_vars]

    def matrix(self) -> PrimeFieldMatrix:
        return PrimeFieldMatrix.from_packed(self.packed_rows, self.num_vars)

    def is_solution(self, x: int | Sequence[int]) -> bool:
        xm = x if isinstance(x, int) else _pack(x)
        return all((r & xm).bit_count() & 1 for r in self.packed_rows)

    def rows_as_polynomials(self):
        """Rows as GF(2) polynomials ``a + b + a + b + 1`` (for certificate search)."""
        from .poly import Polynomial

        return [
            Polynomial.linear(2, {v: 1 for v in row}, 1) for row in self.row_vars
        ]


def _pack(bits: Iterable[int]) -> int:
    out = 0
    for k, v in enumerate(bits):
        if v & 1:
            out |= 1 << k
    return out


def bj_variables(cs: CircuitSystem) -> list[BJVariable]:
    out = [BJVariable("a", e, i) for i, c in enumerate(cs.circuits) for e in c]
    out += [BJVariable("b", e, j) for j, d in enumerate(cs.cocircuits) for e in d]
    return out


def build_bland_jensen(m: Matroid | CircuitSystem) -> BlandJensenSystem:
    cs = m if isinstance(m, CircuitSystem) else m.circuit_system
    variables = bj_variables(cs)
    # a-variables are contiguous per circuit in element order; same for b.
    a_start, b_start = [], []
    k = 0
    for c in cs.circuits:
        a_start.append(k)
        k += len(c)
    for d in cs.cocircuits:
        b_start.append(k)
        k += len(d)
    pairs = cs.pairs_with_intersection(2)
    row_vars = []
    for i, j in pairs:
        e, f = cs.intersection(i, j)
        ci, dj = cs.circuits[i], cs.cocircuits[j]
        row_vars.append(
            (
                a_start[i] + ci.index(e),
                b_start[j] + dj.index(e),
                a_start[i] + ci.index(f),
                b_start[j] + dj.index(f),
            )
        )
    return BlandJensenSystem(cs, variables, pairs, row_vars)


# -- certificates -----------------------------------------------------------

@dataclass(frozen=True)
class FredholmCertificate:
    """Support of y with y^T A = 0 and y^T b = 1 (row indices)."""

    support: tuple[int, ...]

    def vector(self, num_rows: int) -> list[int]:
        y = [0] * num_rows
        for i in self.support:
            y[i] = 1
        return y


@dataclass(frozen=True)
class OddListCertificate:
    """Odd-length list of (circuit index, cocircuit index) pairs, with repeats."""

    pairs: tuple[tuple[int, int], ...]

    def as_sets(self, cs: CircuitSystem) -> list[list[list[int]]]:
        return [[list(cs.circuits[i]), list(cs.cocircuits[j])] for i, j in self.pairs]


def check_fredholm(system: BlandJensenSystem, support: Iterable[int]) -> bool:
    support = list(support)
    parity = Counter()
    for k in support:
        if not 0 <= k < system.num_rows:
            return False
        for v in system.row_vars[k]:
            parity[v] ^= 1
    return len(support) % 2 == 1 and not any(parity.values())


def odd_list_certificate(system: BlandJensenSystem, y) -> OddListCertificate:
    """Turn a Fredholm vector (0/1 list or FredholmCertificate) into an odd list."""
    if isinstance(y, FredholmCertificate):
        support = list(y.support)
    else:
        if len(y) != system.num_rows:
            raise InvalidFredholmVector(f"y has length {len(y)}, expected {system.num_rows}")
        support = [k for k, v in enumerate(y) if v % 2]
    if not check_fredholm(system, support):
        raise InvalidFredholmVector("y^T A != 0 or y^T b != 1")
    return OddListCertificate(tuple(system.row_pairs[k] for k in support))


def verify_odd_list(m: Matroid | CircuitSystem, cert: OddListCertificate) -> bool:
    cs = m if isinstance(m, CircuitSystem) else m.circuit_system
    if len(cert.pairs) % 2 == 0:
        return False
    a_count: Counter = Counter()
    b_count: Counter = Counter()
    for i, j in cert.pairs:
        if not (0 <= i < len(cs.circuits) and 0 <= j < len(cs.cocircuits)):
            raise IndexOutOfRange(f"pair ({i}, {j}) out of range")
        meet = cs.circuit_masks[i] & cs.cocircuit_masks[j]
        if meet.bit_count() != 2:
            return False
        for e in elements_of(meet):
            a_count[(i, e)] += 1
            b_count[(j, e)] += 1
    return all(c % 2 == 0 for c in a_count.values()) and all(
        c % 2 == 0 for c in b_count.values()
    )


def pairs_from_sets(cs: CircuitSystem, pairs) -> OddListCertificate:
    """Map (circuit set, cocircuit set) pairs to indices in ``cs``."""
    cidx = {frozenset(c): i for i, c in enumerate(cs.circuits)}
    didx = {frozenset(d): j for j, d in enumerate(cs.cocircuits)}
    out = []
    for x, y in pairs:
        try:
            out.append((cidx[frozenset(x)], didx[frozenset(y)]))
        except KeyError as exc:
            raise IndexOutOfRange(f"{sorted(x)} / {sorted(y)} is not a circuit/cocircuit pair") from exc
    return OddListCertificate(tuple(out))


# -- deciding ---------------------------------------------------------------

@dataclass
class WeakOrientationFamily:
    """All solutions: ``particular + span(nullspace_basis)`` over GF(2)."""

    system: BlandJensenSystem
    particular: int
    dimension: int
    _eliminator: GF2Eliminator = field(repr=False)

    @cached_property
    def nullspace_basis(self) -> list[int]:
        return self._eliminator.nullspace_basis()

    def particular_bits(self) -> list[int]:
        return [(self.particular >> k) & 1 for k in range(self.system.num_vars)]

    def member(self, coeffs: Iterable[int]) -> int:
        x = self.particular
        for c, v in zip(coeffs, self.nullspace_basis):
            if c & 1:
                x ^= v
        return x


@dataclass
class WeakResult:
    weakly_orientable: bool
    system: BlandJensenSystem
    family: WeakOrientationFamily | None = None
    fredholm: FredholmCertificate | None = None
    odd_list: OddListCertificate | None = None
    verified: bool = False

    def __bool__(self):
        return self.weakly_orientable


def _processing_order(system: BlandJensenSystem) -> list[int]:
    # Small circuits and cocircuits first: short odd lists tend to live there,
    # which lets infeasible systems stop early.
    cm = system.circuits.circuit_masks
    dm = system.circuits.cocircuit_masks
    return sorted(
        range(system.num_rows),
        key=lambda k: (
            cm[system.row_pairs[k][0]].bit_count() + dm[system.row_pairs[k][1]].bit_count(),
            k,
        ),
    )


def is_weakly_orientable(m: Matroid | BlandJensenSystem) -> WeakResult:
    system = m if isinstance(m, BlandJensenSystem) else build_bland_jensen(m)
    elim = GF2Eliminator(system.num_vars)
    order = _processing_order(system)
    rows = system.packed_rows
    for k in order:
        comb = elim.add_row(rows[k], 1)
        if comb is not None:
            support = tuple(sorted(order[t] for t in _bit_positions(comb)))
            cert = FredholmCertificate(support)
            odd = odd_list_certificate(system, cert)
            ok = check_fredholm(system, support) and verify_odd_list(system.circuits, odd)
            return WeakResult(False, system, fredholm=cert, odd_list=odd, verified=ok)
    x = elim.particular()
    family = WeakOrientationFamily(system, x, system.num_vars - elim.rank, elim)
    return WeakResult(True, system, family=family, verified=system.is_solution(x))


def _bit_positions(v: int) -> list[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


# -- sigma mappings ---------------------------------------------------------

@dataclass(frozen=True)
class SigmaMapping:
    """Signs on circuit and cocircuit incidences: +1, -1, or 0 off the set."""

    circuit_signs: dict
    cocircuit_signs: dict

    def circuit(self, e: int, i: int) -> int:
        return self.circuit_signs.get((e, i), 0)

    def cocircuit(self, e: int, j: int) -> int:
        return self.cocircuit_signs.get((e, j), 0)


def pair_is_orthogonal(sigma: SigmaMapping, cs: CircuitSystem, i: int, j: int) -> bool:
    prods = [sigma.circuit(e, i) * sigma.cocircuit(e, j) for e in cs.intersection(i, j)]
    return any(p > 0 for p in prods) == any(p < 0 for p in prods)


def check_sigma(sigma: SigmaMapping, cs: CircuitSystem, sizes=(2,)) -> bool:
    for i, c in enumerate(cs.circuits):
        cset = set(c)
        for e in range(cs.n):
            if (sigma.circuit(e, i) != 0) != (e in cset):
                return False
    for j, d in enumerate(cs.cocircuits):
        dset = set(d)
        for e in range(cs.n):
            if (sigma.cocircuit(e, j) != 0) != (e in dset):
                return False
    for k in sizes:
        for i, j in cs.pairs_with_intersection(k):
            if not pair_is_orthogonal(sigma, cs, i, j):
                return False
    return True


def sigma_from_assignment(variables: Sequence[BJVariable], bits: Sequence[int]) -> SigmaMapping:
    circ, cocirc = {}, {}
    for v, x in zip(variables, bits):
        sign = -1 if x & 1 else 1
        (circ if v.kind == "a" else cocirc)[(v.element, v.index)] = sign
    return SigmaMapping(circ, cocirc)


def sigma_from_solution(system: BlandJensenSystem, x: int | Sequence[int]) -> SigmaMapping:
    xm = x if isinstance(x, int) else _pack(x)
    if not system.is_solution(xm):
        raise NotASolution("assignment does not satisfy the Bland-Jensen system")
    bits = [(xm >> k) & 1 for k in range(system.num_vars)]
    sigma = sigma_from_assignment(system.variables, bits)
    if not check_sigma(sigma, system.circuits, sizes=(2,)):  # pragma: no cover
        raise NotASolution("derived sign map is not orthogonal on 2-intersections")
    return sigma


# -- the four-element pattern ----------------------------------------------

@dataclass(frozen=True)
class Syst1Witness:
    """Circuits and cocircuits (by index) realising the four-element pattern.

    ``a_sets[i]`` are A_1..A_3, ``b_sets[j]`` are B_1..B_3; ``cocircuits_a[i]``
    is C*_{A_i}, ``circuits_b[j]`` is C_{B_j}, ``circuit_a4`` is C_{A_4}.
    """

    F: tuple[int, ...]
    a4: tuple[int, ...]
    a_sets: tuple[tuple[int, ...], ...]
    b_sets: tuple[tuple[int, ...], ...]
    circuit_a4: int
    circuits_b: tuple[int, ...]
    cocircuits_a: tuple[int, ...]

    def odd_list(self) -> OddListCertificate:
        pairs = [(self.circuit_a4, y) for y in self.cocircuits_a]
        for j, bset in enumerate(self.b_sets):
            for i, aset in enumerate(self.a_sets):
                if set(bset) <= set(aset):
                    pairs.append((self.circuits_b[j], self.cocircuits_a[i]))
        return OddListCertificate(tuple(pairs))


def check_syst1(cs: CircuitSystem, w: Syst1Witness) -> bool:
    cm, dm = cs.circuit_masks, cs.cocircuit_masks
    a4 = mask_of(w.a4)
    for i, aset in enumerate(w.a_sets):
        am = mask_of(aset)
        y = dm[w.cocircuits_a[i]]
        if y & cm[w.circuit_a4] != am & a4:
            return False
        for j, bset in enumerate(w.b_sets):
            bm = mask_of(bset)
            if bm & ~am == 0 and y & cm[w.circuits_b[j]] != bm:
                return False
    return True


def _syst1_layout(F: tuple[int, ...], a4: tuple[int, ...]):
    s = next(e for e in F if e not in a4)
    a_sets = tuple(tuple(sorted((s,) + pair)) for pair in combinations(a4, 2))
    # Order A_i so that A_i is the 3-set missing a4[i]... kept in pair order.
    b_sets = tuple(tuple(sorted((s, t))) for t in a4)
    return a_sets, b_sets


def syst1_witness(m: Matroid | CircuitSystem, F: Sequence[int] | None = None) -> Syst1Witness | None:
    """First four-element pattern witness in canonical order, or None.

    Iterates over 4-sets F (lexicographic, or only ``F`` if given), the choice
    of A_4 among the 3-subsets of F, then circuit and cocircuit indices.
    """
    cs = m if isinstance(m, CircuitSystem) else m.circuit_system
    cm, dm = cs.circuit_masks, cs.cocircuit_masks
    candidates = [tuple(sorted(F))] if F is not None else list(combinations(range(cs.n), 4))
    for Fset in candidates:
        fmask = mask_of(Fset)
        by_trace: dict[int, list[int]] = {}
        for j, d in enumerate(dm):
            by_trace.setdefault(d & fmask, []).append(j)
        for a4 in combinations(Fset, 3):
            w = _search_pattern(cs, Fset, a4, by_trace)
            if w is not None:
                return w
    return None


def _search_pattern(cs, Fset, a4, by_trace):
    cm, dm = cs.circuit_masks, cs.cocircuit_masks
    a_sets, b_sets = _syst1_layout(Fset, a4)
    a4m = mask_of(a4)
    amasks = [mask_of(a) for a in a_sets]
    bmasks = [mask_of(b) for b in b_sets]
    # Which B_j lie in which A_i.
    inside = [[j for j, bm in enumerate(bmasks) if bm & ~am == 0] for am in amasks]
    # Circuits containing each B_j.
    holders = [[i for i, c in enumerate(cm) if c & bm == bm] for bm in bmasks]
    for x4, xm in enumerate(cm):
        if xm & a4m != a4m:
            continue
        ys = []
        for am in amasks:
            opts = [j for j in by_trace.get(am, ()) if dm[j] & xm == am & a4m]
            if not opts:
                break
            ys.append(opts)
        else:
            found = _choose_cocircuits(cs, ys, inside, bmasks, holders)
            if found is not None:
                ysel, bsel = found
                return Syst1Witness(
                    tuple(Fset), tuple(a4), a_sets, b_sets, x4, tuple(bsel), tuple(ysel)
                )
    return None


def _choose_cocircuits(cs, ys, inside, bmasks, holders):
    cm, dm = cs.circuit_masks, cs.cocircuit_masks
    owners = [[i for i in range(3) if j in inside[i]] for j in range(len(bmasks))]
    full = [(1 << len(h)) - 1 for h in holders]
    compat: dict[tuple[int, int], int] = {}

    def fits(j, y):
        # bitset over holders[j] of circuits meeting cocircuit y exactly in B_j
        key = (j, y)
        if key not in compat:
            ym, bm = dm[y], bmasks[j]
            compat[key] = sum(1 << k for k, c in enumerate(holders[j]) if cm[c] & ym == bm)
        return compat[key]

    def circuit_for(j, chosen):
        bits = full[j]
        for i in owners[j]:
            bits &= fits(j, chosen[i])
            if not bits:
                return None
        return holders[j][(bits & -bits).bit_length() - 1]

    def rec(i, chosen):
        if i == 3:
            bsel = []
            for j in range(len(bmasks)):
                c = circuit_for(j, chosen)
                if c is None:
                    return None
                bsel.append(c)
            return list(chosen), bsel
        for y in ys[i]:
            chosen.append(y)
            ok = True
            # B_j whose owners are all chosen can be checked now.
            for j in range(len(bmasks)):
                if max(owners[j]) == i and circuit_for(j, chosen) is None:
                    ok = False
                    break
            if ok:
                got = rec(i + 1, chosen)
                if got is not None:
                    return got
            chosen.pop()
        return None

    return rec(0, [])


def minor_row_embedding(m: Matroid, e: int, op: str) -> list[int]:
    """Row of build_bland_jensen(m) matching each row of the minor's system.

    ``op`` is ``"delete"`` or ``"contract"``.  Minor elements are relabelled
    down past e; each minor circuit X (deletion) is a circuit of m and each
    minor cocircuit is D - e for a cocircuit D of m, so a row (X, D - e) is
    the row (X, D) of m with the same two-element meet.  Contraction is the
    dual picture.  Raises ValueError when some row has no image.
    """
    from .matroid import contract, delete

    minor = delete(m, e) if op == "delete" else contract(m, e)
    up = lambda mask: ((mask >> e) << (e + 1)) | (mask & ((1 << e) - 1))  # noqa: E731
    big = build_bland_jensen(m)
    small = build_bland_jensen(minor)
    cs, mcs = m.circuit_system, minor.circuit_system
    row_of = {pair: k for k, pair in enumerate(big.row_pairs)}
    cidx = {c: i for i, c in enumerate(cs.circuit_masks)}
    didx = {d: j for j, d in enumerate(cs.cocircuit_masks)}
    bit = 1 << e
    out = []
    for i, j in small.row_pairs:
        x, y = up(mcs.circuit_masks[i]), up(mcs.cocircuit_masks[j])
        xs = [x] if op == "delete" else [x, x | bit]
        ys = [y, y | bit] if op == "delete" else [y]
        found = None
        for xx in xs:
            for yy in ys:
                if xx in cidx and yy in didx and (cidx[xx], didx[yy]) in row_of:
                    if (xx & yy) == (x & y):
                        found = row_of[(cidx[xx], didx[yy])]
                        break
            if found is not None:
                break
        if found is None:
            raise ValueError(f"row {(i, j)} of the minor has no image")
        out.append(found)
    return out
