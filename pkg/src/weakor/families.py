"""The MI_n family: rank n+3 matroids on 3n+7 elements extending the Fano plane.

Element labels are ``1, 2, 3, 4, x_0..x_n, y_0..y_n, z_0..z_n`` mapped in that
order onto ``0..3n+6``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .matroid import Matroid, MatroidError, check_exchange, contract, delete, mask_of

MAX_N = 4


class SizeOverBudget(MatroidError):
    pass


@dataclass(frozen=True)
class MIFamilySpec:
    n: int

    @property
    def size(self) -> int:
        return 3 * self.n + 7

    @property
    def rank(self) -> int:
        return self.n + 3

    def x(self, i: int) -> int:
        return 4 + i

    def y(self, i: int) -> int:
        return 5 + self.n + i

    def z(self, i: int) -> int:
        return 6 + 2 * self.n + i

    @property
    def X(self) -> frozenset:
        return frozenset(self.x(i) for i in range(self.n + 1))

    @property
    def Y(self) -> frozenset:
        return frozenset(self.y(i) for i in range(self.n + 1))

    @property
    def Z(self) -> frozenset:
        return frozenset(self.z(i) for i in range(self.n + 1))

    @property
    def H(self) -> tuple[frozenset, frozenset, frozenset]:
        return (
            frozenset({0}) | self.Y | self.Z,
            frozenset({1}) | self.X | self.Z,
            frozenset({2}) | self.X | self.Y,
        )

    @property
    def C(self) -> tuple[frozenset, frozenset, frozenset]:
        return (
            frozenset({0, 3}) | self.X,
            frozenset({1, 3}) | self.Y,
            frozenset({2, 3}) | self.Z,
        )

    def labels(self) -> list[str]:
        n = self.n
        return (
            ["1", "2", "3", "4"]
            + [f"x{i}" for i in range(n + 1)]
            + [f"y{i}" for i in range(n + 1)]
            + [f"z{i}" for i in range(n + 1)]
        )

    def index(self, label: str) -> int:
        return self.labels().index(label)


def mi_n(n: int, validate: bool = True) -> Matroid:
    """Build MI_n from its basis description and check the exchange axiom."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_N:
        raise SizeOverBudget(f"MI_{n} exceeds the desk-scale cap n <= {MAX_N}")
    spec = MIFamilySpec(n)
    forbidden = [mask_of(s) for s in spec.C + spec.H]
    triple = 0b111
    bases = []
    for combo in combinations(range(spec.size), spec.rank):
        m = mask_of(combo)
        if m & triple == triple:
            continue
        if any(m & ~f == 0 for f in forbidden):
            continue
        bases.append(m)
    if validate:
        bad = check_exchange(spec.size, bases)
        if bad is not None:
            raise MatroidError(f"MI_{n} basis family fails exchange at {bad}")
    return Matroid(spec.size, spec.rank, bases)


def verify_mi_nonweak(n: int, matroid: Matroid | None = None) -> dict:
    """Check MI_n is not weakly orientable by two independent routes.

    Returns a report with the Bland-Jensen verdict (and verified odd list) and
    the pattern witness at F = {1,2,3,4}.
    """
    from .weak import is_weakly_orientable, syst1_witness, verify_odd_list

    spec = MIFamilySpec(n)
    m = matroid if matroid is not None else mi_n(n)
    bj = is_weakly_orientable(m)
    report = {
        "n": n,
        "size": m.n,
        "rank": m.r,
        "bland_jensen_infeasible": not bj.weakly_orientable,
        "odd_list_verified": False,
        "odd_list_length": None,
        "witness": None,
        "witness_matches_construction": False,
    }
    if not bj.weakly_orientable:
        report["odd_list_verified"] = verify_odd_list(m, bj.odd_list)
        report["odd_list_length"] = len(bj.odd_list.pairs)
    w = syst1_witness(m, F=(0, 1, 2, 3))
    if w is not None:
        report["witness"] = w
        cs = m.circuit_system
        report["witness_matches_construction"] = (
            set(cs.circuits[w.circuit_a4]) == {0, 1, 2}
            and {frozenset(cs.circuits[i]) for i in w.circuits_b} == set(spec.C)
            and {frozenset(cs.cocircuits[i]) for i in w.cocircuits_a}
            == {frozenset(range(m.n)) - h for h in spec.H}
        )
    report["construction_witness_valid"] = _construction_witness_ok(spec, m)
    report["passed"] = (
        report["bland_jensen_infeasible"]
        and report["odd_list_verified"]
        and report["witness"] is not None
        and report["construction_witness_valid"]
    )
    return report


def construction_witness(spec: MIFamilySpec, m: Matroid):
    """The pattern witness read off the construction: A_4 = {1,2,3}, s = 4,
    C*_{A_i} the complements of the H_k and C_{B_j} the C_j (1-based labels).
    """
    from .weak import Syst1Witness, _syst1_layout

    cs = m.circuit_system
    ground = frozenset(range(m.n))
    circ = {frozenset(c): i for i, c in enumerate(cs.circuits)}
    coc = {frozenset(d): j for j, d in enumerate(cs.cocircuits)}
    a4 = (0, 1, 2)
    a_sets, b_sets = _syst1_layout((0, 1, 2, 3), a4)
    try:
        # H_k avoids exactly the A_i that misses element k
        cocircuits_a = tuple(
            coc[ground - spec.H[next(k for k in a4 if k not in aset)]] for aset in a_sets
        )
        circuits_b = tuple(circ[spec.C[bset[0]]] for bset in b_sets)
        circuit_a4 = circ[frozenset(a4)]
    except KeyError:
        return None
    return Syst1Witness((0, 1, 2, 3), a4, a_sets, b_sets, circuit_a4, circuits_b, cocircuits_a)


def _construction_witness_ok(spec: MIFamilySpec, m: Matroid) -> bool:
    from .weak import check_syst1, verify_odd_list

    w = construction_witness(spec, m)
    return w is not None and check_syst1(m.circuit_system, w) and verify_odd_list(m, w.odd_list())


def minor_minimality_check(n: int, matroid: Matroid | None = None) -> dict:
    """Weak orientability of the six single-element minors that suffice by symmetry."""
    from .weak import is_weakly_orientable

    spec = MIFamilySpec(n)
    m = matroid if matroid is not None else mi_n(n)
    minors = {}
    for label in (f"x{n}", "1", "4"):
        e = spec.index(label)
        for op, fn in (("/", contract), ("\\", delete)):
            minor = fn(m, e)
            res = is_weakly_orientable(minor)
            minors[f"MI_{n}{op}{{{label}}}"] = {
                "weakly_orientable": res.weakly_orientable,
                "family_dimension": res.family.dimension if res.family is not None else None,
                "verified": res.verified,
            }
    return {
        "n": n,
        "minors": minors,
        "passed": all(v["weakly_orientable"] and v["verified"] for v in minors.values()),
    }
