"""Orientability systems over F_2 and odd prime fields, and a search-based decider.

The variable table is shared with the Bland-Jensen system: a-variables per
(circuit, element), then b-variables per (cocircuit, element).  Over F_2 a
variable holds the sign as 0 (+) / 1 (-); over odd p it holds +1 / -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .matroid import CircuitSystem, Matroid
from .poly import Polynomial
from .weak import BJVariable, SigmaMapping, bj_variables, check_sigma, sigma_from_assignment


class EvenCharacteristic(ValueError):
    pass


class IncompleteAssignment(ValueError):
    pass


@dataclass(frozen=True)
class TaggedPolynomial:
    poly: Polynomial
    origin: str  # g, h, p, q or h'
    source: tuple


@dataclass
class OrientabilitySystem:
    p: int
    variables: list[BJVariable]
    polynomials: list[TaggedPolynomial]
    fixed: dict = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def polys(self) -> list[Polynomial]:
        return [t.poly for t in self.polynomials]

    def count(self, origin: str) -> int:
        return sum(1 for t in self.polynomials if t.origin == origin)

    def evaluate(self, assignment: Mapping[int, int] | Sequence[int]) -> bool:
        """True iff every polynomial vanishes at the (complete) assignment."""
        if not isinstance(assignment, Mapping):
            assignment = dict(enumerate(assignment))
        needed = set()
        for t in self.polynomials:
            needed |= t.poly.variables()
        missing = needed - set(assignment)
        if missing:
            raise IncompleteAssignment(f"{len(missing)} variables unassigned")
        return all(t.poly.evaluate(assignment) == 0 for t in self.polynomials)

    def with_fixings(self, fixed_vars: Iterable[int]) -> "OrientabilitySystem":
        """Substitute the + sign for the given variables; drop vanished polynomials."""
        plus = 0 if self.p == 2 else 1
        values = {v: plus for v in fixed_vars}
        polys = []
        for t in self.polynomials:
            q = t.poly.substitute(values)
            if not q.is_zero():
                polys.append(TaggedPolynomial(q, t.origin, t.source))
        return OrientabilitySystem(self.p, self.variables, polys, {**self.fixed, **values})

    def to_text(self) -> str:
        names = self.names
        lines = [f"# p {self.p}", f"# polynomials {len(self.polynomials)}"]
        for t in self.polynomials:
            lines.append(t.poly.to_text(names))
        return "\n".join(lines) + "\n"


def _circuits(m) -> CircuitSystem:
    return m if isinstance(m, CircuitSystem) else m.circuit_system


def _var_tables(cs: CircuitSystem):
    variables = bj_variables(cs)
    idx = {v: k for k, v in enumerate(variables)}
    return variables, idx


def _g_linear(p, idx, i, j, e, f):
    return Polynomial.linear(
        p,
        {
            idx[BJVariable("a", e, i)]: 1,
            idx[BJVariable("b", e, j)]: 1,
            idx[BJVariable("a", f, i)]: 1,
            idx[BJVariable("b", f, j)]: 1,
        },
        1,
    )


def h_f2(idx, i, j, e, f, g) -> Polynomial:
    """The degree-two F_2 polynomial for a 3-element intersection, term by term."""
    a = {x: idx[BJVariable("a", x, i)] for x in (e, f, g)}
    b = {x: idx[BJVariable("b", x, j)] for x in (e, f, g)}
    lin = [a[e], b[e], a[f], b[f], a[g], b[g]]
    quad = [
        (a[e], a[f]), (a[e], a[g]), (a[e], b[f]), (a[e], b[g]), (a[f], a[g]),
        (a[f], b[e]), (a[f], b[g]), (a[g], b[e]), (a[g], b[f]),
        (b[e], b[f]), (b[e], b[g]), (b[f], b[g]),
    ]
    out = Polynomial.const(2, 1)
    for v in lin:
        out = out + Polynomial.var(2, v)
    for u, v in quad:
        out = out + Polynomial.monomial(2, (u, v))
    return out


def h_factors(idx, i, j, e, f, g) -> tuple[Polynomial, Polynomial, Polynomial]:
    return (
        _g_linear(2, idx, i, j, e, f),
        _g_linear(2, idx, i, j, e, g),
        _g_linear(2, idx, i, j, g, f),
    )


def build_orient_f2(m: Matroid | CircuitSystem) -> OrientabilitySystem:
    cs = _circuits(m)
    variables, idx = _var_tables(cs)
    polys = []
    pairs2 = cs.pairs_with_intersection(2)
    pairs3 = cs.pairs_with_intersection(3)
    for i, j in pairs2:
        e, f = cs.intersection(i, j)
        polys.append(TaggedPolynomial(_g_linear(2, idx, i, j, e, f), "g", (i, j)))
    for i, j in pairs3:
        e, f, g = cs.intersection(i, j)
        h = h_f2(idx, i, j, e, f, g)
        u, v, w = h_factors(idx, i, j, e, f, g)
        if (u * v * w).multilinear() != h:  # pragma: no cover - construction check
            raise AssertionError("h does not factor into its three g-type forms")
        polys.append(TaggedPolynomial(h, "h", (i, j)))
    return OrientabilitySystem(2, variables, polys)


def _check_odd(p: int):
    if p % 2 == 0:
        raise EvenCharacteristic(f"need an odd prime, got {p}")


def _squares(p, variables) -> list[TaggedPolynomial]:
    out = []
    for k, v in enumerate(variables):
        origin = "p" if v.kind == "a" else "q"
        out.append(TaggedPolynomial(Polynomial.var(p, k, 2) - 1, origin, (v.element, v.index)))
    return out


def _ab(p, idx, i, j, e):
    return Polynomial.monomial(p, (idx[BJVariable("a", e, i)], idx[BJVariable("b", e, j)]))


def build_orient_fp(
    m: Matroid | CircuitSystem, p: int = 3, include_h: bool = True
) -> OrientabilitySystem:
    """The ±1 system over F_p.  ``include_h=False`` keeps only the degree-two part."""
    _check_odd(p)
    cs = _circuits(m)
    variables, idx = _var_tables(cs)
    polys = _squares(p, variables)
    for i, j in cs.pairs_with_intersection(2):
        e, f = cs.intersection(i, j)
        polys.append(TaggedPolynomial(_ab(p, idx, i, j, e) + _ab(p, idx, i, j, f), "h'", (i, j)))
    if include_h:
        for i, j in cs.pairs_with_intersection(3):
            e, f, g = cs.intersection(i, j)
            te, tf, tg = (_ab(p, idx, i, j, x) for x in (e, f, g))
            polys.append(TaggedPolynomial(te * tf + tf * tg + tg * te + 1, "h", (i, j)))
    return OrientabilitySystem(p, variables, polys)


def build_orient_fp_condensed(m: Matroid | CircuitSystem, p: int = 3) -> OrientabilitySystem:
    _check_odd(p)
    cs = _circuits(m)
    variables, idx = _var_tables(cs)
    polys = _squares(p, variables)
    meets = [(i, j) for k in (2, 3) for i, j in cs.pairs_with_intersection(k)]
    for i, j in sorted(meets):
        inter = cs.intersection(i, j)
        h = Polynomial.const(p, 1)
        for e, f in combinations(inter, 2):
            h = h + _ab(p, idx, i, j, e) * _ab(p, idx, i, j, f)
        polys.append(TaggedPolynomial(h, "h", (i, j)))
    return OrientabilitySystem(p, variables, polys)


def variable_fixings(m: Matroid | CircuitSystem) -> list[int]:
    """Variable indices that may be fixed to + without losing solutions.

    One a-variable per circuit (its smallest element), one b-variable per
    cocircuit (its smallest element), then for every element not yet used,
    the a-variable of the first circuit containing it.
    """
    cs = _circuits(m)
    _, idx = _var_tables(cs)
    fixed = []
    chosen = set()
    for i, c in enumerate(cs.circuits):
        fixed.append(idx[BJVariable("a", c[0], i)])
        chosen.add(c[0])
    for j, d in enumerate(cs.cocircuits):
        fixed.append(idx[BJVariable("b", d[0], j)])
        chosen.add(d[0])
    for e in range(cs.n):
        if e in chosen:
            continue
        for i, c in enumerate(cs.circuits):
            if e in c:
                fixed.append(idx[BJVariable("a", e, i)])
                break
    return fixed


# -- search -----------------------------------------------------------------

@dataclass
class OrientResult:
    orientable: bool | None  # None: budget exhausted
    sigma: SigmaMapping | None = None
    nodes: int = 0
    verified: bool = False

    @property
    def status(self) -> str:
        return {True: "orientable", False: "non-orientable", None: "undecided"}[self.orientable]


class _Search:
    """Sign search with XOR propagation for 2-intersections and
    not-all-equal propagation for 3-intersections.
    """

    def __init__(self, cs: CircuitSystem, fixed: Sequence[int], budget: int | None):
        variables, idx = _var_tables(cs)
        self.cs = cs
        self.variables = variables
        self.nv = len(variables)
        self.budget = budget
        self.nodes = 0
        # constraints: ("g", (v1, v2, v3, v4)) or ("h", ((a,b), (a,b), (a,b)))
        self.cons = []
        for i, j in cs.pairs_with_intersection(2):
            e, f = cs.intersection(i, j)
            self.cons.append((0, tuple(idx[BJVariable(k, x, t)] for x in (e, f) for k, t in (("a", i), ("b", j)))))
        for i, j in cs.pairs_with_intersection(3):
            inter = cs.intersection(i, j)
            self.cons.append((1, tuple(idx[BJVariable(k, x, t)] for x in inter for k, t in (("a", i), ("b", j)))))
        self.watch = [[] for _ in range(self.nv)]
        for c, (_, vs) in enumerate(self.cons):
            for v in vs:
                self.watch[v].append(c)
        self.val = [-1] * self.nv
        self.trail: list[int] = []
        self.fixed = list(fixed)
        # Static branching order: follow constraints so they close early.
        seen = set(self.fixed)
        order = []
        for _, vs in self.cons:
            for v in vs:
                if v not in seen:
                    seen.add(v)
                    order.append(v)
        order += [v for v in range(self.nv) if v not in seen]
        self.order = order

    def assign(self, v: int, x: int) -> bool:
        queue = [(v, x)]
        val = self.val
        while queue:
            v, x = queue.pop()
            cur = val[v]
            if cur != -1:
                if cur != x:
                    return False
                continue
            val[v] = x
            self.trail.append(v)
            for c in self.watch[v]:
                kind, vs = self.cons[c]
                if kind == 0:
                    free = [u for u in vs if val[u] == -1]
                    par = 0
                    for u in vs:
                        if val[u] != -1:
                            par ^= val[u]
                    if not free:
                        if par != 1:
                            return False
                    elif len(free) == 1:
                        queue.append((free[0], par ^ 1))
                else:
                    s = []
                    open_pair = None
                    open_var = None
                    n_free = 0
                    for t in range(3):
                        a, b = vs[2 * t], vs[2 * t + 1]
                        va, vb = val[a], val[b]
                        if va != -1 and vb != -1:
                            s.append(va ^ vb)
                        else:
                            n_free += (va == -1) + (vb == -1)
                            open_pair = t
                            open_var = (a, vb) if va == -1 else (b, va)
                    if len(s) == 3:
                        if s[0] == s[1] == s[2]:
                            return False
                    elif len(s) == 2 and n_free == 1 and s[0] == s[1]:
                        u, other = open_var
                        # pair sign must differ from the common value
                        queue.append((u, (s[0] ^ 1) ^ other))
        return True

    def undo(self, mark: int):
        val = self.val
        trail = self.trail
        while len(trail) > mark:
            val[trail.pop()] = -1

    def run(self) -> bool | None:
        for v in self.fixed:
            if not self.assign(v, 0):
                return False
        return self._dfs(0)

    def _dfs(self, pos: int) -> bool | None:
        order, val = self.order, self.val
        while pos < len(order) and val[order[pos]] != -1:
            pos += 1
        if pos == len(order):
            return True
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            return None
        v = order[pos]
        mark = len(self.trail)
        for x in (0, 1):
            if self.assign(v, x):
                got = self._dfs(pos + 1)
                if got is None:
                    return None
                if got:
                    return True
            self.undo(mark)
        return False


def decide_orientability(
    m: Matroid | CircuitSystem, node_budget: int | None = None, use_fixings: bool = True
) -> OrientResult:
    """Decide orientability by backtracking over signs of a Σ-mapping.

    Worst case is exponential (the problem is NP-complete); ``node_budget``
    caps branching decisions and yields an undecided result when exceeded.
    """
    cs = _circuits(m)
    fixed = variable_fixings(cs) if use_fixings else []
    search = _Search(cs, fixed, node_budget)
    got = search.run()
    if got is None:
        return OrientResult(None, nodes=search.nodes)
    if not got:
        return OrientResult(False, nodes=search.nodes, verified=True)
    bits = [max(x, 0) for x in search.val]
    sigma = sigma_from_assignment(search.variables, bits)
    ok = check_sigma(sigma, cs, sizes=(2, 3))
    return OrientResult(True, sigma, search.nodes, ok)


# -- independent oracles ----------------------------------------------------

def brute_force_sigma(m: Matroid | CircuitSystem, fix_first: bool = True) -> SigmaMapping | None:
    """Orientation by direct search over signed circuits and cocircuits.

    Assigns a sign vector to each circuit and cocircuit in turn and checks the
    orthogonality condition on every 2- or 3-element intersection as soon as
    both sides are signed.  With ``fix_first`` the smallest element of every
    signed set is taken positive (negating a signed set preserves orthogonality).
    """
    cs = _circuits(m)
    pool = [("c", i, c) for i, c in enumerate(cs.circuits)]
    pool += [("d", j, d) for j, d in enumerate(cs.cocircuits)]
    meets = {}
    for k in (2, 3):
        for i, j in cs.pairs_with_intersection(k):
            meets.setdefault(("c", i), []).append(("d", j))
            meets.setdefault(("d", j), []).append(("c", i))
    # greedy order: next the set most constrained by those already placed
    sets = []
    placed: set = set()
    weight = {(t[0], t[1]): 0 for t in pool}
    while pool:
        best = max(range(len(pool)), key=lambda k: (weight[pool[k][:2]], -k))
        t = pool.pop(best)
        sets.append(t)
        placed.add(t[:2])
        for other in meets.get(t[:2], ()):
            if other not in placed:
                weight[other] += 1
    signs: dict = {}

    def options(elems):
        if not elems:
            yield ()
            return
        head = (1,) if fix_first else (1, -1)
        for first in head:
            for rest in product((1, -1), repeat=len(elems) - 1):
                yield (first,) + rest

    def ok_with(key):
        mine = signs[key]
        for other in meets.get(key, ()):
            if other not in signs:
                continue
            theirs = signs[other]
            prods = [mine[e] * theirs[e] for e in mine if e in theirs]
            if any(x > 0 for x in prods) != any(x < 0 for x in prods):
                return False
        return True

    def rec(t):
        if t == len(sets):
            return True
        kind, i, elems = sets[t]
        key = (kind, i)
        for vec in options(elems):
            signs[key] = dict(zip(elems, vec))
            if ok_with(key) and rec(t + 1):
                return True
            del signs[key]
        return False

    if not rec(0):
        return None
    circ = {(e, i): s for (kind, i), sv in signs.items() if kind == "c" for e, s in sv.items()}
    coc = {(e, j): s for (kind, j), sv in signs.items() if kind == "d" for e, s in sv.items()}
    return SigmaMapping(circ, coc)


def search_polynomial_system(
    system: OrientabilitySystem,
    fixed: Iterable[int] = (),
    domain: Sequence[int] | None = None,
    node_budget: int | None = None,
) -> dict | None:
    """Exhaustive search for a common zero with values in ``domain``.

    Generic forward checking: a polynomial with every variable set is
    evaluated; one with a single open variable prunes that variable's
    domain.  Branches on the smallest open domain.  The default domain is
    the whole field F_p.  Raises RuntimeError when the node budget runs out.
    """
    p = system.p
    dom = tuple(range(p)) if domain is None else tuple(domain)
    plus = 0 if p == 2 else 1
    assignment = {v: plus for v in fixed}
    polys = []
    for t in system.polynomials:
        q = t.poly.substitute(assignment)
        if not q.variables():
            if q.constant() != 0:
                return None
            continue
        polys.append(q)
    pvars = [tuple(sorted(q.variables())) for q in polys]
    watch: dict[int, list[int]] = {}
    for k, vs in enumerate(pvars):
        for v in vs:
            watch.setdefault(v, []).append(k)
    domains = {v: set(dom) for v in watch}
    # tie-break: greedy static order that closes polynomials early
    rank: dict[int, int] = {}
    remaining = set(range(len(polys)))
    while remaining:
        best = min(remaining, key=lambda k: (sum(1 for v in pvars[k] if v not in rank), k))
        remaining.discard(best)
        for v in pvars[best]:
            rank.setdefault(v, len(rank))
    trail: list = []  # (variable, removed values) or (variable, None) for assignments
    nodes = 0

    def narrow(v, allowed):
        cur = domains[v]
        removed = cur - allowed
        if removed:
            cur -= removed
            trail.append((v, removed))
        return bool(cur)

    def assign(v, x):
        assignment[v] = x
        trail.append((v, None))
        for k in watch[v]:
            open_vars = [u for u in pvars[k] if u not in assignment]
            q = polys[k]
            if not open_vars:
                if q.evaluate(assignment) != 0:
                    return False
            elif len(open_vars) == 1:
                u = open_vars[0]
                ok = set()
                for y in domains[u]:
                    assignment[u] = y
                    if q.evaluate(assignment) == 0:
                        ok.add(y)
                del assignment[u]
                if not narrow(u, ok):
                    return False
        return True

    def undo(mark):
        while len(trail) > mark:
            v, removed = trail.pop()
            if removed is None:
                del assignment[v]
            else:
                domains[v] |= removed

    def rec():
        nonlocal nodes
        open_vars = [v for v in domains if v not in assignment]
        if not open_vars:
            return True
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise RuntimeError("node budget exhausted")
        v = min(open_vars, key=lambda u: (len(domains[u]), rank[u]))
        mark = len(trail)
        for x in sorted(domains[v]):
            if assign(v, x) and rec():
                return True
            undo(mark)
        return False

    if rec():
        return dict(assignment)
    return None


def set_style_names(m: Matroid | CircuitSystem) -> list[str]:
    """Names like ``a_6_167``: 1-based element, then the circuit's elements.

    Elements are joined with ``.`` when the ground set has more than nine.
    """
    cs = _circuits(m)
    sep = "" if cs.n <= 9 else "."
    out = []
    for v in bj_variables(cs):
        members = cs.circuits[v.index] if v.kind == "a" else cs.cocircuits[v.index]
        out.append(f"{v.kind}_{v.element + 1}_" + sep.join(str(e + 1) for e in members))
    return out
