"""Nullstellensatz certificates 1 = sum beta_i f_i found by linear algebra.

The degree of a certificate is max deg(beta_i).  Certificates are identities
in the polynomial ring: field equations are never adjoined, so verification
is plain expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Sequence

from .linalg import SparseSpanSolver, is_prime, NonPrimeModulus
from .poly import ONE, Polynomial, PolynomialParseError, mono_mul, parse_polynomial

DEFAULT_MONOMIAL_CAP = 5_000_000


class DegreeOverflowBudget(RuntimeError):
    def __init__(self, degree: int, unknowns: int, cap: int):
        super().__init__(f"degree {degree} needs {unknowns} unknowns, cap is {cap}")
        self.degree = degree
        self.unknowns = unknowns
        self.cap = cap


class ShapeMismatch(ValueError):
    pass


def as_polynomials(system) -> tuple[list[Polynomial], list[str] | None, int]:
    """Accept an orientability system, a Bland-Jensen system or a plain list."""
    from .orient import OrientabilitySystem
    from .weak import BlandJensenSystem

    if isinstance(system, OrientabilitySystem):
        return system.polys(), system.names, system.p
    if isinstance(system, BlandJensenSystem):
        return system.rows_as_polynomials(), [v.name for v in system.variables], 2
    polys = list(system)
    if not polys:
        raise ValueError("empty system")
    return polys, None, polys[0].p


@dataclass
class CertificateRequest:
    system: object
    degree: int
    p: int | None = None
    monomial_cap: int = DEFAULT_MONOMIAL_CAP

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")


@dataclass
class NullstellensatzCertificate:
    p: int
    polynomials: list[Polynomial]
    coefficients: list[Polynomial]
    names: list[str] | None = field(default=None, repr=False)

    @property
    def degree(self) -> int:
        return max((b.degree() for b in self.coefficients), default=-1)

    @property
    def support(self) -> list[int]:
        return [i for i, b in enumerate(self.coefficients) if not b.is_zero()]

    def expand(self) -> Polynomial:
        total = Polynomial(self.p)
        for b, f in zip(self.coefficients, self.polynomials):
            if not b.is_zero():
                total = total + b * f
        return total

    def to_text(self, names=None) -> str:
        names = names if names is not None else self.names
        lines = []
        for i in self.support:
            b = self.coefficients[i].to_text(names)
            f = self.polynomials[i].to_text(names)
            lines.append(f"({b}) ({f})")
        lines.append(f"mod {self.p}")
        return "\n".join(lines) + "\n"


def monomials_up_to(variables: Sequence[int], d: int) -> list[tuple]:
    """All monomials of total degree <= d, by degree then lexicographically."""
    out = [ONE]
    vs = sorted(variables)
    for k in range(1, d + 1):
        for combo in combinations_with_replacement(vs, k):
            m = {}
            for v in combo:
                m[v] = m.get(v, 0) + 1
            out.append(tuple(sorted(m.items())))
    return out


def count_unknowns(num_polys: int, num_vars: int, d: int) -> int:
    return num_polys * comb(num_vars + d, d)


def find_certificate(req: CertificateRequest) -> NullstellensatzCertificate | None:
    """Search for a certificate with every beta_i of degree <= req.degree.

    Candidate beta terms range over the monomials in the variables that occur
    in the system (a certificate using other variables stays one after setting
    them to zero).  Returns None when no certificate of this degree exists.
    """
    polys, names, p = as_polynomials(req.system)
    p = req.p or p
    if not is_prime(p):
        raise NonPrimeModulus(p)
    if any(f.p != p for f in polys):
        raise ValueError("system polynomials are over a different field")
    variables = set()
    for f in polys:
        variables |= f.variables()
    d = req.degree
    unknowns = count_unknowns(len(polys), len(variables), d)
    if unknowns > req.monomial_cap:
        raise DegreeOverflowBudget(d, unknowns, req.monomial_cap)
    monos = monomials_up_to(sorted(variables), d)
    row_of: dict = {ONE: 0}
    solver = SparseSpanSolver(p, {0: 1})
    cols: list[tuple[int, tuple]] = []
    f_terms = [list(f.terms.items()) for f in polys]
    done = solver.solved
    for m in monos:
        if done:
            break
        for i, terms in enumerate(f_terms):
            col: dict = {}
            for fm, c in terms:
                key = mono_mul(m, fm)
                r = row_of.setdefault(key, len(row_of))
                col[r] = (col.get(r, 0) + c) % p
            cols.append((i, m))
            if solver.add_column(col):
                done = True
                break
    if not done:
        return None
    betas = [dict() for _ in polys]
    for k, c in solver.solution().items():
        i, m = cols[k]
        betas[i][m] = c
    cert = NullstellensatzCertificate(p, list(polys), [Polynomial(p, b) for b in betas], names)
    if not verify_certificate(polys, cert):  # pragma: no cover - solver bug guard
        raise AssertionError("linear solve produced an invalid certificate")
    return cert


def verify_certificate(system, cert: NullstellensatzCertificate) -> bool:
    """Expand sum beta_i f_i and compare with the constant 1."""
    polys, _, p = as_polynomials(system)
    if len(cert.coefficients) != len(polys):
        raise ShapeMismatch(f"{len(cert.coefficients)} coefficients for {len(polys)} polynomials")
    if cert.p != p:
        raise ShapeMismatch(f"certificate over F_{cert.p}, system over F_{p}")
    total = Polynomial(p)
    for b, f in zip(cert.coefficients, polys):
        if b.p != p:
            raise ShapeMismatch("coefficient over a different field")
        if not b.is_zero():
            total = total + b * f
    return total == Polynomial.const(p, 1)


def min_certificate_degree(
    system, d_max: int, monomial_cap: int = DEFAULT_MONOMIAL_CAP
) -> tuple[int, NullstellensatzCertificate] | None:
    """First degree d <= d_max admitting a certificate.

    None only says no certificate of degree <= d_max exists; it does not
    mean the system is feasible.
    """
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    for d in range(d_max + 1):
        cert = find_certificate(CertificateRequest(system, d, monomial_cap=monomial_cap))
        if cert is not None:
            return d, cert
    return None


# -- infeasible cores ------------------------------------------------------

def infeasible_core(system, domain: Sequence[int] | None = None, keep=None):
    """Shrink an infeasible orientability system to an inclusion-minimal core.

    Polynomials are dropped one at a time (deletion filter) as long as the
    rest stays infeasible by exhaustive search over ``domain``.  Polynomials
    selected by ``keep`` (default: the variable-square equations) are never
    dropped but are restricted to the variables of the surviving core.
    Returns None when the system is feasible.
    """
    from .orient import OrientabilitySystem, search_polynomial_system

    if keep is None:
        keep = lambda t: t.origin in ("p", "q")  # noqa: E731
    if domain is None and system.p != 2:
        domain = (1, system.p - 1)

    def feasible(tagged):
        sub = OrientabilitySystem(system.p, system.variables, tagged)
        return search_polynomial_system(sub, domain=domain) is not None

    core = [t for t in system.polynomials if not keep(t)]
    if feasible(core):
        return None
    i = 0
    while i < len(core):
        trial = core[:i] + core[i + 1:]
        if not feasible(trial):
            core = trial
        else:
            i += 1
    used = set()
    for t in core:
        used |= t.poly.variables()
    kept = [t for t in system.polynomials if keep(t) and t.poly.variables() <= used]
    return OrientabilitySystem(system.p, system.variables, kept + core, dict(system.fixed))


def lift_certificate(core_system, full_system, cert: NullstellensatzCertificate) -> NullstellensatzCertificate:
    """Re-index a certificate for a subsystem onto the full system (zero elsewhere)."""
    full, names, p = as_polynomials(full_system)
    sub, _, _ = as_polynomials(core_system)
    index = {}
    for k, f in enumerate(full):
        index.setdefault(f, k)
    betas = [Polynomial(p) for _ in full]
    for f, b in zip(sub, cert.coefficients):
        if f not in index:
            raise ShapeMismatch("core polynomial not present in the full system")
        k = index[f]
        betas[k] = betas[k] + b
    return NullstellensatzCertificate(p, list(full), betas, names)


# -- text formats ----------------------------------------------------------

def parse_system_text(text: str, p: int | None = None) -> tuple[list[Polynomial], list[str], int]:
    """One polynomial per line; ``#`` starts a comment; ``# p N`` sets the field."""
    names: dict[str, int] = {}
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "p":
                declared = int(parts[1])
                if p is not None and p != declared:
                    raise ShapeMismatch(f"file declares F_{declared}, caller asked for F_{p}")
                p = declared
            continue
        if line:
            lines.append((lineno, line))
    if p is None:
        raise PolynomialParseError("field characteristic not given")
    if not is_prime(p):
        raise NonPrimeModulus(p)
    polys = []
    for lineno, line in lines:
        try:
            polys.append(parse_polynomial(line, p, names))
        except PolynomialParseError as exc:
            raise PolynomialParseError(f"line {lineno}: {exc}") from exc
    ordered = sorted(names, key=names.get)
    return polys, ordered, p


def parse_certificate_text(text: str, names: dict[str, int]) -> tuple[int, list[tuple[Polynomial, Polynomial]]]:
    """Read "(beta) (f)" lines ending in "mod p"; returns p and the pairs."""
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not rows or not rows[-1].startswith("mod"):
        raise PolynomialParseError("missing 'mod p' trailer")
    p = int(rows[-1].split()[1])
    pairs = []
    for ln in rows[:-1]:
        if not (ln.startswith("(") and ln.endswith(")")) or ") (" not in ln:
            raise PolynomialParseError(f"expected '(beta) (f)': {ln!r}")
        left, right = ln[1:-1].split(") (", 1)
        pairs.append((parse_polynomial(left, p, names), parse_polynomial(right, p, names)))
    return p, pairs


def certificate_from_pairs(system, pairs: Iterable[tuple[Polynomial, Polynomial]]) -> NullstellensatzCertificate:
    """Place (beta, f) pairs on the matching system polynomials."""
    polys, names, p = as_polynomials(system)
    index = {}
    for k, f in enumerate(polys):
        index.setdefault(f, k)
    betas = [Polynomial(p) for _ in polys]
    for b, f in pairs:
        if f not in index:
            raise ShapeMismatch(f"polynomial not in system: {f.to_text(names)}")
        betas[index[f]] = betas[index[f]] + b
    return NullstellensatzCertificate(p, list(polys), betas, names)


def find_certificate_localized(
    system, degree: int, monomial_cap: int = DEFAULT_MONOMIAL_CAP, core=None
) -> NullstellensatzCertificate | None:
    """Degree-bounded search on growing subsystems of an orientability system.

    Starts from the variables of an inclusion-minimal infeasible core and
    takes every polynomial living on those variables; on failure the variable
    set grows by all neighbours.  The final round is the whole system, so
    None has the same meaning as for :func:`find_certificate`.  A certificate
    found on a subsystem is lifted (zero elsewhere) to the full system.
    """
    if core is None:
        core = infeasible_core(system)
    if core is None:
        return None
    polys = system.polynomials
    every = set()
    for t in polys:
        every |= t.poly.variables()
    V = set()
    for t in core.polynomials:
        V |= t.poly.variables()
    from .orient import OrientabilitySystem

    while True:
        sub = OrientabilitySystem(system.p, system.variables, [t for t in polys if t.poly.variables() <= V])
        cert = find_certificate(CertificateRequest(sub, degree, monomial_cap=monomial_cap))
        if cert is not None:
            lifted = lift_certificate(sub, system, cert)
            if not verify_certificate(system, lifted):  # pragma: no cover
                raise AssertionError("lifted certificate failed verification")
            return lifted
        if V >= every:
            return None
        grown = set(V)
        for t in polys:
            vs = t.poly.variables()
            if vs & V:
                grown |= vs
        V = grown if grown != V else every
