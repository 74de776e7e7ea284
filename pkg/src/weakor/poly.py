"""Sparse multivariate polynomials over a prime field.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable;
variables are integers.  A polynomial maps monomials to nonzero residues.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[tuple[int, int], ...]

ONE: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, k in b:
        out[v] = out.get(v, 0) + k
    return tuple(sorted(out.items()))


def mono_degree(m: Monomial) -> int:
    return sum(k for _, k in m)


class Polynomial:
    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[Monomial, int] | None = None):
        self.p = p
        self.terms: dict = {}
        if terms:
            for m, c in terms.items():
                c %= p
                if c:
                    self.terms[m] = c

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, p: int, c: int) -> "Polynomial":
        return cls(p, {ONE: c})

    @classmethod
    def var(cls, p: int, v: int, exp: int = 1) -> "Polynomial":
        return cls(p, {((v, exp),): 1})

    @classmethod
    def linear(cls, p: int, coeffs: Mapping[int, int], const: int = 0) -> "Polynomial":
        terms: dict = {}
        for v, c in coeffs.items():
            m = ((v, 1),)
            terms[m] = terms.get(m, 0) + c
        if const:
            terms[ONE] = terms.get(ONE, 0) + const
        return cls(p, terms)

    @classmethod
    def monomial(cls, p: int, variables: Iterable[int], coeff: int = 1) -> "Polynomial":
        return cls(p, {mono_mul((), _as_mono(variables)): coeff})

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.p != self.p:
                raise ValueError("polynomials over different fields")
            return other
        return Polynomial.const(self.p, int(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        p = self.p
        for m, c in other.terms.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        res = Polynomial(p)
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = Polynomial(self.p)
        res.terms = {m: (-c) % self.p for m, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        p = self.p
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return Polynomial(p, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.const(self.p, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(getattr(self, "p", 2), other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def constant(self) -> int:
        return self.terms.get(ONE, 0)

    def evaluate(self, assignment: Mapping[int, int]) -> int:
        p = self.p
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, k in m:
                t = t * pow(assignment[v], k, p) % p
            total += t
        return total % p

    def substitute(self, values: Mapping[int, int]) -> "Polynomial":
        """Replace the given variables by field constants."""
        p = self.p
        out: dict = {}
        for m, c in self.terms.items():
            keep = []
            for v, k in m:
                if v in values:
                    c = c * pow(values[v], k, p) % p
                else:
                    keep.append((v, k))
            if c:
                key = tuple(keep)
                out[key] = (out.get(key, 0) + c) % p
        return Polynomial(p, out)

    def rename(self, mapping: Mapping[int, int]) -> "Polynomial":
        out: dict = {}
        for m, c in self.terms.items():
            key = tuple(sorted((mapping[v], k) for v, k in m))
            out[key] = (out.get(key, 0) + c) % self.p
        return Polynomial(self.p, out)

    def multilinear(self) -> "Polynomial":
        """Reduce modulo x^2 - x for every variable (functions on {0,1}^n)."""
        out: dict = {}
        for m, c in self.terms.items():
            key = tuple((v, 1) for v, _ in m)
            out[key] = (out.get(key, 0) + c) % self.p
        return Polynomial(self.p, out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (mono_degree(mc[0]), mc[0]))

    def to_text(self, names: Sequence[str] | Mapping[int, str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for v, k in m:
                name = names[v] if names is not None else f"x{v}"
                factors.append(name if k == 1 else f"{name}^{k}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial(F_{self.p}: {self.to_text()})"


def _as_mono(variables: Iterable[int]) -> Monomial:
    out: dict = {}
    for v in variables:
        out[v] = out.get(v, 0) + 1
    return tuple(sorted(out.items()))


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\[\],{}]*$")


class PolynomialParseError(ValueError):
    pass


def parse_polynomial(text: str, p: int, names: dict[str, int]) -> Polynomial:
    """Parse ``2*a_0_1^2 + b_3_0 - 1`` style text; unknown names get new ids."""
    text = text.strip()
    if not text:
        raise PolynomialParseError("empty polynomial")
    out = Polynomial(p)
    pos = 0
    for match in _TERM.finditer(text):
        if match.start() != pos and text[pos:match.start()].strip():
            raise PolynomialParseError(f"cannot parse {text!r}")
        pos = match.end()
        sign, body = match.group(1), match.group(2).strip()
        coeff = -1 if sign == "-" else 1
        mono: list[int] = []
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise PolynomialParseError(f"empty factor in {body!r}")
            if factor.lstrip().isdigit():
                coeff *= int(factor)
                continue
            base, _, exp = factor.partition("^")
            base = base.strip()
            if not _IDENT.match(base):
                raise PolynomialParseError(f"bad variable name {base!r}")
            k = int(exp) if exp else 1
            v = names.setdefault(base, len(names))
            mono.extend([v] * k)
        out = out + Polynomial.monomial(p, mono, coeff)
    if text[pos:].strip():
        raise PolynomialParseError(f"trailing text in {text!r}")
    return out
