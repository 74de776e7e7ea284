"""Flat-file matroid formats.

Bases file, one matroid per line (0-based elements)::

    fano 7 3 : 0,1,3 ; 0,1,4 ; ...

Revlex file, one indicator string per line over the r-subsets of
{0..n-1}, ``*`` for a basis and ``0`` otherwise.  Under ``revlex`` a subset
S precedes T when, at the largest element where they differ, S has the
smaller one (for n=4, r=2: 01 02 12 03 13 23).  ``colex`` names the same
order; ``lex`` is the usual lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .matroid import Matroid, MatroidError, from_bases, mask_of


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class ValidationError(ValueError):
    def __init__(self, line: int, cause: Exception):
        super().__init__(f"line {line}: {cause}")
        self.line = line
        self.reason = str(cause)
        self.cause = cause


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MatroidRecord:
    id: str
    matroid: Matroid
    source: str  # bases-file, revlex-file, enumerated, family


def _read(path_or_text) -> str:
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and "\n" not in path_or_text
                                            and Path(path_or_text).is_file()):
        return Path(path_or_text).read_text()
    return str(path_or_text)


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"bad {what} {tok!r}") from None


def parse_bases_line(line: str, lineno: int = 1) -> MatroidRecord:
    head, sep, body = line.partition(":")
    if not sep:
        raise ParseError(lineno, "missing ':'")
    fields = head.split()
    if len(fields) != 3:
        raise ParseError(lineno, "expected '<id> <n> <r> :'")
    rid = fields[0]
    n = _int(fields[1], lineno, "size")
    r = _int(fields[2], lineno, "rank")
    bases = []
    chunks = [c.strip() for c in body.split(";")]
    if chunks == [""]:
        chunks = [] if r > 0 else [""]
    for chunk in chunks:
        if chunk == "":
            if r == 0:
                bases.append(())
                continue
            raise ParseError(lineno, "empty basis")
        bases.append(tuple(_int(t.strip(), lineno, "element") for t in chunk.split(",")))
    try:
        m = from_bases(n, r, bases)
    except MatroidError as exc:
        raise ValidationError(lineno, exc) from exc
    return MatroidRecord(rid, m, "bases-file")


def parse_bases_file(path_or_text) -> list[MatroidRecord]:
    out = []
    for lineno, raw in enumerate(_read(path_or_text).splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_bases_line(line, lineno))
    return out


def format_bases_line(rid: str, m: Matroid) -> str:
    body = " ; ".join(",".join(map(str, b)) for b in m.bases)
    return f"{rid} {m.n} {m.r} : {body}"


def write_bases_file(records, path) -> None:
    Path(path).write_text("".join(format_bases_line(rec.id, rec.matroid) + "\n" for rec in records))


# -- revlex ------------------------------------------------------------------

VARIANTS = ("revlex", "colex", "lex")


def subset_order(n: int, r: int, variant: str = "revlex") -> list[tuple[int, ...]]:
    subsets = list(combinations(range(n), r))
    if variant == "lex":
        return subsets
    if variant in ("revlex", "colex"):
        return sorted(subsets, key=lambda s: s[::-1])
    raise ValueError(f"unknown order {variant!r}; choose from {VARIANTS}")


def decode_revlex(text: str, n: int, r: int, variant: str = "revlex") -> Matroid:
    order = subset_order(n, r, variant)
    text = text.strip()
    if len(text) != len(order):
        raise LengthMismatch(f"expected {len(order)} characters for n={n}, r={r}, got {len(text)}")
    bad = set(text) - {"*", "0"}
    if bad:
        raise LengthMismatch(f"unexpected characters {sorted(bad)}")
    return from_bases(n, r, [s for s, ch in zip(order, text) if ch == "*"])


def encode_revlex(m: Matroid, variant: str = "revlex") -> str:
    have = set(m.basis_masks)
    return "".join("*" if mask_of(s) in have else "0" for s in subset_order(m.n, m.r, variant))


def parse_revlex_file(path_or_text, n: int, r: int, variant: str = "revlex") -> list[MatroidRecord]:
    out = []
    for lineno, raw in enumerate(_read(path_or_text).splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            m = decode_revlex(line, n, r, variant)
        except LengthMismatch as exc:
            raise LengthMismatch(f"line {lineno}: {exc}") from exc
        except MatroidError as exc:
            raise ValidationError(lineno, exc) from exc
        out.append(MatroidRecord(f"L{lineno}", m, "revlex-file"))
    return out
