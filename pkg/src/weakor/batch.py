"""Batch classification of matroid records and the summary report."""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .formats import MatroidRecord
from .matroid import is_binary_by_intersections, is_simple

DEFAULT_NODE_BUDGET = 10**7

COUNTERS = (
    "total",
    "non_weak",
    "non_orientable",
    "undecided",
    "simple",
    "simple_non_weak",
    "simple_non_orientable",
    "errors",
)


@dataclass
class RecordResult:
    id: str
    size: int
    rank: int
    weakly_orientable: bool | None = None
    orientable: str | None = None  # orientable / non-orientable / undecided / None when not asked
    simple: bool | None = None
    binary: bool | None = None
    odd_list_length: int | None = None
    family_dimension: int | None = None
    certificate_verified: bool | None = None
    error: str | None = None


@dataclass
class ClassificationReport:
    records: list[RecordResult] = field(default_factory=list)
    orient_checked: bool = False

    def aggregate(self) -> dict[tuple[int, int], Counter]:
        cells: dict[tuple[int, int], Counter] = {}
        for rec in self.records:
            c = cells.setdefault((rec.rank, rec.size), Counter({k: 0 for k in COUNTERS}))
            c.update(_tags(rec))
        return dict(sorted(cells.items()))

    def cell(self, rank: int, size: int) -> Counter:
        return self.aggregate().get((rank, size), Counter({k: 0 for k in COUNTERS}))

    def to_json(self) -> str:
        agg = [
            {"rank": r, "size": n, **{k: c[k] for k in COUNTERS}}
            for (r, n), c in self.aggregate().items()
        ]
        return json.dumps(
            {"orient_checked": self.orient_checked, "records": [asdict(r) for r in self.records], "aggregate": agg},
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "ClassificationReport":
        data = json.loads(text)
        return cls([RecordResult(**r) for r in data["records"]], data["orient_checked"])


def _tags(rec: RecordResult) -> list[str]:
    tags = ["total"]
    if rec.error is not None:
        return tags + ["errors"]
    if rec.simple:
        tags.append("simple")
    if rec.weakly_orientable is False:
        tags.append("non_weak")
        if rec.simple:
            tags.append("simple_non_weak")
    if rec.orientable == "non-orientable":
        tags.append("non_orientable")
        if rec.simple:
            tags.append("simple_non_orientable")
    elif rec.orientable == "undecided":
        tags.append("undecided")
    return tags


def classify_record(rec: MatroidRecord, orient: bool = False, node_budget: int | None = DEFAULT_NODE_BUDGET) -> RecordResult:
    from .orient import decide_orientability
    from .weak import is_weakly_orientable, verify_odd_list

    m = rec.matroid
    out = RecordResult(rec.id, m.n, m.r)
    try:
        out.simple = is_simple(m)
        out.binary = is_binary_by_intersections(m)
        weak = is_weakly_orientable(m)
        out.weakly_orientable = weak.weakly_orientable
        if weak.weakly_orientable:
            out.family_dimension = weak.family.dimension
            out.certificate_verified = weak.verified
        else:
            out.odd_list_length = len(weak.odd_list.pairs)
            out.certificate_verified = verify_odd_list(m, weak.odd_list)
        if orient:
            if not weak.weakly_orientable:
                # an orientation restricts to a weak orientation
                out.orientable = "non-orientable"
            else:
                res = decide_orientability(m, node_budget=node_budget)
                if res.orientable is True and not res.verified:  # pragma: no cover
                    raise AssertionError("orientation failed verification")
                out.orientable = res.status
    except Exception as exc:  # quarantined per record
        out.error = f"{type(exc).__name__}: {exc}"
    return out


def _classify_chunk(args):
    recs, orient, budget = args
    return [classify_record(r, orient, budget) for r in recs]


def classify_batch(
    records: list[MatroidRecord],
    orient: bool = False,
    jobs: int = 1,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    chunk: int = 64,
) -> ClassificationReport:
    """Classify every record; the result does not depend on ``jobs``."""
    records = list(records)
    if jobs <= 1 or len(records) <= chunk:
        results = [classify_record(r, orient, node_budget) for r in records]
    else:
        parts = [(records[k:k + chunk], orient, node_budget) for k in range(0, len(records), chunk)]
        results = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for got in pool.map(_classify_chunk, parts):
                results.extend(got)
    return ClassificationReport(results, orient)


# -- rendering ---------------------------------------------------------------

def _frac(k: int, n: int) -> str:
    return f"{k}/{n}"


def render_report(report: ClassificationReport, fmt: str = "table") -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    agg = report.aggregate()
    if fmt == "tsv":
        lines = ["rank\tsize\tnon_weak/total\tsimple_non_weak/simple_non_orientable\tundecided\terrors"]
        for (r, n), c in agg.items():
            simple_cell = _frac(c["simple_non_weak"], c["simple_non_orientable"]) if report.orient_checked else "-"
            lines.append(f"{r}\t{n}\t{_frac(c['non_weak'], c['total'])}\t{simple_cell}\t{c['undecided']}\t{c['errors']}")
        return "\n".join(lines) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    ranks = sorted({r for r, _ in agg})
    sizes = sorted({n for _, n in agg})
    out = []
    for title, key in (
        ("Non-weakly orientable / total", ("non_weak", "total")),
        ("Simple non-weakly orientable / simple non-orientable", ("simple_non_weak", "simple_non_orientable")),
    ):
        if key[1] == "simple_non_orientable" and not report.orient_checked:
            continue
        out.append(title)
        header = ["rank\\size"] + [str(n) for n in sizes]
        rows = [header]
        for r in ranks:
            row = [str(r)]
            for n in sizes:
                c = agg.get((r, n))
                row.append(_frac(c[key[0]], c[key[1]]) if c else "")
            rows.append(row)
        widths = [max(len(row[k]) for row in rows) for k in range(len(header))]
        for row in rows:
            out.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        out.append("")
    errs = [rec for rec in report.records if rec.error]
    undecided = sum(c["undecided"] for c in agg.values())
    if undecided:
        out.append(f"undecided (search budget exhausted): {undecided}")
    for rec in errs:
        out.append(f"error {rec.id}: {rec.error}")
    return "\n".join(out).rstrip("\n") + "\n"
