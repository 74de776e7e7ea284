"""Command-line interface: ``weakor <command> ...``.

Exit codes: 0 success, 1 input error, 2 search or degree budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .matroid import MatroidError, fano, is_binary_by_intersections, is_simple
from .poly import PolynomialParseError

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


class InputError(Exception):
    pass


def _load_records(args) -> list[formats.MatroidRecord]:
    from .families import mi_n

    if getattr(args, "fano", False):
        return [formats.MatroidRecord("fano", fano(), "family")]
    if getattr(args, "mi", None) is not None:
        return [formats.MatroidRecord(f"MI_{args.mi}", mi_n(args.mi), "family")]
    if not args.file:
        raise InputError("give a matroid file, --fano or --mi N")
    path = Path(args.file)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    if args.revlex:
        n, r = args.revlex
        return formats.parse_revlex_file(path, n, r, args.revlex_variant)
    return formats.parse_bases_file(path)


def _add_input(p: argparse.ArgumentParser, families=True):
    p.add_argument("file", nargs="?", help="bases file (or revlex file with --revlex N R)")
    p.add_argument("--revlex", nargs=2, type=int, metavar=("N", "R"), help="read indicator strings for size N, rank R")
    p.add_argument("--revlex-variant", choices=formats.VARIANTS, default="revlex")
    if families:
        p.add_argument("--fano", action="store_true")
        p.add_argument("--mi", type=int, metavar="N")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- analyze -------------------------------------------------------------------

def cmd_analyze(args) -> int:
    from .orient import decide_orientability
    from .weak import is_weakly_orientable, verify_odd_list

    results = []
    status = EXIT_OK
    for rec in _load_records(args):
        m = rec.matroid
        cs = m.circuit_system
        weak = is_weakly_orientable(m)
        item = {
            "id": rec.id,
            "size": m.n,
            "rank": m.r,
            "bases": len(m.basis_masks),
            "circuits": len(cs.circuits),
            "cocircuits": len(cs.cocircuits),
            "simple": is_simple(m),
            "binary": is_binary_by_intersections(m),
            "bland_jensen": {"rows": weak.system.num_rows, "variables": weak.system.num_vars},
            "weakly_orientable": weak.weakly_orientable,
        }
        if weak.weakly_orientable:
            item["weak_orientations_dimension"] = weak.family.dimension
        else:
            sets = weak.odd_list.as_sets(cs)
            item["odd_list"] = {
                "length": len(sets),
                "verified": verify_odd_list(m, weak.odd_list),
                "pairs": sets,
            }
        if args.orient:
            if not weak.weakly_orientable:
                item["orientable"] = "non-orientable"
            else:
                res = decide_orientability(m, node_budget=args.budget)
                item["orientable"] = res.status
                item["search_nodes"] = res.nodes
                if res.orientable is None:
                    status = EXIT_BUDGET
        results.append(item)
    if args.format == "json":
        _emit(json.dumps(results, indent=2) + "\n", args.out)
        return status
    lines = []
    for item in results:
        lines.append(f"{item['id']}: n={item['size']} r={item['rank']} bases={item['bases']} "
                     f"circuits={item['circuits']} cocircuits={item['cocircuits']} "
                     f"simple={item['simple']} binary={item['binary']}")
        bj = item["bland_jensen"]
        lines.append(f"  Bland-Jensen system: {bj['rows']} rows, {bj['variables']} variables")
        if item["weakly_orientable"]:
            lines.append(f"  weakly orientable (solution space dimension {item['weak_orientations_dimension']})")
        else:
            ol = item["odd_list"]
            lines.append(f"  not weakly orientable: odd list of {ol['length']} pairs, verified={ol['verified']}")
            for c, d in ol["pairs"]:
                lines.append("    circuit {" + ",".join(str(e + 1) for e in c) + "}  cocircuit {"
                             + ",".join(str(e + 1) for e in d) + "}")
        if "orientable" in item:
            lines.append(f"  orientability: {item['orientable']}")
    _emit("\n".join(lines) + "\n", args.out)
    return status


# -- classify ------------------------------------------------------------------

def cmd_classify(args) -> int:
    from .batch import classify_batch, render_report

    records = _load_records(args)
    report = classify_batch(records, orient=args.orient, jobs=args.jobs, node_budget=args.budget)
    text = render_report(report, args.format)
    _emit(text, args.out)
    if args.out and not args.no_figures:
        from .figures import plot_report

        for path in plot_report(report, Path(args.out).with_suffix("")):
            print(f"wrote {path}", file=sys.stderr)
    undecided = sum(1 for r in report.records if r.orientable == "undecided")
    return EXIT_BUDGET if undecided else EXIT_OK


# -- family --------------------------------------------------------------------

def cmd_family(args) -> int:
    from .families import MIFamilySpec, minor_minimality_check, mi_n, verify_mi_nonweak

    m = mi_n(args.mi)
    spec = MIFamilySpec(args.mi)
    out = {"n": args.mi, "size": m.n, "rank": m.r, "bases": len(m.basis_masks), "labels": spec.labels()}
    if args.checks:
        rep = verify_mi_nonweak(args.mi, m)
        w = rep.pop("witness")
        rep["witness"] = None if w is None else {
            "circuit_a4": list(m.circuit_system.circuits[w.circuit_a4]),
            "circuits_b": [list(m.circuit_system.circuits[i]) for i in w.circuits_b],
            "cocircuits_a": [list(m.circuit_system.cocircuits[j]) for j in w.cocircuits_a],
        }
        out["non_weak"] = rep
        if args.minors:
            out["minors"] = minor_minimality_check(args.mi, m)
    if args.format == "json":
        _emit(json.dumps(out, indent=2, default=str) + "\n", args.out)
        return EXIT_OK
    lines = [f"MI_{args.mi}: {m.n} elements, rank {m.r}, {out['bases']} bases",
             "labels: " + " ".join(out["labels"])]
    if args.checks:
        rep = out["non_weak"]
        lines.append(f"Bland-Jensen infeasible: {rep['bland_jensen_infeasible']} "
                     f"(odd list {rep['odd_list_length']} pairs, verified={rep['odd_list_verified']})")
        lines.append(f"pattern witness at {{1,2,3,4}}: {rep['witness'] is not None}, "
                     f"matches construction: {rep['witness_matches_construction']}")
        lines.append(f"passed: {rep['passed']}")
        if "minors" in out:
            for name, info in out["minors"]["minors"].items():
                lines.append(f"  minor {name}: weakly orientable={info['weakly_orientable']}")
            lines.append(f"minor-minimal: {out['minors']['passed']}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -- system / nulla ------------------------------------------------------------

def cmd_system(args) -> int:
    from .orient import build_orient_f2, build_orient_fp, build_orient_fp_condensed, set_style_names, variable_fixings

    recs = _load_records(args)
    if len(recs) != 1:
        raise InputError("system export takes exactly one matroid")
    m = recs[0].matroid
    if args.p == 2:
        s = build_orient_f2(m)
    elif args.condensed:
        s = build_orient_fp_condensed(m, args.p)
    else:
        s = build_orient_fp(m, args.p, include_h=not args.no_h)
    if args.fix:
        s = s.with_fixings(variable_fixings(m))
    names = set_style_names(m) if args.set_names else s.names
    lines = [f"# p {s.p}"] + [t.poly.to_text(names) for t in s.polynomials]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_nulla(args) -> int:
    from .nulla import (
        DegreeOverflowBudget,
        find_certificate_localized,
        infeasible_core,
        min_certificate_degree,
        parse_system_text,
    )
    from .orient import OrientabilitySystem, TaggedPolynomial
    from .poly import Polynomial

    path = Path(args.system_file)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    polys, names, p = parse_system_text(path.read_text(), args.p)
    try:
        if args.localize:
            tagged = []
            for f in polys:
                vs = f.variables()
                square = len(vs) == 1 and f == Polynomial.var(p, next(iter(vs)), 2) - 1
                tagged.append(TaggedPolynomial(f, "p" if square else "f", ()))
            system = OrientabilitySystem(p, [], tagged)
            core = infeasible_core(system)
            found = None
            for d in range(args.max_degree + 1 if core is not None else 0):
                cert = find_certificate_localized(system, d, args.cap, core=core)
                if cert is not None:
                    found = (d, cert)
                    break
        else:
            found = min_certificate_degree(polys, args.max_degree, args.cap)
    except DegreeOverflowBudget as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if found is None:
        msg = f"no certificate of degree <= {args.max_degree} over F_{p}"
        if args.format == "json":
            _emit(json.dumps({"found": False, "max_degree": args.max_degree, "p": p}) + "\n", args.out)
        else:
            _emit(msg + "\n", args.out)
        return EXIT_OK
    d, cert = found
    if args.format == "json":
        _emit(json.dumps({
            "found": True,
            "p": p,
            "degree": cert.degree,
            "searched_degree": d,
            "terms": [[cert.coefficients[i].to_text(names), polys[i].to_text(names)] for i in cert.support],
        }, indent=2) + "\n", args.out)
    else:
        _emit(f"# certificate of degree {cert.degree}, {len(cert.support)} terms\n" + cert.to_text(names), args.out)
    return EXIT_OK


# -- enumerate -----------------------------------------------------------------

def cmd_enumerate(args) -> int:
    from .enumeration import enumerate_small

    ms = enumerate_small(args.n, args.r)
    if args.format == "json":
        _emit(json.dumps({"n": args.n, "r": args.r, "count": len(ms), "bases": [list(map(list, m.bases)) for m in ms]}) + "\n", args.out)
    elif args.format == "revlex":
        _emit("".join(formats.encode_revlex(m, args.revlex_variant) + "\n" for m in ms), args.out)
    elif args.format == "count":
        _emit(f"{len(ms)}\n", args.out)
    else:
        _emit("".join(formats.format_bases_line(f"M{k}", m) + "\n" for k, m in enumerate(ms)), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors; 2 is reserved for exhausted budgets
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weakor", description="Weak orientability and orientability of matroids.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="verdicts and certificates per matroid")
    _add_input(p)
    p.add_argument("--orient", action="store_true", help="also decide orientability")
    p.add_argument("--budget", type=int, default=10**7, help="search node budget")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="batch classification report")
    _add_input(p, families=False)
    p.add_argument("--orient", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--format", choices=("table", "json", "tsv"), default="table")
    p.add_argument("--out", help="write the report here and a figure next to it")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("family", help="build MI_n and run its checks")
    p.add_argument("--mi", type=int, required=True)
    p.add_argument("--checks", action="store_true")
    p.add_argument("--minors", action="store_true", help="with --checks: single-element minors")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("system", help="export an orientability polynomial system")
    _add_input(p)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--fix", action="store_true", help="apply the deterministic variable fixings")
    p.add_argument("--condensed", action="store_true")
    p.add_argument("--no-h", action="store_true", help="odd p: keep only the degree-two part")
    p.add_argument("--set-names", action="store_true", help="name variables like a_6_167")
    p.add_argument("--out")
    p.set_defaults(func=cmd_system)

    p = sub.add_parser("nulla", help="search for a Nullstellensatz certificate")
    p.add_argument("system_file")
    p.add_argument("--p", type=int)
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--cap", type=int, default=5_000_000, help="maximum number of unknowns")
    p.add_argument("--localize", action="store_true", help="search growing subsystems around an infeasible core")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_nulla)

    p = sub.add_parser("enumerate", help="all labeled matroids for n <= 6")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--format", choices=("bases", "revlex", "json", "count"), default="bases")
    p.add_argument("--revlex-variant", choices=formats.VARIANTS, default="revlex")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, formats.ParseError, formats.ValidationError, formats.LengthMismatch,
            MatroidError, PolynomialParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
