"""Acceptance suite: one PASS/FAIL/SKIP line per criterion.

Under pytest the lines are printed in the terminal summary; run
``python tests/test_acceptance.py`` to get them without pytest.
"""

import io
import json
import os
import random
import sys
import time
from collections import Counter
from contextlib import redirect_stdout
from itertools import combinations
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from weakor import matroid as M
from weakor.cli import main as cli_main
from weakor.enumeration import enumerate_all, random_rank3_paving
from weakor.families import mi_n, minor_minimality_check, verify_mi_nonweak
from weakor.linalg import PrimeFieldMatrix, solve, verify_outcome
from weakor.nulla import (
    CertificateRequest,
    DegreeOverflowBudget,
    NullstellensatzCertificate,
    certificate_from_pairs,
    find_certificate_localized,
    infeasible_core,
    min_certificate_degree,
    parse_certificate_text,
    verify_certificate,
)
from weakor.orient import (
    brute_force_sigma,
    build_orient_f2,
    build_orient_fp,
    build_orient_fp_condensed,
    decide_orientability,
    h_f2,
    h_factors,
    search_polynomial_system,
    set_style_names,
    variable_fixings,
)
from weakor.poly import Polynomial
from weakor.weak import (
    bj_variables,
    build_bland_jensen,
    is_weakly_orientable,
    minor_row_embedding,
    pairs_from_sets,
    verify_odd_list,
)

from test_nulla import PAPER_F2

FANO_CIRCUITS = ["167", "356", "257", "347", "145", "246", "123",
                 "4567", "2367", "1256", "1346", "1357", "1247", "2345"]
FANO_COCIRCUITS = ["2345", "1247", "1357", "1346", "1256", "2367", "4567"]
FANO_NINE = [
    ("167", "2367"), ("167", "4567"), ("356", "1357"), ("356", "2367"), ("356", "4567"),
    ("257", "1357"), ("257", "4567"), ("347", "1357"), ("347", "2367"),
]
FANO_LINES = ["123", "167", "356", "257", "347", "145", "246"]


def sets(labels):
    return {frozenset(int(ch) - 1 for ch in s) for s in labels}


# collected here and printed by the terminal-summary hook in conftest.py
LINES: dict[int, str] = {}


def report(k, status, detail, seconds):
    line = f"ACCEPTANCE {k}: {status} ({seconds:.1f}s) {detail}"
    LINES[k] = line
    if __name__ == "__main__":
        print(line, flush=True)
    return line


def run_criterion(k, fn):
    t = time.perf_counter()
    status, detail = fn()
    report(k, status, detail, time.perf_counter() - t)
    return status


# -- criteria ------------------------------------------------------------------

def criterion_1():
    t = time.perf_counter()
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["analyze", "--fano", "--format", "json"])
    elapsed = time.perf_counter() - t
    item = json.loads(buf.getvalue())[0]
    ol = item.get("odd_list", {})
    fano = M.fano()
    cert = pairs_from_sets(fano.circuit_system, [(set(int(c) - 1 for c in x), set(int(c) - 1 for c in y)) for x, y in FANO_NINE])
    as_odd_list = verify_odd_list(fano, cert)
    names = {n: k for k, n in enumerate(set_style_names(fano))}
    _, pairs = parse_certificate_text(PAPER_F2, names)
    system = build_orient_f2(fano)
    ns = certificate_from_pairs(system, pairs)
    as_nullstellensatz = verify_certificate(system, ns) and ns.degree == 0
    ok = (
        code == 0
        and item["weakly_orientable"] is False
        and ol.get("verified") is True
        and ol.get("length", 0) % 2 == 1
        and as_odd_list
        and as_nullstellensatz
        and elapsed < 1.0
    )
    return ("PASS" if ok else "FAIL"), (
        f"analyze --fano {elapsed:.3f}s, odd list {ol.get('length')} pairs verified={ol.get('verified')}; "
        f"paper 9 pairs: odd list {as_odd_list}, certificate {as_nullstellensatz}"
    )


def criterion_2():
    t = time.perf_counter()
    fano = M.fano()
    circuits = {frozenset(c) for c in fano.circuits}
    cocircuits = {frozenset(d) for d in fano.cocircuits}
    prof = M.intersection_profile(fano)
    binary = M.is_binary_by_intersections(fano)
    elapsed = time.perf_counter() - t
    ok = (
        circuits == sets(FANO_CIRCUITS)
        and cocircuits == sets(FANO_COCIRCUITS)
        and len(fano.circuits) == 14
        and len(fano.cocircuits) == 7
        and binary
        and set(prof) <= {0, 2, 4}
        and elapsed < 1.0
    )
    return ("PASS" if ok else "FAIL"), (
        f"{len(circuits)} circuits, {len(cocircuits)} cocircuits, binary={binary}, "
        f"profile {dict(sorted(prof.items()))}"
    )


def criterion_3():
    total = 0
    bad = []
    for n in range(7):
        for m in enumerate_all(n):
            total += 1
            res = decide_orientability(m)
            weak = is_weakly_orientable(m)
            if not (res.orientable is True and res.verified and weak.weakly_orientable):
                bad.append((n, m.r, sorted(m.basis_masks)))
    ok = total == 4305 and not bad
    return ("PASS" if ok else "FAIL"), f"{total} matroids with n <= 6, {len(bad)} not shown orientable"


def criterion_4_sample():
    out = []
    for n in range(6):
        out.extend(enumerate_all(n))
    rng = random.Random(2024)
    six = enumerate_all(6)
    out.extend(rng.sample(six, 80))
    out.append(M.fano())
    out.extend(random_rank3_paving(7, rng) for _ in range(40))
    return out


def criterion_4():
    sample = criterion_4_sample()
    disagreements = []
    verdicts = Counter()
    for m in sample:
        cs = m.circuit_system
        fx = variable_fixings(m)[: len(cs.circuits) + len(cs.cocircuits)]
        brute = brute_force_sigma(m) is not None
        f2 = search_polynomial_system(build_orient_f2(m), fixed=fx) is not None
        f3 = search_polynomial_system(build_orient_fp(m, 3), fixed=fx, domain=(1, 2)) is not None
        f3c = search_polynomial_system(build_orient_fp_condensed(m, 3), fixed=fx, domain=(1, 2)) is not None
        verdicts[brute] += 1
        if len({brute, f2, f3, f3c}) != 1:
            disagreements.append((m.n, m.r, brute, f2, f3, f3c))
    ok = len(sample) >= 200 and not disagreements
    return ("PASS" if ok else "FAIL"), (
        f"{len(sample)} matroids (n <= 7), {verdicts[False]} non-orientable, "
        f"{len(disagreements)} disagreements among brute force / F_2 / F_3 / condensed F_3"
    )


def criterion_5():
    m0 = mi_n(0)
    have = set(m0.basis_masks)
    nonbases = {frozenset(s) for s in combinations(range(7), 3) if M.mask_of(s) not in have}
    relabel_ok = nonbases == sets(FANO_LINES)
    nonweak = {n: verify_mi_nonweak(n)["passed"] for n in range(4)}
    minors = {n: minor_minimality_check(n)["passed"] for n in range(3)}
    ok = relabel_ok and all(nonweak.values()) and all(minors.values())
    return ("PASS" if ok else "FAIL"), (
        f"MI_0 = Fano: {relabel_ok}; non-weak n=0..3: {list(nonweak.values())}; "
        f"minor checks n=0..2: {list(minors.values())}"
    )


DB_CELLS = {7: ("1/108", "1/1"), 8: ("4/325", "2/3"), 9: ("20/1275", "9/18")}


def criterion_6():
    root = os.environ.get("WEAKOR_DB_DIR")
    if not root:
        return "SKIP", "rank-3 isomorph-free databases not supplied (set WEAKOR_DB_DIR to a directory with r3n7.txt, r3n8.txt, r3n9.txt)"
    from weakor.batch import classify_batch
    from weakor.formats import parse_revlex_file

    got = {}
    for n, (want, want_simple) in DB_CELLS.items():
        path = Path(root) / f"r3n{n}.txt"
        if not path.exists():
            return "SKIP", f"missing {path}"
        rep = classify_batch(parse_revlex_file(path, n, 3), orient=True, jobs=os.cpu_count() or 1)
        c = rep.cell(3, n)
        got[n] = (f"{c['non_weak']}/{c['total']}", f"{c['simple_non_weak']}/{c['simple_non_orientable']}")
    ok = got == DB_CELLS
    return ("PASS" if ok else "FAIL"), f"cells {got}, expected {DB_CELLS}"


def criterion_7():
    fano = M.fano()
    names = {n: k for k, n in enumerate(set_style_names(fano))}
    _, pairs = parse_certificate_text(PAPER_F2, names)
    system = build_orient_f2(fano)
    a = verify_certificate(system, certificate_from_pairs(system, pairs))
    got = min_certificate_degree(build_bland_jensen(fano), 1)
    b = got is not None and got[0] == 0 and verify_certificate(build_bland_jensen(fano), got[1])
    fixed = build_orient_fp(fano, 3).with_fixings(variable_fixings(fano))
    c_detail = ""
    c = False
    core = infeasible_core(fixed)
    for d in range(4):
        try:
            cert = find_certificate_localized(fixed, d, core=core)
        except DegreeOverflowBudget as exc:
            c = True
            c_detail = f"degree {d}: DegreeOverflowBudget ({exc})"
            break
        if cert is not None:
            c = verify_certificate(fixed, cert)
            c_detail = f"degree {cert.degree} certificate, {len(cert.support)} terms, verified={c}"
            break
    else:
        c_detail = "no certificate up to degree 3"
    ok = a and b and c
    return ("PASS" if ok else "FAIL"), f"(a) paper F_2 certificate {a}; (b) Bland-Jensen degree 0 {b}; (c) fixed F_3 Fano: {c_detail}"


def criterion_8():
    rng = random.Random(8)
    t = time.perf_counter()
    bad = 0
    split = Counter()
    for k in range(1000):
        p = 2 if k % 2 == 0 else 3
        rows, cols = rng.randint(1, 12), rng.randint(1, 12)
        A = PrimeFieldMatrix([[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], p)
        if rng.random() < 0.5:
            x = [rng.randrange(p) for _ in range(cols)]
            b = [int(v) for v in A.matvec(x)]
        else:
            b = [rng.randrange(p) for _ in range(rows)]
        out = solve(A, b)
        split[out.feasible] += 1
        if not verify_outcome(A, b, out):
            bad += 1
        if p == 2:
            g = solve(A, b, packed=False)
            pk = solve(A, b, packed=True)
            if g.feasible != pk.feasible or not verify_outcome(A, b, g) or not verify_outcome(A, b, pk):
                bad += 1
            elif g.feasible and len(g.nullspace_basis) != len(pk.nullspace_basis):
                bad += 1
    elapsed = time.perf_counter() - t
    ok = bad == 0 and elapsed < 30
    return ("PASS" if ok else "FAIL"), f"1000 systems ({split[True]} feasible, {split[False]} infeasible), {bad} failures, {elapsed:.1f}s"


def _bj_keys(mat, swap):
    cs = mat.circuit_system
    sys_ = build_bland_jensen(mat)
    out = set()
    for k, (i, j) in enumerate(sys_.row_pairs):
        x, y = frozenset(cs.circuits[i]), frozenset(cs.cocircuits[j])
        keys = []
        for v in sys_.row_vars[k]:
            var = sys_.variables[v]
            kind = {"a": "b", "b": "a"}[var.kind] if swap else var.kind
            keys.append((kind, var.element, x if var.kind == "a" else y))
        out.add(frozenset(keys))
    return out


def criterion_9():
    failures = Counter()
    pool = [m for n in range(6) for m in enumerate_all(n)] + [M.fano(), mi_n(1)]
    for m in pool:
        d = M.dual(m)
        if set(M.dual(d).basis_masks) != set(m.basis_masks):
            failures["duality involution"] += 1
        if m.n <= 7 and _bj_keys(m, False) != _bj_keys(d, True):
            failures["Bland-Jensen duality"] += 1
        res = is_weakly_orientable(m)
        if res.weakly_orientable:
            sys_ = res.system
            x = res.family.particular
            cs = m.circuit_system
            for kind, count in (("a", len(cs.circuits)), ("b", len(cs.cocircuits))):
                for i in range(count):
                    flip = sum(1 << k for k, v in enumerate(sys_.variables) if v.kind == kind and v.index == i)
                    if not sys_.is_solution(x ^ flip):
                        failures["sign flip"] += 1
        cs = m.circuit_system
        idx = {v: k for k, v in enumerate(bj_variables(cs))}
        for i, j in cs.pairs_with_intersection(3):
            e, f, g = cs.intersection(i, j)
            u, v, w = h_factors(idx, i, j, e, f, g)
            if (u * v * w).multilinear() != h_f2(idx, i, j, e, f, g):
                failures["h factorization"] += 1
    for m in (M.fano(), mi_n(1)):
        for e in range(m.n):
            for op, fn in (("delete", M.delete), ("contract", M.contract)):
                try:
                    rows = minor_row_embedding(m, e, op)
                    if len(set(rows)) != len(rows):
                        failures["minor subsystem"] += 1
                except ValueError:
                    failures["minor subsystem"] += 1
                if not is_weakly_orientable(fn(m, e)).weakly_orientable:
                    failures["minor closure"] += 1
    ok = not failures
    return ("PASS" if ok else "FAIL"), f"{len(pool)} matroids, failures: {dict(failures) or 0}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("k", range(1, 10))
def test_acceptance(k):
    status = run_criterion(k, CRITERIA[k - 1])
    if status == "SKIP":
        pytest.skip(f"criterion {k} skipped")
    assert status == "PASS"


if __name__ == "__main__":
    statuses = [run_criterion(k, fn) for k, fn in enumerate(CRITERIA, 1)]
    sys.exit(0 if all(s in ("PASS", "SKIP") for s in statuses) else 1)
