from weakor import matroid as M
from weakor.batch import ClassificationReport, classify_batch, classify_record, render_report
from weakor.enumeration import enumerate_small
from weakor.formats import MatroidRecord


def records():
    out = [MatroidRecord(f"e{k}", m, "enumerated") for k, m in enumerate(enumerate_small(4, 2))]
    out.append(MatroidRecord("fano", M.fano(), "family"))
    return out


def test_fano_cell():
    rep = classify_batch([MatroidRecord("fano", M.fano(), "family")], orient=True)
    c = rep.cell(3, 7)
    assert c["total"] == 1 and c["non_weak"] == 1 and c["non_orientable"] == 1
    assert c["simple_non_weak"] == 1 and c["simple_non_orientable"] == 1
    assert "1/1" in render_report(rep)


def test_aggregate_equals_record_flags():
    rep = classify_batch(records(), orient=True)
    agg = rep.aggregate()
    assert sum(c["total"] for c in agg.values()) == len(rep.records)
    assert sum(c["non_weak"] for c in agg.values()) == sum(r.weakly_orientable is False for r in rep.records)
    assert sum(c["simple"] for c in agg.values()) == sum(bool(r.simple) for r in rep.records)


def test_jobs_do_not_change_output():
    recs = records()
    a = classify_batch(recs, orient=True, jobs=1)
    b = classify_batch(recs, orient=True, jobs=2, chunk=8)
    for fmt in ("table", "json", "tsv"):
        assert render_report(a, fmt) == render_report(b, fmt)


def test_json_round_trip():
    rep = classify_batch(records(), orient=True)
    back = ClassificationReport.from_json(rep.to_json())
    assert back.to_json() == rep.to_json()


def test_empty_report():
    rep = ClassificationReport([], orient_checked=True)
    table = render_report(rep, "table")
    assert "Non-weakly orientable / total" in table
    assert not any(ch.isdigit() for ch in table)
    assert render_report(rep, "tsv").strip().count("\n") == 0


def test_undecided_is_not_misreported():
    rec = MatroidRecord("u", M.uniform(3, 7), "family")
    got = classify_record(rec, orient=True, node_budget=0)
    assert got.orientable == "undecided" and got.error is None
    rep = ClassificationReport([got], True)
    assert rep.cell(3, 7)["undecided"] == 1 and rep.cell(3, 7)["non_orientable"] == 0


def test_errors_are_quarantined():
    class Broken:
        n, r = 3, 1
        circuit_system = property(lambda self: 1 / 0)

    bad = MatroidRecord("bad", Broken(), "bases-file")
    rep = classify_batch([bad, MatroidRecord("u", M.uniform(2, 4), "family")])
    assert rep.records[0].error is not None and rep.records[1].error is None
    assert rep.cell(1, 3)["errors"] == 1
    assert "error bad" in render_report(rep)
