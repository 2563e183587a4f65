import csv
import datetime as dt
import io
import json
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borrowkit import aggregate, metrics
from borrowkit.aggregate import AGGREGATE_COLUMNS, OTHER_BUCKET, SCHEMES, bucket, quartiles


def dm(doc_id, date, counts=(10, 0, 0, 0), section="National", fr=0, cs=0):
    d = metrics.distribution(counts)
    scope, combo, anomaly = metrics.scope_and_combo(counts)
    n = sum(counts)
    mix = metrics.MixingMetrics(counts, metrics.cmi(counts), metrics.entropy(d), metrics.m_index(d), scope, combo,
                                anomaly, (n - counts[0]) / n if n else 0.0)
    b = metrics.BorrowingDiagnostics(borrowed_tokens=fr, code_switch_tokens=cs)
    b.per_donor["FR"] = fr
    if fr:
        b.per_pattern = {"on>oun": fr}
    return metrics.DocumentMetrics(doc_id, dt.date.fromisoformat(date), section, n, mix, b)


@pytest.mark.parametrize("date, six, five", [
    ("2009-05-01", "2008-2011", "2005-2009"),
    ("2020-06-15", "2020", "2020-2025"),
    ("1999-01-01", "1999-2007", "1999-2004"),
    ("2025-12-31", "2022-2025", "2020-2025"),
    ("1995-03-03", OTHER_BUCKET, OTHER_BUCKET),
    ("2026-01-01", OTHER_BUCKET, OTHER_BUCKET),
])
def test_bucket(date, six, five):
    d = dt.date.fromisoformat(date)
    assert bucket(SCHEMES["six"], d) == six
    assert bucket(SCHEMES["five"], d) == five


def test_schemes_are_contiguous():
    for scheme in SCHEMES.values():
        for (_, _, hi), (_, lo, _) in zip(scheme.boundaries, scheme.boundaries[1:]):
            assert lo - hi == dt.timedelta(days=1)


def test_bad_scheme():
    with pytest.raises(ValueError):
        aggregate.PeriodScheme.from_years("x", [(2000, 2005), (2004, 2010)])
    with pytest.raises(KeyError, match="five, six"):
        aggregate.get_scheme("seven")


def test_quartiles():
    assert quartiles([]) == (0.0, 0.0, 0.0)
    assert quartiles([3.0]) == (3.0, 3.0, 3.0)
    assert quartiles([0.0, 10.0, 20.0]) == (5.0, 10.0, 15.0)
    assert quartiles([1.0, 2.0, 3.0, 4.0]) == (1.75, 2.5, 3.25)


def test_cmi_mean_median_small_sample():
    docs = [dm("a", "2020-01-01", (10, 0, 0, 0)), dm("b", "2020-02-01", (9, 1, 0, 0)),
            dm("c", "2020-03-01", (8, 2, 0, 0))]
    (row,) = aggregate.aggregate(docs, "period")
    assert row.group == "2020"
    assert row.cmi_mean == pytest.approx(10.0) and row.cmi_median == pytest.approx(10.0)
    assert row.articles == 3 and row.small_sample
    docs.append(dm("d", "2020-04-01"))
    assert not aggregate.aggregate(docs)[0].small_sample


def test_token_weighting():
    docs = [dm("a", "2020-01-01", (10, 0, 0, 0)), dm("b", "2020-01-01", (5, 5, 0, 0))]
    (doc_w,) = aggregate.aggregate(docs, weighting="document")
    (tok_w,) = aggregate.aggregate(docs, weighting="token")
    assert doc_w.cmi_mean == pytest.approx(25.0)
    assert tok_w.cmi_mean == pytest.approx(50.0 * 10 / 20)


def test_group_keys():
    docs = [dm("a", "2009-05-01", section="Sport"), dm("b", "2020-06-15", (5, 0, 5, 0), section="National")]
    assert [r.group for r in aggregate.aggregate(docs, "period_section")] == ["2008-2011|Sport", "2020|National"]
    assert [r.group for r in aggregate.aggregate(docs, "scope")] == ["LU_ONLY", "LU_PLUS_1"]
    assert [r.group for r in aggregate.aggregate(docs, "combo")] == ["FR+LU", "LU"]
    assert [r.group for r in aggregate.aggregate(docs, "all")] == ["ALL"]
    with pytest.raises(ValueError):
        aggregate.aggregate(docs, "decade")


def test_borrowing_share_is_pooled():
    docs = [dm("a", "2020-01-01", (10, 1, 0, 0), fr=1, cs=0), dm("b", "2020-01-02", (10, 4, 0, 0), fr=1, cs=4)]
    (row,) = aggregate.aggregate(docs)
    assert row.borrowing_share == pytest.approx(2 / 6)
    assert row.donor_FR == 2


def test_monthly_series_and_period_stats():
    docs = [dm("a", "2020-01-03", (9, 1, 0, 0), fr=1), dm("b", "2020-01-20", (10, 0, 0, 0)),
            dm("c", "2021-03-01", (8, 2, 0, 0))]
    series = aggregate.monthly_series(docs)
    assert [r.month for r in series] == ["2020-01", "2021-03"]
    assert series[0].cs_rate_mean == pytest.approx(0.05)
    assert series[0].donor_FR_share == 1.0 and series[1].donor_FR_share == 0.0
    stats = aggregate.period_stats(series, SCHEMES["six"])
    assert [(p, n) for p, _, _, n in stats] == [("2020", 1), ("2021", 1)]


def test_scope_table_counts():
    docs = [dm("a", "2020-01-01"), dm("b", "2020-01-01"), dm("c", "2020-01-01", (5, 0, 5, 0))]
    rows = aggregate.scope_table(docs)
    scope = {r[1]: r for r in rows if r[0] == "scope"}
    assert scope["LU_ONLY"][2:5] == (2, pytest.approx(200 / 3), 0.0)
    assert scope["LU_PLUS_3"][2] == 0
    assert [r[1] for r in rows if r[0] == "combo"] == ["LU", "FR+LU"]


def _docs(n, seed):
    import random

    rng = random.Random(seed)
    out = []
    for i in range(n):
        counts = tuple(rng.choice([0, 0, rng.randint(1, 9)]) for _ in range(3))
        date = dt.date(1999, 1, 1) + dt.timedelta(days=rng.randint(0, 27 * 365))
        out.append(dm(str(i), date.isoformat(), (rng.randint(1, 40), *counts), rng.choice(["A", "B", "C"]),
                      fr=rng.randint(0, 3), cs=rng.randint(0, 5)))
    return out


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 8), st.sampled_from(aggregate.GROUP_BY))
def test_merge_matches_single_pass(seed, chunks, group_by):
    docs = _docs(60, seed)
    whole = aggregate.aggregate(docs, group_by)
    parts = [aggregate.GroupedAccumulator(group_by) for _ in range(chunks)]
    for i, m in enumerate(docs):
        parts[i % chunks].add(m)
    merged = aggregate.GroupedAccumulator(group_by)
    for p in reversed(parts):
        merged.merge(p)
    for a, b in zip(whole, merged.rows(), strict=True):
        for f in AGGREGATE_COLUMNS:
            x, y = getattr(a, f), getattr(b, f)
            assert x == pytest.approx(y, abs=1e-9) if isinstance(x, float) else x == y


def test_emit_reports(tmp_path):
    docs = _docs(30, 1)
    rows = aggregate.aggregate(docs, "period_section")
    series = aggregate.monthly_series(docs)
    plots = aggregate.plot_series(docs, series, SCHEMES["six"], {"on>oun": "ORTHOGRAPHIC"})
    kwargs = dict(scope_rows=aggregate.scope_table(docs), plots=plots, summary={"documents": 30})
    paths = aggregate.emit_reports(rows, series, tmp_path / "a", **kwargs)
    aggregate.emit_reports(rows, series, tmp_path / "b", **kwargs)
    names = sorted(p.name for p in paths)
    assert "aggregates_six.csv" in names and "series_pattern_class_counts.csv" in names
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    text = (tmp_path / "a" / "aggregates_six.csv").read_bytes().decode("utf-8")
    assert text.split("\r\n")[0] == ",".join(AGGREGATE_COLUMNS)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert len(parsed) == len(rows)
    assert parsed[0]["small_sample"] in ("true", "false")
    js = json.loads((tmp_path / "a" / "aggregates_six.json").read_text(encoding="utf-8"))
    assert list(js[0]) == sorted(AGGREGATE_COLUMNS)
    assert not [p for p in os.listdir(tmp_path / "a") if p.startswith(".")]


def test_emit_reports_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(aggregate.ReportError):
        aggregate.emit_reports([], [], blocker / "out")


def test_json_replaces_non_finite():
    assert json.loads(aggregate.to_json({"x": float("nan")})) == {"x": None}
