"""Grouping of per-document metrics by period and section, time series, report files."""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import logging
import math
import os
import statistics
import tempfile
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from borrowkit.metrics import DocumentMetrics, Scope

log = logging.getLogger(__name__)

OTHER_BUCKET = "OTHER"
DONORS = ("FR", "DE", "EN")
SMALL_SAMPLE_MAX = 3

AGGREGATE_COLUMNS = (
    "group", "articles", "tokens", "cmi_mean", "cmi_median", "cmi_iqr_lo", "cmi_iqr_hi",
    "entropy_mean", "m_index_mean", "cs_rate_mean", "borrowed_tokens", "borrowing_share",
    "donor_FR", "donor_DE", "donor_EN", "small_sample",
)
SERIES_COLUMNS = (
    "month", "articles", "tokens", "cs_rate_mean", "borrowed_tokens", "borrowing_share",
    "donor_FR", "donor_DE", "donor_EN", "donor_FR_share", "donor_DE_share", "donor_EN_share",
)
SCOPE_COLUMNS = ("kind", "key", "count", "pct", "cmi_median", "cmi_iqr_lo", "cmi_iqr_hi")


class ReportError(OSError):
    pass


@dataclass(frozen=True)
class PeriodScheme:
    name: str
    boundaries: tuple[tuple[str, dt.date, dt.date], ...]

    def __post_init__(self):
        prev = None
        for label, lo, hi in self.boundaries:
            if lo > hi:
                raise ValueError(f"{self.name}: empty interval {label}")
            if prev is not None and lo <= prev:
                raise ValueError(f"{self.name}: intervals overlap or are out of order at {label}")
            prev = hi

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(b[0] for b in self.boundaries)

    @classmethod
    def from_years(cls, name: str, spans: Sequence[tuple[int, int]]) -> "PeriodScheme":
        bounds = []
        for lo, hi in spans:
            label = str(lo) if lo == hi else f"{lo}-{hi}"
            bounds.append((label, dt.date(lo, 1, 1), dt.date(hi, 12, 31)))
        return cls(name, tuple(bounds))


SCHEMES = {
    "six": PeriodScheme.from_years("six", [(1999, 2007), (2008, 2011), (2012, 2019), (2020, 2020),
                                           (2021, 2021), (2022, 2025)]),
    "five": PeriodScheme.from_years("five", [(1999, 2004), (2005, 2009), (2010, 2014), (2015, 2019),
                                             (2020, 2025)]),
}


def get_scheme(name: str) -> PeriodScheme:
    try:
        return SCHEMES[name]
    except KeyError:
        raise KeyError(f"unknown scheme {name!r}; built-ins: {', '.join(sorted(SCHEMES))}") from None


def bucket(scheme: PeriodScheme, date: dt.date) -> str:
    for label, lo, hi in scheme.boundaries:
        if lo <= date <= hi:
            return label
    log.warning("date %s outside scheme %s; bucketed as %s", date, scheme.name, OTHER_BUCKET)
    return OTHER_BUCKET


def quartiles(values: Sequence[float]) -> tuple[float, float, float]:
    """(q1, median, q3) with linear interpolation between order statistics."""
    if not values:
        return (0.0, 0.0, 0.0)
    if len(values) == 1:
        return (values[0],) * 3
    q1, q2, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return (q1, q2, q3)


@dataclass
class Accumulator:
    """Mergeable per-group running totals."""

    articles: int = 0
    tokens: int = 0
    cmi_sum: float = 0.0
    entropy_sum: float = 0.0
    m_index_sum: float = 0.0
    cs_rate_sum: float = 0.0
    # token-weighted counterparts
    weight: int = 0
    cmi_wsum: float = 0.0
    entropy_wsum: float = 0.0
    m_index_wsum: float = 0.0
    cs_rate_wsum: float = 0.0
    borrowed: int = 0
    code_switch: int = 0
    ambiguous: int = 0
    donors: Counter = field(default_factory=Counter)
    patterns: Counter = field(default_factory=Counter)
    cmi_values: list = field(default_factory=list)

    def add(self, m: DocumentMetrics) -> None:
        mix, b = m.mixing, m.borrowing
        w = sum(mix.counts)
        self.articles += 1
        self.tokens += m.tokens
        self.cmi_sum += mix.cmi
        self.entropy_sum += mix.entropy
        self.m_index_sum += mix.m_index
        self.cs_rate_sum += mix.cs_rate
        self.weight += w
        self.cmi_wsum += mix.cmi * w
        self.entropy_wsum += mix.entropy * w
        self.m_index_wsum += mix.m_index * w
        self.cs_rate_wsum += mix.cs_rate * w
        self.borrowed += b.borrowed_tokens
        self.code_switch += b.code_switch_tokens
        self.ambiguous += b.ambiguous_tokens
        self.donors.update({k: v for k, v in b.per_donor.items() if v})
        self.patterns.update(b.per_pattern)
        self.cmi_values.append(mix.cmi)

    def merge(self, other: "Accumulator") -> "Accumulator":
        for name in ("articles", "tokens", "cmi_sum", "entropy_sum", "m_index_sum", "cs_rate_sum",
                     "weight", "cmi_wsum", "entropy_wsum", "m_index_wsum", "cs_rate_wsum",
                     "borrowed", "code_switch", "ambiguous"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.donors.update(other.donors)
        self.patterns.update(other.patterns)
        self.cmi_values.extend(other.cmi_values)
        return self

    def mean(self, name: str, weighting: str = "document") -> float:
        if weighting == "token":
            return getattr(self, f"{name}_wsum") / self.weight if self.weight else 0.0
        return getattr(self, f"{name}_sum") / self.articles if self.articles else 0.0

    @property
    def borrowing_share(self) -> float:
        denom = self.borrowed + self.code_switch + self.ambiguous
        return self.borrowed / denom if denom else 0.0

    def row(self, key: str, weighting: str = "document") -> "AggregateRow":
        lo, med, hi = quartiles(sorted(self.cmi_values))
        return AggregateRow(
            group=key,
            articles=self.articles,
            tokens=self.tokens,
            cmi_mean=self.mean("cmi", weighting),
            cmi_median=med,
            cmi_iqr_lo=lo,
            cmi_iqr_hi=hi,
            entropy_mean=self.mean("entropy", weighting),
            m_index_mean=self.mean("m_index", weighting),
            cs_rate_mean=self.mean("cs_rate", weighting),
            borrowed_tokens=self.borrowed,
            borrowing_share=self.borrowing_share,
            donor_FR=self.donors["FR"],
            donor_DE=self.donors["DE"],
            donor_EN=self.donors["EN"],
            small_sample=self.articles <= SMALL_SAMPLE_MAX,
        )


@dataclass(frozen=True)
class AggregateRow:
    group: str
    articles: int
    tokens: int
    cmi_mean: float
    cmi_median: float
    cmi_iqr_lo: float
    cmi_iqr_hi: float
    entropy_mean: float
    m_index_mean: float
    cs_rate_mean: float
    borrowed_tokens: int
    borrowing_share: float
    donor_FR: int
    donor_DE: int
    donor_EN: int
    small_sample: bool


GROUP_BY = ("period", "section", "period_section", "scope", "combo", "all")


def group_key(m: DocumentMetrics, group_by: str, scheme: PeriodScheme) -> str:
    if group_by == "period":
        return bucket(scheme, m.date)
    if group_by == "section":
        return m.section
    if group_by == "period_section":
        return f"{bucket(scheme, m.date)}|{m.section}"
    if group_by == "scope":
        return m.mixing.scope.value
    if group_by == "combo":
        return m.mixing.combo_key
    if group_by == "all":
        return "ALL"
    raise ValueError(f"unknown group_by {group_by!r}; choose from {GROUP_BY}")


class GroupedAccumulator:
    def __init__(self, group_by: str = "period", scheme: PeriodScheme = SCHEMES["six"]):
        if group_by not in GROUP_BY:
            raise ValueError(f"unknown group_by {group_by!r}; choose from {GROUP_BY}")
        self.group_by = group_by
        self.scheme = scheme
        self.groups: dict[str, Accumulator] = {}

    def add(self, m: DocumentMetrics) -> None:
        key = group_key(m, self.group_by, self.scheme)
        self.groups.setdefault(key, Accumulator()).add(m)

    def merge(self, other: "GroupedAccumulator") -> "GroupedAccumulator":
        for key, acc in other.groups.items():
            mine = self.groups.get(key)
            if mine is None:
                self.groups[key] = Accumulator().merge(acc)
            else:
                mine.merge(acc)
        return self

    def rows(self, weighting: str = "document") -> list[AggregateRow]:
        return [self.groups[k].row(k, weighting) for k in sorted(self.groups)]


def aggregate(metrics: Iterable[DocumentMetrics], group_by: str = "period",
              scheme: PeriodScheme = SCHEMES["six"], weighting: str = "document") -> list[AggregateRow]:
    acc = GroupedAccumulator(group_by, scheme)
    for m in metrics:
        acc.add(m)
    return acc.rows(weighting)


# --- monthly series ---------------------------------------------------------

@dataclass(frozen=True)
class SeriesRow:
    month: str
    articles: int
    tokens: int
    cs_rate_mean: float
    borrowed_tokens: int
    borrowing_share: float
    donor_FR: int
    donor_DE: int
    donor_EN: int
    donor_FR_share: float
    donor_DE_share: float
    donor_EN_share: float


def _month(d: dt.date) -> str:
    return f"{d.year:04d}-{d.month:02d}"


def monthly_series(metrics: Iterable[DocumentMetrics]) -> list[SeriesRow]:
    months: dict[str, Accumulator] = {}
    for m in metrics:
        months.setdefault(_month(m.date), Accumulator()).add(m)
    out = []
    for key in sorted(months):
        acc = months[key]
        total = sum(acc.donors[d] for d in DONORS)
        shares = [acc.donors[d] / total if total else 0.0 for d in DONORS]
        out.append(SeriesRow(key, acc.articles, acc.tokens, acc.mean("cs_rate"), acc.borrowed,
                             acc.borrowing_share, *(acc.donors[d] for d in DONORS), *shares))
    return out


def period_stats(series: Sequence[SeriesRow], scheme: PeriodScheme) -> list[tuple[str, float, float, int]]:
    """(period, mean, standard deviation, months) of the monthly cs rate per period."""
    by_period: dict[str, list[float]] = {}
    for row in series:
        y, mth = map(int, row.month.split("-"))
        by_period.setdefault(bucket(scheme, dt.date(y, mth, 1)), []).append(row.cs_rate_mean)
    order = {label: i for i, label in enumerate(scheme.labels)}
    out = []
    for label in sorted(by_period, key=lambda l: order.get(l, len(order))):
        vals = by_period[label]
        sd = statistics.stdev(vals) if len(vals) > 1 else 0.0
        out.append((label, statistics.fmean(vals), sd, len(vals)))
    return out


# --- scope table ------------------------------------------------------------

def scope_table(metrics: Iterable[DocumentMetrics]) -> list[tuple]:
    """Rows of (kind, key, count, pct, cmi_median, iqr_lo, iqr_hi) for scopes and combos."""
    scopes: dict[str, list[float]] = {s.value: [] for s in Scope}
    combos: dict[str, list[float]] = {}
    n = 0
    for m in metrics:
        n += 1
        scopes[m.mixing.scope.value].append(m.mixing.cmi)
        combos.setdefault(m.mixing.combo_key, []).append(m.mixing.cmi)
    rows = []
    for kind, table, keys in (("scope", scopes, [s.value for s in Scope]),
                              ("combo", combos, sorted(combos, key=lambda k: (-len(combos[k]), k)))):
        for key in keys:
            vals = sorted(table[key])
            lo, med, hi = quartiles(vals)
            rows.append((kind, key, len(vals), 100.0 * len(vals) / n if n else 0.0, med, lo, hi))
    return rows


# --- plot data --------------------------------------------------------------

def plot_series(metrics: Sequence[DocumentMetrics], series: Sequence[SeriesRow], scheme: PeriodScheme,
                pattern_classes: Mapping[str, str] | None = None) -> dict[str, list[tuple]]:
    """Two-column (x, y) data per figure family, keyed by file stem."""
    years = Counter(m.date.year for m in metrics)
    patterns: Counter = Counter()
    for m in metrics:
        patterns.update(m.borrowing.per_pattern)
    out = {
        "series_articles_per_year": sorted(years.items()),
        "series_pattern_counts": sorted(patterns.items(), key=lambda kv: (-kv[1], kv[0])),
        "series_monthly_cs_rate": [(r.month, r.cs_rate_mean) for r in series],
    }
    stats = period_stats(series, scheme)
    out["series_period_cs_mean"] = [(p, mean) for p, mean, _, _ in stats]
    out["series_period_cs_std"] = [(p, sd) for p, _, sd, _ in stats]
    if pattern_classes is not None:
        classes: Counter = Counter()
        for pid, count in patterns.items():
            classes[pattern_classes.get(pid, "UNKNOWN")] += count
        out["series_pattern_class_counts"] = sorted(classes.items(), key=lambda kv: (-kv[1], kv[0]))
    return out


# --- writing ----------------------------------------------------------------

def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def to_json(obj) -> str:
    return json.dumps(_json_safe(obj), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def ensure_writable(out_dir: str | Path) -> Path:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(dir=out, prefix=".probe-"):
            pass
    except OSError as exc:
        raise ReportError(f"output directory {out} is not writable: {exc}") from exc
    return out


def write_files(out_dir: str | Path, files: Mapping[str, str]) -> list[Path]:
    """Write every file to a temp name first, then rename them all into place."""
    out = ensure_writable(out_dir)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            staged.append((tmp, out / name))
    except OSError:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)
    return [final for _, final in staged]


def emit_reports(rows: Sequence[AggregateRow], series: Sequence[SeriesRow], out_dir: str | Path,
                 formats: Sequence[str] = ("csv", "json"), scheme: str = "six",
                 scope_rows: Sequence[tuple] | None = None,
                 plots: Mapping[str, Sequence[tuple]] | None = None,
                 induction_report: Mapping | None = None,
                 summary: Mapping | None = None) -> list[Path]:
    files: dict[str, str] = {}
    if "csv" in formats:
        files[f"aggregates_{scheme}.csv"] = to_csv(AGGREGATE_COLUMNS, [astuple_row(r) for r in rows])
        files["monthly_series.csv"] = to_csv(SERIES_COLUMNS, [astuple_row(r) for r in series])
        if scope_rows is not None:
            files["scope_table.csv"] = to_csv(SCOPE_COLUMNS, scope_rows)
    if "json" in formats:
        files[f"aggregates_{scheme}.json"] = to_json([asdict(r) for r in rows])
        files["monthly_series.json"] = to_json([asdict(r) for r in series])
        if scope_rows is not None:
            files["scope_table.json"] = to_json([dict(zip(SCOPE_COLUMNS, r)) for r in scope_rows])
    for stem, points in (plots or {}).items():
        files[f"{stem}.csv"] = to_csv(("x", "y"), points)
    if induction_report is not None:
        files["induction_report.json"] = to_json(dict(induction_report))
    if summary is not None:
        files["report_summary.json"] = to_json(dict(summary))
    return write_files(out_dir, files)


def astuple_row(row) -> tuple:
    return tuple(getattr(row, f) for f in row.__dataclass_fields__)
