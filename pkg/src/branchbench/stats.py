"""Benchmark statistics: folded speed ratios, bucket tables, paired t-test.

A folded ratio maps t_other / t_base to a symmetric scale: r when r >= 1,
otherwise -1/r, so "2.5x faster" and "2.5x slower" print as 2.5 and -2.5.
The paired t-test uses the Student-t 0.975 quantile computed here by
numerically inverting the regularized incomplete beta function (continued
fraction evaluation, absolute error well under 1e-6); no statistics library
is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .bench import RunRecord


def folded_ratio(t_other: float, t_base: float) -> float:
    """Sign-folded ratio of two positive times."""
    if t_other <= 0 or t_base <= 0:
        raise ValueError("folded_ratio needs positive times")
    r = t_other / t_base
    return r if r >= 1.0 else -1.0 / r


# -- Student-t quantile --------------------------------------------------

def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) by the continued fraction of the incomplete beta integral."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        a * math.log(x)
        + b * math.log1p(-x)
        - (math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(x, a, b) / a
    return 1.0 - front * _beta_cf(1.0 - x, b, a) / b


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        num = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + num * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + num / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + num * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + num / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-12:
            break
    return h


def student_t_cdf(t: float, dof: int) -> float:
    if dof < 1:
        raise ValueError("dof must be at least 1")
    if t == 0.0:
        return 0.5
    x = dof / (dof + t * t)
    tail = 0.5 * regularized_incomplete_beta(x, 0.5 * dof, 0.5)
    return 1.0 - tail if t > 0 else tail


def student_t_quantile(p: float, dof: int) -> float:
    """Inverse CDF of Student's t by bisection on the CDF above."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be strictly between 0 and 1")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -student_t_quantile(1.0 - p, dof)
    lo, hi = 0.0, 1.0
    while student_t_cdf(hi, dof) < p:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover - p astronomically close to 1
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if student_t_cdf(mid, dof) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9:
            break
    return 0.5 * (lo + hi)


# -- paired t-test -------------------------------------------------------

@dataclass(frozen=True)
class TTestReport:
    n: int
    mean: float
    sd: float
    t: float
    ci95: tuple[float, float]


def paired_ttest(diffs: Sequence[float]) -> TTestReport:
    """Two-sided paired t-test summary with a 95% confidence interval."""
    n = len(diffs)
    if n < 2:
        raise ValueError("paired_ttest needs at least two differences")
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    sd = math.sqrt(var)
    if sd == 0.0:
        t = 0.0 if mean == 0.0 else math.copysign(math.inf, mean)
        return TTestReport(n, mean, sd, t, (mean, mean))
    sem = sd / math.sqrt(n)
    t = mean / sem
    half = student_t_quantile(0.975, n - 1) * sem
    return TTestReport(n, mean, sd, t, (mean - half, mean + half))


# -- record aggregation ---------------------------------------------------

_BUCKETS = (">1", ">2", ">3", "<1", "<2", "<3")


def _index(records: Iterable[RunRecord]) -> dict[str, dict[str, RunRecord]]:
    """scheme -> instance -> record (latest record wins on duplicates)."""
    out: dict[str, dict[str, RunRecord]] = {}
    for rec in records:
        out.setdefault(rec.scheme, {})[rec.instance] = rec
    return out


def _usable_pair(a: RunRecord, b: RunRecord) -> bool:
    return (
        a.status != "limit"
        and b.status != "limit"
        and a.elapsed_ms > 0
        and b.elapsed_ms > 0
    )


@dataclass(frozen=True)
class BucketRow:
    scheme: str
    percentages: dict[str, float]
    pairs: int
    excluded: int


def categorize(records: Iterable[RunRecord], base_scheme: str) -> list[BucketRow]:
    """Per scheme: percentage of instances faster/slower than the baseline.

    Ratios are method-centric (ratio of base time to scheme time, folded), so
    ">2" counts instances where the scheme was at least twice as fast and
    "<2" where it was at least twice as slow.  Pairs with a limit outcome on
    either side are excluded and reported separately.
    """
    by_scheme = _index(records)
    if base_scheme not in by_scheme:
        raise ValueError(f"no records for baseline scheme {base_scheme!r}")
    base = by_scheme[base_scheme]
    rows = []
    for scheme in sorted(by_scheme):
        if scheme == base_scheme:
            continue
        counts = dict.fromkeys(_BUCKETS, 0)
        pairs = 0
        excluded = 0
        for instance, rec in sorted(by_scheme[scheme].items()):
            base_rec = base.get(instance)
            if base_rec is None:
                continue
            if not _usable_pair(rec, base_rec):
                excluded += 1
                continue
            pairs += 1
            f = folded_ratio(base_rec.elapsed_ms, rec.elapsed_ms)
            if f > 1.0:
                counts[">1"] += 1
                if f >= 2.0:
                    counts[">2"] += 1
                if f >= 3.0:
                    counts[">3"] += 1
            elif f < 0.0:
                counts["<1"] += 1
                if f <= -2.0:
                    counts["<2"] += 1
                if f <= -3.0:
                    counts["<3"] += 1
        pct = {
            k: (100.0 * v / pairs if pairs else 0.0) for k, v in counts.items()
        }
        rows.append(BucketRow(scheme, pct, pairs, excluded))
    return rows


def instance_class(instance: str) -> str:
    """Grouping key for report rows: the name up to the first dash."""
    return instance.split("-", 1)[0]


@dataclass(frozen=True)
class SpeedupRow:
    cls: str
    scheme: str
    time_fold: Optional[float]
    node_fold: Optional[float]
    pairs: int


def speedups(records: Iterable[RunRecord], base_scheme: str) -> list[SpeedupRow]:
    """Per class and scheme: mean folded time and node ratios vs the baseline.

    Positive values mean the baseline was faster (needed fewer nodes).
    """
    by_scheme = _index(records)
    if base_scheme not in by_scheme:
        raise ValueError(f"no records for baseline scheme {base_scheme!r}")
    base = by_scheme[base_scheme]
    rows = []
    classes = sorted({instance_class(i) for i in base})
    for cls in classes:
        for scheme in sorted(by_scheme):
            if scheme == base_scheme:
                continue
            tf, nf = [], []
            for instance, rec in sorted(by_scheme[scheme].items()):
                if instance_class(instance) != cls:
                    continue
                base_rec = base.get(instance)
                if base_rec is None or not _usable_pair(rec, base_rec):
                    continue
                tf.append(folded_ratio(rec.elapsed_ms, base_rec.elapsed_ms))
                if rec.nodes > 0 and base_rec.nodes > 0:
                    nf.append(folded_ratio(rec.nodes, base_rec.nodes))
            rows.append(
                SpeedupRow(
                    cls,
                    scheme,
                    sum(tf) / len(tf) if tf else None,
                    sum(nf) / len(nf) if nf else None,
                    len(tf),
                )
            )
    return rows


@dataclass(frozen=True)
class SchemeTTest:
    scheme: str
    report: Optional[TTestReport]
    pairs: int
    excluded: int


def ttest_vs_base(records: Iterable[RunRecord], base_scheme: str) -> list[SchemeTTest]:
    """Paired t-test per scheme on time differences (baseline minus scheme)."""
    by_scheme = _index(records)
    if base_scheme not in by_scheme:
        raise ValueError(f"no records for baseline scheme {base_scheme!r}")
    base = by_scheme[base_scheme]
    out = []
    for scheme in sorted(by_scheme):
        if scheme == base_scheme:
            continue
        diffs = []
        excluded = 0
        for instance, rec in sorted(by_scheme[scheme].items()):
            base_rec = base.get(instance)
            if base_rec is None:
                continue
            if rec.status == "limit" or base_rec.status == "limit":
                excluded += 1
                continue
            diffs.append(base_rec.elapsed_ms - rec.elapsed_ms)
        report = paired_ttest(diffs) if len(diffs) >= 2 else None
        out.append(SchemeTTest(scheme, report, len(diffs), excluded))
    return out


# -- text report -----------------------------------------------------------

def _fmt(value: Optional[float], width: int = 9) -> str:
    if value is None:
        return "-".rjust(width)
    if value == math.inf:
        return "inf".rjust(width)
    if value == -math.inf:
        return "-inf".rjust(width)
    return f"{value:{width}.2f}"


def format_report(
    records: Sequence[RunRecord],
    base_scheme: str,
    include_speedups: bool = True,
    include_categorize: bool = True,
    include_ttest: bool = True,
) -> str:
    lines: list[str] = []
    if include_speedups:
        lines.append(
            f"mean folded ratios vs {base_scheme} "
            "(positive: baseline faster; t = time, n = nodes)"
        )
        lines.append(f"{'class':<14}{'scheme':<12}{'t':>9}{'n':>9}{'pairs':>7}")
        for row in speedups(records, base_scheme):
            lines.append(
                f"{row.cls:<14}{row.scheme:<12}"
                f"{_fmt(row.time_fold)}{_fmt(row.node_fold)}{row.pairs:>7}"
            )
        lines.append("")
    if include_categorize:
        lines.append(
            f"% of instances faster (>) / slower (<) than {base_scheme} by factor"
        )
        header = f"{'scheme':<12}" + "".join(f"{b:>8}" for b in _BUCKETS)
        lines.append(header + f"{'pairs':>7}{'limit':>7}")
        for row in categorize(records, base_scheme):
            cells = "".join(f"{row.percentages[b]:8.1f}" for b in _BUCKETS)
            lines.append(f"{row.scheme:<12}{cells}{row.pairs:>7}{row.excluded:>7}")
        lines.append("")
    if include_ttest:
        lines.append(
            f"paired t-test on time differences ({base_scheme} - scheme), ms "
            "(positive mean: scheme faster)"
        )
        lines.append(
            f"{'scheme':<12}{'n':>5}{'mean':>10}{'sd':>10}{'t':>9}"
            f"{'ci95 low':>11}{'ci95 high':>11}"
        )
        for row in ttest_vs_base(records, base_scheme):
            if row.report is None:
                lines.append(f"{row.scheme:<12}{row.pairs:>5}" + " (not enough pairs)")
                continue
            r = row.report
            lines.append(
                f"{row.scheme:<12}{r.n:>5}{_fmt(r.mean, 10)}{_fmt(r.sd, 10)}"
                f"{_fmt(r.t)}{_fmt(r.ci95[0], 11)}{_fmt(r.ci95[1], 11)}"
            )
        lines.append("")
    return "\n".join(lines)
