"""Per-year evolution series, period comparisons and growth rates."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ingest import PublicationRecord
from .metrics import MetricsReport, full_report
from .netbuild import BuildConfig, CollabGraph, build_graph


@dataclass(frozen=True)
class YearRow:
    year: int
    active_nodes: int
    unique_links: int
    weight_sum: int


@dataclass(frozen=True)
class YearlySeries:
    level: str
    rows: tuple[YearRow, ...]


def _year_graphs(records: list[PublicationRecord], config: BuildConfig) -> dict[int, CollabGraph]:
    by_year: dict[int, list[PublicationRecord]] = defaultdict(list)
    for r in records:
        if config.window is None or config.window[0] <= r.year <= config.window[1]:
            by_year[r.year].append(r)
    return {
        y: build_graph(recs, config, window=(y, y), include_isolates=False)
        for y, recs in sorted(by_year.items())
    }


def yearly_series(
    records: Iterable[PublicationRecord], config: BuildConfig | None = None, **overrides
) -> YearlySeries:
    """One row per year with at least one record, from that year's graph alone."""
    config = config or BuildConfig()
    if overrides:
        config = BuildConfig(**{**config.__dict__, **overrides})
    rows = []
    for year, g in _year_graphs(list(records), config).items():
        rows.append(YearRow(year, len(g.non_isolates()), g.m, g.total_weight()))
    return YearlySeries(config.level, tuple(rows))


@dataclass(frozen=True)
class Period:
    label: str
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"period {self.label!r}: start {self.start} after end {self.end}")

    @property
    def years(self) -> int:
        return self.end - self.start + 1

    @classmethod
    def parse(cls, text: str) -> "Period":
        """Parse ``LABEL:FROM-TO`` or ``FROM-TO`` (label defaults to the span)."""
        label, _, span = text.rpartition(":")
        lo, sep, hi = span.partition("-")
        if not sep:
            raise ValueError(f"period {text!r} is not of the form [LABEL:]FROM-TO")
        try:
            start, end = int(lo), int(hi)
        except ValueError:
            raise ValueError(f"period {text!r} has non-integer years") from None
        return cls(label or f"{start}-{end}", start, end)


@dataclass
class PeriodResult:
    period: Period
    nodes: int
    links: int
    weight: int
    report: MetricsReport


@dataclass
class PeriodComparison:
    level: str
    periods: list[PeriodResult]
    # true when some windows overlap (e.g. an all-time column next to sub-periods)
    cumulative: bool = False


def period_compare(
    records: Iterable[PublicationRecord],
    periods: Sequence[Period],
    config: BuildConfig | None = None,
    workers: int | None = None,
) -> PeriodComparison:
    """Build one graph per window and run the full report on each.

    Undefined measures are recorded in each report's ``undefined`` map
    instead of aborting the comparison.
    """
    config = config or BuildConfig()
    records = list(records)
    ordered = sorted(periods, key=lambda p: (p.start, p.end))
    overlap = any(a.end >= b.start for a, b in zip(ordered, ordered[1:]))
    out = []
    for p in periods:
        g = build_graph(records, config, window=(p.start, p.end))
        report = full_report(g, workers, strict=False)
        out.append(PeriodResult(p, g.n, g.m, g.total_weight(), report))
    return PeriodComparison(config.level, out, overlap)


@dataclass(frozen=True)
class GrowthRow:
    entity: str
    growth: float
    av_recent: float
    av_early: float


@dataclass
class GrowthTable:
    rows: list[GrowthRow]
    # active only in the recent window
    new_entrants: list[str] = field(default_factory=list)
    # entity -> reason for every other exclusion
    excluded: dict[str, str] = field(default_factory=dict)


def entity_collaborations(g: CollabGraph) -> dict[str, int]:
    """Summed incident edge weight per non-isolated entity."""
    return {v: g.weighted_degree(v) for v in g.non_isolates()}


def growth_rates(
    records: Iterable[PublicationRecord],
    early: Period,
    recent: Period,
    config: BuildConfig | None = None,
    min_total: int = 1,
    early_years: float | None = None,
    recent_years: float | None = None,
) -> GrowthTable:
    """Ratio of mean yearly collaborations in ``recent`` to that in ``early``.

    Window lengths default to inclusive year spans; ``early_years`` and
    ``recent_years`` override the divisors.
    """
    if min_total < 1:
        raise ValueError("min_total must be >= 1")
    if not (early.end < recent.start or recent.end < early.start):
        raise ValueError(f"windows {early.label!r} and {recent.label!r} overlap")
    config = config or BuildConfig()
    records = list(records)
    e_counts = entity_collaborations(build_graph(records, config, window=(early.start, early.end)))
    r_counts = entity_collaborations(build_graph(records, config, window=(recent.start, recent.end)))
    e_len = early.years if early_years is None else early_years
    r_len = recent.years if recent_years is None else recent_years

    rows, new, excluded = [], [], {}
    for entity in sorted(set(e_counts) | set(r_counts)):
        e, r = e_counts.get(entity, 0), r_counts.get(entity, 0)
        if e == 0:
            new.append(entity)
            continue
        if r == 0:
            excluded[entity] = "no collaboration in recent window"
            continue
        if e + r < min_total:
            excluded[entity] = f"total {e + r} below minimum {min_total}"
            continue
        av_e, av_r = e / e_len, r / r_len
        rows.append(GrowthRow(entity, av_r / av_e, av_r, av_e))
    rows.sort(key=lambda row: (-row.growth, row.entity))
    return GrowthTable(rows, new, excluded)
