"""Multi-level collaboration network analysis of publication metadata."""
from .ingest import (
    Affiliation,
    AuthorEntry,
    CorpusSummary,
    EntityRegistry,
    PublicationRecord,
    apply_aliases,
    canonicalize,
    corpus_stats,
    infer_countries,
    load_corpus,
    parse_corpus,
)
from .metrics import MetricsReport, UndefinedMetricError, full_report, maximal_cliques
from .netbuild import BuildConfig, CollabGraph, build_graph, graph_summary, induced_subgraph
from .temporal import Period, growth_rates, period_compare, yearly_series

__version__ = "0.1.0"

__all__ = [
    "Affiliation",
    "AuthorEntry",
    "BuildConfig",
    "CollabGraph",
    "CorpusSummary",
    "EntityRegistry",
    "MetricsReport",
    "Period",
    "PublicationRecord",
    "UndefinedMetricError",
    "apply_aliases",
    "build_graph",
    "canonicalize",
    "corpus_stats",
    "full_report",
    "graph_summary",
    "growth_rates",
    "induced_subgraph",
    "infer_countries",
    "load_corpus",
    "maximal_cliques",
    "parse_corpus",
    "period_compare",
    "yearly_series",
]
