"""Projection of a canonical corpus onto weighted collaboration graphs."""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping

from .ingest import LEVELS, EntityRegistry, PublicationRecord

POLICIES = ("per_publication", "per_pair_occurrence")
AFFILIATION_MODES = ("all", "first")


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class BuildConfig:
    level: str = "country"
    window: tuple[int, int] | None = None
    policy: str = "per_publication"
    include_isolates: bool = False
    # multi-affiliation authors: contribute every affiliation, or only the first listed
    affiliation_mode: str = "all"

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown level {self.level!r}; expected one of {LEVELS}")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown edge weight policy {self.policy!r}")
        if self.affiliation_mode not in AFFILIATION_MODES:
            raise ValueError(f"unknown affiliation mode {self.affiliation_mode!r}")
        if self.window is not None:
            lo, hi = self.window
            if lo > hi:
                raise ValueError(f"window start {lo} after end {hi}")
            object.__setattr__(self, "window", (int(lo), int(hi)))


class CollabGraph:
    """Undirected simple graph with positive integer edge weights.

    Nodes are kept sorted; edges are keyed by the lexicographically ordered
    endpoint pair.
    """

    def __init__(
        self,
        level: str,
        nodes: Iterable[str],
        edges: Mapping[tuple[str, str], int],
        *,
        node_attrs: Mapping[str, Mapping[str, str]] | None = None,
        edge_years: Mapping[tuple[str, str], tuple[int, int]] | None = None,
        window: tuple[int, int] | None = None,
        policy: str = "per_publication",
    ):
        node_set = set(nodes)
        norm: dict[tuple[str, str], int] = {}
        for (a, b), w in edges.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in node_set or b not in node_set:
                raise ValueError(f"edge ({a!r}, {b!r}) has an endpoint outside the node set")
            if int(w) != w or w < 1:
                raise ValueError(f"edge ({a!r}, {b!r}) has invalid weight {w!r}")
            key = _pair(a, b)
            if key in norm:
                raise ValueError(f"parallel edge {key}")
            norm[key] = int(w)
        self.level = level
        self.nodes: tuple[str, ...] = tuple(sorted(node_set))
        self.edges: Mapping[tuple[str, str], int] = MappingProxyType(dict(sorted(norm.items())))
        self.node_attrs: Mapping[str, Mapping[str, str]] = MappingProxyType(
            {n: MappingProxyType(dict(sorted((node_attrs or {}).get(n, {}).items()))) for n in self.nodes}
        )
        years = {_pair(*k): tuple(v) for k, v in (edge_years or {}).items()}
        self.edge_years: Mapping[tuple[str, str], tuple[int, int]] = MappingProxyType(
            {k: years[k] for k in self.edges if k in years}
        )
        self.window = window
        self.policy = policy
        adj: dict[str, dict[str, int]] = {n: {} for n in self.nodes}
        for (a, b), w in self.edges.items():
            adj[a][b] = w
            adj[b][a] = w
        self._adj = {n: MappingProxyType(dict(sorted(nb.items()))) for n, nb in adj.items()}

    def __repr__(self) -> str:
        return f"CollabGraph(level={self.level!r}, n={len(self.nodes)}, m={len(self.edges)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CollabGraph):
            return NotImplemented
        return (
            self.level == other.level
            and self.nodes == other.nodes
            and dict(self.edges) == dict(other.edges)
            and {n: dict(a) for n, a in self.node_attrs.items()}
            == {n: dict(a) for n, a in other.node_attrs.items()}
        )

    def __contains__(self, node) -> bool:
        return node in self._adj

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, node: str) -> Mapping[str, int]:
        return self._adj[node]

    def weight(self, a: str, b: str) -> int:
        return self.edges.get(_pair(a, b), 0)

    def degree(self, node: str) -> int:
        return len(self._adj[node])

    def weighted_degree(self, node: str) -> int:
        return sum(self._adj[node].values())

    def total_weight(self) -> int:
        return sum(self.edges.values())

    def non_isolates(self) -> list[str]:
        return [n for n in self.nodes if self._adj[n]]


def record_entities(
    rec: PublicationRecord, level: str, affiliation_mode: str = "all"
) -> list[set[str]]:
    """Per-author entity sets of one record at the given level."""
    out = []
    for a in rec.authors:
        if level == "author":
            out.append({a.name})
            continue
        affs = a.affiliations[:1] if affiliation_mode == "first" else a.affiliations
        attr = "institute" if level == "institute" else "country"
        out.append({getattr(f, attr) for f in affs if getattr(f, attr) is not None})
    return out


def build_graph(
    records: Iterable[PublicationRecord],
    config: BuildConfig | None = None,
    registry: EntityRegistry | None = None,
    **overrides,
) -> CollabGraph:
    """Fold records into a collaboration graph.

    Under ``per_publication`` each record adds 1 to every pair of distinct
    entities it contains. Under ``per_pair_occurrence`` each author contributes
    one instance of each of its entities and a pair gains the product of the
    two instance counts.
    """
    if config is None:
        config = BuildConfig(**overrides)
    elif overrides:
        config = BuildConfig(**{**config.__dict__, **overrides})
    weights: Counter = Counter()
    first: dict[tuple[str, str], int] = {}
    last: dict[tuple[str, str], int] = {}
    seen: set[str] = set()
    inst_countries: dict[str, Counter] = {}

    for rec in records:
        if config.window is not None and not config.window[0] <= rec.year <= config.window[1]:
            continue
        per_author = record_entities(rec, config.level, config.affiliation_mode)
        instances = Counter()
        for ents in per_author:
            instances.update(ents)
        seen.update(instances)
        if config.level == "institute":
            for a in rec.authors:
                for f in a.affiliations:
                    if f.institute is not None and f.country is not None:
                        inst_countries.setdefault(f.institute, Counter())[f.country] += 1
        for a, b in combinations(sorted(instances), 2):
            inc = 1 if config.policy == "per_publication" else instances[a] * instances[b]
            key = (a, b)
            weights[key] += inc
            first[key] = min(first.get(key, rec.year), rec.year)
            last[key] = max(last.get(key, rec.year), rec.year)

    if config.include_isolates:
        nodes = seen
    else:
        nodes = {x for e in weights for x in e}

    attrs: dict[str, dict[str, str]] = {}
    for node in nodes:
        a = {}
        if config.level == "institute":
            country = registry.country_of(node) if registry is not None else None
            if country is None and node in inst_countries:
                # most frequent country seen with the institute, ties by name
                country = min(inst_countries[node].items(), key=lambda kv: (-kv[1], kv[0]))[0]
            if country is not None:
                a["country"] = country
                region = registry.region_of(country) if registry is not None else None
                if region is not None:
                    a["region"] = region
        elif config.level == "country" and registry is not None:
            region = registry.region_of(node)
            if region is not None:
                a["region"] = region
        if a:
            attrs[node] = a

    return CollabGraph(
        config.level,
        nodes,
        weights,
        node_attrs=attrs,
        edge_years={k: (first[k], last[k]) for k in weights},
        window=config.window,
        policy=config.policy,
    )


def graph_summary(g: CollabGraph) -> tuple[int, int, int]:
    """(node count, unique link count, total collaboration weight)."""
    return g.n, g.m, g.total_weight()


def induced_subgraph(g: CollabGraph, nodes: Iterable[str]) -> CollabGraph:
    subset = set(nodes)
    for node in sorted(subset):
        if node not in g:
            raise KeyError(f"node {node!r} not in graph")
    edges = {k: w for k, w in g.edges.items() if k[0] in subset and k[1] in subset}
    return CollabGraph(
        g.level,
        subset,
        edges,
        node_attrs={n: g.node_attrs[n] for n in subset},
        edge_years={k: g.edge_years[k] for k in edges if k in g.edge_years},
        window=g.window,
        policy=g.policy,
    )


# ---------------------------------------------------------------------------
# serialization


def write_edge_csv(g: CollabGraph) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["source", "target", "weight"])
    for (a, b), weight in g.edges.items():
        w.writerow([a, b, weight])
    return buf.getvalue()


def write_node_csv(g: CollabGraph) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node", "attribute", "value"])
    for node in g.nodes:
        attrs = g.node_attrs[node]
        if not attrs:
            # keep isolates and attribute-less nodes in the node file
            w.writerow([node, "", ""])
        for k, v in attrs.items():
            w.writerow([node, k, v])
    return buf.getvalue()


def read_graph_csv(edge_csv: str, node_csv: str | None = None, level: str = "country") -> CollabGraph:
    edges: dict[tuple[str, str], int] = {}
    nodes: set[str] = set()
    reader = csv.DictReader(io.StringIO(edge_csv))
    if tuple(reader.fieldnames or ())[:3] != ("source", "target", "weight"):
        raise ValueError("edge CSV must have header source,target,weight")
    for row in reader:
        a, b = row["source"], row["target"]
        key = _pair(a, b)
        if key in edges:
            raise ValueError(f"duplicate edge {key} at line {reader.line_num}")
        edges[key] = int(row["weight"])
        nodes.update(key)
    attrs: dict[str, dict[str, str]] = {}
    if node_csv is not None:
        reader = csv.DictReader(io.StringIO(node_csv))
        if tuple(reader.fieldnames or ())[:3] != ("node", "attribute", "value"):
            raise ValueError("node CSV must have header node,attribute,value")
        for row in reader:
            nodes.add(row["node"])
            if row["attribute"]:
                attrs.setdefault(row["node"], {})[row["attribute"]] = row["value"]
    return CollabGraph(level, nodes, edges, node_attrs=attrs)
