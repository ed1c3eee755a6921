"""Structural measures of collaboration graphs.

Geodesics are hop counts; edge weights only enter the weighted density.
Closeness is the reciprocal-sum variant, so it stays finite on disconnected
graphs. Betweenness counts each unordered pair once, with pair fractions
sigma_st(v) / sigma_st.
"""
from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .netbuild import CollabGraph

MEASURES = ("degree", "closeness", "betweenness")
# sources per kernel call; fixed so that reductions never depend on worker count
BLOCK_SIZE = 64


class UndefinedMetricError(ValueError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


def worker_count(workers: int | None = None) -> int:
    """Resolve a worker count; ``None`` reads COLLABNET_THREADS (0 = all CPUs)."""
    if workers is None:
        raw = os.environ.get("COLLABNET_THREADS", "0").strip() or "0"
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"COLLABNET_THREADS must be an integer, got {raw!r}") from None
    if workers < 0:
        raise ValueError("worker count must be >= 0")
    return workers or (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# all-sources path statistics


@dataclass(frozen=True)
class PathStats:
    nodes: tuple[str, ...]
    betweenness: np.ndarray  # unordered-pair counting
    closeness: np.ndarray  # sum of reciprocal distances
    distance_sum: int  # over unordered reachable pairs
    reachable_pairs: int  # unordered


def _csr(g: CollabGraph) -> tuple[np.ndarray, np.ndarray]:
    index = {v: i for i, v in enumerate(g.nodes)}
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    indices = np.empty(2 * g.m, dtype=np.int64)
    pos = 0
    for i, v in enumerate(g.nodes):
        for u in g.neighbors(v):
            indices[pos] = index[u]
            pos += 1
        indptr[i + 1] = pos
    return indptr, indices


def path_stats(g: CollabGraph, workers: int | None = None) -> PathStats:
    """BFS from every node, sharded over threads in fixed-size source blocks.

    The result is cached on the (immutable) graph.
    """
    cached = getattr(g, "_path_stats", None)
    if cached is not None:
        return cached
    from ._paths import source_block

    n = g.n
    indptr, indices = _csr(g)
    blocks = [np.arange(i, min(i + BLOCK_SIZE, n), dtype=np.int64) for i in range(0, n, BLOCK_SIZE)]
    nworkers = min(worker_count(workers), max(len(blocks), 1))
    if nworkers > 1:
        with ThreadPoolExecutor(nworkers) as pool:
            parts = list(pool.map(lambda b: source_block(indptr, indices, b), blocks))
    else:
        parts = [source_block(indptr, indices, b) for b in blocks]

    bc = np.zeros(n, dtype=np.float64)
    closeness = np.zeros(n, dtype=np.float64)
    dsum = 0
    reach = 0
    for block, (b_bc, b_recip, b_dsum, b_reach) in zip(blocks, parts):
        bc += b_bc
        closeness[block] = b_recip
        dsum += int(b_dsum.sum())
        reach += int(b_reach.sum())
    stats = PathStats(g.nodes, bc / 2.0, closeness, dsum // 2, reach // 2)
    g._path_stats = stats
    return stats


def _index(g: CollabGraph, v: str) -> int:
    if v not in g:
        raise KeyError(f"node {v!r} not in graph")
    return g.nodes.index(v)


# ---------------------------------------------------------------------------
# node-level measures


def shortest_path_lengths(g: CollabGraph, source: str) -> dict[str, int]:
    """Hop distances from ``source``; unreachable nodes are absent."""
    if source not in g:
        raise KeyError(f"node {source!r} not in graph")
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def closeness(g: CollabGraph, v: str) -> float:
    return float(path_stats(g).closeness[_index(g, v)])


def betweenness(g: CollabGraph, v: str) -> float:
    return float(path_stats(g).betweenness[_index(g, v)])


def clustering_local(g: CollabGraph, v: str) -> float | None:
    """2 N_i / (k_i (k_i - 1)); ``None`` when degree < 2."""
    nbrs = g.neighbors(v)
    k = len(nbrs)
    if k < 2:
        return None
    links = 0
    for u in nbrs:
        links += sum(1 for w in g.neighbors(u) if w in nbrs)
    # each neighbour-neighbour edge was seen from both ends
    return links / (k * (k - 1))


@dataclass(frozen=True)
class NodeCentrality:
    node: str
    degree: int
    weighted_degree: int
    closeness: float
    betweenness: float
    clustering: float | None


def node_centralities(g: CollabGraph, workers: int | None = None) -> list[NodeCentrality]:
    ps = path_stats(g, workers)
    return [
        NodeCentrality(
            v,
            g.degree(v),
            g.weighted_degree(v),
            float(ps.closeness[i]),
            float(ps.betweenness[i]),
            clustering_local(g, v),
        )
        for i, v in enumerate(g.nodes)
    ]


# ---------------------------------------------------------------------------
# graph-level measures


def _dyads(g: CollabGraph, name: str) -> int:
    if g.n < 2:
        raise UndefinedMetricError(name, f"needs at least 2 nodes, graph has {g.n}")
    return g.n * (g.n - 1) // 2


def density_binary(g: CollabGraph) -> float:
    return g.m / _dyads(g, "density_binary")


def density_weighted(g: CollabGraph) -> float:
    return g.total_weight() / _dyads(g, "density_weighted")


def density_from_totals(n: int, total_weight: int) -> float:
    """Weighted density from node count and summed weight alone."""
    if n < 2:
        raise UndefinedMetricError("density_weighted", f"needs at least 2 nodes, got {n}")
    return total_weight / (n * (n - 1) / 2)


def clustering_avg(g: CollabGraph, include_zeros: bool = False) -> float:
    """Mean local clustering over nodes with degree >= 2.

    With ``include_zeros`` nodes of degree < 2 enter the mean as 0.
    """
    values = [clustering_local(g, v) for v in g.nodes]
    defined = [c for c in values if c is not None]
    if not defined:
        raise UndefinedMetricError("clustering_avg", "no node has degree >= 2")
    if include_zeros:
        return sum(defined) / len(values)
    return sum(defined) / len(defined)


def components(g: CollabGraph) -> list[list[str]]:
    """Connected components, largest first, ties by smallest member."""
    seen: set[str] = set()
    comps = []
    for start in g.nodes:
        if start in seen:
            continue
        comp = sorted(shortest_path_lengths(g, start))
        seen.update(comp)
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def connectedness_from_sizes(sizes: Iterable[int]) -> float:
    sizes = list(sizes)
    n = sum(sizes)
    if n < 2:
        raise UndefinedMetricError("connectedness", f"needs at least 2 nodes, got {n}")
    return sum(s * (s - 1) for s in sizes) / (n * (n - 1))


def connectedness(g: CollabGraph) -> float:
    """Share of ordered node pairs joined by some path."""
    return connectedness_from_sizes(len(c) for c in components(g))


def average_distance(g: CollabGraph) -> float:
    ps = path_stats(g)
    if ps.reachable_pairs == 0:
        raise UndefinedMetricError("average_distance", "no reachable pair")
    return ps.distance_sum / ps.reachable_pairs


def star_normalizer(measure: str, n: int) -> float:
    """Sum of (C_max - C_i) on the star with n nodes, measures scaled to [0, 1].

    degree: centre 1, leaves 1/(n-1).  closeness: centre 1, leaves
    (1 + (n-2)/2)/(n-1).  betweenness: centre 1, leaves 0.
    """
    if n < 3:
        raise UndefinedMetricError(f"centralization_{measure}", f"needs at least 3 nodes, got {n}")
    if measure == "degree":
        return float(n - 2)
    if measure == "closeness":
        return (n - 2) / 2
    if measure == "betweenness":
        return float(n - 1)
    raise ValueError(f"unknown centrality measure {measure!r}")


def normalized_scores(g: CollabGraph, measure: str) -> list[float]:
    n = g.n
    if measure == "degree":
        return [g.degree(v) / (n - 1) for v in g.nodes]
    ps = path_stats(g)
    if measure == "closeness":
        return [float(c) / (n - 1) for c in ps.closeness]
    if measure == "betweenness":
        scale = (n - 1) * (n - 2) / 2
        return [float(b) / scale for b in ps.betweenness]
    raise ValueError(f"unknown centrality measure {measure!r}")


def centralization(g: CollabGraph, measure: str) -> float:
    """Freeman centralization against the star graph of the same size."""
    if measure not in MEASURES:
        raise ValueError(f"unknown centrality measure {measure!r}")
    h = star_normalizer(measure, g.n)
    scores = normalized_scores(g, measure)
    top = max(scores)
    return sum(top - c for c in scores) / h


def maximal_cliques(g: CollabGraph, min_size: int = 3) -> list[list[str]]:
    """All maximal cliques with at least ``min_size`` members.

    Bron-Kerbosch with Tomita pivoting. Sorted by size descending, then by
    the sorted member list.
    """
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    adj = {v: set(g.neighbors(v)) for v in g.nodes}
    found: list[list[str]] = []

    def expand(r: list[str], p: set[str], x: set[str]):
        if not p and not x:
            if len(r) >= min_size:
                found.append(sorted(r))
            return
        if len(r) + len(p) < min_size:
            return
        pivot = max(p | x, key=lambda u: (len(p & adj[u]), u))
        for v in sorted(p - adj[pivot]):
            expand(r + [v], p & adj[v], x & adj[v])
            p.discard(v)
            x.add(v)

    expand([], set(g.nodes), set())
    found.sort(key=lambda c: (-len(c), c))
    return found


def clique_overlaps(cliques: list[list[str]]) -> dict[str, list[int]]:
    """Nodes belonging to two or more of the given cliques, with clique indices."""
    member_of: dict[str, list[int]] = {}
    for i, c in enumerate(cliques):
        for v in c:
            member_of.setdefault(v, []).append(i)
    return {v: ix for v, ix in sorted(member_of.items()) if len(ix) > 1}


# ---------------------------------------------------------------------------
# report


REPORT_FIELDS = (
    "density_binary",
    "density_weighted",
    "connectedness",
    "clustering_avg",
    "component_count",
    "component_sizes",
    "giant_size",
    "average_distance",
    "centralization_degree",
    "centralization_closeness",
    "centralization_betweenness",
)


@dataclass
class MetricsReport:
    node_count: int
    edge_count: int
    total_weight: int
    density_binary: float | None = None
    density_weighted: float | None = None
    connectedness: float | None = None
    clustering_avg: float | None = None
    component_count: int = 0
    component_sizes: list[int] = field(default_factory=list)
    giant_size: int = 0
    average_distance: float | None = None
    centralization_degree: float | None = None
    centralization_closeness: float | None = None
    centralization_betweenness: float | None = None
    clustering_mode: str = "degree>=2"
    undefined: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def full_report(
    g: CollabGraph,
    workers: int | None = None,
    *,
    strict: bool = True,
    clustering_zeros: bool = False,
) -> MetricsReport:
    """All graph-level measures from one shared all-sources BFS pass.

    With ``strict`` an undefined measure raises :class:`UndefinedMetricError`;
    otherwise the field stays ``None`` and the reason lands in ``undefined``.
    """
    comps = components(g)
    sizes = [len(c) for c in comps]
    report = MetricsReport(
        node_count=g.n,
        edge_count=g.m,
        total_weight=g.total_weight(),
        component_count=len(comps),
        component_sizes=sizes,
        giant_size=max(sizes, default=0),
        clustering_mode="all-nodes" if clustering_zeros else "degree>=2",
    )
    if g.n >= 2:
        path_stats(g, workers)

    def put(name, fn):
        try:
            setattr(report, name, fn())
        except UndefinedMetricError as exc:
            if strict:
                raise
            report.undefined[name] = exc.reason

    put("density_binary", lambda: density_binary(g))
    put("density_weighted", lambda: density_weighted(g))
    put("connectedness", lambda: connectedness_from_sizes(sizes))
    put("clustering_avg", lambda: clustering_avg(g, clustering_zeros))
    put("average_distance", lambda: average_distance(g))
    for m in MEASURES:
        put(f"centralization_{m}", lambda m=m: centralization(g, m))
    return report
