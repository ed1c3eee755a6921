"""Rankings, distributions and graph exports."""
from __future__ import annotations

import io
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .ingest import PublicationRecord
from .netbuild import CollabGraph, write_edge_csv

AXES = {
    "authors_per_pub": "author",
    "institutes_per_pub": "institute",
    "countries_per_pub": "country",
}

# node shapes per region, following the usual macro-level map coding
REGION_SHAPES = {
    "America": "box",
    "Oceania": "diamond",
    "Africa": "hexagon",
    "Asia": "circle",
    "Europe": "triangle",
}


@dataclass(frozen=True)
class RankedRow:
    rank: int
    entity: str | tuple[str, str]
    total: int
    collaborators: int | None


@dataclass(frozen=True)
class RankedTable:
    kind: str
    rows: tuple[RankedRow, ...]
    # share of all weight held by the listed links (strongest_links only)
    concentration: float | None = None


def _check_k(k: int):
    if k < 1:
        raise ValueError("k must be >= 1")


def entity_ranking_key(g: CollabGraph, v: str):
    return (-g.weighted_degree(v), -g.degree(v), v)


def top_entities(g: CollabGraph, k: int) -> RankedTable:
    """Top-k nodes by summed link weight, then distinct collaborators, then name."""
    _check_k(k)
    ranked = sorted(g.nodes, key=lambda v: entity_ranking_key(g, v))[:k]
    rows = tuple(
        RankedRow(i, v, g.weighted_degree(v), g.degree(v)) for i, v in enumerate(ranked, start=1)
    )
    return RankedTable("top_entities", rows)


def strongest_links(g: CollabGraph, k: int) -> RankedTable:
    _check_k(k)
    ranked = sorted(g.edges.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    rows = tuple(RankedRow(i, pair, w, None) for i, (pair, w) in enumerate(ranked, start=1))
    total = g.total_weight()
    conc = sum(r.total for r in rows) / total if total else None
    return RankedTable("strongest_links", rows, conc)


@dataclass(frozen=True)
class DistributionRow:
    count: int
    publications: int
    share: float


@dataclass(frozen=True)
class DistributionTable:
    axis: str
    rows: tuple[DistributionRow, ...]


def authorship_distribution(records: Iterable[PublicationRecord], axis: str) -> DistributionTable:
    """Histogram of distinct authors / institutes / countries per publication."""
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}; expected one of {sorted(AXES)}")
    level = AXES[axis]
    hist = Counter()
    total = 0
    for rec in records:
        if level == "author":
            k = len({a.name for a in rec.authors})
        else:
            k = len(
                {
                    getattr(f, level)
                    for a in rec.authors
                    for f in a.affiliations
                    if getattr(f, level) is not None
                }
            )
        hist[k] += 1
        total += 1
    if total == 0:
        raise ValueError("distribution of an empty corpus")
    rows = tuple(DistributionRow(c, hist[c], hist[c] / total) for c in sorted(hist))
    return DistributionTable(axis, rows)


# ---------------------------------------------------------------------------
# export


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot(g: CollabGraph) -> str:
    lines = [f"graph {_dot_id(g.level)} {{"]
    for v in g.nodes:
        attrs = dict(g.node_attrs[v])
        parts = [f"{k}={_dot_id(val)}" for k, val in attrs.items()]
        if "region" in attrs and attrs["region"] in REGION_SHAPES:
            parts.append(f"shape={REGION_SHAPES[attrs['region']]}")
        suffix = f" [{', '.join(parts)}]" if parts else ""
        lines.append(f"  {_dot_id(v)}{suffix};")
    for (a, b), w in g.edges.items():
        # pen width proportional to collaboration weight
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [weight={w}, penwidth={w}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graphml(g: CollabGraph) -> str:
    ns = "http://graphml.graphdrawing.org/xmlns"
    root = ET.Element("graphml", xmlns=ns)
    node_keys = sorted({k for attrs in g.node_attrs.values() for k in attrs})
    for k in node_keys:
        ET.SubElement(root, "key", {"id": f"n_{k}", "for": "node", "attr.name": k, "attr.type": "string"})
    for k in ("weight", "first_year", "last_year"):
        ET.SubElement(root, "key", {"id": f"e_{k}", "for": "edge", "attr.name": k, "attr.type": "int"})
    graph = ET.SubElement(root, "graph", id=g.level, edgedefault="undirected")
    for v in g.nodes:
        node = ET.SubElement(graph, "node", id=v)
        for k, val in g.node_attrs[v].items():
            ET.SubElement(node, "data", key=f"n_{k}").text = val
    for (a, b), w in g.edges.items():
        edge = ET.SubElement(graph, "edge", source=a, target=b)
        ET.SubElement(edge, "data", key="e_weight").text = str(w)
        if (a, b) in g.edge_years:
            first, last = g.edge_years[(a, b)]
            ET.SubElement(edge, "data", key="e_first_year").text = str(first)
            ET.SubElement(edge, "data", key="e_last_year").text = str(last)
    ET.indent(root)
    buf = io.BytesIO()
    ET.ElementTree(root).write(buf, encoding="utf-8", xml_declaration=True)
    return buf.getvalue().decode("utf-8") + "\n"


def export_graph(g: CollabGraph, format: str = "edge_csv") -> bytes:
    if format in ("edge_csv", "csv"):
        text = write_edge_csv(g)
    elif format == "dot":
        text = _dot(g)
    elif format == "graphml":
        text = _graphml(g)
    else:
        raise ValueError(f"unknown export format {format!r}")
    return text.encode("utf-8")


def read_graphml(data: bytes | str) -> CollabGraph:
    """Inverse of the GraphML export (only the attributes it writes)."""
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    root = ET.fromstring(data)
    names = {k.get("id"): k.get("attr.name") for k in root.findall("g:key", ns)}
    graph = root.find("g:graph", ns)
    nodes, attrs, edges, years = [], {}, {}, {}
    for node in graph.findall("g:node", ns):
        v = node.get("id")
        nodes.append(v)
        for d in node.findall("g:data", ns):
            attrs.setdefault(v, {})[names[d.get("key")]] = d.text or ""
    for edge in graph.findall("g:edge", ns):
        data = {names[d.get("key")]: int(d.text) for d in edge.findall("g:data", ns)}
        key = (edge.get("source"), edge.get("target"))
        edges[key] = data["weight"]
        if "first_year" in data:
            years[key] = (data["first_year"], data["last_year"])
    return CollabGraph(graph.get("id"), nodes, edges, node_attrs=attrs, edge_years=years)


def percent(x: float | None) -> str:
    return "n/a" if x is None else f"{100 * x:.1f}%"
