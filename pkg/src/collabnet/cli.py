"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import ingest, metrics, netbuild, report, temporal

COMMANDS = ("stats", "build", "metrics", "top", "links", "cliques", "series", "periods", "growth", "dist", "export")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _corpus_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", metavar="PATH", help="corpus file (.jsonl or .csv)")
    p.add_argument("--aliases", metavar="PATH", help="alias map CSV level,alias,canonical")
    p.add_argument("--countries", metavar="PATH", help="institute->country CSV")
    p.add_argument("--regions", metavar="PATH", help="country->region CSV (default: bundled table)")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    return p


def _graph_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--level", choices=ingest.LEVELS, default="country")
    p.add_argument("--from", dest="year_from", type=int, metavar="YEAR")
    p.add_argument("--to", dest="year_to", type=int, metavar="YEAR")
    p.add_argument("--policy", choices=("per-publication", "per-pair"), default="per-publication")
    p.add_argument(
        "--affiliations",
        choices=netbuild.AFFILIATION_MODES,
        default="all",
        help="affiliations used for multi-affiliation authors",
    )
    p.add_argument("--include-isolates", action="store_true")
    p.add_argument("--graph", metavar="PATH", help="read an edge-list CSV instead of a corpus")
    p.add_argument("--nodes", metavar="PATH", help="node attribute CSV for --graph")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="collabnet", description="Multi-level collaboration network analysis.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    corpus = _corpus_options()
    graph = _graph_options()

    def add(name, help, parents, formats, default):
        p = sub.add_parser(name, help=help, parents=parents)
        p.add_argument("--format", choices=formats, default=default)
        return p

    add("stats", "corpus summary counts", [corpus], ("json", "text"), "json")
    add("build", "build a collaboration graph", [corpus, graph], ("csv", "json"), "csv")
    p = add("metrics", "network measures", [corpus, graph], ("json", "text"), "json")
    p.add_argument("--clustering-zeros", action="store_true", help="average clustering over all nodes")
    p = add("top", "top collaborating entities", [corpus, graph], ("csv", "json", "text"), "csv")
    p.add_argument("--top", type=int, default=20, metavar="K")
    p = add("links", "strongest links", [corpus, graph], ("csv", "json", "text"), "csv")
    p.add_argument("--top", type=int, default=20, metavar="K")
    p = add("cliques", "maximal cliques", [corpus, graph], ("json", "text"), "json")
    p.add_argument("--min-size", type=int, default=3, metavar="N")
    add("series", "per-year evolution", [corpus, graph], ("csv", "json"), "csv")
    p = add("periods", "measures per period", [corpus, graph], ("json", "text"), "json")
    p.add_argument("--period", action="append", default=[], metavar="[LABEL:]FROM-TO")
    p = add("growth", "cross-period growth rates", [corpus, graph], ("csv", "json"), "csv")
    p.add_argument("--early", required=True, metavar="FROM-TO")
    p.add_argument("--recent", required=True, metavar="FROM-TO")
    p.add_argument("--min-total", type=int, default=1, metavar="N")
    p.add_argument("--early-years", type=float, help="override the early window length")
    p.add_argument("--recent-years", type=float, help="override the recent window length")
    p = add("dist", "entities-per-publication distributions", [corpus], ("csv", "json", "text"), "csv")
    p.add_argument("--axis", action="append", choices=sorted(report.AXES))
    add("export", "export a graph", [corpus, graph], ("csv", "dot", "graphml"), "csv")
    return parser


# ---------------------------------------------------------------------------
# loading


def _read_path(path: str) -> None:
    if not Path(path).is_file():
        raise DataError(f"no such file: {path}")


def load_registry(args) -> ingest.EntityRegistry:
    for path in (args.aliases, args.countries, args.regions):
        if path:
            _read_path(path)
    try:
        reg = ingest.EntityRegistry.from_files(args.aliases, args.countries, args.regions)
        if args.regions is None:
            reg = ingest.EntityRegistry(reg.aliases, reg.institute_country, ingest.default_regions())
    except (ValueError, KeyError) as exc:
        raise DataError(str(exc)) from exc
    return reg


def load_records(args) -> tuple[list[ingest.PublicationRecord], ingest.EntityRegistry, dict]:
    if not args.input:
        raise UsageError(f"collabnet {args.command}: --input is required")
    _read_path(args.input)
    registry = load_registry(args)
    try:
        parsed = ingest.load_corpus(args.input)
        records, mstats, istats = ingest.canonicalize(parsed.records, registry)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    for err in parsed.errors:
        print(f"collabnet: {args.input}:{err.line}: {err.message}", file=sys.stderr)
    info = {
        "row_errors": len(parsed.errors),
        "flagged_records": len(parsed.flagged),
        "alias_rewrites": {"author": mstats.author, "institute": mstats.institute, "country": mstats.country},
        "countries_inferred": istats.filled,
        "countries_unresolved": istats.unresolved,
    }
    return records, registry, info


def build_config(args) -> netbuild.BuildConfig:
    window = None
    if args.year_from is not None or args.year_to is not None:
        window = (
            args.year_from if args.year_from is not None else 1000,
            args.year_to if args.year_to is not None else 3000,
        )
    try:
        return netbuild.BuildConfig(
            level=args.level,
            window=window,
            policy="per_publication" if args.policy == "per-publication" else "per_pair_occurrence",
            include_isolates=args.include_isolates,
            affiliation_mode=args.affiliations,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def load_graph(args) -> netbuild.CollabGraph:
    if args.graph:
        if args.input:
            raise UsageError("use either --input or --graph, not both")
        _read_path(args.graph)
        if args.nodes:
            _read_path(args.nodes)
        try:
            return netbuild.read_graph_csv(
                Path(args.graph).read_text("utf-8"),
                Path(args.nodes).read_text("utf-8") if args.nodes else None,
                level=args.level,
            )
        except (ValueError, KeyError) as exc:
            raise DataError(f"{args.graph}: {exc}") from exc
    records, registry, _ = load_records(args)
    return netbuild.build_graph(records, build_config(args), registry)


# ---------------------------------------------------------------------------
# rendering


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _text_table(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def _report_text(r: metrics.MetricsReport) -> str:
    pct = report.percent
    rows = [
        ("Nodes", r.node_count),
        ("Links", r.edge_count),
        ("Sum of link weights", r.total_weight),
        ("Density", pct(r.density_weighted)),
        ("Density (binary)", pct(r.density_binary)),
        ("Connectedness", pct(r.connectedness)),
        ("Clustering coefficient", pct(r.clustering_avg)),
        ("# of components", r.component_count),
        ("Giant component size", r.giant_size),
        ("Average distance", "n/a" if r.average_distance is None else f"{r.average_distance:.2f}"),
        ("Degree centralization", pct(r.centralization_degree)),
        ("Closeness centralization", pct(r.centralization_closeness)),
        ("Betweenness centralization", pct(r.centralization_betweenness)),
    ]
    return _text_table(("measure", "value"), rows)


def _ranked(table: report.RankedTable, fmt: str) -> str:
    if table.kind == "top_entities":
        header = ("rank", "entity", "collaborations", "collaborators")
        rows = [(r.rank, r.entity, r.total, r.collaborators) for r in table.rows]
        obj = [dict(zip(header, row)) for row in rows]
    else:
        header = ("rank", "source", "target", "collaborations")
        rows = [(r.rank, r.entity[0], r.entity[1], r.total) for r in table.rows]
        obj = {"links": [dict(zip(header, row)) for row in rows], "concentration": table.concentration}
    if fmt == "json":
        return _json(obj)
    if fmt == "csv":
        return _csv(header, rows)
    text = _text_table(header, rows)
    if table.concentration is not None:
        text += f"share of all collaborations: {report.percent(table.concentration)}\n"
    return text


# ---------------------------------------------------------------------------
# commands


def cmd_stats(args) -> str:
    records, _, info = load_records(args)
    summary = ingest.corpus_stats(records).to_dict()
    summary["cleaning"] = info
    if args.format == "json":
        return _json(summary)
    rows = [(k, v) for k, v in summary.items() if k not in ("papers_per_year", "cleaning")]
    rows += [(f"papers {y}", c) for y, c in summary["papers_per_year"].items()]
    return _text_table(("field", "value"), rows)


def cmd_build(args) -> str:
    g = load_graph(args)
    if args.format == "csv":
        return netbuild.write_edge_csv(g)
    return _json(
        {
            "level": g.level,
            "window": list(g.window) if g.window else None,
            "policy": g.policy,
            "nodes": [{"node": v, **g.node_attrs[v]} for v in g.nodes],
            "edges": [
                {"source": a, "target": b, "weight": w, "years": list(g.edge_years.get((a, b), ()))}
                for (a, b), w in g.edges.items()
            ],
        }
    )


def cmd_metrics(args) -> str:
    g = load_graph(args)
    r = metrics.full_report(g, strict=False, clustering_zeros=args.clustering_zeros)
    return _json(r.to_dict()) if args.format == "json" else _report_text(r)


def cmd_top(args) -> str:
    if args.top < 1:
        raise UsageError("--top must be >= 1")
    return _ranked(report.top_entities(load_graph(args), args.top), args.format)


def cmd_links(args) -> str:
    if args.top < 1:
        raise UsageError("--top must be >= 1")
    return _ranked(report.strongest_links(load_graph(args), args.top), args.format)


def cmd_cliques(args) -> str:
    if args.min_size < 1:
        raise UsageError("--min-size must be >= 1")
    cliques = metrics.maximal_cliques(load_graph(args), args.min_size)
    overlaps = metrics.clique_overlaps(cliques)
    if args.format == "json":
        return _json({"cliques": cliques, "overlaps": overlaps})
    lines = [f"{i + 1}: {'; '.join(c)}" for i, c in enumerate(cliques)]
    lines += [f"{v} is in cliques {', '.join(str(i + 1) for i in ix)}" for v, ix in overlaps.items()]
    return "".join(line + "\n" for line in lines)


def cmd_series(args) -> str:
    records, _, _ = load_records(args)
    series = temporal.yearly_series(records, build_config(args))
    header = ("year", "active_nodes", "unique_links", "weight_sum")
    rows = [(r.year, r.active_nodes, r.unique_links, r.weight_sum) for r in series.rows]
    if args.format == "csv":
        return _csv(header, rows)
    return _json({"level": series.level, "rows": [dict(zip(header, row)) for row in rows]})


def _parse_period(text: str) -> temporal.Period:
    try:
        return temporal.Period.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_periods(args) -> str:
    records, registry, _ = load_records(args)
    periods = [_parse_period(p) for p in args.period]
    if not periods:
        years = [r.year for r in records]
        if not years:
            raise DataError("corpus is empty")
        periods = [temporal.Period("all", min(years), max(years))]
    comp = temporal.period_compare(records, periods, build_config(args))
    if args.format == "json":
        return _json(
            {
                "level": comp.level,
                "cumulative": comp.cumulative,
                "periods": [
                    {
                        "label": p.period.label,
                        "from": p.period.start,
                        "to": p.period.end,
                        "nodes": p.nodes,
                        "links": p.links,
                        "weight": p.weight,
                        "report": p.report.to_dict(),
                    }
                    for p in comp.periods
                ],
            }
        )
    return "".join(f"== {p.period.label} ({p.period.start}-{p.period.end})\n" + _report_text(p.report) for p in comp.periods)


def cmd_growth(args) -> str:
    records, _, _ = load_records(args)
    early, recent = _parse_period(args.early), _parse_period(args.recent)
    try:
        table = temporal.growth_rates(
            records,
            early,
            recent,
            build_config(args),
            min_total=args.min_total,
            early_years=args.early_years,
            recent_years=args.recent_years,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    header = ("entity", "growth", "av_recent", "av_early")
    rows = [(r.entity, repr(r.growth), repr(r.av_recent), repr(r.av_early)) for r in table.rows]
    if args.format == "csv":
        return _csv(header, rows)
    return _json(
        {
            "rows": [
                {"entity": r.entity, "growth": r.growth, "av_recent": r.av_recent, "av_early": r.av_early}
                for r in table.rows
            ],
            "new_entrants": table.new_entrants,
            "excluded": table.excluded,
        }
    )


def cmd_dist(args) -> str:
    records, _, _ = load_records(args)
    if not records:
        raise DataError("corpus is empty")
    axes = args.axis or sorted(report.AXES)
    tables = [report.authorship_distribution(records, a) for a in axes]
    if args.format == "json":
        return _json(
            {t.axis: [{"count": r.count, "publications": r.publications, "share": r.share} for r in t.rows] for t in tables}
        )
    header = ("axis", "count", "publications", "share")
    if args.format == "csv":
        return _csv(header, [(t.axis, r.count, r.publications, repr(r.share)) for t in tables for r in t.rows])
    return _text_table(header, [(t.axis, r.count, r.publications, report.percent(r.share)) for t in tables for r in t.rows])


def cmd_export(args) -> str:
    fmt = "edge_csv" if args.format == "csv" else args.format
    return report.export_graph(load_graph(args), fmt).decode("utf-8")


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        if not argv:
            raise UsageError(parser.format_help())
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return 0 if exc.code in (0, None) else 1
        if args.command is None:
            raise UsageError(parser.format_help())
        try:
            metrics.worker_count()
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        output = HANDLERS[args.command](args)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"collabnet: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
