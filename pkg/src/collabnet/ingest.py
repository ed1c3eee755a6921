"""Publication metadata parsing and entity canonicalization."""
from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Iterable

LEVELS = ("author", "institute", "country")
REGIONS = ("America", "Oceania", "Africa", "Asia", "Europe")
CSV_COLUMNS = ("id", "title", "year", "journal", "author", "institute", "country")


class CorpusError(ValueError):
    """Fatal corpus problem (duplicate ids, unreadable input)."""


class AliasCycleError(ValueError):
    def __init__(self, level: str, cycle: list[str]):
        self.level = level
        self.cycle = cycle
        super().__init__(f"alias cycle at level {level!r}: {' -> '.join(cycle)}")


@dataclass(frozen=True)
class Affiliation:
    institute: str | None = None
    country: str | None = None

    @property
    def is_empty(self) -> bool:
        return self.institute is None and self.country is None


@dataclass(frozen=True)
class AuthorEntry:
    name: str
    affiliations: tuple[Affiliation, ...] = ()


@dataclass(frozen=True)
class PublicationRecord:
    id: str
    title: str
    year: int
    journal: str
    authors: tuple[AuthorEntry, ...]
    keywords: tuple[str, ...] = ()


@dataclass(frozen=True)
class RowError:
    line: int
    message: str
    record_id: str | None = None


@dataclass
class ParseResult:
    records: list[PublicationRecord]
    errors: list[RowError] = field(default_factory=list)
    # ids of records that had affiliation entries with neither institute nor country
    flagged: list[str] = field(default_factory=list)


def _clean(value) -> str | None:
    if value is None:
        return None
    text = " ".join(str(value).split())
    return text or None


def _parse_year(value) -> int:
    if isinstance(value, bool):
        raise ValueError(f"unparseable year {value!r}")
    if isinstance(value, int):
        year = value
    elif isinstance(value, float) and value.is_integer():
        year = int(value)
    elif isinstance(value, str) and value.strip().lstrip("-").isdigit():
        year = int(value.strip())
    else:
        raise ValueError(f"unparseable year {value!r}")
    if not 1000 <= year <= 3000:
        raise ValueError(f"year {year} outside [1000, 3000]")
    return year


def _build_authors(raw_authors) -> tuple[tuple[AuthorEntry, ...], bool]:
    """Return cleaned author entries and whether an empty affiliation was dropped."""
    if not isinstance(raw_authors, list) or not raw_authors:
        raise ValueError("authors must be a non-empty list")
    entries = []
    seen = set()
    dropped_empty = False
    for raw in raw_authors:
        if not isinstance(raw, dict):
            raise ValueError(f"author entry must be an object, got {raw!r}")
        name = _clean(raw.get("name"))
        if name is None:
            raise ValueError("author without a name")
        if name in seen:
            raise ValueError(f"author {name!r} listed twice")
        seen.add(name)
        affs = []
        for a in raw.get("affiliations") or []:
            if not isinstance(a, dict):
                raise ValueError(f"affiliation must be an object, got {a!r}")
            aff = Affiliation(_clean(a.get("institute")), _clean(a.get("country")))
            if aff.is_empty:
                dropped_empty = True
            elif aff not in affs:
                affs.append(aff)
        entries.append(AuthorEntry(name, tuple(affs)))
    return tuple(entries), dropped_empty


def _record_from_mapping(obj: dict) -> tuple[PublicationRecord, bool]:
    for key in ("id", "year", "authors"):
        if key not in obj:
            raise ValueError(f"missing field {key!r}")
    rid = _clean(obj["id"])
    if rid is None:
        raise ValueError("empty id")
    year = _parse_year(obj["year"])
    authors, flagged = _build_authors(obj["authors"])
    keywords = tuple(k for k in (_clean(x) for x in obj.get("keywords") or []) if k)
    rec = PublicationRecord(
        id=rid,
        title=_clean(obj.get("title")) or "",
        year=year,
        journal=_clean(obj.get("journal")) or "",
        authors=authors,
        keywords=keywords,
    )
    return rec, flagged


def _parse_jsonl(text: str, result: ParseResult) -> list[tuple[int, PublicationRecord]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        obj = None
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("line is not a JSON object")
            rec, flagged = _record_from_mapping(obj)
        except ValueError as exc:  # JSONDecodeError is a ValueError
            rid = obj.get("id") if isinstance(obj, dict) else None
            result.errors.append(RowError(lineno, str(exc), rid if isinstance(rid, str) else None))
            continue
        if flagged:
            result.flagged.append(rec.id)
        out.append((lineno, rec))
    return out


def _parse_csv(text: str, result: ParseResult) -> list[tuple[int, PublicationRecord]]:
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise CorpusError(f"CSV corpus lacks columns: {', '.join(missing)}")
    groups: dict[str, dict] = {}
    bad: set[str] = set()
    for row in reader:
        lineno = reader.line_num
        rid = _clean(row.get("id"))
        if rid is None:
            result.errors.append(RowError(lineno, "empty id"))
            continue
        if rid in bad:
            continue
        g = groups.get(rid)
        if g is None:
            g = groups[rid] = {
                "line": lineno,
                "id": rid,
                "title": row.get("title"),
                "year": row.get("year"),
                "journal": row.get("journal"),
                "keywords": [k for k in (row.get("keywords") or "").split(";")],
                "authors": {},
            }
        elif (_clean(g["title"]), _clean(g["year"]), _clean(g["journal"])) != (
            _clean(row.get("title")),
            _clean(row.get("year")),
            _clean(row.get("journal")),
        ):
            result.errors.append(RowError(lineno, "rows for one id disagree on title/year/journal", rid))
            bad.add(rid)
            del groups[rid]
            continue
        name = _clean(row.get("author"))
        if name is None:
            result.errors.append(RowError(lineno, "author without a name", rid))
            bad.add(rid)
            del groups[rid]
            continue
        affs = g["authors"].setdefault(name, [])
        inst, country = row.get("institute"), row.get("country")
        if _clean(inst) is not None or _clean(country) is not None:
            affs.append({"institute": inst, "country": country})
    out = []
    for g in groups.values():
        obj = dict(g)
        obj["authors"] = [{"name": n, "affiliations": a} for n, a in g["authors"].items()]
        try:
            rec, flagged = _record_from_mapping(obj)
        except ValueError as exc:
            result.errors.append(RowError(g["line"], str(exc), g["id"]))
            continue
        if flagged:
            result.flagged.append(rec.id)
        out.append((g["line"], rec))
    return out


def parse_corpus(stream: IO[bytes] | bytes | str, format: str = "jsonl") -> ParseResult:
    """Parse a corpus into records, collecting row-level errors.

    Duplicate ids are fatal and raise :class:`CorpusError` naming both rows.
    """
    if isinstance(stream, str):
        text = stream
    else:
        data = stream if isinstance(stream, bytes) else stream.read()
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise CorpusError(f"corpus is not valid UTF-8: {exc}") from exc
    result = ParseResult(records=[])
    if format == "jsonl":
        parsed = _parse_jsonl(text, result)
    elif format == "csv":
        parsed = _parse_csv(text, result)
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    first_line: dict[str, int] = {}
    for lineno, rec in parsed:
        if rec.id in first_line:
            raise CorpusError(f"duplicate id {rec.id!r} on rows {first_line[rec.id]} and {lineno}")
        first_line[rec.id] = lineno
        result.records.append(rec)
    return result


def load_corpus(path: str | Path, format: str | None = None) -> ParseResult:
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    with path.open("rb") as fh:
        return parse_corpus(fh, format)


def dump_jsonl(records: Iterable[PublicationRecord]) -> str:
    lines = []
    for r in records:
        obj = {
            "id": r.id,
            "title": r.title,
            "year": r.year,
            "journal": r.journal,
            "authors": [
                {
                    "name": a.name,
                    "affiliations": [
                        {"institute": f.institute, "country": f.country} for f in a.affiliations
                    ],
                }
                for a in r.authors
            ],
            "keywords": list(r.keywords),
        }
        lines.append(json.dumps(obj, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# entity registry


def _resolve_chain(level: str, mapping: dict[str, str], name: str) -> str:
    path = [name]
    seen = {name}
    current = name
    while current in mapping:
        nxt = mapping[current]
        if nxt == current:
            break
        if nxt in seen:
            start = path.index(nxt)
            raise AliasCycleError(level, path[start:] + [nxt])
        path.append(nxt)
        seen.add(nxt)
        current = nxt
    return current


@dataclass(frozen=True)
class EntityRegistry:
    """Alias maps per level plus institute->country and country->region tables.

    Alias chains are flattened on construction so that lookups are idempotent.
    """

    aliases: dict[str, dict[str, str]] = field(default_factory=dict)
    institute_country: dict[str, str] = field(default_factory=dict)
    country_region: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        flat = {}
        for level, mapping in self.aliases.items():
            if level not in LEVELS:
                raise ValueError(f"unknown alias level {level!r}")
            flat[level] = {a: _resolve_chain(level, mapping, a) for a in mapping}
        object.__setattr__(self, "aliases", flat)

        inst_country: dict[str, str] = {}
        for inst, country in self.institute_country.items():
            ci, cc = self.resolve("institute", inst), self.resolve("country", country)
            if inst_country.setdefault(ci, cc) != cc:
                raise ValueError(
                    f"institute {ci!r} maps to both {inst_country[ci]!r} and {cc!r}"
                )
        object.__setattr__(self, "institute_country", inst_country)

        regions: dict[str, str] = {}
        for country, region in self.country_region.items():
            if region not in REGIONS:
                raise ValueError(f"unknown region {region!r} for {country!r}")
            cc = self.resolve("country", country)
            if regions.setdefault(cc, region) != region:
                raise ValueError(f"country {cc!r} tagged with both {regions[cc]!r} and {region!r}")
        object.__setattr__(self, "country_region", regions)

    def resolve(self, level: str, name: str | None) -> str | None:
        if name is None:
            return None
        return self.aliases.get(level, {}).get(name, name)

    def country_of(self, institute: str) -> str | None:
        return self.institute_country.get(self.resolve("institute", institute))

    def region_of(self, country: str) -> str | None:
        return self.country_region.get(self.resolve("country", country))

    @classmethod
    def from_files(
        cls,
        aliases: str | Path | None = None,
        countries: str | Path | None = None,
        regions: str | Path | None = None,
    ) -> "EntityRegistry":
        alias_map: dict[str, dict[str, str]] = defaultdict(dict)
        if aliases is not None:
            for row in _read_table(aliases, ("level", "alias", "canonical")):
                level, alias, canonical = row
                if level not in LEVELS:
                    raise ValueError(f"{aliases}: unknown level {level!r}")
                prev = alias_map[level].setdefault(alias, canonical)
                if prev != canonical:
                    raise ValueError(f"{aliases}: alias {alias!r} maps to {prev!r} and {canonical!r}")
        inst = {}
        if countries is not None:
            for institute, country in _read_table(countries, ("institute", "country")):
                if inst.setdefault(institute, country) != country:
                    raise ValueError(f"{countries}: institute {institute!r} has two countries")
        reg = dict(_read_table(regions, ("country", "region"))) if regions is not None else {}
        return cls(dict(alias_map), inst, reg)


def _read_table(path: str | Path, columns: tuple[str, ...]) -> list[tuple[str, ...]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) [: len(columns)] != columns:
            raise ValueError(f"{path}: expected header {','.join(columns)}")
        rows = []
        for row in reader:
            values = tuple(_clean(row[c]) for c in columns)
            if any(v is None for v in values):
                raise ValueError(f"{path}:{reader.line_num}: empty field")
            rows.append(values)
        return rows


def default_regions() -> dict[str, str]:
    """The bundled country -> region table."""
    from importlib import resources

    text = resources.files("collabnet").joinpath("data/regions.csv").read_text("utf-8")
    return {row["country"]: row["region"] for row in csv.DictReader(io.StringIO(text))}


# ---------------------------------------------------------------------------
# canonicalization


@dataclass(frozen=True)
class MergeStats:
    author: int = 0
    institute: int = 0
    country: int = 0

    @property
    def total(self) -> int:
        return self.author + self.institute + self.country


def apply_aliases(
    records: Iterable[PublicationRecord], registry: EntityRegistry
) -> tuple[list[PublicationRecord], MergeStats]:
    """Rewrite every author/institute/country string to its canonical form."""
    counts = Counter()

    def canon(level, name):
        new = registry.resolve(level, name)
        if new != name:
            counts[level] += 1
        return new

    out = []
    for rec in records:
        authors = []
        for a in rec.authors:
            affs = []
            for f in a.affiliations:
                aff = Affiliation(canon("institute", f.institute), canon("country", f.country))
                if aff not in affs:
                    affs.append(aff)
            authors.append(AuthorEntry(canon("author", a.name), tuple(affs)))
        out.append(replace(rec, authors=tuple(authors)))
    return out, MergeStats(counts["author"], counts["institute"], counts["country"])


@dataclass(frozen=True)
class InferenceStats:
    filled: int
    unresolved: int


def infer_countries(
    records: Iterable[PublicationRecord], registry: EntityRegistry
) -> tuple[list[PublicationRecord], InferenceStats]:
    """Fill missing affiliation countries from the institute->country map.

    A present country is never overwritten.
    """
    filled = unresolved = 0
    out = []
    for rec in records:
        authors = []
        for a in rec.authors:
            affs = []
            for f in a.affiliations:
                if f.country is None and f.institute is not None:
                    country = registry.country_of(f.institute)
                    if country is None:
                        unresolved += 1
                    else:
                        filled += 1
                        f = Affiliation(f.institute, country)
                if f not in affs:
                    affs.append(f)
            authors.append(AuthorEntry(a.name, tuple(affs)))
        out.append(replace(rec, authors=tuple(authors)))
    return out, InferenceStats(filled, unresolved)


@dataclass(frozen=True)
class CorpusSummary:
    papers: int
    authors: int
    institutes: int
    countries: int
    multi_affiliation_authors: int
    authors_without_affiliation: int
    papers_per_year: dict[int, int]

    def as_tuple(self) -> tuple[int, int, int, int, int, int]:
        return (
            self.papers,
            self.authors,
            self.institutes,
            self.countries,
            self.multi_affiliation_authors,
            self.authors_without_affiliation,
        )

    def to_dict(self) -> dict:
        return {
            "papers": self.papers,
            "authors": self.authors,
            "institutes": self.institutes,
            "countries": self.countries,
            "multi_affiliation_authors": self.multi_affiliation_authors,
            "authors_without_affiliation": self.authors_without_affiliation,
            "papers_per_year": {str(y): c for y, c in sorted(self.papers_per_year.items())},
        }


def corpus_stats(records: Iterable[PublicationRecord]) -> CorpusSummary:
    """Count distinct entities in a canonicalized corpus.

    An author is multi-affiliation when linked to two or more distinct
    institutes anywhere in the corpus, and affiliation-less when no record
    gives them any affiliation.
    """
    records = list(records)
    institutes_of: dict[str, set[str]] = defaultdict(set)
    has_affiliation: dict[str, bool] = {}
    institutes, countries = set(), set()
    per_year = Counter()
    for rec in records:
        per_year[rec.year] += 1
        for a in rec.authors:
            has_affiliation[a.name] = has_affiliation.get(a.name, False) or bool(a.affiliations)
            for f in a.affiliations:
                if f.institute is not None:
                    institutes.add(f.institute)
                    institutes_of[a.name].add(f.institute)
                if f.country is not None:
                    countries.add(f.country)
    return CorpusSummary(
        papers=len(records),
        authors=len(has_affiliation),
        institutes=len(institutes),
        countries=len(countries),
        multi_affiliation_authors=sum(1 for s in institutes_of.values() if len(s) >= 2),
        authors_without_affiliation=sum(1 for v in has_affiliation.values() if not v),
        papers_per_year=dict(sorted(per_year.items())),
    )


def canonicalize(
    records: Iterable[PublicationRecord], registry: EntityRegistry
) -> tuple[list[PublicationRecord], MergeStats, InferenceStats]:
    """Alias merging followed by country inference."""
    merged, mstats = apply_aliases(records, registry)
    inferred, istats = infer_countries(merged, registry)
    return inferred, mstats, istats
