import json

import pytest
from hypothesis import given, strategies as st

from collabnet.ingest import (
    Affiliation,
    AliasCycleError,
    AuthorEntry,
    CorpusError,
    EntityRegistry,
    PublicationRecord,
    apply_aliases,
    corpus_stats,
    default_regions,
    dump_jsonl,
    infer_countries,
    parse_corpus,
)
from collabnet.netbuild import build_graph


def line(**fields):
    base = {
        "id": "p1",
        "title": "t",
        "year": 1998,
        "journal": "j",
        "authors": [
            {"name": "A", "affiliations": [{"institute": "I1", "country": "C1"}]},
            {"name": "B", "affiliations": [{"institute": "I2", "country": "C2"}]},
        ],
        "keywords": [],
    }
    base.update(fields)
    return json.dumps({k: v for k, v in base.items() if v is not ...})


def test_parse_one_record():
    res = parse_corpus(line().encode())
    assert res.errors == []
    (rec,) = res.records
    assert rec.year == 1998 and [a.name for a in rec.authors] == ["A", "B"]
    assert rec.authors[0].affiliations == (Affiliation("I1", "C1"),)


def test_missing_year_is_a_row_error():
    res = parse_corpus((line(year=...) + "\n" + line(id="p2")).encode())
    assert [r.id for r in res.records] == ["p2"]
    assert len(res.errors) == 1 and res.errors[0].line == 1 and "year" in res.errors[0].message


@pytest.mark.parametrize("year", ["nineteen", 12.5, None, 99999, True])
def test_bad_years(year):
    res = parse_corpus(line(year=year))
    assert res.records == [] and len(res.errors) == 1


def test_malformed_rows_are_reported():
    text = "\n".join([line(), "{not json", json.dumps([1, 2]), line(id="p3", authors=[])])
    res = parse_corpus(text)
    assert [r.id for r in res.records] == ["p1"]
    assert [e.line for e in res.errors] == [2, 3, 4]


def test_duplicate_id_is_fatal():
    with pytest.raises(CorpusError, match=r"'p1' on rows 1 and 3"):
        parse_corpus("\n".join([line(), line(id="p2"), line()]))


def test_duplicate_author_in_record():
    authors = [{"name": "A", "affiliations": []}, {"name": "A", "affiliations": []}]
    res = parse_corpus(line(authors=authors))
    assert res.records == [] and "twice" in res.errors[0].message


def test_empty_affiliation_is_dropped_and_flagged():
    authors = [{"name": "A", "affiliations": [{"institute": " ", "country": None}]}]
    res = parse_corpus(line(authors=authors))
    assert res.records[0].authors[0].affiliations == ()
    assert res.flagged == ["p1"]


def test_non_utf8_rejected():
    with pytest.raises(CorpusError, match="UTF-8"):
        parse_corpus(b"\xff\xfe\x00garbage")


def test_csv_adapter_folds_rows():
    text = (
        "id,title,year,journal,author,institute,country\n"
        "p1,T,2001,J,A,I1,C1\n"
        "p1,T,2001,J,A,I2,C2\n"
        "p1,T,2001,J,B,,\n"
        "p2,U,2002,J,C,I3,\n"
        "p3,V,abc,J,D,I4,C4\n"
    )
    res = parse_corpus(text.encode(), "csv")
    recs = {r.id: r for r in res.records}
    assert set(recs) == {"p1", "p2"}
    a, b = recs["p1"].authors
    assert a.affiliations == (Affiliation("I1", "C1"), Affiliation("I2", "C2"))
    assert b.affiliations == ()
    assert recs["p2"].authors[0].affiliations == (Affiliation("I3", None),)
    assert len(res.errors) == 1 and res.errors[0].record_id == "p3"


def test_csv_missing_columns():
    with pytest.raises(CorpusError, match="country"):
        parse_corpus(b"id,title,year,journal,author,institute\n", "csv")


def test_csv_and_jsonl_fixture_agree(fixture_raw):
    rows = ["id,title,year,journal,author,institute,country"]
    for r in fixture_raw:
        for a in r.authors:
            for f in a.affiliations or (Affiliation(),):
                rows.append(",".join([r.id, r.title, str(r.year), r.journal, a.name, f.institute or "", f.country or ""]))
    res = parse_corpus("\n".join(rows) + "\n", "csv")
    assert res.errors == []
    strip = lambda recs: [(r.id, r.year, r.authors) for r in recs]
    assert strip(res.records) == strip(fixture_raw)


def test_jsonl_round_trip(fixture_raw):
    assert parse_corpus(dump_jsonl(fixture_raw)).records == fixture_raw


# registry ---------------------------------------------------------------------


def rec(*authors, year=2000, rid="r"):
    return PublicationRecord(rid, "", year, "", tuple(authors))


def au(name, *affs):
    return AuthorEntry(name, tuple(Affiliation(*a) for a in affs))


def test_single_alias_substitution():
    reg = EntityRegistry({"institute": {"Univ. of Sydney": "University of Sydney"}})
    out, stats = apply_aliases([rec(au("A", ("Univ. of Sydney", "Australia")))], reg)
    assert out[0].authors[0].affiliations[0].institute == "University of Sydney"
    assert stats.total == 1 and stats.institute == 1


def test_country_merge_collapses_nodes():
    reg = EntityRegistry({"country": {"Hong Kong": "China", "Taiwan": "China"}})
    records = [rec(au("A", ("X", "Hong Kong")), au("B", ("Y", "Taiwan")), au("C", ("Z", "China")))]
    out, stats = apply_aliases(records, reg)
    assert {f.country for a in out[0].authors for f in a.affiliations} == {"China"}
    assert stats.country == 2


def test_alias_collapse_within_record_keeps_entries():
    reg = EntityRegistry({"author": {"B": "A"}})
    out, stats = apply_aliases([rec(au("A"), au("B"))], reg)
    assert [a.name for a in out[0].authors] == ["A", "A"] and stats.author == 1
    assert build_graph(out, level="author", include_isolates=True).nodes == ("A",)


def test_empty_registry_is_identity(fixture_raw):
    out, stats = apply_aliases(fixture_raw, EntityRegistry())
    assert out == fixture_raw and stats.total == 0


def test_alias_chains_flatten_and_cycles_fail():
    reg = EntityRegistry({"country": {"HK": "Hong Kong", "Hong Kong": "China"}})
    assert reg.resolve("country", "HK") == "China"
    with pytest.raises(AliasCycleError) as info:
        EntityRegistry({"author": {"a": "b", "b": "c", "c": "a"}})
    assert info.value.cycle[0] == info.value.cycle[-1]
    assert set(info.value.cycle) == {"a", "b", "c"}


def test_registry_rejects_conflicting_institute_countries():
    with pytest.raises(ValueError, match="maps to both"):
        EntityRegistry({"institute": {"U. Syd": "USyd"}}, {"U. Syd": "Australia", "USyd": "France"})


def test_registry_files(tmp_path):
    (tmp_path / "a.csv").write_text("level,alias,canonical\nplanet,x,y\n")
    with pytest.raises(ValueError, match="unknown level"):
        EntityRegistry.from_files(tmp_path / "a.csv")
    (tmp_path / "r.csv").write_text("country,region\nMars,Space\n")
    with pytest.raises(ValueError, match="region"):
        EntityRegistry.from_files(regions=tmp_path / "r.csv")


def test_default_regions_cover_fixture_countries(fixture_records):
    regions = default_regions()
    countries = {f.country for r in fixture_records for a in r.authors for f in a.affiliations if f.country}
    assert countries <= set(regions)
    assert set(regions.values()) == {"America", "Oceania", "Africa", "Asia", "Europe"}


names = st.sampled_from(["a", "b", "c", "d", "e", "f"])


@given(st.dictionaries(names, names))
def test_resolution_idempotent(mapping):
    try:
        reg = EntityRegistry({"author": mapping})
    except AliasCycleError:
        return
    for x in "abcdefg":
        once = reg.resolve("author", x)
        assert reg.resolve("author", once) == once


def test_apply_aliases_idempotent_and_conserving(fixture_raw, fixture_registry):
    once, _ = apply_aliases(fixture_raw, fixture_registry)
    twice, stats = apply_aliases(once, fixture_registry)
    assert twice == once and stats.total == 0
    assert len(once) == len(fixture_raw)
    assert [len(r.authors) for r in once] == [len(r.authors) for r in fixture_raw]


# country inference ----------------------------------------------------------------


def test_infer_countries_examples():
    reg = EntityRegistry(institute_country={"University of Sydney": "Australia"})
    out, stats = infer_countries([rec(au("A", ("University of Sydney", None)), au("B", ("Nowhere", None)))], reg)
    assert out[0].authors[0].affiliations == (Affiliation("University of Sydney", "Australia"),)
    assert out[0].authors[1].affiliations == (Affiliation("Nowhere", None),)
    assert (stats.filled, stats.unresolved) == (1, 1)


def test_infer_never_overwrites():
    reg = EntityRegistry(institute_country={"U": "Australia"})
    out, stats = infer_countries([rec(au("A", ("U", "France")))], reg)
    assert out[0].authors[0].affiliations[0].country == "France" and stats.filled == 0


def test_fixture_inference(fixture_raw, fixture_registry):
    merged, mstats = apply_aliases(fixture_raw, fixture_registry)
    # hand count: 8 rewritten strings (1 author, 2 institute, 5 country)
    assert (mstats.author, mstats.institute, mstats.country) == (1, 2, 5)
    missing = [r.id for r in merged if any(f.country is None for a in r.authors for f in a.affiliations)]
    assert missing == ["P09", "P14", "P15"]
    _, istats = infer_countries(merged, fixture_registry)
    assert (istats.filled, istats.unresolved) == (2, 1)


# summary ----------------------------------------------------------------------


def test_corpus_stats_examples():
    assert corpus_stats([]).as_tuple() == (0, 0, 0, 0, 0, 0)
    one = rec(au("A", ("I", "C")), au("B", ("I", "C")))
    assert corpus_stats([one]).as_tuple() == (1, 2, 1, 1, 0, 0)


def test_corpus_stats_fixture(fixture_records):
    s = corpus_stats(fixture_records)
    # hand count over the fixture file
    assert s.as_tuple() == (20, 20, 15, 9, 1, 1)
    assert s.papers_per_year == {2001: 2, 2002: 2, 2003: 2, 2004: 3, 2005: 3, 2006: 3, 2007: 3, 2008: 2}
    names = {a.name for r in fixture_records for a in r.authors}
    assert s.authors == len(names)
