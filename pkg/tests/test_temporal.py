import pytest
from hypothesis import given, settings

from collabnet.ingest import Affiliation, AuthorEntry, PublicationRecord
from collabnet.metrics import full_report
from collabnet.netbuild import BuildConfig, build_graph
from collabnet.temporal import Period, YearRow, growth_rates, period_compare, yearly_series
from test_netbuild import corpora


def pair_record(rid, year, a, b):
    return PublicationRecord(
        rid, "", year, "", (AuthorEntry("x", (Affiliation(None, a),)), AuthorEntry("y", (Affiliation(None, b),)))
    )


def repeated(pairs):
    """Records from (year, country_a, country_b, count) tuples."""
    out = []
    for year, a, b, count in pairs:
        out += [pair_record(f"{year}-{a}-{b}-{i}", year, a, b) for i in range(count)]
    return out


def test_series_examples():
    s = yearly_series([pair_record("p", 1972, "United States", "China")])
    assert s.rows == (YearRow(1972, 2, 1, 1),)
    s = yearly_series(repeated([(1990, "A", "B", 2)]))
    assert s.rows == (YearRow(1990, 2, 1, 2),)


def test_series_fixture(fixture_records):
    rows = [tuple(r.__dict__.values()) for r in yearly_series(fixture_records, level="country").rows]
    # hand-derived per-year country graphs of the fixture
    assert rows == [
        (2001, 2, 1, 1),
        (2002, 2, 1, 1),
        (2003, 5, 4, 4),
        (2004, 3, 2, 2),
        (2005, 4, 2, 3),
        (2006, 3, 3, 3),
        (2007, 5, 4, 4),
        (2008, 5, 4, 4),
    ]


def test_series_includes_years_without_collaboration():
    solo = PublicationRecord("s", "", 1999, "", (AuthorEntry("x", (Affiliation(None, "A"),)),))
    assert yearly_series([solo]).rows == (YearRow(1999, 0, 0, 0),)


@settings(max_examples=50, deadline=None)
@given(corpora())
def test_series_invariants(records):
    for level in ("author", "institute", "country"):
        s = yearly_series(records, level=level)
        years = [r.year for r in s.rows]
        assert years == sorted(set(years))
        for r in s.rows:
            assert r.unique_links <= r.weight_sum
            assert r.active_nodes <= 2 * r.unique_links
        assert sum(r.weight_sum for r in s.rows) == build_graph(records, level=level).total_weight()


def test_period_identity(fixture_records):
    comp = period_compare(fixture_records, [Period("all", 2001, 2008)])
    (p,) = comp.periods
    expect = full_report(build_graph(fixture_records, level="country"))
    assert p.report == expect
    assert (p.nodes, p.links, p.weight) == (9, 13, 22)


def test_period_halves(fixture_records):
    comp = period_compare(fixture_records, [Period("early", 2001, 2004), Period("late", 2005, 2008)])
    assert not comp.cumulative
    early, late = comp.periods
    # early: CN-AU, CN-EG, UK-PT, UK-CZ, PT-CZ, US-CN, US-JP, CA-US
    assert (early.nodes, early.links, early.weight) == (9, 8, 8)
    # late: AU-CN x3, UK-PT, CN-US, CN-JP, US-JP x2, US-AU, US-CA, AU-CA, UK-CZ, JP-UK, US-UK
    assert (late.nodes, late.links, late.weight) == (8, 11, 14)
    # UK, Portugal, Czech Republic only link to each other before 2005
    assert early.report.component_sizes == [6, 3]
    assert late.report.component_sizes == [8]


def test_empty_period_is_flagged(fixture_records):
    comp = period_compare(fixture_records, [Period("void", 1950, 1960)])
    p = comp.periods[0]
    assert (p.nodes, p.links, p.weight) == (0, 0, 0)
    assert p.report.density_binary is None and "density_binary" in p.report.undefined


def test_overlapping_periods_marked_cumulative(fixture_records):
    comp = period_compare(fixture_records, [Period("all", 2001, 2008), Period("late", 2005, 2008)])
    assert comp.cumulative


def test_period_parse():
    assert Period.parse("early:1983-1997") == Period("early", 1983, 1997)
    assert Period.parse("1998-2009") == Period("1998-2009", 1998, 2009)
    assert Period.parse("1998-2009").years == 12
    with pytest.raises(ValueError):
        Period.parse("1998")
    with pytest.raises(ValueError):
        Period.parse("x:2000-1990")


@settings(max_examples=50, deadline=None)
@given(corpora())
def test_full_range_period_equals_all_time(records):
    if not records:
        return
    years = [r.year for r in records]
    comp = period_compare(records, [Period("all", min(years), max(years))])
    g = build_graph(records)
    assert comp.periods[0].report == full_report(g, strict=False)


# growth -------------------------------------------------------------------------


def test_growth_hand_arithmetic():
    records = repeated([(2001, "X", "Y", 1), (2002, "X", "Y", 1), (2003, "X", "Y", 1), (2004, "X", "Y", 5), (2007, "X", "Y", 7)])
    t = growth_rates(records, Period("e", 2001, 2003), Period("r", 2004, 2007))
    row = {r.entity: r for r in t.rows}["X"]
    assert (row.av_early, row.av_recent, row.growth) == (1.0, 3.0, 3.0)


def test_growth_rounded_display_example():
    # 1 collaboration over 5 years vs 37 over 5 years: 7.4 / 0.2
    records = repeated([(1990, "France", "Z", 1), (2000, "France", "Z", 37)])
    t = growth_rates(records, Period("e", 1986, 1990), Period("r", 2000, 2004))
    row = {r.entity: r for r in t.rows}["France"]
    assert row.av_recent == pytest.approx(7.4) and row.av_early == pytest.approx(0.2)
    assert row.growth == pytest.approx(37.0, abs=1e-12)


# (early count 1983-97, recent count 1998-09, printed growth); early counts
# for Portugal and Czech Republic follow from the printed 0.1 averages
PRINTED = {
    "United States": (60, 350, 8.0),
    "China": (31, 265, 11.7),
    "France": (3, 81, 36.8),
    "South Korea": (5, 70, 19.1),
    "Czech Republic": (2, 44, 30.0),
    "Portugal": (1, 45, 61.4),
}


@pytest.mark.parametrize("country", sorted(PRINTED))
def test_growth_reproduces_printed_table_with_eleven_year_divisor(country):
    early, recent, printed = PRINTED[country]
    records = repeated([(1990, country, "Partner", early), (2005, country, "Partner", recent)])
    t = growth_rates(
        records, Period("e", 1983, 1997), Period("r", 1998, 2009), recent_years=11
    )
    row = {r.entity: r for r in t.rows}[country]
    assert round(row.growth, 1) == printed
    # inclusive spans (the default) give a different value for the same counts
    default = {r.entity: r for r in growth_rates(records, Period("e", 1983, 1997), Period("r", 1998, 2009)).rows}
    assert default[country].growth == pytest.approx((recent / 12) / (early / 15))


def test_growth_exclusions():
    records = repeated([(2001, "A", "B", 2), (2005, "A", "C", 4), (2005, "B", "A", 1)])
    t = growth_rates(records, Period("e", 2001, 2002), Period("r", 2005, 2006), min_total=1)
    assert [r.entity for r in t.rows] == ["A", "B"]
    assert t.new_entrants == ["C"]
    t = growth_rates(records, Period("e", 2001, 2002), Period("r", 2005, 2006), min_total=4)
    assert [r.entity for r in t.rows] == ["A"]
    assert "B" in t.excluded
    dropout = repeated([(2001, "A", "B", 1), (2005, "A", "C", 1)])
    t = growth_rates(dropout, Period("e", 2001, 2001), Period("r", 2005, 2005))
    assert t.excluded == {"B": "no collaboration in recent window"}


def test_growth_rejects_overlap_and_bad_minimum():
    with pytest.raises(ValueError, match="overlap"):
        growth_rates([], Period("e", 2000, 2005), Period("r", 2005, 2010))
    with pytest.raises(ValueError):
        growth_rates([], Period("e", 2000, 2001), Period("r", 2005, 2010), min_total=0)


def test_growth_sorted_descending(fixture_records):
    t = growth_rates(fixture_records, Period("e", 2001, 2004), Period("r", 2005, 2008))
    gs = [r.growth for r in t.rows]
    assert gs == sorted(gs, reverse=True)
    assert all(g > 0 for g in gs)


@settings(max_examples=40, deadline=None)
@given(corpora())
def test_growth_scale_invariance(records):
    doubled = records + [
        PublicationRecord(r.id + "-dup", r.title, r.year, r.journal, r.authors) for r in records
    ]
    e, r = Period("e", 2000, 2002), Period("r", 2003, 2006)
    for level in ("institute", "country"):
        cfg = BuildConfig(level=level)
        a = growth_rates(records, e, r, cfg)
        b = growth_rates(doubled, e, r, cfg)
        assert [(x.entity, x.growth) for x in a.rows] == [(x.entity, pytest.approx(x.growth)) for x in b.rows]
