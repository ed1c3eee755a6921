import random

import pytest

from collabnet.ingest import EntityRegistry, canonicalize, default_regions, load_corpus

from helpers import DATA


@pytest.fixture(scope="session")
def fixture_registry():
    base = EntityRegistry.from_files(DATA / "aliases.csv", DATA / "countries.csv")
    return EntityRegistry(base.aliases, base.institute_country, default_regions())


@pytest.fixture(scope="session")
def fixture_raw():
    return load_corpus(DATA / "fixture.jsonl").records


@pytest.fixture(scope="session")
def fixture_records(fixture_raw, fixture_registry):
    records, _, _ = canonicalize(fixture_raw, fixture_registry)
    return records


@pytest.fixture
def rng():
    return random.Random(20240601)


_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    """Collects one (criterion, title, passed, detail) line per acceptance check."""
    return lambda *entry: _ACCEPTANCE.append(entry)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {num}. {title}: {detail}")
