from pathlib import Path

import pytest

from chatnet.graph import extract_network, to_undirected
from chatnet.ingest import build_roster, parse_corpus

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_files():
    return [
        (str(DATA / "2012-03-14.txt"), "2012-03-14"),
        (str(DATA / "2012-03-15.txt"), "2012-03-15"),
    ]


@pytest.fixture(scope="session")
def fixture_corpus(fixture_files):
    return parse_corpus(fixture_files)


@pytest.fixture(scope="session")
def fixture_roster(fixture_corpus):
    return build_roster(fixture_corpus)


@pytest.fixture(scope="session")
def fixture_graph(fixture_corpus, fixture_roster):
    return extract_network(fixture_corpus, fixture_roster)


@pytest.fixture(scope="session")
def fixture_undirected(fixture_graph):
    return to_undirected(fixture_graph)


@pytest.fixture()
def data_dir():
    return DATA
