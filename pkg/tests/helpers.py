"""Graph builders and hypothesis strategies shared by the test modules."""
import random
from pathlib import Path

from hypothesis import strategies as st

from collabnet.netbuild import CollabGraph

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def make_graph(nodes, edges, weights=None, level="country"):
    """CollabGraph from plain node / edge iterables (weights default to 1)."""
    edges = [tuple(sorted(e)) for e in edges]
    w = {e: (weights or {}).get(e, 1) for e in edges}
    return CollabGraph(level, nodes, w)


def random_graph(n, p, rng):
    nodes = [f"v{i:02d}" for i in range(n)]
    edges = {frozenset((a, b)) for i, a in enumerate(nodes) for b in nodes[i + 1 :] if rng.random() < p}
    return nodes, edges


def star(n):
    nodes = [f"n{i:02d}" for i in range(n)]
    return make_graph(nodes, [(nodes[0], v) for v in nodes[1:]])


def cycle(n):
    nodes = [f"n{i:02d}" for i in range(n)]
    return make_graph(nodes, [(nodes[i], nodes[(i + 1) % n]) for i in range(n)])


def complete(n):
    nodes = [f"n{i:02d}" for i in range(n)]
    return make_graph(nodes, [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]])


@st.composite
def graphs(draw, min_nodes=0, max_nodes=8):
    n = draw(st.integers(min_nodes, max_nodes))
    nodes = [f"v{i}" for i in range(n)]
    pairs = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    weights = {p: draw(st.integers(1, 5)) for p in chosen}
    return make_graph(nodes, chosen, weights)


def sparse_connected_graph(n, m, seed, level="institute"):
    """Random spanning tree plus random chords: n nodes, m edges, weights 1-3."""
    rng = random.Random(seed)
    nodes = [f"v{i:05d}" for i in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    pairs = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        pairs.add((min(a, b), max(a, b)))
    while len(pairs) < m:
        a, b = rng.sample(range(n), 2)
        pairs.add((min(a, b), max(a, b)))
    return CollabGraph(level, nodes, {(nodes[a], nodes[b]): 1 + rng.randrange(3) for a, b in sorted(pairs)})


def giant_plus_fragments(n, giant, max_fragment, level="institute"):
    """A path of ``giant`` nodes; the rest as paths of at most ``max_fragment`` nodes."""
    nodes = [f"v{i:05d}" for i in range(n)]
    edges = [(nodes[i], nodes[i + 1]) for i in range(giant - 1)]
    start = giant
    while start < n:
        size = min(max_fragment, n - start)
        edges += [(nodes[i], nodes[i + 1]) for i in range(start, start + size - 1)]
        start += size
    return make_graph(nodes, edges, level=level)


def random_corpus(rng, max_records=15, years=(2000, 2006)):
    """Small corpus over 8 institutes in 4 countries, 1-5 authors per record."""
    from collabnet.ingest import Affiliation, AuthorEntry, PublicationRecord

    institutes = [(f"I{i}", f"C{i % 4}") for i in range(8)]
    out = []
    for i in range(rng.randint(1, max_records)):
        names = rng.sample([f"a{j}" for j in range(10)], rng.randint(1, 5))
        authors = tuple(
            AuthorEntry(name, tuple(Affiliation(*x) for x in rng.sample(institutes, rng.randint(0, 2))))
            for name in names
        )
        out.append(PublicationRecord(f"r{i}", "", rng.randint(*years), "", authors))
    return out
