import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))

from dullgraph import io  # noqa: E402
from dullgraph.graph import DullGraph, Orientation, fat, thin  # noqa: E402


def load(name):
    return io.load(FIXTURES / f"{name}.json")


def graph_fixtures():
    return sorted(p.stem for p in FIXTURES.glob("*.json") if "polytope" not in p.read_text())


def polytope_fixtures():
    return sorted(p.stem for p in FIXTURES.glob("*.json") if "polytope" in p.read_text())


def oriented(name):
    """Graph plus orientation of a fixture (decorated fixtures carry their own)."""
    from dullgraph.graph import induced_orientation

    d = load(name)
    o = d.orientation or induced_orientation(d.decorated_graph)
    return d.graph, o


@pytest.fixture
def g_cp2():
    g = DullGraph.build([thin("a", "min"), thin("b"), thin("c", "max")], [("a", "c", 2)])
    return g, Orientation("a", "c", frozenset({("a", "c")}))


def chain_graph(labels, ids=None, extremes=("lo", "hi")):
    """Isolated min and max plus one free chain with the given labels, directed upward."""
    ids = ids or [f"c{i}" for i in range(len(labels) + 1)]
    verts = [thin(extremes[0], "min"), thin(extremes[1], "max")] + [thin(i) for i in ids]
    edges = [(ids[i], ids[i + 1], k) for i, k in enumerate(labels)]
    g = DullGraph.build(verts, edges)
    o = Orientation(extremes[0], extremes[1], frozenset((ids[i], ids[i + 1]) for i in range(len(labels))))
    return g, o


def ruled(genus=0, e=0):
    g = DullGraph.build([fat("lo", genus, e), fat("hi", genus, -e)])
    return g, Orientation("lo", "hi", frozenset())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
