import pytest
from hypothesis import strategies as st

from recursive_cd.graph import MixedGraph, latent_project
from recursive_cd.simgen import gen_dag

# Vertex ids used by the small named fixtures below.
X, Y, Z, W = 0, 1, 2, 3
X1, X2, X3, X4 = 0, 1, 2, 3
A, B, C, D = 0, 1, 2, 3


def confounded_graph():
    """X <-> Y, Y -> Z, Y -> W, Z -> W."""
    return MixedGraph(4, [(Y, Z), (Y, W), (Z, W)], [(X, Y)])


def markov_pair():
    """Two Markov equivalent DAGs on four vertices that differ in the X1, X2 edge."""
    g1 = MixedGraph(4, [(X3, X2), (X3, X1), (X4, X2), (X4, X1), (X2, X1)])
    g2 = MixedGraph(4, [(X3, X2), (X3, X1), (X4, X2), (X4, X1), (X1, X2)])
    return g1, g2


def diamonds():
    """The three orientations of a diamond: B and C non-adjacent, both adjacent to A, all into D."""
    tail = [(A, D), (B, D), (C, D)]
    return [
        MixedGraph(4, [(A, B), (A, C)] + tail),
        MixedGraph(4, [(A, B), (C, A)] + tail),
        MixedGraph(4, [(B, A), (C, A)] + tail),
    ]


def chain():
    return MixedGraph(3, [(0, 1), (1, 2)])


def collider():
    return MixedGraph(3, [(0, 2), (1, 2)])


@pytest.fixture
def confounded():
    return confounded_graph()


@pytest.fixture
def equivalent_pair():
    return markov_pair()


@st.composite
def dags(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    p = draw(st.sampled_from([0.2, 0.4, 0.6, 0.8]))
    seed = draw(st.integers(0, 2**31 - 1))
    return gen_dag(n, p, seed)


@st.composite
def mags(draw, max_dag_n=7, min_keep=1):
    """Latent projections of random DAGs, so every draw is a MAG."""
    g = draw(dags(min_n=max(min_keep, 1), max_n=max_dag_n))
    keep = draw(st.sets(st.integers(0, g.n - 1), min_size=min(min_keep, g.n), max_size=g.n))
    return latent_project(g, sorted(keep))


# One line per acceptance criterion, printed after the run whatever the verdict.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
