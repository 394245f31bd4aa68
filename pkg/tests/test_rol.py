from itertools import permutations

import networkx as nx
import pytest

from conftest import markov_pair
from recursive_cd.ci import OracleTester
from recursive_cd.errors import ArgumentError
from recursive_cd.graph import MixedGraph, is_r_order
from recursive_cd.oracle_check import order_suite
from recursive_cd.rol import NeighborOracle, compute_cost, default_init, learn_gpi, rol_hc, rol_vi
from recursive_cd.simgen import gen_dag


def sinks_first(g):
    """Reverse topological order: every vertex is a sink when it is removed."""
    dag = nx.DiGraph(list(g.directed))
    dag.add_nodes_from(range(g.n))
    return list(reversed(list(nx.lexicographical_topological_sort(dag))))


class TestLearnGpi:
    def test_single_vertex(self):
        out = learn_gpi([0], OracleTester(MixedGraph(1)))
        assert out.cost == () and not out.graph.edges

    def test_every_order_of_the_markov_pair(self):
        g1, _ = markov_pair()
        t = OracleTester(g1)
        for pi in permutations(range(4)):
            out = learn_gpi(pi, t)
            assert out.total == 5
            assert out.graph == g1.skeleton()

    def test_r_order_recovers_the_skeleton(self):
        for seed in range(30):
            g = gen_dag(6, 0.4, seed)
            out = learn_gpi(sinks_first(g), OracleTester(g))
            assert out.graph == g.skeleton()
            assert out.total == g.edge_count()

    def test_bad_order(self):
        with pytest.raises(ArgumentError):
            learn_gpi([0, 0], OracleTester(MixedGraph(2)))
        with pytest.raises(ArgumentError):
            learn_gpi([0, 5], OracleTester(MixedGraph(2)))

    def test_partial_costs_match_full(self):
        g = gen_dag(7, 0.4, 3)
        neighbors = NeighborOracle(OracleTester(g))
        pi = list(range(7))
        full = compute_cost(pi, 0, 5, neighbors)
        assert compute_cost(pi, 2, 4, neighbors) == full[2:5]
        assert tuple(full) == learn_gpi(pi, OracleTester(g)).cost


class TestHillClimbing:
    def test_r_order_init_is_kept(self):
        for seed in range(20):
            g = gen_dag(6, 0.4, seed)
            init = sinks_first(g)
            result = rol_hc(OracleTester(g), init=init)
            assert result.total == learn_gpi(init, OracleTester(g)).total == g.edge_count()
            assert [e["event"] for e in result.trace] == ["init"]

    def test_two_vertices(self):
        g = MixedGraph(2, [(0, 1)])
        for init in ([0, 1], [1, 0]):
            result = rol_hc(OracleTester(g), init=init)
            assert result.order == tuple(init)
            assert result.total == 1

    def test_accepted_swaps_strictly_improve(self):
        g = gen_dag(15, 0.3, 15)
        events = []
        result = rol_hc(OracleTester(g), max_iter=50, max_swap=5, init=list(range(15)), trace=events.append, shadow_check=True)
        costs = [e["cost"] for e in events]
        assert all(b < a for a, b in zip(costs, costs[1:]))
        assert result.total == costs[-1] <= costs[0]
        assert result.total >= g.edge_count()

    def test_default_init_orders_by_boundary_size(self):
        g = gen_dag(8, 0.4, 2)
        init = default_init(OracleTester(g), range(8))
        assert sorted(init) == list(range(8))
        result = rol_hc(OracleTester(g))
        assert result.trace[0]["order"] == init

    def test_max_iter_limits_swaps(self):
        g = gen_dag(12, 0.35, 4)
        result = rol_hc(OracleTester(g), max_iter=1, init=list(range(12)))
        assert len(result.trace) <= 2

    def test_arguments(self):
        t = OracleTester(MixedGraph(3))
        with pytest.raises(ArgumentError):
            rol_hc(t, max_swap=0)
        with pytest.raises(ArgumentError):
            rol_hc(t, init=[0, 1])


class TestValueIteration:
    def test_markov_pair(self):
        g1, _ = markov_pair()
        result = rol_vi(OracleTester(g1))
        assert result.total == result.extra["value"] == 5
        assert result.graph == g1.skeleton()
        assert is_r_order(g1, result.order)

    def test_edgeless(self):
        result = rol_vi(OracleTester(MixedGraph(5)))
        assert result.total == 0
        assert sorted(result.order) == list(range(5))

    def test_reward_budget(self):
        for seed in range(5):
            g = gen_dag(8, 0.4, seed)
            result = rol_vi(OracleTester(g))
            assert result.extra["reward_evaluations"] <= 8 * 8 * 2 ** 8
            assert result.graph == g.skeleton()

    def test_cap(self):
        with pytest.raises(ArgumentError):
            rol_vi(OracleTester(MixedGraph(5)), cap=4)

    def test_matches_exhaustive_order_search(self):
        report = order_suite(max_n=4)
        assert report.passed, report.line()
