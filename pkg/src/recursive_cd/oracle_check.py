"""Exhaustive property suites that compare the fast routines with brute-force references.

Each suite returns a :class:`SuiteReport`; a suite passes when it found no
violation.  The command-line ``oracle-check`` runs them and the acceptance
tests call them with the corpus sizes they need.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable

from ._bits import mask_of
from .ci import OracleTester, with_cache
from .graph import (
    MixedGraph,
    is_c_order,
    is_r_order,
    latent_project,
    removable_bruteforce,
    removable_dag_criterion,
    removable_mag_criterion,
)
from .marvel import marvel_learn
from .orientation import learned_cpdag
from .rol import NeighborOracle, learn_gpi, rol_vi
from .simgen import all_dags_up_to_relabeling, all_labeled_dags, gen_dag, markov_equivalent_dags


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} checks, {len(self.violations)} violations"


def removability_corpus(labeled_max_n: int = 4, sampled: Iterable[tuple[int, int]] = ((5, 250), (6, 250))):
    """All labelled DAGs up to ``labeled_max_n`` vertices, then seeded random DAGs."""
    for n in range(1, labeled_max_n + 1):
        yield from all_labeled_dags(n)
    for n, count in sampled:
        for seed in range(count):
            yield gen_dag(n, 0.5, seed)


def removability_suite(dags: Iterable[MixedGraph], min_projection: int = 3) -> SuiteReport:
    """Both graphical criteria against the brute-force definition, on DAGs and on their projections."""
    report = SuiteReport("removability criteria vs brute force")
    seen: set[MixedGraph] = set()
    for dag in dags:
        for x in range(dag.n):
            brute = removable_bruteforce(dag, x)
            report.checked += 1
            if removable_dag_criterion(dag, x) != brute:
                report.violations.append(("dag", dag, x))
        for size in range(min_projection, dag.n + 1):
            for keep in combinations(range(dag.n), size):
                mag = latent_project(dag, keep)
                if mag in seen:
                    continue
                seen.add(mag)
                for x in range(mag.n):
                    report.checked += 1
                    if removable_mag_criterion(mag, x) != removable_bruteforce(mag, x):
                        report.violations.append(("mag", mag, x))
    return report


def r_orders(g: MixedGraph) -> frozenset[tuple[int, ...]]:
    return frozenset(pi for pi in permutations(range(g.n)) if is_r_order(g, pi))


def order_suite(max_n: int = 5) -> SuiteReport:
    """c-orders are r-orders; r-orders agree across Markov-equivalent DAGs; the
    value-iteration order is optimal, removable, and optimal orders are exactly the r-orders.
    """
    report = SuiteReport("order theory")
    for n in range(1, max_n + 1):
        for g in all_dags_up_to_relabeling(n):
            orders = list(permutations(range(n)))
            rset = r_orders(g)
            for pi in orders:
                report.checked += 1
                if is_c_order(g, pi) and pi not in rset:
                    report.violations.append(("c-order not removable", g, pi))
            for h in markov_equivalent_dags(g):
                report.checked += 1
                if r_orders(h) != rset:
                    report.violations.append(("r-orders differ in MEC", g, h))
            tester = OracleTester(g)
            neighbors = NeighborOracle(tester)
            costs = {pi: learn_gpi(pi, tester, neighbors).total for pi in orders}
            best = min(costs.values())
            minimizers = {pi for pi, c in costs.items() if c == best}
            report.checked += 1
            if minimizers != set(rset):
                report.violations.append(("minimizers are not the r-orders", g))
            vi = rol_vi(OracleTester(g))
            report.checked += 1
            if vi.total != best or vi.order not in rset or vi.graph != g.skeleton():
                report.violations.append(("value iteration", g, vi.order, vi.total, best))
    return report


def mec_invariant_edges(g: MixedGraph) -> frozenset[tuple[int, int]]:
    members = markov_equivalent_dags(g)
    common = set(members[0].directed)
    for h in members[1:]:
        common &= h.directed
    return frozenset(common)


def cpdag_suite(max_n: int = 5) -> SuiteReport:
    """MARVEL plus orientation recovers exactly the directed edges shared by the whole class."""
    report = SuiteReport("CPDAG vs brute-force equivalence class")
    for n in range(1, max_n + 1):
        for g in all_dags_up_to_relabeling(n):
            result = marvel_learn(with_cache(OracleTester(g)), strict=True)
            cp = learned_cpdag(result)
            report.checked += 1
            if cp.directed != mec_invariant_edges(g) or cp.skeleton() != g.skeleton():
                report.violations.append((g, sorted(cp.directed)))
    return report


def projection_suite(max_n: int = 5) -> SuiteReport:
    """Dropping one vertex by projection equals the induced subgraph exactly when the vertex is removable."""
    report = SuiteReport("projection vs induced subgraph")
    for n in range(2, max_n + 1):
        for g in all_dags_up_to_relabeling(n):
            for x in range(n):
                keep = [v for v in range(n) if v != x]
                same = latent_project(g, keep) == g.induced(keep)
                report.checked += 1
                if same != removable_bruteforce(g, x):
                    report.violations.append((g, x))
    return report


def run_all(max_n: int = 4, sampled: int = 50) -> list[SuiteReport]:
    """Quick versions of every suite for the command line."""
    corpus = list(removability_corpus(min(max_n, 4), ((5, sampled), (6, sampled))))
    return [
        removability_suite(corpus),
        projection_suite(max_n),
        order_suite(max_n),
        cpdag_suite(max_n),
    ]


__all__ = [
    "SuiteReport",
    "cpdag_suite",
    "mec_invariant_edges",
    "order_suite",
    "projection_suite",
    "r_orders",
    "removability_corpus",
    "removability_suite",
    "run_all",
    "mask_of",
]
