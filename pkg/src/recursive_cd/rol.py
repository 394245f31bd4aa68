"""Order-based learners.

Removing vertices in an order ``pi`` and connecting each removed vertex to
its neighbours among the remaining ones yields a graph ``G^pi``.  Its edge
count is minimal exactly for removable orders, where ``G^pi`` is the true
skeleton.  ``rol_hc`` searches orders by local swaps; ``rol_vi`` solves the
problem exactly by dynamic programming over vertex subsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ._bits import bits_list, iter_bits, mask_of
from .ci import CiTester
from .errors import ArgumentError
from .graph import UndirectedGraph
from .mb import compute_mb_tc, find_neighbors

DEFAULT_VI_CAP = 16

CostVector = tuple[int, ...]


@dataclass
class GpiResult:
    graph: UndirectedGraph
    cost: CostVector

    @property
    def total(self) -> int:
        return sum(self.cost)


@dataclass
class RolResult:
    order: tuple[int, ...]
    graph: UndirectedGraph
    cost: CostVector
    trace: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.cost)


class NeighborOracle:
    """Neighbours of a vertex within a set of remaining vertices, memoized by (set, vertex).

    The boundary of ``x`` inside ``alive`` is found by total conditioning on
    ``alive``; the neighbours are then split off with the boundary-restricted
    subset search.
    """

    def __init__(self, tester: CiTester):
        self.tester = tester
        self.memo: dict[tuple[int, int], frozenset[int]] = {}

    def __call__(self, x: int, alive: int) -> frozenset[int]:
        key = (alive, x)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        members = bits_list(alive & ~(1 << x))
        mb = [y for y in members if not self.tester.independent(x, y, [v for v in members if v != y])]
        ne = frozenset(find_neighbors(x, mb, self.tester).neighbors)
        self.memo[key] = ne
        return ne


def _check_vars(tester: CiTester, pi: Sequence[int]) -> list[int]:
    pi = list(pi)
    if len(set(pi)) != len(pi):
        raise ArgumentError("order repeats a vertex")
    for v in pi:
        if not 0 <= v < tester.n_vars:
            raise ArgumentError(f"variable {v} out of range")
    return pi


def compute_cost(pi: Sequence[int], a: int, b: int, neighbors: NeighborOracle) -> list[int]:
    """Costs ``|Ne(pi[t]; pi[t:])|`` for positions ``a..b`` (inclusive, 0-based)."""
    out = []
    for t in range(a, b + 1):
        out.append(len(neighbors(pi[t], mask_of(pi[t:]))))
    return out


def learn_gpi(pi: Sequence[int], tester: CiTester, neighbors: NeighborOracle | None = None) -> GpiResult:
    """Remove vertices in the order ``pi``, linking each to its neighbours among the rest."""
    pi = _check_vars(tester, pi)
    neighbors = neighbors or NeighborOracle(tester)
    edges = []
    cost = []
    for t in range(len(pi) - 1):
        ne = neighbors(pi[t], mask_of(pi[t:]))
        cost.append(len(ne))
        edges.extend((pi[t], y) for y in ne)
    return GpiResult(UndirectedGraph(tester.n_vars, edges), tuple(cost))


def default_init(tester: CiTester, vars: Iterable[int]) -> list[int]:
    """Vertices sorted by Markov boundary size from one total-conditioning pass, ties by id."""
    state = compute_mb_tc(tester, vars)
    return sorted(state.remaining, key=lambda v: (len(state.mb[v]), v))


def rol_hc(
    tester: CiTester,
    vars: Iterable[int] | None = None,
    max_iter: int = 50,
    max_swap: int = 5,
    init: Sequence[int] | None = None,
    trace: Callable[[dict], None] | None = None,
    shadow_check: bool = False,
) -> RolResult:
    """Hill climbing over orders by swapping positions less than ``max_swap`` apart.

    Each outer iteration accepts the first strictly improving swap in
    ``(a, b)`` scan order.  Only the costs of positions ``a..b`` are
    recomputed.  With ``shadow_check`` the maintained cost vector is compared
    with a full recomputation after every accepted swap.
    """
    if max_swap < 1:
        raise ArgumentError("max_swap must be at least 1")
    vs = sorted(set(range(tester.n_vars) if vars is None else vars))
    pi = _check_vars(tester, init) if init is not None else default_init(tester, vs)
    if sorted(pi) != vs:
        raise ArgumentError("init must be an order over the selected variables")
    n = len(pi)
    neighbors = NeighborOracle(tester)
    cost = compute_cost(pi, 0, n - 2, neighbors) if n > 1 else []
    events: list[dict] = []

    def emit(event: dict) -> None:
        events.append(event)
        if trace is not None:
            trace(event)

    emit({"event": "init", "order": list(pi), "cost": sum(cost)})
    for iteration in range(max_iter):
        accepted = False
        for a in range(n - 1):
            for b in range(a + 1, min(n, a + max_swap)):
                cand = list(pi)
                cand[a], cand[b] = cand[b], cand[a]
                hi = min(b, n - 2)
                new = compute_cost(cand, a, hi, neighbors)
                if sum(new) < sum(cost[a : hi + 1]):
                    pi = cand
                    cost[a : hi + 1] = new
                    accepted = True
                    emit({"event": "swap", "iteration": iteration, "a": a, "b": b, "cost": sum(cost)})
                    if shadow_check and cost != compute_cost(pi, 0, n - 2, neighbors):
                        raise AssertionError("partial cost update diverged from full recomputation")
                    break
            if accepted:
                break
        if not accepted:
            break
    gpi = learn_gpi(pi, tester, neighbors)
    return RolResult(tuple(pi), gpi.graph, gpi.cost, events)


def rol_vi(
    tester: CiTester,
    vars: Iterable[int] | None = None,
    cap: int = DEFAULT_VI_CAP,
) -> RolResult:
    """Exact order search by value iteration over all subsets of the variables.

    ``value[s]`` is minus the smallest number of edges needed to remove every
    vertex of ``s``.  Each (subset, vertex) reward is evaluated once.
    """
    vs = sorted(set(range(tester.n_vars) if vars is None else vars))
    n = len(vs)
    if n > cap:
        raise ArgumentError(f"value iteration is capped at {cap} variables, got {n}")
    neighbors = NeighborOracle(tester)
    full = mask_of(vs)
    value: dict[int, int] = {}
    by_size: list[list[int]] = [[] for _ in range(n + 1)]
    # enumerate submasks of ``full`` grouped by size
    sub = full
    while True:
        by_size[sub.bit_count()].append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & full
    rewards = 0

    def reward(s: int, a: int) -> int:
        nonlocal rewards
        if (s, a) not in neighbors.memo:
            rewards += 1
        return -len(neighbors(a, s))

    for size in range(n + 1):
        for s in by_size[size]:
            if size <= 1:
                value[s] = 0
                continue
            value[s] = max(reward(s, a) + value[s & ~(1 << a)] for a in iter_bits(s))
    order: list[int] = []
    edges = []
    cost = []
    s = full
    while s.bit_count() > 1:
        best = max(iter_bits(s), key=lambda a: (reward(s, a) + value[s & ~(1 << a)], -a))
        ne = neighbors(best, s)
        order.append(best)
        cost.append(len(ne))
        edges.extend((best, y) for y in ne)
        s &= ~(1 << best)
    order.extend(iter_bits(s))
    graph = UndirectedGraph(tester.n_vars, edges)
    return RolResult(tuple(order), graph, tuple(cost), extra={"value": -value[full], "reward_evaluations": rewards})
