"""MARVEL: recursive skeleton learning for DAGs (causal sufficiency assumed).

A vertex is removed once its neighbours, its v-structures as a parent and
the two graphical removability conditions have been checked with tests
restricted to its Markov boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from ._bits import subsets
from ._recursion import RecursiveLearner
from .ci import CiTester
from .errors import ConsistencyError
from .mb import NeighborSearch, find_neighbors
from .result import SkeletonResult

__all__ = [
    "SkipCheckCond",
    "find_neighbors",
    "find_vstructures",
    "condition1",
    "condition2",
    "marvel_learn",
    "Marvel",
]

Triple = tuple[int, int, int]


@dataclass
class SkipCheckCond:
    """Triples ``(x, y, z)`` already cleared by condition 1 or condition 2; entries are never removed."""

    cond1: set[Triple] = field(default_factory=set)
    cond2: set[Triple] = field(default_factory=set)


def find_vstructures(
    x: int,
    neighbors: Iterable[int],
    coparents: Iterable[int],
    mb_x: Iterable[int],
    sepsets: dict[int, frozenset[int]],
    tester: CiTester,
) -> set[Triple]:
    """V-structures ``x -> z <- y`` with ``y`` a co-parent and ``z`` a neighbour of ``x``.

    Returned triples are ``(x, z, y)``.  A triple qualifies when ``z`` is not
    in the separating set of ``x, y`` and no subset of ``mb_x + {x} - {y, z}``
    separates ``y`` and ``z``.
    """
    mb_x = set(mb_x)
    out = set()
    for y in sorted(coparents):
        if y not in sepsets:
            raise ConsistencyError(f"co-parent {y} of {x} has no separating set")
        for z in sorted(neighbors):
            if z in sepsets[y]:
                continue
            pool = (mb_x | {x}) - {y, z}
            if not any(tester.independent(y, z, s) for s in subsets(pool)):
                out.add((x, z, y))
    return out


def condition1(x: int, neighbors: Iterable[int], mb_x: Iterable[int], tester: CiTester, skip: SkipCheckCond) -> bool:
    """False as soon as two neighbours of ``x`` are separated by ``x`` plus a subset of the rest of the boundary."""
    mb_x = set(mb_x)
    for y, z in combinations(sorted(neighbors), 2):
        if (x, y, z) in skip.cond1:
            continue
        for s in subsets(mb_x - {y, z}):
            if tester.independent(y, z, s + (x,)):
                return False
        skip.cond1.add((x, y, z))
    return True


def condition2(
    x: int,
    neighbors: Iterable[int],
    coparents: Iterable[int],
    mb_x: Iterable[int],
    vstructures: Iterable[Triple],
    tester: CiTester,
    skip: SkipCheckCond,
) -> bool:
    """False as soon as a co-parent ``y`` and a neighbour ``z`` are separated by ``x`` plus a
    subset of the boundary that contains one of the children ``x`` shares with ``y``.
    """
    mb_x = set(mb_x)
    shared: dict[int, set[int]] = {}
    for a, v, y in vstructures:
        if a == x:
            shared.setdefault(y, set()).add(v)
    for y in sorted(coparents):
        for z in sorted(neighbors):
            gamma = shared.get(y, set()) - {z}
            if not gamma or (x, y, z) in skip.cond2:
                continue
            for s in subsets(mb_x - {y, z}):
                if gamma.isdisjoint(s):
                    continue
                if tester.independent(y, z, s + (x,)):
                    return False
            skip.cond2.add((x, y, z))
    return True


class Marvel(RecursiveLearner):
    name = "marvel"

    def run(self) -> SkeletonResult:
        self.skip = SkipCheckCond()
        self.searched: dict[int, NeighborSearch] = {}
        self.vs_found: dict[int, set[Triple]] = {}
        return super().run()

    def _neighbors(self, x: int) -> tuple[set[int], set[int]]:
        mb_x = self.state.mb[x]
        if x not in self.searched:
            search = find_neighbors(x, mb_x, self.tester)
            self.searched[x] = search
            self.record(x, search)
            ne = set(search.neighbors)
        else:
            ne = self.neighbors_of(x)
        return ne, mb_x - ne

    def try_remove(self, x: int) -> set[int] | None:
        t = self.tester
        mb_x = self.state.mb[x]
        ne, cp = self._neighbors(x)
        if not condition1(x, ne, mb_x, t, self.skip):
            return None
        if x not in self.vs_found:
            self.vs_found[x] = find_vstructures(x, ne, cp, mb_x, self.searched[x].sepsets, t)
        alive = self.state.mb.keys()
        vs = {tr for tr in self.vs_found[x] if tr[1] in alive and tr[2] in alive}
        if not condition2(x, ne, cp, mb_x, vs, t, self.skip):
            return None
        return ne

    def fallback_neighbors(self, x: int) -> set[int]:
        return self._neighbors(x)[0]


def marvel_learn(tester: CiTester, vars: Iterable[int] | None = None, **options) -> SkeletonResult:
    """Learn a DAG skeleton and its v-structures.

    :param tester: CI tester over the variables
    :param vars: subset of variable ids (all by default)
    :param options: ``mb_method``, ``strict``, ``trace``, ``observer`` (see :class:`RecursiveLearner`)
    """
    return Marvel(tester, vars, **options).run()
