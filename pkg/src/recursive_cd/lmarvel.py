"""L-MARVEL: recursive skeleton learning for MAGs, so latent confounders are allowed."""

from __future__ import annotations

from typing import Iterable

from ._bits import subsets
from ._recursion import RecursiveLearner
from .ci import CiTester
from .mb import NeighborSearch, find_neighbors
from .result import SkeletonResult

SkipCheckMat = set  # triples (x, y, z) whose verdict was already established


def lmarvel_find_neighbors(x: int, mb_x: Iterable[int], tester: CiTester) -> set[int]:
    """Members of ``mb_x`` that no proper subset of the rest of the boundary separates from ``x``."""
    return set(find_neighbors(x, mb_x, tester).neighbors)


def lmarvel_is_removable(
    x: int,
    neighbors: Iterable[int],
    mb_x: Iterable[int],
    tester: CiTester,
    skip: SkipCheckMat,
    certificates: dict | None = None,
) -> bool:
    """Check every ``y`` in the boundary against every neighbour ``z``.

    A pair is fine when some subset of the boundary separates it without
    ``x`` (condition 1), or when no subset separates it once ``x`` is added
    (condition 2).  Condition 1 is not tried when ``y`` is itself a neighbour.
    ``certificates`` receives the condition that cleared each triple.
    """
    mb_x = set(mb_x)
    neighbors = set(neighbors)
    for y in sorted(mb_x):
        for z in sorted(neighbors - {y}):
            if (x, y, z) in skip:
                continue
            pool = mb_x - {y, z}
            verdict = None
            if y not in neighbors and any(tester.independent(y, z, s) for s in subsets(pool)):
                verdict = "condition1"
            if verdict is None:
                for s in subsets(pool):
                    if tester.independent(y, z, s + (x,)):
                        return False
                verdict = "condition2"
            skip.add((x, y, z))
            if certificates is not None:
                certificates[(x, y, z)] = verdict
    return True


class LMarvel(RecursiveLearner):
    name = "lmarvel"
    mode = "mag"

    def run(self) -> SkeletonResult:
        self.skip: SkipCheckMat = set()
        self.certificates: dict = {}
        self.searched: dict[int, NeighborSearch] = {}
        result = super().run()
        result.extra["certificates"] = dict(self.certificates)
        return result

    def _neighbors(self, x: int) -> set[int]:
        if x not in self.searched:
            search = find_neighbors(x, self.state.mb[x], self.tester)
            self.searched[x] = search
            self.record(x, search)
            return set(search.neighbors)
        return self.neighbors_of(x)

    def try_remove(self, x: int) -> set[int] | None:
        ne = self._neighbors(x)
        if lmarvel_is_removable(x, ne, self.state.mb[x], self.tester, self.skip, self.certificates):
            return ne
        return None

    def fallback_neighbors(self, x: int) -> set[int]:
        return self._neighbors(x)

    def update_pool(self, x: int) -> set[int]:
        return set(self.state.mb[x])


def lmarvel_learn(tester: CiTester, vars: Iterable[int] | None = None, **options) -> SkeletonResult:
    """Learn a MAG skeleton; ``vstructures`` of the result holds its unshielded colliders."""
    return LMarvel(tester, vars, **options).run()
