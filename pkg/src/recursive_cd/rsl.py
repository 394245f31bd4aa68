"""RSL learners that use structural side information.

``rsl_w`` assumes the clique number of the DAG is at most ``m``;
``rsl_d`` assumes the DAG has no diamond (two non-adjacent parents of a
vertex that share a third adjacent co-parent).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from ._bits import subsets
from ._recursion import RecursiveLearner
from .ci import CiTester
from .errors import ArgumentError, NoRemovableVertexError
from .mb import NeighborSearch
from .result import SkeletonResult


# ------------------------------------------------------------ clique bound
def rsl_w_is_removable(x: int, mb_x: Iterable[int], m: int, tester: CiTester) -> bool:
    """Sufficient removability test under a clique bound ``m``.

    For every ``S`` in the boundary with ``|S| <= m - 2``: no two members
    outside ``S`` are separated by the rest of the boundary plus ``x``, and no
    member outside ``S`` is separated from ``x`` by the rest of the boundary.
    """
    if m < 1:
        raise ArgumentError("clique bound must be at least 1")
    mb_x = set(mb_x)
    for s in subsets(mb_x, max_size=m - 2):
        rest = mb_x - set(s)
        for y, z in combinations(sorted(rest), 2):
            if tester.independent(y, z, (mb_x | {x}) - {y, z} - set(s)):
                return False
        for y in sorted(rest):
            if tester.independent(x, y, mb_x - {y} - set(s)):
                return False
    return True


def rsl_w_search(x: int, mb_x: Iterable[int], m: int, tester: CiTester) -> NeighborSearch:
    """Co-parents of a removable ``x`` together with their shared children.

    ``y`` is a co-parent when dropping some non-empty ``S`` of at most
    ``m - 1`` other boundary members from the conditioning set separates it
    from ``x``; ``S`` is then the set of shared children.
    """
    mb_x = set(mb_x)
    out = NeighborSearch(set(), set(), {})
    for y in sorted(mb_x):
        rest = mb_x - {y}
        for s in subsets(rest, min_size=1, max_size=m - 1):
            cond = rest - set(s)
            if tester.independent(x, y, cond):
                out.coparents.add(y)
                out.sepsets[y] = frozenset(cond)
                out.children[y] = frozenset(s)
                break
        else:
            out.neighbors.add(y)
    return out


def rsl_w_find_neighbors(x: int, mb_x: Iterable[int], m: int, tester: CiTester) -> set[int]:
    return set(rsl_w_search(x, mb_x, m, tester).neighbors)


class RslW(RecursiveLearner):
    name = "rsl_w"
    uses_children = True

    def __init__(self, tester, vars=None, *, m: int, **options):
        options.setdefault("strict", True)
        super().__init__(tester, vars, **options)
        if m < 1:
            raise ArgumentError("clique bound must be at least 1")
        self.m = m

    def try_remove(self, x: int) -> set[int] | None:
        mb_x = self.state.mb[x]
        if not rsl_w_is_removable(x, mb_x, self.m, self.tester):
            return None
        search = rsl_w_search(x, mb_x, self.m, self.tester)
        self.record(x, search)
        return set(search.neighbors)

    def fallback_neighbors(self, x: int) -> set[int]:
        search = rsl_w_search(x, self.state.mb[x], self.m, self.tester)
        self.record(x, search)
        return set(search.neighbors)


def rsl_w_learn(tester: CiTester, vars: Iterable[int] | None = None, m: int = 2, **options) -> SkeletonResult:
    """Learn a DAG skeleton assuming clique number at most ``m``; halts with
    :class:`NoRemovableVertexError` when no vertex passes the test."""
    result = RslW(tester, vars, m=m, **options).run()
    result.extra["m"] = m
    return result


def rsl_w_auto(tester: CiTester, vars: Iterable[int] | None = None, **options) -> SkeletonResult:
    """Try ``m = 1, 2, ...`` and keep the first run whose skeleton has clique number at most ``m``."""
    n = tester.n_vars if vars is None else len(set(vars))
    options.pop("strict", None)
    attempts = []
    for m in range(1, max(n, 1) + 1):
        try:
            result = rsl_w_learn(tester, vars, m=m, strict=True, **options)
        except NoRemovableVertexError:
            attempts.append((m, "halted"))
            continue
        omega = result.skeleton.clique_number()
        if omega <= m:
            result.extra["attempts"] = attempts
            return result
        attempts.append((m, f"clique number {omega}"))
    raise AssertionError("the run with m = n always terminates with an acceptable skeleton")


# ------------------------------------------------------------- diamond-free
def rsl_d_is_removable(x: int, mb_x: Iterable[int], tester: CiTester) -> bool:
    """No two boundary members are separated by the rest of the boundary plus ``x``."""
    mb_x = set(mb_x)
    for y, z in combinations(sorted(mb_x), 2):
        if tester.independent(y, z, (mb_x | {x}) - {y, z}):
            return False
    return True


def rsl_d_search(x: int, mb_x: Iterable[int], tester: CiTester, warnings: list | None = None) -> NeighborSearch:
    """``y`` is a co-parent when leaving one other member ``z`` out of the conditioning set
    separates it from ``x``; ``z`` is their shared child.  Every ``z`` is tried so that a
    second witness (impossible without a diamond) can be reported.
    """
    mb_x = set(mb_x)
    out = NeighborSearch(set(), set(), {})
    for y in sorted(mb_x):
        witnesses = [z for z in sorted(mb_x - {y}) if tester.independent(x, y, mb_x - {y, z})]
        if not witnesses:
            out.neighbors.add(y)
            continue
        z = witnesses[0]
        out.coparents.add(y)
        out.sepsets[y] = frozenset(mb_x - {y, z})
        out.children[y] = frozenset((z,))
        if len(witnesses) > 1 and warnings is not None:
            warnings.append(f"rsl_d: {x} and {y} have several shared-child witnesses {witnesses}; kept {z}")
    return out


def rsl_d_find_neighbors(x: int, mb_x: Iterable[int], tester: CiTester) -> set[int]:
    return set(rsl_d_search(x, mb_x, tester).neighbors)


class RslD(RecursiveLearner):
    name = "rsl_d"
    uses_children = True

    def _search(self, x: int) -> set[int]:
        notes: list[str] = []
        search = rsl_d_search(x, self.state.mb[x], self.tester, notes)
        for note in notes:
            self.warn(note)
        self.record(x, search)
        return set(search.neighbors)

    def try_remove(self, x: int) -> set[int] | None:
        if not rsl_d_is_removable(x, self.state.mb[x], self.tester):
            return None
        return self._search(x)

    def fallback_neighbors(self, x: int) -> set[int]:
        return self._search(x)


def rsl_d_learn(tester: CiTester, vars: Iterable[int] | None = None, **options) -> SkeletonResult:
    """Learn a DAG skeleton assuming the DAG is diamond-free."""
    return RslD(tester, vars, **options).run()
