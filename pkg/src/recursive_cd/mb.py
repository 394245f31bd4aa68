"""Markov boundaries: initial discovery and the incremental update after a removal."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from ._bits import subsets
from .ci import CiTester
from .errors import ArgumentError, RecursiveCDError


def pair(a: int, b: int) -> frozenset[int]:
    return frozenset((a, b))


@dataclass
class MbState:
    """Markov boundaries of the remaining vertices plus the bookkeeping the learners share.

    ``skip_check_vec[v]`` is True when ``v`` already failed a removability probe
    and its boundary has not changed since.
    """

    remaining: list[int]
    mb: dict[int, set[int]]
    skip_check_vec: dict[int, bool] = field(default_factory=dict)
    sepsets: dict[frozenset, frozenset] = field(default_factory=dict)
    coparent_marks: set[frozenset] = field(default_factory=set)
    # removed vertex recorded as the shared child of a pair it disconnected
    marked_children: dict[frozenset, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        self.remaining = sorted(self.remaining)
        for v in self.remaining:
            self.skip_check_vec.setdefault(v, False)

    def check(self) -> None:
        """Assert the structural invariants (symmetry, containment)."""
        alive = set(self.remaining)
        for x, s in self.mb.items():
            assert x in alive and x not in s and s <= alive, x
            for y in s:
                assert x in self.mb[y], (x, y)

    def copy_mb(self) -> dict[int, frozenset[int]]:
        return {v: frozenset(self.mb[v]) for v in self.remaining}

    def to_json(self, names: Sequence[str] | None = None) -> str:
        label = (lambda v: names[v]) if names is not None else str
        return json.dumps(
            {label(v): sorted((label(u) for u in self.mb[v])) for v in self.remaining},
            indent=2,
            sort_keys=True,
        )


def _resolve_vars(tester: CiTester, vars: Iterable[int] | None) -> list[int]:
    out = sorted(set(range(tester.n_vars) if vars is None else vars))
    for v in out:
        if not 0 <= v < tester.n_vars:
            raise ArgumentError(f"variable {v} out of range")
    return out


def compute_mb_tc(tester: CiTester, vars: Iterable[int] | None = None) -> MbState:
    """Total conditioning: ``x`` and ``y`` share a boundary iff dependent given everything else."""
    vs = _resolve_vars(tester, vars)
    mb = {v: set() for v in vs}
    sepsets = {}
    everything = set(vs)
    for x, y in combinations(vs, 2):
        rest = everything - {x, y}
        try:
            indep = tester.independent(x, y, rest)
        except RecursiveCDError as exc:
            raise type(exc)(f"while testing pair ({x}, {y}): {exc}") from exc
        if indep:
            sepsets[pair(x, y)] = frozenset(rest)
        else:
            mb[x].add(y)
            mb[y].add(x)
    return MbState(vs, mb, sepsets=sepsets)


def compute_mb_gs(tester: CiTester, vars: Iterable[int] | None = None, symmetrize: str = "union") -> MbState:
    """Grow-shrink per vertex, then symmetrize by ``"union"`` (default) or ``"intersection"``."""
    if symmetrize not in ("union", "intersection"):
        raise ArgumentError("symmetrize must be 'union' or 'intersection'")
    vs = _resolve_vars(tester, vars)
    found: dict[int, set[int]] = {}
    for x in vs:
        blanket: list[int] = []
        grew = True
        while grew:
            grew = False
            for y in vs:
                if y == x or y in blanket:
                    continue
                if not tester.independent(x, y, blanket):
                    blanket.append(y)
                    grew = True
        for y in list(blanket):
            others = [v for v in blanket if v != y]
            if tester.independent(x, y, others):
                blanket.remove(y)
        found[x] = set(blanket)
    mb = {v: set() for v in vs}
    for x, y in combinations(vs, 2):
        keep = (y in found[x] or x in found[y]) if symmetrize == "union" else (y in found[x] and x in found[y])
        if keep:
            mb[x].add(y)
            mb[y].add(x)
    return MbState(vs, mb)


def compute_mb(tester: CiTester, vars: Iterable[int] | None = None, method: str = "tc") -> MbState:
    if method == "tc":
        return compute_mb_tc(tester, vars)
    if method == "gs":
        return compute_mb_gs(tester, vars)
    raise ArgumentError(f"unknown Markov boundary method {method!r}")


def update_mb(
    state: MbState,
    removed: int,
    neighbors_of_removed: Iterable[int],
    tester: CiTester,
    pairs_from: Iterable[int] | None = None,
) -> MbState:
    """Delete ``removed`` and repair the boundaries around it.

    Candidate pairs are drawn from ``neighbors_of_removed``, which suffices in a
    DAG.  In a MAG a collider path through ``removed`` can join two members of
    its boundary that are not its neighbours, so MAG learners pass the old
    boundary as ``pairs_from``.  For each candidate pair still in each other's
    boundary, one test given
    the smaller boundary decides whether they stay.  A pair that separates is
    marked as co-parents (``removed`` was their only shared child) and its
    separating set is kept.  Every vertex whose boundary changes gets its skip
    flag cleared.
    """
    if removed not in state.mb:
        raise ArgumentError(f"vertex {removed} is not among the remaining vertices")
    state.remaining.remove(removed)
    lost = state.mb.pop(removed)
    state.skip_check_vec.pop(removed, None)
    for v in lost:
        state.mb[v].discard(removed)
        state.skip_check_vec[v] = False
    pool = neighbors_of_removed if pairs_from is None else pairs_from
    ne = sorted(set(pool) & state.mb.keys())
    for y, z in combinations(ne, 2):
        if z not in state.mb[y]:
            continue
        a, b = (y, z) if (len(state.mb[y]), y) <= (len(state.mb[z]), z) else (z, y)
        cond = state.mb[a] - {b}
        tester.label("update_mb.smaller_boundary")
        if tester.independent(a, b, cond):
            state.mb[a].discard(b)
            state.mb[b].discard(a)
            state.skip_check_vec[a] = False
            state.skip_check_vec[b] = False
            key = pair(a, b)
            state.coparent_marks.add(key)
            state.sepsets[key] = frozenset(cond)
            state.marked_children[key] = frozenset((removed,))
    return state


@dataclass
class NeighborSearch:
    neighbors: set[int]
    coparents: set[int]
    sepsets: dict[int, frozenset[int]]
    children: dict[int, frozenset[int]] = field(default_factory=dict)


def find_neighbors(x: int, mb_x: Iterable[int], tester: CiTester) -> NeighborSearch:
    """Split a Markov boundary into neighbours and co-parents.

    ``y`` is a co-parent iff some proper subset of ``mb_x - {y}`` separates it
    from ``x``; subsets are tried by increasing size and the first hit is kept.
    """
    mb_x = set(mb_x)
    out = NeighborSearch(set(), set(), {})
    for y in sorted(mb_x):
        rest = mb_x - {y}
        for s in subsets(rest, max_size=len(rest) - 1):
            if tester.independent(x, y, s):
                out.coparents.add(y)
                out.sepsets[y] = frozenset(s)
                break
        else:
            out.neighbors.add(y)
    return out
