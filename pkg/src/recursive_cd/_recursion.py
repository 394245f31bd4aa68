"""The remove-one-vertex-at-a-time loop shared by MARVEL, L-MARVEL, RSL_w and RSL_D."""

from __future__ import annotations

import logging
import warnings
from typing import Callable, Iterable

from .ci import CiTester
from .errors import NoRemovableVertexError
from .graph import UndirectedGraph
from .mb import MbState, NeighborSearch, compute_mb, pair, update_mb
from .orientation import assemble_vstructures
from .result import SkeletonResult

log = logging.getLogger(__name__)

TraceSink = Callable[[dict], None]
StepObserver = Callable[[int, MbState], None]


class RecursiveLearner:
    """Repeatedly find a removable vertex, learn its neighbours, remove it and repair the boundaries.

    Subclasses implement :meth:`try_remove`, returning the neighbour set of a
    removable vertex or ``None``.

    :param strict: raise :class:`NoRemovableVertexError` instead of falling
        back to the vertex with the smallest boundary
    :param trace: receives one dict per event (probe, removal, fallback)
    :param observer: called as ``observer(removed, state)`` after every boundary update
    """

    name = "recursive"
    mode = "dag"

    def __init__(
        self,
        tester: CiTester,
        vars: Iterable[int] | None = None,
        *,
        mb_method: str = "tc",
        strict: bool = False,
        trace: TraceSink | None = None,
        observer: StepObserver | None = None,
    ):
        self.tester = tester
        self.vars = vars
        self.mb_method = mb_method
        self.strict = strict
        self.trace = trace
        self.observer = observer
        self.warnings: list[str] = []

    # hooks ---------------------------------------------------------------
    def try_remove(self, x: int) -> set[int] | None:
        raise NotImplementedError

    def fallback_neighbors(self, x: int) -> set[int]:
        """Neighbours to use when ``x`` is removed without passing the test."""
        return self.neighbors_of(x)

    def update_pool(self, x: int) -> set[int] | None:
        """Vertices whose pairs are retested after removing ``x``; ``None`` means its neighbours."""
        return None

    # helpers -------------------------------------------------------------
    def emit(self, **event) -> None:
        if self.trace is not None:
            self.trace(event)

    def neighbors_of(self, x: int) -> set[int]:
        """Current learned neighbours of ``x`` inside its boundary."""
        return self.adj[x] & self.state.mb[x]

    def record(self, x: int, search: NeighborSearch) -> None:
        for y in search.neighbors:
            self.adj[x].add(y)
            self.adj[y].add(x)
        for y in search.coparents:
            key = pair(x, y)
            self.coparents.add(key)
            self.sepsets.setdefault(key, search.sepsets[y])
            if y in search.children:
                self.common_children.setdefault(key, search.children[y])

    def warn(self, message: str) -> None:
        self.warnings.append(message)
        log.warning(message)
        warnings.warn(message, RuntimeWarning, stacklevel=3)

    # driver --------------------------------------------------------------
    def run(self) -> SkeletonResult:
        t = self.tester
        self.state = state = compute_mb(t, self.vars, self.mb_method)
        self.adj = {v: set() for v in state.remaining}
        self.coparents: set[frozenset] = set()
        self.sepsets: dict[frozenset, frozenset] = {}
        self.common_children: dict[frozenset, frozenset] = {}
        n_vars = t.n_vars
        order: list[int] = []
        iteration = 0
        while len(state.remaining) > 1:
            candidates = sorted(
                (v for v in state.remaining if not state.skip_check_vec[v]),
                key=lambda v: (len(state.mb[v]), v),
            )
            chosen = None
            for x in candidates:
                self.emit(event="probe", iteration=iteration, vertex=x, mb=sorted(state.mb[x]))
                ne = self.try_remove(x)
                if ne is not None:
                    chosen = (x, ne)
                    break
                state.skip_check_vec[x] = True
            if chosen is None:
                chosen = self._no_removable(iteration)
            x, ne = chosen
            mb_size = len(state.mb[x])
            update_mb(state, x, ne, t, self.update_pool(x))
            order.append(x)
            self.emit(
                event="removed",
                iteration=iteration,
                vertex=x,
                mb_size=mb_size,
                tests_used=t.stats.unique_tests,
            )
            if self.observer is not None:
                self.observer(x, state)
            iteration += 1
        order.extend(state.remaining)
        return self._result(n_vars, order)

    def _no_removable(self, iteration: int):
        state = self.state
        if self.strict:
            raise NoRemovableVertexError(
                f"{self.name}: no removable vertex among {len(state.remaining)} remaining (iteration {iteration})",
                iteration,
                state.remaining,
                state.mb,
            )
        x = min(state.remaining, key=lambda v: (len(state.mb[v]), v))
        self.warn(f"{self.name}: no removable vertex at iteration {iteration}; removing {x} (smallest boundary)")
        self.emit(event="fallback", iteration=iteration, vertex=x)
        return x, self.fallback_neighbors(x)

    def _result(self, n_vars: int, order: list[int]) -> SkeletonResult:
        edges = [(a, b) for a in self.adj for b in self.adj[a] if a < b]
        skeleton = UndirectedGraph(n_vars, edges)
        sepsets = dict(self.state.sepsets)
        for key, s in self.sepsets.items():
            sepsets.setdefault(key, s)
        coparents = set(self.coparents) | self.state.coparent_marks
        children = dict(self.common_children)
        if self.uses_children:
            for key, kids in self.state.marked_children.items():
                children.setdefault(key, kids)
        for key in list(sepsets):
            a, b = sorted(key)
            if skeleton.has_edge(a, b):
                del sepsets[key]
        coparents = {k for k in coparents if not skeleton.has_edge(*sorted(k))}
        result = SkeletonResult(
            skeleton=skeleton,
            sepsets=sepsets,
            vstructures=frozenset(),
            stats=self.tester.stats.snapshot(),
            removal_order=tuple(order),
            coparents=frozenset(coparents),
            common_children=children,
            warnings=list(self.warnings),
            mode=self.mode,
        )
        result.vstructures = assemble_vstructures(result)
        return result

    uses_children = False
