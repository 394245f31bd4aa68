"""Result container shared by the skeleton learners."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ci import CiStats
from .graph import Order, UndirectedGraph

Pair = frozenset  # unordered pair of vertex ids


@dataclass
class SkeletonResult:
    """Output of a skeleton learner.

    ``vstructures`` holds ``(a, c, b)`` triples meaning ``a -> c <- b`` with
    ``a < b``.  ``sepsets`` maps an unordered pair to the separating set that
    was witnessed for it; ``coparents`` lists the pairs recognised as sharing a
    child.  ``common_children`` is filled by learners that observe the shared
    children directly.
    """

    skeleton: UndirectedGraph
    sepsets: dict[Pair, frozenset[int]]
    vstructures: frozenset[tuple[int, int, int]]
    stats: CiStats
    removal_order: Order
    coparents: frozenset[Pair] = frozenset()
    common_children: dict[Pair, frozenset[int]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    mode: str = "dag"
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.skeleton.n
