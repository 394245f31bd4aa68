"""V-structure assembly and Meek-rule propagation to a CPDAG."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from ._bits import iter_bits
from .errors import ConsistencyError
from .graph import MixedGraph, UndirectedGraph, format_edge_list, v_structures
from .result import SkeletonResult


@dataclass(frozen=True)
class Cpdag:
    """Partially directed graph: ``directed`` holds ``(a, b)`` for ``a -> b``, ``undirected`` holds ``(a, b)`` with ``a < b``."""

    n: int
    directed: frozenset[tuple[int, int]]
    undirected: frozenset[tuple[int, int]]

    def skeleton(self) -> UndirectedGraph:
        return UndirectedGraph(self.n, list(self.directed) + list(self.undirected))

    def format(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else [f"X{i}" for i in range(self.n)]
        return format_edge_list(names, directed=self.directed, undirected=self.undirected)


def sepset_vstructures(
    skeleton: UndirectedGraph, sepsets: dict, coparents: Iterable[frozenset]
) -> set[tuple[int, int, int]]:
    """Common neighbours of a non-adjacent co-parent pair that stay outside the pair's separating set."""
    out = set()
    for key in coparents:
        a, b = sorted(key)
        if skeleton.has_edge(a, b):
            continue
        sep = sepsets.get(key)
        if sep is None:
            raise ConsistencyError(f"co-parent pair ({a}, {b}) has no stored separating set")
        for c in iter_bits(skeleton.adj_mask(a) & skeleton.adj_mask(b)):
            if c not in sep:
                out.add((a, c, b))
    return out


def children_vstructures(skeleton: UndirectedGraph, common_children: dict) -> set[tuple[int, int, int]]:
    """V-structures read off the shared children recorded during neighbour search."""
    out = set()
    for key, kids in common_children.items():
        a, b = sorted(key)
        if skeleton.has_edge(a, b):
            continue
        for c in kids:
            if skeleton.has_edge(a, c) and skeleton.has_edge(b, c):
                out.add((a, c, b))
    return out


def assemble_vstructures(result: SkeletonResult) -> frozenset[tuple[int, int, int]]:
    """Union of the separating-set route and, when available, the recorded-children route."""
    vs = sepset_vstructures(result.skeleton, result.sepsets, result.coparents)
    if result.common_children:
        vs |= children_vstructures(result.skeleton, result.common_children)
    return frozenset(vs)


def _close(n: int, adj: Sequence[int], directed: set, undirected: set) -> None:
    """Apply the four Meek rules in place until none fires."""

    def is_dir(a, b):
        return (a, b) in directed

    def is_und(a, b):
        return (min(a, b), max(a, b)) in undirected

    def adjacent(a, b):
        return bool((adj[a] >> b) & 1)

    def wants(u: int, v: int) -> bool:
        nbr_u = list(iter_bits(adj[u]))
        # R1: w -> u - v with w, v non-adjacent
        if any(is_dir(w, u) and not adjacent(w, v) for w in nbr_u if w != v):
            return True
        # R2: u -> w -> v
        if any(is_dir(u, w) and is_dir(w, v) for w in nbr_u if w != v):
            return True
        # R3: u - w1 -> v and u - w2 -> v with w1, w2 non-adjacent
        mids = [w for w in nbr_u if w != v and is_und(u, w) and is_dir(w, v)]
        if any(not adjacent(w1, w2) for w1, w2 in combinations(mids, 2)):
            return True
        # R4: u - c, c -> d -> v, c and v non-adjacent, u adjacent to d
        for c in nbr_u:
            if c == v or not is_und(u, c) or adjacent(c, v):
                continue
            for d in iter_bits(adj[c]):
                if d != u and is_dir(c, d) and is_dir(d, v) and adjacent(u, d):
                    return True
        return False

    changed = True
    while changed:
        changed = False
        for a, b in sorted(undirected):
            for u, v in ((a, b), (b, a)):
                if wants(u, v):
                    undirected.discard((a, b))
                    directed.add((u, v))
                    changed = True
                    break


def _check_acyclic(n: int, directed: set) -> None:
    g = MixedGraph(n, directed)
    if not g.is_acyclic:
        raise ConsistencyError("oriented edges form a directed cycle")


def meek_close(skeleton: UndirectedGraph, vstructures: Iterable[tuple[int, int, int]]) -> Cpdag:
    """Orient the given v-structures, then propagate with the Meek rules."""
    n = skeleton.n
    directed: set[tuple[int, int]] = set()
    for a, c, b in vstructures:
        if not (skeleton.has_edge(a, c) and skeleton.has_edge(b, c)) or skeleton.has_edge(a, b):
            raise ConsistencyError(f"v-structure {a} -> {c} <- {b} does not fit the skeleton")
        for p in (a, b):
            if (c, p) in directed:
                raise ConsistencyError(f"edge {p} -- {c} is forced in both directions")
            directed.add((p, c))
    undirected = {e for e in skeleton.edges if (e[0], e[1]) not in directed and (e[1], e[0]) not in directed}
    adj = [skeleton.adj_mask(v) for v in range(n)]
    _close(n, adj, directed, undirected)
    _check_acyclic(n, directed)
    return Cpdag(n, frozenset(directed), frozenset(undirected))


def meek_refine(cpdag: Cpdag) -> Cpdag:
    """Run the Meek rules on an already partially oriented graph."""
    directed = set(cpdag.directed)
    undirected = set(cpdag.undirected)
    sk = cpdag.skeleton()
    _close(cpdag.n, [sk.adj_mask(v) for v in range(cpdag.n)], directed, undirected)
    _check_acyclic(cpdag.n, directed)
    return Cpdag(cpdag.n, frozenset(directed), frozenset(undirected))


def cpdag_of_dag(dag: MixedGraph) -> Cpdag:
    """Essential graph of a DAG from its skeleton and v-structures."""
    return meek_close(dag.skeleton(), v_structures(dag))


def learned_cpdag(result: SkeletonResult) -> Cpdag:
    return meek_close(result.skeleton, result.vstructures)
