"""Mixed graphs with directed and bidirected edges, and the graphical machinery built on them.

Vertices are dense integers ``0..n-1``.  Neighbourhoods are stored as integer
bitmasks so that the subset-heavy routines (m-separation, removability,
Markov boundaries) work with cheap set algebra.  A DAG is simply a
:class:`MixedGraph` without bidirected edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import networkx as nx

from ._bits import bits_list, iter_bits, mask_of, submasks
from .errors import ArgumentError, PreconditionError


class MixedGraph:
    """Immutable mixed graph.

    :param n: number of vertices
    :param directed: pairs ``(a, b)`` meaning ``a -> b``
    :param bidirected: pairs ``(a, b)`` meaning ``a <-> b``
    """

    __slots__ = ("n", "_pa", "_ch", "_bi", "__dict__")

    def __init__(self, n: int, directed: Iterable[tuple[int, int]] = (), bidirected: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ArgumentError("vertex count must be non-negative")
        pa = [0] * n
        ch = [0] * n
        bi = [0] * n
        for a, b in directed:
            self._check_pair(n, a, b)
            if (pa[a] >> b) & 1 or (bi[a] >> b) & 1:
                raise ArgumentError(f"pair ({a}, {b}) carries more than one edge")
            pa[b] |= 1 << a
            ch[a] |= 1 << b
        for a, b in bidirected:
            self._check_pair(n, a, b)
            if (pa[a] >> b) & 1 or (pa[b] >> a) & 1:
                raise ArgumentError(f"pair ({a}, {b}) carries more than one edge")
            bi[a] |= 1 << b
            bi[b] |= 1 << a
        self.n = n
        self._pa = tuple(pa)
        self._ch = tuple(ch)
        self._bi = tuple(bi)

    @staticmethod
    def _check_pair(n: int, a: int, b: int) -> None:
        if not (0 <= a < n and 0 <= b < n):
            raise ArgumentError(f"edge ({a}, {b}) out of range for n={n}")
        if a == b:
            raise ArgumentError(f"self-loop on vertex {a}")

    @classmethod
    def _from_masks(cls, n: int, pa: Sequence[int], bi: Sequence[int]) -> "MixedGraph":
        g = cls.__new__(cls)
        ch = [0] * n
        for v in range(n):
            for p in iter_bits(pa[v]):
                ch[p] |= 1 << v
        g.n = n
        g._pa = tuple(pa)
        g._ch = tuple(ch)
        g._bi = tuple(bi)
        return g

    # ------------------------------------------------------------------ basics
    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise ArgumentError(f"vertex {v!r} out of range for n={self.n}")

    def pa_mask(self, v: int) -> int:
        return self._pa[v]

    def ch_mask(self, v: int) -> int:
        return self._ch[v]

    def bi_mask(self, v: int) -> int:
        return self._bi[v]

    def adj_mask(self, v: int) -> int:
        return self._pa[v] | self._ch[v] | self._bi[v]

    def is_adjacent(self, a: int, b: int) -> bool:
        return bool((self.adj_mask(a) >> b) & 1)

    @property
    def directed(self) -> frozenset[tuple[int, int]]:
        return frozenset((p, v) for v in range(self.n) for p in iter_bits(self._pa[v]))

    @property
    def bidirected(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for a in range(self.n) for b in iter_bits(self._bi[a]) if a < b)

    @property
    def has_bidirected(self) -> bool:
        return any(self._bi)

    def skeleton(self) -> "UndirectedGraph":
        return UndirectedGraph._from_masks(self.n, [self.adj_mask(v) for v in range(self.n)])

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self._pa) + sum(m.bit_count() for m in self._bi) // 2

    @cached_property
    def _anc(self) -> tuple[int, ...]:
        out = []
        for v in range(self.n):
            seen = 1 << v
            frontier = self._pa[v]
            while frontier:
                frontier &= ~seen
                seen |= frontier
                nxt = 0
                for u in iter_bits(frontier):
                    nxt |= self._pa[u]
                frontier = nxt & ~seen
            out.append(seen)
        return tuple(out)

    def ancestors_mask(self, mask: int) -> int:
        """Ancestors of a vertex set given as a mask (each vertex is its own ancestor)."""
        out = 0
        anc = self._anc
        for v in iter_bits(mask):
            out |= anc[v]
        return out

    @cached_property
    def is_acyclic(self) -> bool:
        return all(not (self._anc[p] >> v) & 1 for v in range(self.n) for p in iter_bits(self._pa[v]))

    @cached_property
    def is_ancestral(self) -> bool:
        """No directed cycle and no bidirected edge between a vertex and one of its ancestors."""
        if not self.is_acyclic:
            return False
        for a in range(self.n):
            for b in iter_bits(self._bi[a]):
                if (self._anc[a] >> b) & 1 or (self._anc[b] >> a) & 1:
                    return False
        return True

    def without(self, dead: int) -> "MixedGraph":
        """Same vertex ids, with every edge touching a vertex of the ``dead`` mask removed."""
        keep = ~dead
        pa = [0 if (dead >> v) & 1 else self._pa[v] & keep for v in range(self.n)]
        bi = [0 if (dead >> v) & 1 else self._bi[v] & keep for v in range(self.n)]
        return MixedGraph._from_masks(self.n, pa, bi)

    def induced(self, keep: Iterable[int]) -> "MixedGraph":
        """Induced subgraph relabelled onto ``0..k-1`` following the sorted order of ``keep``."""
        kept = sorted(set(keep))
        for v in kept:
            self.check_vertex(v)
        pos = {v: i for i, v in enumerate(kept)}
        directed = [(pos[a], pos[b]) for a, b in self.directed if a in pos and b in pos]
        bidirected = [(pos[a], pos[b]) for a, b in self.bidirected if a in pos and b in pos]
        return MixedGraph(len(kept), directed, bidirected)

    # ------------------------------------------------------------ value object
    def _key(self):
        return (self.n, self._pa, self._bi)

    def __eq__(self, other) -> bool:
        return isinstance(other, MixedGraph) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        parts = [f"{a}->{b}" for a, b in sorted(self.directed)] + [f"{a}<->{b}" for a, b in sorted(self.bidirected)]
        return f"MixedGraph(n={self.n}, [{', '.join(parts)}])"


class UndirectedGraph:
    """Immutable simple undirected graph."""

    __slots__ = ("n", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        adj = [0] * n
        for a, b in edges:
            MixedGraph._check_pair(n, a, b)
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        self.n = n
        self._adj = tuple(adj)

    @classmethod
    def _from_masks(cls, n: int, adj: Sequence[int]) -> "UndirectedGraph":
        g = cls.__new__(cls)
        g.n = n
        g._adj = tuple(adj)
        return g

    def adj_mask(self, v: int) -> int:
        return self._adj[v]

    def neighbors(self, v: int) -> set[int]:
        return set(iter_bits(self._adj[v]))

    def has_edge(self, a: int, b: int) -> bool:
        return bool((self._adj[a] >> b) & 1)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for a in range(self.n) for b in iter_bits(self._adj[a]) if a < b)

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self.edges)
        return h

    def clique_number(self) -> int:
        if self.n == 0:
            return 0
        return max(len(c) for c in nx.find_cliques(self.to_networkx()))

    def __eq__(self, other) -> bool:
        return isinstance(other, UndirectedGraph) and (self.n, self._adj) == (other.n, other._adj)

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, {sorted(self.edges)})"


Order = tuple[int, ...]


def check_order(pi: Sequence[int], n: int) -> Order:
    pi = tuple(pi)
    if sorted(pi) != list(range(n)):
        raise ArgumentError(f"{pi!r} is not a permutation of 0..{n - 1}")
    return pi


# ---------------------------------------------------------------- relations
@dataclass(frozen=True)
class Relations:
    parents: frozenset[int]
    children: frozenset[int]
    neighbors: frozenset[int]
    ancestors: frozenset[int]
    district: frozenset[int]
    pa_plus: frozenset[int]


def _district_mask(g: MixedGraph, x: int) -> int:
    seen = 1 << x
    frontier = g.bi_mask(x)
    while frontier & ~seen:
        frontier &= ~seen
        seen |= frontier
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.bi_mask(v)
        frontier = nxt
    return seen


def pa_plus_mask(g: MixedGraph, x: int) -> int:
    dis = _district_mask(g, x)
    out = dis
    for v in iter_bits(dis):
        out |= g.pa_mask(v)
    return out & ~(1 << x)


def relations(g: MixedGraph, x: int) -> Relations:
    """Parents, children, neighbours, ancestors (including ``x``), district (including ``x``) and PaP of ``x``."""
    g.check_vertex(x)
    fs = lambda m: frozenset(iter_bits(m))  # noqa: E731
    return Relations(
        parents=fs(g.pa_mask(x)),
        children=fs(g.ch_mask(x)),
        neighbors=fs(g.adj_mask(x)),
        ancestors=fs(g.ancestors_mask(1 << x)),
        district=fs(_district_mask(g, x)),
        pa_plus=fs(pa_plus_mask(g, x)),
    )


# ------------------------------------------------------------- m-separation
def _msep(g: MixedGraph, x: int, y: int, zmask: int) -> bool:
    """Reachability over (vertex, arrived-with-arrowhead) states; no argument checks."""
    anc = g.ancestors_mask(zmask | (1 << x) | (1 << y))
    pa, ch, bi = g._pa, g._ch, g._bi
    head_seen = 0
    tail_seen = 0
    stack = []
    # leaving x: arrowhead at the next vertex for x->c and x<->s, tail for p<-x
    for c in iter_bits(ch[x] | bi[x]):
        stack.append((c, True))
    for p in iter_bits(pa[x]):
        stack.append((p, False))
    while stack:
        v, head = stack.pop()
        if v == y:
            return False
        if v == x:
            continue
        if head:
            if (head_seen >> v) & 1:
                continue
            head_seen |= 1 << v
        else:
            if (tail_seen >> v) & 1:
                continue
            tail_seen |= 1 << v
        in_z = (zmask >> v) & 1
        if head:
            # continuing through an arrowhead-edge makes v a collider
            if (anc >> v) & 1:
                for p in iter_bits(pa[v]):
                    stack.append((p, False))
                for s in iter_bits(bi[v]):
                    stack.append((s, True))
            if not in_z:
                for c in iter_bits(ch[v]):
                    stack.append((c, True))
        elif not in_z:
            for c in iter_bits(ch[v] | bi[v]):
                stack.append((c, True))
            for p in iter_bits(pa[v]):
                stack.append((p, False))
    return True


def m_separated(g: MixedGraph, x: int, y: int, z: Iterable[int] = ()) -> bool:
    """True iff ``z`` m-separates ``x`` and ``y`` in the ancestral graph ``g``."""
    g.check_vertex(x)
    g.check_vertex(y)
    z = set(z)
    for v in z:
        g.check_vertex(v)
    if x == y or x in z or y in z:
        raise ArgumentError("x and y must be distinct and outside the conditioning set")
    if not g.is_ancestral:
        raise PreconditionError("m-separation requires an ancestral graph")
    return _msep(g, x, y, mask_of(z))


def m_separated_by_paths(g: MixedGraph, x: int, y: int, z: Iterable[int] = ()) -> bool:
    """Reference implementation: enumerate every simple path and apply the blocking rules directly."""
    zmask = mask_of(z)
    anc = g.ancestors_mask(zmask | (1 << x) | (1 << y))

    def arrow_at(u: int, v: int) -> bool:
        # does the edge between u and v carry an arrowhead at v?
        return bool((g.ch_mask(u) >> v) & 1 or (g.bi_mask(u) >> v) & 1)

    def open_path(path: list[int]) -> bool:
        for i in range(1, len(path) - 1):
            prev, v, nxt = path[i - 1], path[i], path[i + 1]
            collider = arrow_at(prev, v) and arrow_at(nxt, v)
            if collider and not (anc >> v) & 1:
                return False
            if not collider and (zmask >> v) & 1:
                return False
        return True

    def dfs(path: list[int], visited: int) -> bool:
        v = path[-1]
        for w in iter_bits(g.adj_mask(v) & ~visited):
            path.append(w)
            if w == y:
                if open_path(path):
                    return True
            elif dfs(path, visited | (1 << w)):
                return True
            path.pop()
        return False

    return not dfs([x], 1 << x)


# ---------------------------------------------------------- latent projection
def latent_project(g: MixedGraph, keep: Iterable[int]) -> MixedGraph:
    """Project the ancestral graph ``g`` onto ``keep`` (relabelled in sorted order).

    Two kept vertices are adjacent iff they are m-connected given their kept
    ancestors, which is equivalent to an inducing path relative to the dropped
    vertices.  Edge marks follow the ancestor relation in ``g``.
    """
    if not g.is_ancestral:
        raise PreconditionError("latent projection requires an ancestral graph")
    kept = sorted(set(keep))
    for v in kept:
        g.check_vertex(v)
    kmask = mask_of(kept)
    k = len(kept)
    pa = [0] * k
    bi = [0] * k
    for i, j in combinations(range(k), 2):
        a, b = kept[i], kept[j]
        pair = (1 << a) | (1 << b)
        cond = g.ancestors_mask(pair) & kmask & ~pair
        if _msep(g, a, b, cond):
            continue
        a_anc_b = (g.ancestors_mask(1 << b) >> a) & 1
        b_anc_a = (g.ancestors_mask(1 << a) >> b) & 1
        if a_anc_b:
            pa[j] |= 1 << i
        elif b_anc_a:
            pa[i] |= 1 << j
        else:
            bi[i] |= 1 << j
            bi[j] |= 1 << i
    return MixedGraph._from_masks(k, pa, bi)


def has_inducing_path(g: MixedGraph, a: int, b: int, latent: int) -> bool:
    """Search for a path where every non-endpoint is a collider ancestor of {a, b} or a latent non-collider."""
    anc = g.ancestors_mask((1 << a) | (1 << b))

    def arrow_at(u: int, v: int) -> bool:
        return bool((g.ch_mask(u) >> v) & 1 or (g.bi_mask(u) >> v) & 1)

    def dfs(path: list[int], visited: int) -> bool:
        v = path[-1]
        for w in iter_bits(g.adj_mask(v) & ~visited):
            if len(path) >= 2:
                prev = path[-2]
                collider = arrow_at(prev, v) and arrow_at(w, v)
                if collider and not (anc >> v) & 1:
                    continue
                if not collider and not (latent >> v) & 1:
                    continue
            if w == b:
                return True
            path.append(w)
            if dfs(path, visited | (1 << w)):
                return True
            path.pop()
        return False

    return dfs([a], 1 << a)


# ------------------------------------------------------------- removability
def removable_bruteforce(g: MixedGraph, x: int) -> bool:
    """Compare every m-separation among the other vertices with and without ``x``."""
    g.check_vertex(x)
    if not g.is_ancestral:
        raise PreconditionError("removability is defined for ancestral graphs")
    h = g.without(1 << x)
    others = ((1 << g.n) - 1) & ~(1 << x)
    for y, t in combinations(bits_list(others), 2):
        free = others & ~((1 << y) | (1 << t))
        for z in submasks(free):
            if _msep(g, y, t, z) != _msep(h, y, t, z):
                return False
    return True


def removable_dag_criterion(g: MixedGraph, x: int) -> bool:
    """Graphical test for DAGs.

    For each child ``z`` of ``x``: every neighbour of ``x`` is adjacent to ``z``
    (or is ``z``), and every child ``v`` of ``x`` that is also a parent of
    ``z`` has all its parents among the parents of ``z``.
    """
    g.check_vertex(x)
    if g.has_bidirected:
        raise PreconditionError("the DAG criterion needs a graph without bidirected edges")
    ne = g.adj_mask(x)
    for z in iter_bits(g.ch_mask(x)):
        if ne & ~(g.adj_mask(z) | (1 << z)):
            return False
        pz = g.pa_mask(z)
        for v in iter_bits(g.ch_mask(x) & pz):
            if g.pa_mask(v) & ~pz:
                return False
    return True


def _arrow_at(g: MixedGraph, u: int, v: int) -> bool:
    return bool((g.ch_mask(u) >> v) & 1 or (g.bi_mask(u) >> v) & 1)


def _removable_mag(g: MixedGraph, x: int) -> bool:
    for z in iter_bits(g.ch_mask(x)):
        pz = g.pa_mask(z)
        adj_z = g.adj_mask(z)
        # DFS over collider paths x, v1, ..., vm, y whose interior lies in Pa(z)
        stack = [(x, 1 << x)]
        while stack:
            v, visited = stack.pop()
            for w in iter_bits(g.adj_mask(v) & ~visited & ~(1 << z)):
                if v != x and not _arrow_at(g, w, v):
                    continue  # v would not be a collider
                if not (adj_z >> w) & 1:
                    return False
                if (pz >> w) & 1 and _arrow_at(g, v, w):
                    stack.append((w, visited | (1 << w)))
    return True


def removable_mag_criterion(g: MixedGraph, x: int) -> bool:
    """Graphical test for MAGs.

    For each child ``z`` of ``x`` and each collider path from ``x`` to some
    ``y`` whose interior vertices are parents of ``z``, ``y`` must be adjacent
    to ``z``.
    """
    g.check_vertex(x)
    if not g.is_ancestral:
        raise PreconditionError("the MAG criterion needs an ancestral graph")
    return _removable_mag(g, x)


def markov_boundary_graphical(g: MixedGraph, x: int) -> set[int]:
    """Vertices joined to ``x`` by a collider path."""
    g.check_vertex(x)
    return set(iter_bits(_mb_mask(g, x)))


def _mb_mask(g: MixedGraph, x: int) -> int:
    mb = g.adj_mask(x)
    # vertices reached through an arrowhead can be passed as colliders
    frontier = g.ch_mask(x) | g.bi_mask(x)
    seen = frontier
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            mb |= g.pa_mask(v) | g.bi_mask(v)
            nxt |= g.bi_mask(v)
        frontier = nxt & ~seen & ~(1 << x)
        seen |= frontier
    return mb & ~(1 << x)


def markov_boundary_size_max(g: MixedGraph) -> int:
    return max((_mb_mask(g, v).bit_count() for v in range(g.n)), default=0)


# ----------------------------------------------------------- order predicates
@dataclass(frozen=True)
class OrderCheck:
    is_c_order: bool
    is_r_order: bool


def is_c_order(g: MixedGraph, pi: Sequence[int]) -> bool:
    pi = check_order(pi, g.n)
    if g.has_bidirected or not g.is_acyclic:
        raise PreconditionError("c-orders are defined for DAGs")
    alive = (1 << g.n) - 1
    for v in pi:
        if g.ch_mask(v) & alive:
            return False
        alive &= ~(1 << v)
    return True


def is_r_order(g: MixedGraph, pi: Sequence[int]) -> bool:
    pi = check_order(pi, g.n)
    if not g.is_ancestral:
        raise PreconditionError("r-orders are defined for ancestral graphs")
    dead = 0
    for v in pi:
        if not _removable_mag(g.without(dead), v):
            return False
        dead |= 1 << v
    return True


def order_predicates(g: MixedGraph, pi: Sequence[int]) -> OrderCheck:
    c = is_c_order(g, pi) if not g.has_bidirected else False
    return OrderCheck(is_c_order=c, is_r_order=is_r_order(g, pi))


# ----------------------------------------------------------- class predicates
@dataclass(frozen=True)
class GraphClass:
    is_dag: bool
    is_mag: bool
    is_diamond_free: bool
    clique_number: int
    max_in_degree: int
    max_pa_plus: int


def is_dag(g: MixedGraph) -> bool:
    return not g.has_bidirected and g.is_acyclic


def is_mag(g: MixedGraph) -> bool:
    """Ancestral and maximal: every non-adjacent pair is separated by its ancestors."""
    if not g.is_ancestral:
        return False
    for a, b in combinations(range(g.n), 2):
        if g.is_adjacent(a, b):
            continue
        pair = (1 << a) | (1 << b)
        if not _msep(g, a, b, g.ancestors_mask(pair) & ~pair):
            return False
    return True


def is_diamond_free(g: MixedGraph) -> bool:
    """No vertex ``d`` with three parents ``a, b, c`` where ``b, c`` are non-adjacent and ``a`` is adjacent to both."""
    for d in range(g.n):
        parents = bits_list(g.pa_mask(d))
        if len(parents) < 3:
            continue
        for b, c in combinations(parents, 2):
            if g.is_adjacent(b, c):
                continue
            common = g.adj_mask(b) & g.adj_mask(c) & g.pa_mask(d)
            if common:
                return False
    return True


def max_in_degree(g: MixedGraph) -> int:
    return max((g.pa_mask(v).bit_count() for v in range(g.n)), default=0)


def max_pa_plus(g: MixedGraph) -> int:
    return max((pa_plus_mask(g, v).bit_count() for v in range(g.n)), default=0)


def class_predicates(g: MixedGraph) -> GraphClass:
    dag = is_dag(g)
    return GraphClass(
        is_dag=dag,
        is_mag=is_mag(g),
        is_diamond_free=is_diamond_free(g) if dag else False,
        clique_number=g.skeleton().clique_number(),
        max_in_degree=max_in_degree(g),
        max_pa_plus=max_pa_plus(g),
    )


# ------------------------------------------------------- Markov equivalence
def v_structures(g: MixedGraph) -> frozenset[tuple[int, int, int]]:
    """Unshielded colliders ``(a, c, b)`` with ``a < b`` and arrowheads into ``c`` from both sides."""
    out = set()
    for c in range(g.n):
        into = g.pa_mask(c) | g.bi_mask(c)
        for a, b in combinations(bits_list(into), 2):
            if not g.is_adjacent(a, b):
                out.add((a, c, b))
    return frozenset(out)


def discriminating_paths(g: MixedGraph) -> Iterator[tuple[int, ...]]:
    """Paths ``(x, v1, ..., vk, y)`` with ``k >= 2``, ``x`` and ``y`` non-adjacent and
    every vertex strictly between ``x`` and ``vk`` a collider that is a parent of ``y``.
    """
    for y in range(g.n):
        pa_y = g.pa_mask(y)
        for vk in iter_bits(g.adj_mask(y)):
            # grow backwards from vk: tail = [vk, w1, w2, ...] where each wi is a collider parent of y
            stack = [[vk]]
            while stack:
                tail = stack.pop()
                last = tail[-1]
                used = mask_of(tail) | (1 << y)
                for w in iter_bits(g.adj_mask(last) & ~used):
                    if len(tail) >= 2 and not _arrow_at(g, w, last):
                        continue  # last must be a collider
                    if len(tail) >= 2 and not g.is_adjacent(w, y):
                        yield tuple([w] + tail[::-1] + [y])
                    if (pa_y >> w) & 1 and _arrow_at(g, last, w):
                        stack.append(tail + [w])


def _collider_at(g: MixedGraph, path: tuple[int, ...]) -> bool:
    a, v, b = path[-3], path[-2], path[-1]
    return _arrow_at(g, a, v) and _arrow_at(g, b, v)


def _is_discriminating(g: MixedGraph, path: tuple[int, ...]) -> bool:
    x, y = path[0], path[-1]
    if g.is_adjacent(x, y):
        return False
    for u, v in zip(path, path[1:]):
        if not g.is_adjacent(u, v):
            return False
    for i in range(1, len(path) - 2):
        v = path[i]
        if not (g.pa_mask(y) >> v) & 1:
            return False
        if not (_arrow_at(g, path[i - 1], v) and _arrow_at(g, path[i + 1], v)):
            return False
    return True


def mec_equal(g1: MixedGraph, g2: MixedGraph, mode: str | None = None) -> bool:
    """Markov equivalence for two DAGs or two MAGs over the same vertex set.

    :param mode: ``"dag"`` or ``"mag"``; inferred from the presence of bidirected edges when omitted
    """
    if g1.n != g2.n:
        raise ArgumentError("graphs must share the vertex set")
    if mode is None:
        if g1.has_bidirected != g2.has_bidirected:
            raise ArgumentError("cannot compare a DAG with a MAG; pass mode='mag' to treat both as MAGs")
        mode = "mag" if g1.has_bidirected else "dag"
    if mode not in ("dag", "mag"):
        raise ArgumentError(f"unknown mode {mode!r}")
    if g1.skeleton() != g2.skeleton() or v_structures(g1) != v_structures(g2):
        return False
    if mode == "dag":
        return True
    for first, second in ((g1, g2), (g2, g1)):
        for path in discriminating_paths(first):
            if _is_discriminating(second, path) and _collider_at(first, path) != _collider_at(second, path):
                return False
    return True


# ------------------------------------------------------------ edge-list I/O
@dataclass
class EdgeList:
    names: list[str]
    directed: list[tuple[int, int]]
    bidirected: list[tuple[int, int]]
    undirected: list[tuple[int, int]]


def parse_edge_list(text: str) -> EdgeList:
    """Parse ``A -> B``, ``A <-> B`` and ``A -- B`` lines; bare names declare vertices."""
    from .errors import DataFormatError

    names: list[str] = []
    index: dict[str, int] = {}

    def vid(name: str) -> int:
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    out = EdgeList(names, [], [], [])
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 1:
            vid(tokens[0])
            continue
        if len(tokens) != 3:
            raise DataFormatError(f"line {lineno}: expected 'A -> B', 'A <-> B' or 'A -- B', got {raw!r}")
        a, op, b = tokens
        pair = (vid(a), vid(b))
        if op == "->":
            out.directed.append(pair)
        elif op == "<-":
            out.directed.append(pair[::-1])
        elif op == "<->":
            out.bidirected.append(pair)
        elif op == "--":
            out.undirected.append(pair)
        else:
            raise DataFormatError(f"line {lineno}: unknown edge operator {op!r}")
    return out


def read_mixed_graph(text: str) -> tuple[MixedGraph, list[str]]:
    el = parse_edge_list(text)
    if el.undirected:
        raise PreconditionError("undirected edges are not allowed in a mixed graph file")
    return MixedGraph(len(el.names), el.directed, el.bidirected), el.names


def format_edge_list(
    names: Sequence[str],
    directed: Iterable[tuple[int, int]] = (),
    bidirected: Iterable[tuple[int, int]] = (),
    undirected: Iterable[tuple[int, int]] = (),
) -> str:
    """Serialize edges, declaring every vertex first so that ids survive a round trip."""
    lines = list(names)
    lines += [f"{names[a]} -> {names[b]}" for a, b in sorted(directed)]
    lines += [f"{names[a]} <-> {names[b]}" for a, b in sorted(bidirected)]
    lines += [f"{names[a]} -- {names[b]}" for a, b in sorted(undirected)]
    return "\n".join(lines) + "\n"


def format_mixed_graph(g: MixedGraph, names: Sequence[str] | None = None) -> str:
    names = list(names) if names is not None else [f"X{i}" for i in range(g.n)]
    return format_edge_list(names, g.directed, g.bidirected)


def format_undirected_graph(g: UndirectedGraph, names: Sequence[str] | None = None) -> str:
    names = list(names) if names is not None else [f"X{i}" for i in range(g.n)]
    return format_edge_list(names, undirected=g.edges)
