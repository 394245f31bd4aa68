"""Random DAGs, linear-Gaussian SEMs and hidden-variable harnesses."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from graphlib import TopologicalSorter
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .ci import Dataset
from .errors import ArgumentError, GenerationError
from .graph import MixedGraph, is_diamond_free, latent_project

WEIGHT_RANGE = (0.5, 2.0)
NOISE_RANGE = (0.7, 1.2)


def parse_preset(preset: str) -> tuple[str, int | None]:
    """``"plain"``, ``"diamond_free"`` or ``"clique_bounded(m)"``."""
    if preset in ("plain", "diamond_free"):
        return preset, None
    match = re.fullmatch(r"clique_bounded\((\d+)\)", preset)
    if match:
        return "clique_bounded", int(match.group(1))
    raise ArgumentError(f"unknown generator preset {preset!r}")


def gen_dag(n: int, p: float, seed: int, preset: str = "plain", max_tries: int = 1000) -> MixedGraph:
    """Erdos-Renyi DAG: coin flips above the diagonal, then a random relabelling.

    Presets other than ``plain`` resample until the structural predicate holds.
    """
    if not 0.0 <= p <= 1.0:
        raise ArgumentError("p must lie in [0, 1]")
    if n < 0:
        raise ArgumentError("n must be non-negative")
    kind, bound = parse_preset(preset)
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    for _ in range(max_tries):
        flips = rng.random(len(rows)) < p
        perm = rng.permutation(n)
        g = MixedGraph(n, [(int(perm[i]), int(perm[j])) for i, j, f in zip(rows, cols, flips) if f])
        if kind == "plain":
            return g
        if kind == "diamond_free" and is_diamond_free(g):
            return g
        if kind == "clique_bounded" and g.skeleton().clique_number() <= bound:
            return g
    raise GenerationError(f"no {preset} DAG found in {max_tries} draws at n={n}, p={p}; try a smaller p")


def all_labeled_dags(n: int) -> Iterator[MixedGraph]:
    """Every labelled DAG on ``n`` vertices (543 at n=4)."""
    pairs = list(combinations(range(n), 2))
    for choice in product((0, 1, 2), repeat=len(pairs)):
        edges = []
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                edges.append((a, b))
            elif c == 2:
                edges.append((b, a))
        g = MixedGraph(n, edges)
        if g.is_acyclic:
            yield g


def all_dags_up_to_relabeling(n: int) -> Iterator[MixedGraph]:
    """Every DAG whose edges point from lower to higher id.

    Each labelled DAG is a relabelling of one of these, so properties that do
    not depend on vertex names can be checked exhaustively on this smaller set.
    """
    pairs = list(combinations(range(n), 2))
    for choice in product((0, 1), repeat=len(pairs)):
        yield MixedGraph(n, [e for e, c in zip(pairs, choice) if c])


def markov_equivalent_dags(g: MixedGraph) -> list[MixedGraph]:
    """All DAGs with the skeleton and v-structures of ``g`` (brute force over orientations)."""
    from .graph import v_structures

    edges = sorted(g.skeleton().edges)
    target = v_structures(g)
    out = []
    for flips in product((False, True), repeat=len(edges)):
        h = MixedGraph(g.n, [(b, a) if f else (a, b) for (a, b), f in zip(edges, flips)])
        if h.is_acyclic and v_structures(h) == target:
            out.append(h)
    return out


# ------------------------------------------------------------------- SEMs
@dataclass
class SemSpec:
    """Linear-Gaussian SEM over a DAG; ``hidden`` vertices are dropped when sampling."""

    graph: MixedGraph
    weights: dict[tuple[int, int], float]
    noise_std: dict[int, float]
    hidden: frozenset[int] = frozenset()
    names: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.graph.has_bidirected or not self.graph.is_acyclic:
            raise ArgumentError("a SEM needs a DAG")
        if set(self.weights) != set(self.graph.directed):
            raise ArgumentError("weights must be given for exactly the graph's edges")
        if any(w == 0 for w in self.weights.values()):
            raise ArgumentError("edge weights must be non-zero")
        if set(self.noise_std) != set(range(self.graph.n)) or any(s <= 0 for s in self.noise_std.values()):
            raise ArgumentError("every vertex needs a positive noise std")
        if not self.names:
            self.names = [f"X{i}" for i in range(self.graph.n)]
        self.hidden = frozenset(self.hidden)

    @property
    def observed(self) -> list[int]:
        return [v for v in range(self.graph.n) if v not in self.hidden]

    def to_json(self) -> str:
        nm = self.names
        return json.dumps(
            {
                "nodes": nm,
                "edges": [f"{nm[a]} -> {nm[b]}" for a, b in sorted(self.weights)],
                "weights": {f"{nm[a]} -> {nm[b]}": w for (a, b), w in sorted(self.weights.items())},
                "noise_std": {nm[v]: s for v, s in sorted(self.noise_std.items())},
                "hidden": [nm[v] for v in sorted(self.hidden)],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "SemSpec":
        raw = json.loads(text)
        names = list(raw["nodes"])
        index = {name: i for i, name in enumerate(names)}
        weights = {}
        for key, w in raw["weights"].items():
            a, b = (s.strip() for s in key.split("->"))
            weights[(index[a], index[b])] = float(w)
        graph = MixedGraph(len(names), list(weights))
        return cls(
            graph=graph,
            weights=weights,
            noise_std={index[k]: float(v) for k, v in raw["noise_std"].items()},
            hidden=frozenset(index[h] for h in raw.get("hidden", [])),
            names=names,
        )


def random_sem(
    dag: MixedGraph,
    seed: int,
    hidden: Sequence[int] = (),
    weight_range: tuple[float, float] = WEIGHT_RANGE,
    noise_range: tuple[float, float] = NOISE_RANGE,
) -> SemSpec:
    rng = np.random.default_rng(seed)
    weights = {}
    for e in sorted(dag.directed):
        weights[e] = float(rng.choice([-1.0, 1.0]) * rng.uniform(*weight_range))
    noise = {v: float(rng.uniform(*noise_range)) for v in range(dag.n)}
    return SemSpec(dag, weights, noise, frozenset(hidden))


def sample_sem(spec: SemSpec, rows: int, seed: int) -> Dataset:
    """Forward-sample in topological order and drop hidden columns."""
    if rows < 1:
        raise ArgumentError("rows must be at least 1")
    g = spec.graph
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((rows, g.n))
    values = np.zeros((rows, g.n))
    order = TopologicalSorter({v: [p for p, c in spec.weights if c == v] for v in range(g.n)}).static_order()
    for v in order:
        col = noise[:, v] * spec.noise_std[v]
        for (p, c), w in spec.weights.items():
            if c == v:
                col = col + w * values[:, p]
        values[:, v] = col
    obs = spec.observed
    return Dataset(tuple(spec.names[v] for v in obs), values[:, obs])


def hide_vertices(dag: MixedGraph, n_hidden: int, seed: int) -> tuple[list[int], MixedGraph]:
    """Hide a uniformly random vertex subset; return observed ids and the projected MAG over them."""
    if not 0 <= n_hidden <= dag.n:
        raise ArgumentError("cannot hide more vertices than exist")
    rng = np.random.default_rng(seed)
    hidden = set(int(v) for v in rng.choice(dag.n, size=n_hidden, replace=False))
    observed = [v for v in range(dag.n) if v not in hidden]
    return observed, latent_project(dag, observed)
