"""Benchmark harness: run learners over generated instances and compare CI counts with reference formulas."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .ci import CiTester, FisherZTester, OracleTester, with_cache
from .errors import ArgumentError
from .graph import MixedGraph, UndirectedGraph, max_in_degree, max_pa_plus
from .lmarvel import lmarvel_learn
from .marvel import marvel_learn
from .rol import rol_hc, rol_vi
from .rsl import rsl_d_learn, rsl_w_auto, rsl_w_learn
from .simgen import gen_dag, hide_vertices, random_sem, sample_sem

ALGORITHMS = ("marvel", "lmarvel", "rsl-w", "rsl-w-auto", "rsl-d", "rol-hc", "rol-vi")
WORKERS_ENV = "RECURSIVE_CD_WORKERS"

REPORT_FIELDS = [
    "algorithm",
    "preset",
    "n",
    "p",
    "seed",
    "hidden",
    "delta_in",
    "delta_in_plus",
    "omega",
    "unique_tests",
    "duplicate_tests",
    "max_cond_size",
    "skeleton_shd",
    "skeleton_f1",
    "upper_bound_value",
    "upper_bound_kind",
    "lower_bound_value",
    "lower_bound_kind",
]


def bound_formulas(g: MixedGraph) -> dict[str, float]:
    """Reference CI-test counts from the true graph's parameters.

    ``marvel_upper`` is an exact bound; every ``*_form`` value is an
    asymptotic expression evaluated with constant 1.
    """
    n = g.n
    d = max_in_degree(g)
    dp = max_pa_plus(g)
    m = g.skeleton().clique_number()
    return {
        "marvel_upper": math.comb(n, 2) + n * math.comb(d, 2) + (n / 2) * d * (1 + 0.45 * d) * 2**d,
        "lmarvel_upper_form": float(n**2 + n * dp**2 * 2**dp),
        "rsl_w_upper_form": float(n**2 + n * d ** (m + 1)),
        "rsl_d_upper_form": float(n**2 + n * d**3),
        "dag_lower_form": float(n**2 + n * d * 2**d),
        "mag_lower_form": float(n**2 + n * dp * 2**dp),
    }


@dataclass(frozen=True)
class SkeletonScore:
    shd: int
    precision: float
    recall: float
    f1: float


def skeleton_score(learned: UndirectedGraph, truth: UndirectedGraph) -> SkeletonScore:
    """Structural Hamming distance and F1 over undirected edges."""
    got, want = learned.edges, truth.edges
    tp = len(got & want)
    shd = len(got ^ want)
    precision = tp / len(got) if got else 1.0
    recall = tp / len(want) if want else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return SkeletonScore(shd, precision, recall, f1)


def run_algorithm(
    algorithm: str,
    tester: CiTester,
    *,
    mb_method: str = "tc",
    clique_bound: int | None = None,
    max_iter: int = 50,
    max_swap: int = 5,
    vi_cap: int = 16,
    strict: bool = False,
    trace=None,
):
    """Dispatch by name; returns the learner's result object (``.skeleton`` or ``.graph`` holds the edges)."""
    opts = {"mb_method": mb_method, "trace": trace}
    if algorithm == "marvel":
        return marvel_learn(tester, strict=strict, **opts)
    if algorithm == "lmarvel":
        return lmarvel_learn(tester, strict=strict, **opts)
    if algorithm == "rsl-w":
        if clique_bound is None:
            raise ArgumentError("rsl-w needs a clique bound")
        return rsl_w_learn(tester, m=clique_bound, **opts)
    if algorithm == "rsl-w-auto":
        return rsl_w_auto(tester, **opts)
    if algorithm == "rsl-d":
        return rsl_d_learn(tester, strict=strict, **opts)
    if algorithm == "rol-hc":
        return rol_hc(tester, max_iter=max_iter, max_swap=max_swap, trace=trace)
    if algorithm == "rol-vi":
        return rol_vi(tester, cap=vi_cap)
    raise ArgumentError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")


def learned_skeleton(result) -> UndirectedGraph:
    return result.skeleton if hasattr(result, "skeleton") else result.graph


def _bound_columns(algorithm: str, bounds: dict, hidden: bool) -> tuple:
    upper = {
        "marvel": ("marvel_upper", "exact"),
        "lmarvel": ("lmarvel_upper_form", "asymptotic, constant 1"),
        "rsl-w": ("rsl_w_upper_form", "asymptotic, constant 1"),
        "rsl-w-auto": ("rsl_w_upper_form", "asymptotic, constant 1"),
        "rsl-d": ("rsl_d_upper_form", "asymptotic, constant 1"),
    }.get(algorithm)
    lower = ("mag_lower_form" if hidden else "dag_lower_form", "asymptotic, constant 1")
    up_val, up_kind = (round(bounds[upper[0]], 6), upper[1]) if upper else ("", "")
    return up_val, up_kind, round(bounds[lower[0]], 6), lower[1]


def run_cell(cell: dict) -> dict:
    """One (algorithm, preset, n, p, seed) combination; returns a report row."""
    dag = gen_dag(cell["n"], cell["p"], cell["seed"], cell["preset"])
    hidden = cell.get("hidden", 0)
    if hidden:
        observed, truth = hide_vertices(dag, hidden, cell["seed"])
    else:
        observed, truth = list(range(dag.n)), dag
    if cell.get("ci", "oracle") == "oracle":
        base = OracleTester(truth)
    else:
        spec = random_sem(dag, cell["seed"], hidden=[v for v in range(dag.n) if v not in observed])
        data = sample_sem(spec, cell.get("rows", 1000), cell["seed"])
        base = FisherZTester(data, cell.get("alpha", 0.01))
    tester = with_cache(base)
    clique = cell.get("clique_bound")
    omega = truth.skeleton().clique_number()
    start = time.perf_counter()
    result = run_algorithm(
        cell["algorithm"],
        tester,
        mb_method=cell.get("mb", "tc"),
        clique_bound=clique if clique is not None else omega,
        max_iter=cell.get("max_iter", 50),
        max_swap=cell.get("max_swap", 5),
    )
    elapsed = (time.perf_counter() - start) * 1000.0
    score = skeleton_score(learned_skeleton(result), truth.skeleton())
    bounds = bound_formulas(truth)
    up, up_kind, low, low_kind = _bound_columns(cell["algorithm"], bounds, bool(hidden))
    row = {
        "algorithm": cell["algorithm"],
        "preset": cell["preset"],
        "n": truth.n,
        "p": cell["p"],
        "seed": cell["seed"],
        "hidden": hidden,
        "delta_in": max_in_degree(truth),
        "delta_in_plus": max_pa_plus(truth),
        "omega": omega,
        "unique_tests": tester.stats.unique_tests,
        "duplicate_tests": tester.stats.duplicate_hits,
        "max_cond_size": tester.stats.max_conditioning_size,
        "skeleton_shd": score.shd,
        "skeleton_f1": round(score.f1, 6),
        "upper_bound_value": up,
        "upper_bound_kind": up_kind,
        "lower_bound_value": low,
        "lower_bound_kind": low_kind,
    }
    if cell.get("timing"):
        row["runtime_ms"] = round(elapsed, 3)
    return row


def expand_config(config: dict) -> list[dict]:
    """Cartesian product of the config's lists; seeds must be listed explicitly."""
    if "seeds" not in config:
        raise ArgumentError("config needs an explicit 'seeds' list")
    algorithms = config.get("algorithms", ["marvel"])
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ArgumentError(f"unknown algorithm {a!r}")
    fixed = {k: v for k, v in config.items() if k not in ("algorithms", "presets", "n", "p", "seeds")}
    cells = []
    for algorithm, preset, n, p, seed in product(
        algorithms,
        config.get("presets", ["plain"]),
        config.get("n", [10]),
        config.get("p", [0.3]),
        config["seeds"],
    ):
        cells.append({**fixed, "algorithm": algorithm, "preset": preset, "n": n, "p": p, "seed": seed})
    return cells


def run_bench(config: dict, workers: int | None = None, timing: bool = False) -> list[dict]:
    cells = expand_config(config)
    if timing:
        for c in cells:
            c["timing"] = True
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers <= 1:
        return [run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_cell, cells))


def report_csv(rows: Iterable[dict]) -> str:
    rows = list(rows)
    fields = list(REPORT_FIELDS)
    if rows and "runtime_ms" in rows[0]:
        fields.append("runtime_ms")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def load_config(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
