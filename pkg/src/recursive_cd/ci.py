"""Conditional-independence testers: Fisher-z over data and an exact graph oracle.

Every tester canonicalizes a query to ``(min(x, y), max(x, y), sorted(z))``
and counts unique queries versus repeats, so that learners can be compared by
the number of distinct tests they issue.
"""

from __future__ import annotations

import csv
import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import norm

from ._bits import mask_of
from .errors import ArgumentError, DataFormatError, DegenerateDataError
from .graph import MixedGraph, _msep

CLAMP_EPS = 1e-12
PINV_CONDITION = 1e12

Query = tuple[int, int, tuple[int, ...]]


def canonical_query(x: int, y: int, z: Iterable[int] = ()) -> Query:
    zt = tuple(sorted(set(z)))
    if x == y:
        raise ArgumentError("a CI query needs two distinct variables")
    if x in zt or y in zt:
        raise ArgumentError("x and y must not appear in the conditioning set")
    return (x, y, zt) if x < y else (y, x, zt)


# ----------------------------------------------------------------- dataset
@dataclass(frozen=True)
class Dataset:
    """Named columns of real-valued samples; rows are observations."""

    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ArgumentError("values must be a 2-D matrix")
        names = tuple(self.names)
        if len(names) == 0 or len(names) != values.shape[1]:
            raise ArgumentError("need one name per column and at least one column")
        if len(set(names)) != len(names):
            raise ArgumentError("column names must be unique")
        if not np.all(np.isfinite(values)):
            raise DataFormatError("dataset contains missing or non-finite values")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "values", values)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_vars(self) -> int:
        return self.values.shape[1]

    @classmethod
    def read_csv(cls, path) -> "Dataset":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataFormatError(f"{path}: empty file") from None
            rows = []
            for lineno, row in enumerate(reader, 2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise DataFormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
                try:
                    parsed = [float(cell) for cell in row]
                except ValueError:
                    raise DataFormatError(f"{path}:{lineno}: missing or non-numeric value") from None
                if not all(math.isfinite(v) for v in parsed):
                    raise DataFormatError(f"{path}:{lineno}: missing or non-finite value")
                rows.append(parsed)
        if not rows:
            raise DataFormatError(f"{path}: no data rows")
        return cls(tuple(h.strip() for h in header), np.array(rows))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.names)
            for row in self.values:
                writer.writerow([repr(float(v)) for v in row])


# ------------------------------------------------------------------- stats
@dataclass
class CiStats:
    """Instrumentation shared by every tester."""

    unique_tests: int = 0
    duplicate_hits: int = 0
    max_conditioning_size: int = 0
    size_histogram: Counter = field(default_factory=Counter)
    flagged: list = field(default_factory=list)
    labels: Counter = field(default_factory=Counter)

    def snapshot(self) -> "CiStats":
        return CiStats(
            self.unique_tests,
            self.duplicate_hits,
            self.max_conditioning_size,
            Counter(self.size_histogram),
            list(self.flagged),
            Counter(self.labels),
        )

    @property
    def total_tests(self) -> int:
        return self.unique_tests + self.duplicate_hits

    def as_dict(self) -> dict:
        return {
            "unique_tests": self.unique_tests,
            "duplicate_hits": self.duplicate_hits,
            "max_conditioning_size": self.max_conditioning_size,
            "size_histogram": {str(k): v for k, v in sorted(self.size_histogram.items())},
            "flagged_queries": len(self.flagged),
            "labels": dict(sorted(self.labels.items())),
        }


class CiTester:
    """Base class: subclasses implement :meth:`_decide` for canonical queries.

    Repeated queries are answered again but only counted as duplicates.
    """

    def __init__(self, n_vars: int):
        self.n_vars = n_vars
        self.stats = CiStats()
        self._seen: set[Query] = set()
        self._lock = threading.RLock()

    def independent(self, x: int, y: int, z: Iterable[int] = ()) -> bool:
        q = canonical_query(x, y, z)
        for v in (q[0], q[1], *q[2]):
            if not 0 <= v < self.n_vars:
                raise ArgumentError(f"variable {v} out of range for {self.n_vars} variables")
        self._count(q)
        return self._decide(q)

    def _count(self, q: Query) -> bool:
        """Record ``q``; return True when it was new."""
        with self._lock:
            if q in self._seen:
                self.stats.duplicate_hits += 1
                return False
            self._seen.add(q)
            self.stats.unique_tests += 1
            k = len(q[2])
            self.stats.size_histogram[k] += 1
            if k > self.stats.max_conditioning_size:
                self.stats.max_conditioning_size = k
            return True

    def label(self, name: str) -> None:
        with self._lock:
            self.stats.labels[name] += 1

    def _decide(self, q: Query) -> bool:
        raise NotImplementedError


def partial_correlation(corr: np.ndarray, x: int, y: int, z: Sequence[int]) -> tuple[float, bool]:
    """Partial correlation of ``x`` and ``y`` given ``z`` from a correlation (or covariance) matrix.

    Uses the Schur complement of the conditioning block, so only that block is
    inverted.  Returns ``(r, flagged)`` where ``flagged`` marks a numerically
    delicate query (pseudo-inverse fallback, or a residual with no variance).
    Raises :class:`DegenerateDataError` when the conditioning block is singular.
    """
    z = list(z)
    pair = [x, y]
    resid = corr[np.ix_(pair, pair)].astype(float)
    flagged = False
    if z:
        czz = corr[np.ix_(z, z)]
        if np.linalg.matrix_rank(czz) < len(z):
            raise DegenerateDataError(f"singular conditioning block for z={z}")
        cxz = corr[np.ix_(pair, z)]
        if np.linalg.cond(czz) > PINV_CONDITION:
            inv = np.linalg.pinv(czz, hermitian=True)
            flagged = True
        else:
            inv = np.linalg.inv(czz)
        resid = resid - cxz @ inv @ cxz.T
    vx, vy = resid[0, 0], resid[1, 1]
    if vx <= CLAMP_EPS * corr[x, x] or vy <= CLAMP_EPS * corr[y, y]:
        # x or y is an exact linear function of z: nothing is left to correlate
        return 0.0, True
    return float(resid[0, 1] / math.sqrt(vx * vy)), flagged


def fisher_z_statistic(r: float, n_rows: int, cond_size: int) -> float:
    if n_rows <= cond_size + 3:
        raise ArgumentError(f"need more than {cond_size + 3} rows for a conditioning set of size {cond_size}")
    r = min(max(r, -1.0 + CLAMP_EPS), 1.0 - CLAMP_EPS)
    return math.sqrt(n_rows - cond_size - 3) * abs(math.atanh(r))


class FisherZTester(CiTester):
    """Gaussian partial-correlation test.

    :param data: the dataset
    :param alpha: significance level; independence is accepted when the
        statistic does not exceed the normal quantile at ``1 - alpha/2``
    """

    def __init__(self, data: Dataset, alpha: float = 0.01):
        if not 0.0 < alpha < 1.0:
            raise ArgumentError("alpha must lie in (0, 1)")
        super().__init__(data.n_vars)
        self.data = data
        self.alpha = alpha
        self.threshold = float(norm.ppf(1.0 - alpha / 2.0))
        std = data.values.std(axis=0)
        constant = [data.names[i] for i in np.flatnonzero(std == 0)]
        if constant:
            raise DegenerateDataError(f"zero-variance column(s): {', '.join(constant)}")
        self.corr = np.corrcoef(data.values, rowvar=False).reshape(data.n_vars, data.n_vars)

    def partial_correlation(self, x: int, y: int, z: Iterable[int] = ()) -> float:
        q = canonical_query(x, y, z)
        return partial_correlation(self.corr, q[0], q[1], q[2])[0]

    def p_value(self, x: int, y: int, z: Iterable[int] = ()) -> float:
        q = canonical_query(x, y, z)
        r, _ = partial_correlation(self.corr, q[0], q[1], q[2])
        stat = fisher_z_statistic(r, self.data.n_rows, len(q[2]))
        return float(2.0 * norm.sf(stat))

    def _decide(self, q: Query) -> bool:
        x, y, z = q
        if self.data.n_rows <= len(z) + 3:
            raise ArgumentError(f"need more than {len(z) + 3} rows for a conditioning set of size {len(z)}")
        r, flagged = partial_correlation(self.corr, x, y, z)
        if flagged:
            with self._lock:
                self.stats.flagged.append(q)
        return fisher_z_statistic(r, self.data.n_rows, len(z)) <= self.threshold


def fisher_z_independent(data: Dataset, x: int, y: int, z: Iterable[int] = (), alpha: float = 0.01) -> bool:
    """One-off Fisher-z decision without keeping a tester around."""
    return FisherZTester(data, alpha).independent(x, y, z)


class OracleTester(CiTester):
    """Answers queries by m-separation in a known ancestral graph.

    :param graph: the true graph
    :param observed: optional map from tester variable ids to graph vertex ids,
        for querying a DAG with hidden vertices directly
    """

    def __init__(self, graph: MixedGraph, observed: Sequence[int] | None = None):
        from .errors import PreconditionError

        if not graph.is_ancestral:
            raise PreconditionError("the oracle needs an ancestral graph")
        self.graph = graph
        self.observed = tuple(observed) if observed is not None else tuple(range(graph.n))
        super().__init__(len(self.observed))

    def _decide(self, q: Query) -> bool:
        x, y, z = q
        obs = self.observed
        return _msep(self.graph, obs[x], obs[y], mask_of(obs[v] for v in z))


def oracle_independent(g: MixedGraph, x: int, y: int, z: Iterable[int] = ()) -> bool:
    from .graph import m_separated

    return m_separated(g, x, y, z)


class CachedTester(CiTester):
    """Memoizing wrapper; the wrapped tester only sees cache misses."""

    def __init__(self, inner: CiTester):
        super().__init__(inner.n_vars)
        self.inner = inner
        self._memo: dict[Query, bool] = {}
        # numerical fallbacks happen inside the wrapped tester; share its list
        self.stats.flagged = inner.stats.flagged

    def independent(self, x: int, y: int, z: Iterable[int] = ()) -> bool:
        q = canonical_query(x, y, z)
        hit = self._memo.get(q)
        if hit is not None:
            with self._lock:
                self.stats.duplicate_hits += 1
            return hit
        answer = self.inner.independent(*q)
        with self._lock:
            if q not in self._memo:
                self._memo[q] = answer
                self._count(q)
            else:
                self.stats.duplicate_hits += 1
        return answer


def with_cache(inner: CiTester) -> CachedTester:
    return CachedTester(inner)
