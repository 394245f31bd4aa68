import threading
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import X, Y, Z, confounded_graph
from recursive_cd._bits import submasks
from recursive_cd.ci import (
    CachedTester,
    CiTester,
    Dataset,
    FisherZTester,
    OracleTester,
    canonical_query,
    fisher_z_independent,
    oracle_independent,
    with_cache,
)
from recursive_cd.errors import ArgumentError, DataFormatError, DegenerateDataError
from recursive_cd.graph import MixedGraph, m_separated_by_paths
from recursive_cd.marvel import marvel_learn
from recursive_cd.simgen import all_labeled_dags, gen_dag, random_sem, sample_sem


def residual_partial_correlation(values, x, y, z):
    """Correlation of the least-squares residuals of x and y on z (plus intercept)."""
    design = np.column_stack([np.ones(len(values))] + [values[:, v] for v in z])
    rx = values[:, x] - design @ np.linalg.lstsq(design, values[:, x], rcond=None)[0]
    ry = values[:, y] - design @ np.linalg.lstsq(design, values[:, y], rcond=None)[0]
    return float(rx @ ry / np.sqrt((rx @ rx) * (ry @ ry)))


def confounded_sample(seed, rows=200):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(rows)
    x = z + rng.standard_normal(rows)
    y = z + rng.standard_normal(rows)
    return Dataset(("X", "Y", "Z"), np.column_stack([x, y, z]))


class TestQueries:
    def test_canonical_order(self):
        assert canonical_query(3, 1, [5, 2, 2]) == (1, 3, (2, 5))
        assert canonical_query(1, 3, (5, 2)) == canonical_query(3, 1, (2, 5))

    def test_invalid(self):
        with pytest.raises(ArgumentError):
            canonical_query(1, 1)
        with pytest.raises(ArgumentError):
            canonical_query(1, 2, [2])

    def test_out_of_range_variable(self):
        t = OracleTester(MixedGraph(3))
        with pytest.raises(ArgumentError):
            t.independent(0, 3)


class TestDataset:
    def test_validation(self):
        with pytest.raises(ArgumentError):
            Dataset(("a", "a"), np.zeros((3, 2)))
        with pytest.raises(ArgumentError):
            Dataset(("a",), np.zeros((3, 2)))
        with pytest.raises(DataFormatError):
            Dataset(("a",), np.array([[1.0], [np.nan]]))

    def test_csv_round_trip(self, tmp_path):
        d = confounded_sample(0, rows=20)
        path = tmp_path / "d.csv"
        d.write_csv(path)
        back = Dataset.read_csv(path)
        assert back.names == d.names
        assert np.array_equal(back.values, d.values)

    def test_csv_missing_value(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,2.0\n3.0,\n")
        with pytest.raises(DataFormatError):
            Dataset.read_csv(path)
        path.write_text("a,b\n1.0,2.0\n3.0\n")
        with pytest.raises(DataFormatError):
            Dataset.read_csv(path)
        path.write_text("a,b\n1.0,nan\n")
        with pytest.raises(DataFormatError):
            Dataset.read_csv(path)


class TestFisherZ:
    def test_identical_columns_dependent(self):
        rng = np.random.default_rng(3)
        col = rng.standard_normal(50)
        d = Dataset(("a", "b"), np.column_stack([col, col]))
        for alpha in (1e-6, 0.01, 0.5):
            assert not fisher_z_independent(d, 0, 1, alpha=alpha)

    def test_orthogonal_columns_independent(self):
        d = Dataset(("x", "y"), np.array([[1, 1], [-1, 1], [1, -1], [-1, -1]], dtype=float))
        t = FisherZTester(d, alpha=0.05)
        assert t.partial_correlation(0, 1) == 0.0
        assert t.independent(0, 1)

    def test_common_cause(self):
        d = confounded_sample(0)
        assert not fisher_z_independent(d, 0, 1, alpha=0.01)
        assert fisher_z_independent(d, 0, 1, [2], alpha=0.01)
        t = FisherZTester(d)
        expected = residual_partial_correlation(d.values, 0, 1, [2])
        assert abs(t.partial_correlation(0, 1, [2]) - expected) <= 1e-9

    def test_matches_residual_regression(self):
        for seed in range(10):
            dag = gen_dag(7, 0.4, seed)
            data = sample_sem(random_sem(dag, seed), 300, seed)
            t = FisherZTester(data)
            rng = np.random.default_rng(seed)
            for x, y in combinations(range(7), 2):
                rest = [v for v in range(7) if v not in (x, y)]
                z = sorted(rng.choice(rest, size=rng.integers(0, 6), replace=False).tolist())
                r = t.partial_correlation(x, y, z)
                assert abs(r - residual_partial_correlation(data.values, x, y, z)) <= 1e-9

    def test_calibration(self):
        rng = np.random.default_rng(20240601)
        rejections = 0
        for _ in range(1000):
            d = Dataset(("a", "b"), rng.standard_normal((500, 2)))
            rejections += not fisher_z_independent(d, 0, 1, alpha=0.05)
        rate = rejections / 1000
        print(f"rejection rate {rate:.3f}")
        assert 0.03 <= rate <= 0.07

    def test_too_few_rows(self):
        d = Dataset(("a", "b", "c"), np.random.default_rng(0).standard_normal((4, 3)))
        t = FisherZTester(d)
        t.independent(0, 1)  # 4 > 0 + 3
        with pytest.raises(ArgumentError):
            t.independent(0, 1, [2])

    def test_zero_variance_column(self):
        d = Dataset(("a", "b"), np.column_stack([np.ones(10), np.arange(10.0)]))
        with pytest.raises(DegenerateDataError):
            FisherZTester(d)

    def test_singular_conditioning_set(self):
        rng = np.random.default_rng(1)
        base = rng.standard_normal((100, 3))
        values = np.column_stack([base, base[:, 2]])
        t = FisherZTester(Dataset(tuple("abcd"), values))
        with pytest.raises(DegenerateDataError):
            t.independent(0, 1, [2, 3])

    def test_ill_conditioned_query_flagged(self):
        rng = np.random.default_rng(2)
        base = rng.standard_normal((400, 3))
        near = base[:, 2] + 1e-7 * rng.standard_normal(400)
        t = FisherZTester(Dataset(tuple("abcd"), np.column_stack([base, near])))
        t.independent(0, 1, [2, 3])
        assert t.stats.flagged == [(0, 1, (2, 3))]
        assert t.stats.as_dict()["flagged_queries"] == 1

    def test_alpha_range(self):
        with pytest.raises(ArgumentError):
            FisherZTester(confounded_sample(0), alpha=0.0)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 50), st.data())
    def test_symmetry(self, seed, data):
        d = sample_sem(random_sem(gen_dag(5, 0.5, seed), seed), 200, seed)
        t = FisherZTester(d)
        x, y = data.draw(st.lists(st.integers(0, 4), min_size=2, max_size=2, unique=True))
        z = data.draw(st.sets(st.sampled_from([v for v in range(5) if v not in (x, y)])))
        assert t.independent(x, y, z) == t.independent(y, x, z)
        assert t.p_value(x, y, z) == t.p_value(y, x, z)


class TestOracle:
    def test_confounded_graph(self):
        assert oracle_independent(confounded_graph(), X, Z, [Y])
        assert OracleTester(confounded_graph()).independent(X, Z, [Y])

    def test_disconnected(self):
        t = OracleTester(MixedGraph(4))
        assert all(t.independent(a, b) for a, b in combinations(range(4), 2))

    def test_matches_path_enumeration_on_four_vertex_dags(self):
        for g in all_labeled_dags(4):
            t = OracleTester(g)
            for x, y in combinations(range(4), 2):
                for z in submasks(0b1111 & ~((1 << x) | (1 << y))):
                    zs = [v for v in range(4) if (z >> v) & 1]
                    assert t.independent(x, y, zs) == m_separated_by_paths(g, x, y, zs)

    def test_composition_sanity(self):
        for g in all_labeled_dags(4):
            t = OracleTester(g)
            for x in range(4):
                for y, w in combinations([v for v in range(4) if v != x], 2):
                    for z in ([], [v for v in range(4) if v not in (x, y, w)]):
                        both = m_separated_by_paths(g, x, y, z) and m_separated_by_paths(g, x, w, z)
                        if both:
                            assert t.independent(x, y, z) and t.independent(x, w, z)

    def test_observed_mapping(self):
        g = MixedGraph(3, [(0, 1), (1, 2)])
        t = OracleTester(g, observed=[0, 2])
        assert t.n_vars == 2
        assert not t.independent(0, 1)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 1000), st.data())
    def test_symmetry(self, seed, data):
        t = OracleTester(gen_dag(6, 0.4, seed))
        x, y = data.draw(st.lists(st.integers(0, 5), min_size=2, max_size=2, unique=True))
        z = data.draw(st.sets(st.sampled_from([v for v in range(6) if v not in (x, y)])))
        assert t.independent(x, y, z) == t.independent(y, x, z)


class TestCache:
    def test_same_query_twice(self):
        t = with_cache(OracleTester(MixedGraph(3)))
        t.independent(0, 1, [2])
        t.independent(0, 1, [2])
        assert (t.stats.unique_tests, t.stats.duplicate_hits) == (1, 1)
        assert t.inner.stats.unique_tests == 1

    def test_symmetric_query_is_duplicate(self):
        t = with_cache(OracleTester(MixedGraph(3)))
        t.independent(0, 1, [2])
        t.independent(1, 0, [2])
        assert (t.stats.unique_tests, t.stats.duplicate_hits) == (1, 1)

    def test_uncached_tester_still_counts_duplicates(self):
        t = OracleTester(MixedGraph(3))
        t.independent(0, 1)
        t.independent(1, 0)
        assert (t.stats.unique_tests, t.stats.duplicate_hits) == (1, 1)

    def test_marvel_with_and_without_cache(self):
        for seed in range(5):
            g = gen_dag(8, 0.35, seed)
            plain = marvel_learn(OracleTester(g))
            cached = marvel_learn(with_cache(OracleTester(g)))
            assert plain.skeleton == cached.skeleton
            assert plain.stats.unique_tests == cached.stats.unique_tests

    def test_concurrent_queries(self):
        g = gen_dag(8, 0.4, 7)
        t = with_cache(OracleTester(g))
        queries = [(x, y, tuple(v for v in range(8) if v not in (x, y) and (v + s) % 3 == 0))
                   for x, y in combinations(range(8), 2) for s in range(3)]
        answers = {}

        def worker():
            for q in queries:
                answers.setdefault(q, set()).add(t.independent(*q))

        threads = [threading.Thread(target=worker) for _ in range(6)]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
        distinct = {canonical_query(*q) for q in queries}
        assert t.stats.unique_tests == len(distinct)
        assert t.stats.total_tests == 6 * len(queries)
        assert all(len(v) == 1 for v in answers.values())

    def test_cache_shares_flags(self):
        rng = np.random.default_rng(2)
        base = rng.standard_normal((400, 3))
        near = base[:, 2] + 1e-7 * rng.standard_normal(400)
        t = with_cache(FisherZTester(Dataset(tuple("abcd"), np.column_stack([base, near]))))
        t.independent(0, 1, [2, 3])
        assert len(t.stats.flagged) == 1

    def test_base_class_is_abstract(self):
        with pytest.raises(NotImplementedError):
            CiTester(2).independent(0, 1)
        assert isinstance(with_cache(OracleTester(MixedGraph(2))), CachedTester)
