import csv
import io
import json
import shutil
import subprocess
from math import comb

import pytest

from conftest import markov_pair
from recursive_cd import bench
from recursive_cd.cli import main
from recursive_cd.errors import ArgumentError
from recursive_cd.graph import MixedGraph, UndirectedGraph, format_mixed_graph
from recursive_cd.simgen import gen_dag


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBounds:
    def test_markov_pair(self):
        g1, _ = markov_pair()
        assert bench.bound_formulas(g1)["marvel_upper"] == pytest.approx(130.8)

    def test_ten_vertices_in_degree_three(self):
        # any 10-vertex DAG whose largest in-degree is 3
        g = MixedGraph(10, [(0, 3), (1, 3), (2, 3), (3, 4)])
        assert bench.bound_formulas(g)["marvel_upper"] == pytest.approx(357.0)

    def test_edgeless(self):
        b = bench.bound_formulas(MixedGraph(7))
        assert b["marvel_upper"] == comb(7, 2)
        assert b["dag_lower_form"] == 49.0


class TestScore:
    def test_identical(self):
        g = UndirectedGraph(4, [(0, 1), (1, 2)])
        s = bench.skeleton_score(g, g)
        assert (s.shd, s.f1) == (0, 1.0)

    def test_one_missing_one_extra(self):
        truth = UndirectedGraph(4, [(0, 1), (1, 2)])
        got = UndirectedGraph(4, [(0, 1), (2, 3)])
        s = bench.skeleton_score(got, truth)
        assert s.shd == 2
        assert s.precision == s.recall == s.f1 == 0.5

    def test_both_empty(self):
        s = bench.skeleton_score(UndirectedGraph(3), UndirectedGraph(3))
        assert (s.shd, s.f1) == (0, 1.0)


class TestBench:
    def test_seeds_required(self):
        with pytest.raises(ArgumentError):
            bench.expand_config({"algorithms": ["marvel"]})
        with pytest.raises(ArgumentError):
            bench.expand_config({"algorithms": ["pc"], "seeds": [0]})

    def test_expansion(self):
        cells = bench.expand_config({"algorithms": ["marvel", "rsl-d"], "n": [6, 8], "seeds": [0, 1, 2]})
        assert len(cells) == 12
        assert cells[0] == {"algorithm": "marvel", "preset": "plain", "n": 6, "p": 0.3, "seed": 0}

    def test_csv_is_deterministic(self):
        config = {"algorithms": list(bench.ALGORITHMS), "n": [7], "seeds": [0, 1]}
        first = bench.report_csv(bench.run_bench(config))
        assert first == bench.report_csv(bench.run_bench(config))
        assert first == bench.report_csv(bench.run_bench(config, workers=2))
        rows = list(csv.DictReader(io.StringIO(first)))
        assert list(rows[0]) == bench.REPORT_FIELDS
        # hill climbing may stop in a local optimum; the other learners are exact under the oracle
        assert all(r["skeleton_shd"] == "0" for r in rows if r["algorithm"] != "rol-hc")

    def test_timing_column(self):
        rows = bench.run_bench({"n": [5], "seeds": [0]}, timing=True)
        assert "runtime_ms" in rows[0]

    def test_hidden_cells_score_against_the_projection(self):
        rows = bench.run_bench({"algorithms": ["lmarvel"], "n": [10], "hidden": 2, "seeds": list(range(5))})
        assert all(r["n"] == 8 and r["skeleton_shd"] == 0 for r in rows)
        assert rows[0]["lower_bound_kind"].startswith("asymptotic")

    def test_marvel_stays_under_its_bound(self):
        rows = bench.run_bench({"algorithms": ["marvel"], "n": [10], "p": [0.3], "seeds": list(range(100))})
        assert all(r["unique_tests"] <= r["upper_bound_value"] for r in rows)
        assert all(r["skeleton_shd"] == 0 for r in rows)

    def test_fisher_z_cell(self):
        row = bench.run_cell({"algorithm": "marvel", "preset": "plain", "n": 6, "p": 0.3, "seed": 1, "ci": "fisher-z", "rows": 2000})
        assert 0.0 <= row["skeleton_f1"] <= 1.0


class TestCli:
    def test_simulate_then_learn_with_oracle(self, tmp_path, capsys):
        sim = tmp_path / "sim"
        code, _, _ = run(["simulate", "--n", 10, "--p", 0.3, "--seed", 1, "--out", sim], capsys)
        assert code == 0
        assert {p.name for p in sim.iterdir()} == {"graph.txt", "truth.txt", "sem.json", "data.csv"}
        out = tmp_path / "learned"
        code, _, _ = run(["learn", "--algo", "marvel", "--ci", "oracle", "--graph", sim / "graph.txt", "--out", out], capsys)
        assert code == 0
        stats = json.loads((out / "stats.json").read_text())
        assert stats["skeleton_shd"] == 0
        assert (out / "cpdag.txt").exists()

    def test_every_algorithm_with_oracle(self, tmp_path, capsys):
        graph = tmp_path / "g.txt"
        graph.write_text(format_mixed_graph(gen_dag(7, 0.35, 3)))
        for algo in bench.ALGORITHMS:
            extra = ["--clique-bound", 3] if algo == "rsl-w" else []
            code, out, _ = run(["learn", "--algo", algo, "--ci", "oracle", "--graph", graph, *extra], capsys)
            assert code == 0, algo
            stats = json.loads(out.splitlines()[-1].removeprefix("# stats "))
            assert stats["skeleton_shd"] == 0, algo

    def test_latent_vertices(self, tmp_path, capsys):
        graph = tmp_path / "g.txt"
        graph.write_text("A -> B\nB -> C\nU -> B\nU -> D\n")
        code, out, _ = run(["learn", "--algo", "lmarvel", "--ci", "oracle", "--graph", graph, "--latent", "U"], capsys)
        assert code == 0
        assert "B -- D" in out
        stats = json.loads(out.splitlines()[-1].removeprefix("# stats "))
        assert stats["skeleton_shd"] == 0

    def test_empty_graph(self, tmp_path, capsys):
        graph = tmp_path / "g.txt"
        graph.write_text("A\nB\nC\n")
        code, out, _ = run(["learn", "--algo", "marvel", "--ci", "oracle", "--graph", graph], capsys)
        assert code == 0
        assert "--" not in out and "->" not in out.split("# stats")[0]

    def test_fisher_z_with_truth(self, tmp_path, capsys):
        sim = tmp_path / "sim"
        run(["simulate", "--n", 6, "--p", 0.3, "--seed", 2, "--rows", 5000, "--out", sim], capsys)
        code, out, _ = run(["learn", "--algo", "rsl-d", "--data", sim / "data.csv", "--truth", sim / "truth.txt"], capsys)
        assert code == 0
        assert "skeleton_f1" in out

    def test_trace_file(self, tmp_path, capsys):
        graph = tmp_path / "g.txt"
        graph.write_text(format_mixed_graph(gen_dag(6, 0.4, 1)))
        trace = tmp_path / "trace.jsonl"
        run(["learn", "--algo", "marvel", "--ci", "oracle", "--graph", graph, "--trace", trace], capsys)
        events = [json.loads(line) for line in trace.read_text().splitlines()]
        assert sum(e["event"] == "removed" for e in events) == 5

    def test_usage_errors(self, tmp_path, capsys):
        assert run(["learn", "--algo", "pc", "--ci", "oracle"], capsys)[0] == 1
        assert run(["learn", "--algo", "marvel", "--ci", "oracle"], capsys)[0] == 1
        graph = tmp_path / "g.txt"
        graph.write_text("A -> B\n")
        assert run(["learn", "--algo", "rsl-w", "--ci", "oracle", "--graph", graph], capsys)[0] == 1
        assert run(["simulate", "--n", 5, "--p", 2, "--seed", 0, "--out", tmp_path / "x"], capsys)[0] == 1
        assert run([], capsys)[0] == 1

    def test_data_errors(self, tmp_path, capsys):
        assert run(["learn", "--algo", "marvel", "--data", tmp_path / "missing.csv"], capsys)[0] == 2
        assert run(["learn", "--algo", "marvel", "--ci", "oracle", "--graph", tmp_path], capsys)[0] == 2
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,\n")
        assert run(["learn", "--algo", "marvel", "--data", bad], capsys)[0] == 2
        flat = tmp_path / "flat.csv"
        flat.write_text("a,b\n1,1\n1,2\n1,3\n1,4\n")
        assert run(["learn", "--algo", "marvel", "--data", flat], capsys)[0] == 2

    def test_orientation_conflict_still_writes_outputs(self, tmp_path, capsys):
        sim = tmp_path / "sim"
        run(["simulate", "--n", 8, "--p", 0.4, "--seed", 5, "--rows", 60, "--out", sim], capsys)
        out = tmp_path / "learned"
        code, _, err = run(["learn", "--algo", "marvel", "--data", sim / "data.csv", "--alpha", 0.05, "--out", out], capsys)
        assert code == 3
        assert "consistency error" in err
        assert (out / "skeleton.txt").exists()
        assert "orientation_error" in json.loads((out / "stats.json").read_text())

    def test_bench_command(self, tmp_path, capsys):
        config = tmp_path / "c.json"
        config.write_text(json.dumps({"algorithms": ["marvel", "rol-vi"], "n": [6], "seeds": [0, 1]}))
        report = tmp_path / "r.csv"
        assert run(["bench", "--config", config, "--out", report], capsys)[0] == 0
        assert len(report.read_text().splitlines()) == 5
        config.write_text("{")
        assert run(["bench", "--config", config], capsys)[0] == 2

    def test_oracle_check_command(self, capsys):
        code, out, _ = run(["oracle-check", "--max-n", 3, "--sampled", 5], capsys)
        assert code == 0
        assert all(line.startswith("PASS") for line in out.splitlines())

    @pytest.mark.skipif(shutil.which("recursive-cd") is None, reason="console script not installed")
    def test_console_script(self):
        proc = subprocess.run(["recursive-cd", "--help"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "oracle-check" in proc.stdout
