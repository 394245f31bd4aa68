"""Command-line entry point: ``recursive-cd {simulate,learn,bench,oracle-check}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal consistency error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from . import bench, oracle_check
from .ci import Dataset, FisherZTester, OracleTester, with_cache
from .errors import ArgumentError, ConsistencyError, DataFormatError, DegenerateDataError, GenerationError, PreconditionError
from .graph import format_mixed_graph, format_undirected_graph, read_mixed_graph
from .orientation import learned_cpdag
from .simgen import gen_dag, hide_vertices, random_sem, sample_sem

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONSISTENCY = 0, 1, 2, 3
DAG_MODE = {"marvel", "rsl-w", "rsl-w-auto", "rsl-d"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recursive-cd", description="Recursive causal structure learning.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="generate a DAG, a linear-Gaussian SEM and a data sample")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--p", type=float, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--preset", default="plain", help="plain, diamond_free or clique_bounded(m)")
    sim.add_argument("--rows", type=int, default=1000)
    sim.add_argument("--hidden", type=int, default=0, help="number of vertices to hide")
    sim.add_argument("--out", type=Path, required=True, help="output directory")

    learn = sub.add_parser("learn", help="learn a skeleton from data or from a true graph")
    learn.add_argument("--algo", required=True, choices=bench.ALGORITHMS)
    learn.add_argument("--ci", default="fisher-z", choices=("fisher-z", "oracle"))
    learn.add_argument("--data", type=Path, help="CSV with a header row (fisher-z mode)")
    learn.add_argument("--graph", type=Path, help="true graph edge list (oracle mode)")
    learn.add_argument("--latent", default="", help="comma-separated vertices of --graph to hide")
    learn.add_argument("--truth", type=Path, help="edge list to score the skeleton against")
    learn.add_argument("--alpha", type=float, default=0.01)
    learn.add_argument("--mb", default="tc", choices=("tc", "gs"))
    learn.add_argument("--clique-bound", type=int)
    learn.add_argument("--max-iter", type=int, default=50)
    learn.add_argument("--max-swap", type=int, default=5)
    learn.add_argument("--strict", action="store_true", help="fail instead of falling back when nothing is removable")
    learn.add_argument("--trace", type=Path, help="write trace events as JSON lines")
    learn.add_argument("--out", type=Path, help="output directory; default prints to stdout")

    b = sub.add_parser("bench", help="run a benchmark matrix from a JSON config")
    b.add_argument("--config", type=Path, required=True)
    b.add_argument("--out", type=Path, help="CSV report path; default stdout")
    b.add_argument("--workers", type=int, help=f"worker processes (default ${bench.WORKERS_ENV} or 1)")
    b.add_argument("--timing", action="store_true", help="add a runtime_ms column")

    oc = sub.add_parser("oracle-check", help="run the exhaustive property suites")
    oc.add_argument("--max-n", type=int, default=4)
    oc.add_argument("--sampled", type=int, default=50, help="random DAGs per size at n=5 and n=6")
    return parser


# ----------------------------------------------------------------- commands
def cmd_simulate(args) -> int:
    dag = gen_dag(args.n, args.p, args.seed, args.preset)
    observed, truth = hide_vertices(dag, args.hidden, args.seed) if args.hidden else (list(range(dag.n)), dag)
    spec = random_sem(dag, args.seed, hidden=[v for v in range(dag.n) if v not in observed])
    data = sample_sem(spec, args.rows, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "graph.txt").write_text(format_mixed_graph(dag, spec.names))
    (args.out / "truth.txt").write_text(format_mixed_graph(truth, [spec.names[v] for v in observed]))
    (args.out / "sem.json").write_text(spec.to_json() + "\n")
    data.write_csv(args.out / "data.csv")
    print(f"wrote {args.out}/graph.txt, truth.txt, sem.json, data.csv ({args.rows} rows, {len(observed)} observed)")
    return EXIT_OK


def _load_graph(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    return read_mixed_graph(text)


def _tester(args):
    if args.ci == "oracle":
        if args.graph is None:
            raise ArgumentError("--ci oracle needs --graph")
        graph, names = _load_graph(args.graph)
        latent = {s.strip() for s in args.latent.split(",") if s.strip()}
        unknown = latent - set(names)
        if unknown:
            raise ArgumentError(f"--latent names not in the graph: {', '.join(sorted(unknown))}")
        observed = [i for i, nm in enumerate(names) if nm not in latent]
        tester = OracleTester(graph, observed)
        from .graph import latent_project

        truth = latent_project(graph, observed) if latent else graph
        return tester, [names[i] for i in observed], truth
    if args.data is None:
        raise ArgumentError("--ci fisher-z needs --data")
    try:
        data = Dataset.read_csv(args.data)
    except OSError as exc:
        raise DataFormatError(f"cannot read {args.data}: {exc}") from None
    return FisherZTester(data, args.alpha), list(data.names), None


def _truth_skeleton(path: Path, names: list[str]):
    graph, tnames = _load_graph(path)
    if set(tnames) != set(names):
        raise DataFormatError("--truth vertices do not match the learned variables")
    index = {nm: i for i, nm in enumerate(names)}
    from .graph import UndirectedGraph

    return UndirectedGraph(len(names), [(index[tnames[a]], index[tnames[b]]) for a, b in graph.skeleton().edges])


def cmd_learn(args) -> int:
    base, names, truth = _tester(args)
    tester = with_cache(base)
    trace_fh = open(args.trace, "w") if args.trace else None
    sink = (lambda e: trace_fh.write(json.dumps(e, sort_keys=True) + "\n")) if trace_fh else None
    try:
        result = bench.run_algorithm(
            args.algo,
            tester,
            mb_method=args.mb,
            clique_bound=args.clique_bound,
            max_iter=args.max_iter,
            max_swap=args.max_swap,
            strict=args.strict,
            trace=sink,
        )
    finally:
        if trace_fh:
            trace_fh.close()
    skeleton = bench.learned_skeleton(result)
    stats = {"algorithm": args.algo, "ci": args.ci, "n_vars": len(names), "edges": len(skeleton.edges)}
    if args.ci == "fisher-z":
        stats["alpha"] = args.alpha
    stats.update(tester.stats.as_dict())
    cpdag_text = None
    conflict = None
    if hasattr(result, "skeleton"):
        stats["removal_order"] = [names[v] for v in result.removal_order]
        stats["vstructures"] = [f"{names[a]} -> {names[c]} <- {names[b]}" for a, c, b in sorted(result.vstructures)]
        stats["warnings"] = list(result.warnings)
        if args.algo in DAG_MODE:
            try:
                cpdag_text = learned_cpdag(result).format(names)
            except ConsistencyError as exc:
                conflict = exc
                stats["orientation_error"] = str(exc)
    else:
        stats["order"] = [names[v] for v in result.order]
        stats["cost"] = result.total
    truth_skel = _truth_skeleton(args.truth, names) if args.truth else (truth.skeleton() if truth else None)
    if truth_skel is not None:
        score = bench.skeleton_score(skeleton, truth_skel)
        stats["skeleton_shd"] = score.shd
        stats["skeleton_f1"] = round(score.f1, 6)
    skel_text = format_undirected_graph(skeleton, names)
    stats_text = json.dumps(stats, indent=2, sort_keys=True)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "skeleton.txt").write_text(skel_text)
        if cpdag_text is not None:
            (args.out / "cpdag.txt").write_text(cpdag_text)
        (args.out / "stats.json").write_text(stats_text + "\n")
    else:
        sys.stdout.write(cpdag_text if cpdag_text is not None else skel_text)
        print("# stats " + json.dumps(stats, sort_keys=True))
    if conflict is not None:
        raise conflict
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        config = bench.load_config(args.config)
    except OSError as exc:
        raise DataFormatError(f"cannot read {args.config}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{args.config}: invalid JSON ({exc})") from None
    rows = bench.run_bench(config, workers=args.workers, timing=args.timing)
    text = bench.report_csv(rows)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    reports = oracle_check.run_all(args.max_n, args.sampled)
    for r in reports:
        print(r.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CONSISTENCY


COMMANDS = {"simulate": cmd_simulate, "learn": cmd_learn, "bench": cmd_bench, "oracle-check": cmd_oracle_check}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ArgumentError as exc:
        print(f"recursive-cd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    # learner warnings are already logged; do not print them a second time
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            return COMMANDS[args.command](args)
        except (ArgumentError, GenerationError) as exc:
            print(f"recursive-cd: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except (DataFormatError, DegenerateDataError, PreconditionError) as exc:
            print(f"recursive-cd: data error: {exc}", file=sys.stderr)
            return EXIT_DATA
        except ConsistencyError as exc:
            print(f"recursive-cd: consistency error: {exc}", file=sys.stderr)
            return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
