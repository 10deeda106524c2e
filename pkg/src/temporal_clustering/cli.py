"""Command-line front door: generate, solve, evaluate, and oracle-check.

Exit codes: 0 solved/feasible, 2 certified infeasible, 1 usage or IO error.
All results are JSON on --output or stdout; batch mode writes one JSON per
instance plus a CSV summary.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import generators
from .instance import (check_solution, clustering_stats, load_clustering,
                       load_instance, make_clustering, save_clustering,
                       save_instance)
from .kcenter import SolveOutcome, solve_bicriteria, solve_exact_k, solve_rds_greedy
from .level_graph import build_level_graph
from .median import solve_median_greedy
from .oracle import OracleBudget, oracle_feasible, oracle_opt_k, oracle_opt_r

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

ALGORITHMS = ("exact-k", "rds-greedy", "bicriteria", "median-greedy", "means-greedy")


def _dump(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_input(path: str | None) -> bytes:
    if path:
        return Path(path).read_bytes()
    return sys.stdin.buffer.read()


def _tolerance(args) -> float:
    if args.tolerance is not None:
        return args.tolerance
    env = os.environ.get("TEMPORAL_CLUSTER_TOLERANCE")
    return float(env) if env else 0.0


def _solve_one(instance, args, tol: float) -> SolveOutcome:
    algo = args.algo
    if algo == "exact-k":
        return solve_exact_k(instance, args.k, args.r, args.delta, tol)
    if algo == "bicriteria":
        return solve_bicriteria(instance, args.k, args.r, args.delta, tol)
    if algo == "rds-greedy":
        return solve_rds_greedy(instance, args.r, args.delta, tol)
    exponent = 1 if algo == "median-greedy" else 2
    return solve_median_greedy(instance, args.k, args.r, args.delta,
                               args.epsilon, exponent, tol)


def _outcome_doc(instance, outcome: SolveOutcome) -> dict:
    if outcome.clustering is not None:
        return {"status": "solved",
                "clustering": {"trajectories": [list(t) for t in outcome.clustering.trajectories]},
                "stats": clustering_stats(instance, outcome.clustering).to_dict()}
    return {"status": "infeasible", "certificate": outcome.certificate.to_dict()}


def _cmd_generate(args) -> int:
    if args.kind == "sat3":
        cnf = generators.parse_dimacs(_read_input(args.input).decode("utf-8"))
        params = generators.GadgetParams(r0=args.r0, delta0=args.delta0, rho=args.rho)
        sampling, meta = generators.gen_sat3(cnf, params)
        if args.meta:
            Path(args.meta).write_text(json.dumps(
                {"k": meta["k"], "levels": meta["levels"], "size": meta["size"]},
                sort_keys=True) + "\n", encoding="utf-8")
    elif args.kind == "setcover":
        sc = generators.parse_setcover_json(_read_input(args.input))
        sampling = generators.gen_setcover_metric(sc)
    else:
        sampling, planted = generators.gen_random_walkers(
            seed=args.seed, k=args.k, t=args.t, extras_per_level=args.extras,
            step=args.step, radius=args.radius, dim=args.dim)
        if args.planted:
            Path(args.planted).write_bytes(save_clustering(planted))
    data = save_instance(sampling)
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def _cmd_solve(args) -> int:
    tol = _tolerance(args)
    if args.batch:
        return _run_batch(args, tol)
    instance = load_instance(_read_input(args.input),
                             validate_triangle=not args.skip_validation)
    if args.dump_graph:
        g = build_level_graph(instance, args.delta, tol)
        _dump({"delta": args.delta,
               "succ": [[list(s) for s in level] for level in g.succ]}, args.dump_graph)
    outcome = _solve_one(instance, args, tol)
    _dump(_outcome_doc(instance, outcome), args.output)
    return EXIT_OK if outcome.feasible else EXIT_INFEASIBLE


def _run_batch(args, tol: float) -> int:
    indir = Path(args.batch)
    files = sorted(f for f in indir.iterdir() if f.suffix == ".json")
    outdir = Path(args.output) if args.output else indir

    def work(f: Path):
        instance = load_instance(f.read_bytes(),
                                 validate_triangle=not args.skip_validation)
        outcome = _solve_one(instance, args, tol)
        return f.name, instance, outcome

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(work, files))
    rows = []
    for name, instance, outcome in results:
        doc = _outcome_doc(instance, outcome)
        (outdir / f"{Path(name).stem}.result.json").write_text(
            json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")
        row = {"instance": name, "status": doc["status"]}
        if outcome.feasible:
            row.update(doc["stats"])
        rows.append(row)
    if args.csv:
        fields = ["instance", "status", "k", "rad_inf", "rad_1", "rad_2", "delta"]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({f: row.get(f, "") for f in fields})
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    return EXIT_OK


def _cmd_eval(args) -> int:
    instance = load_instance(_read_input(args.input),
                             validate_triangle=not args.skip_validation)
    clustering = load_clustering(Path(args.clustering).read_bytes())
    stats = clustering_stats(instance, clustering)
    _dump(stats.to_dict(), args.output)
    if args.check:
        report = check_solution(instance, clustering, args.k, args.r, args.delta,
                                args.objective, _tolerance(args))
        for violation in report.violations:
            print(violation, file=sys.stderr)
        return EXIT_OK if report.passed else EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_oracle(args) -> int:
    tol = _tolerance(args)
    budget = OracleBudget(max_trajectories=args.max_trajectories,
                          max_subset_tests=args.max_subsets)
    instance = load_instance(_read_input(args.input),
                             validate_triangle=not args.skip_validation)
    if args.question == "feasible":
        ok, witness = oracle_feasible(instance, args.k, args.r, args.delta,
                                      args.objective, budget, tol)
        doc = {"feasible": ok}
        if witness is not None:
            doc["witness"] = [list(t) for t in witness.trajectories]
        _dump(doc, args.output)
        return EXIT_OK if ok else EXIT_INFEASIBLE
    if args.question == "opt-k":
        got = oracle_opt_k(instance, args.r, args.delta, args.objective, budget, tol)
        if got is None:
            _dump({"feasible": False}, args.output)
            return EXIT_INFEASIBLE
        _dump({"feasible": True, "opt_k": got[0],
               "witness": [list(t) for t in got[1].trajectories]}, args.output)
        return EXIT_OK
    got = oracle_opt_r(instance, args.k, args.delta, args.objective, budget, tol)
    if got is None:
        _dump({"feasible": False}, args.output)
        return EXIT_INFEASIBLE
    _dump({"feasible": True, "opt_r": got[0],
           "witness": [list(t) for t in got[1].trajectories]}, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tempoclust",
                                     description="temporal clustering toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="emit an instance JSON")
    gsub = gen.add_subparsers(dest="kind", required=True)
    sat = gsub.add_parser("sat3", help="planar CNF motion gadget")
    sat.add_argument("--input", help="DIMACS file (default stdin)")
    sat.add_argument("--r0", type=float, required=True)
    sat.add_argument("--delta0", type=float, required=True)
    sat.add_argument("--rho", type=float, required=True)
    sat.add_argument("--meta", help="write generator metadata JSON here")
    sat.add_argument("--output")
    cov = gsub.add_parser("setcover", help="covering metric from a set system")
    cov.add_argument("--input", help="set-cover JSON (default stdin)")
    cov.add_argument("--output")
    walk = gsub.add_parser("walkers", help="random walks with planted clusters")
    walk.add_argument("--seed", type=int, required=True)
    walk.add_argument("--k", type=int, required=True)
    walk.add_argument("--t", type=int, required=True)
    walk.add_argument("--extras", type=int, default=0)
    walk.add_argument("--step", type=float, required=True)
    walk.add_argument("--radius", type=float, required=True)
    walk.add_argument("--dim", type=int, default=2)
    walk.add_argument("--planted", help="write the planted clustering here")
    walk.add_argument("--output")

    solve = sub.add_parser("solve", help="run a solver on an instance")
    solve.add_argument("--algo", choices=ALGORITHMS, required=True)
    solve.add_argument("--input", help="instance JSON (default stdin)")
    solve.add_argument("--batch", help="directory of instance JSON files")
    solve.add_argument("--workers", type=int, default=4)
    solve.add_argument("--csv", help="batch summary CSV path")
    solve.add_argument("--k", type=int, default=1)
    solve.add_argument("--r", type=float, default=0.0)
    solve.add_argument("--delta", type=float, default=0.0)
    solve.add_argument("--epsilon", type=float, default=0.1)
    solve.add_argument("--tolerance", type=float, default=None)
    solve.add_argument("--skip-validation", action="store_true")
    solve.add_argument("--dump-graph", help="write level-graph adjacency JSON here")
    solve.add_argument("--output")

    ev = sub.add_parser("eval", help="score a clustering against an instance")
    ev.add_argument("--input", help="instance JSON (default stdin)")
    ev.add_argument("--clustering", required=True)
    ev.add_argument("--check", action="store_true")
    ev.add_argument("--k", type=int, default=1)
    ev.add_argument("--r", type=float, default=0.0)
    ev.add_argument("--delta", type=float, default=0.0)
    ev.add_argument("--objective", choices=("center", "median", "means"),
                    default="center")
    ev.add_argument("--tolerance", type=float, default=None)
    ev.add_argument("--skip-validation", action="store_true")
    ev.add_argument("--output")

    orc = sub.add_parser("oracle", help="exact answers on small instances")
    orc.add_argument("question", choices=("feasible", "opt-k", "opt-r"))
    orc.add_argument("--input", help="instance JSON (default stdin)")
    orc.add_argument("--k", type=int, default=1)
    orc.add_argument("--r", type=float, default=0.0)
    orc.add_argument("--delta", type=float, default=0.0)
    orc.add_argument("--objective", choices=("center", "median", "means"),
                     default="center")
    orc.add_argument("--max-trajectories", type=int, default=5000)
    orc.add_argument("--max-subsets", type=int, default=200000)
    orc.add_argument("--tolerance", type=float, default=None)
    orc.add_argument("--skip-validation", action="store_true")
    orc.add_argument("--output")
    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "eval":
            return _cmd_eval(args)
        return _cmd_oracle(args)
    except (OSError, ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
