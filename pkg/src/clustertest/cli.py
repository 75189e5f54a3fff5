"""Command-line front end: instance generation, tester runs, query sweeps,
and distinguishing experiments.

Every subcommand is deterministic given its full argument list (including
--seed); CSV output is byte-stable so runs can be diffed.
"""

import argparse
import csv
import math
import sys

from scipy import stats

from . import seeding
from .collision import CollisionBackend, PairSetRelation, quantum_walk_simulate
from .errors import ClustertestError, ConfigError
from .families import generate, load_instance, save_instance, validate_family_membership
from .graph import QuerySession, parse_graph
from .processes import DistinguishConfig, distinguish_experiment
from .walks import TesterParams, classical_polylog, quantum_polylog, run_tester

BACKENDS = {
    "exhaustive": "exhaustive",
    "qcost": "quantum_cost_model",
    "qwalk": "quantum_walk_sim",
}
TESTER_KIND = {
    "exhaustive": "classical",
    "qcost": "quantum_model",
    "qwalk": "quantum_walk",
}


def _fmt(x):
    if x is None or x != x:
        return "NA"
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def cmd_gen(args):
    instance = generate(args.family, args.n, args.seed)
    save_instance(instance, args.out)
    violations = validate_family_membership(instance)
    if violations:
        print(f"INVALID instance ({len(violations)} violations):")
        for v in violations[:10]:
            print(f"  {v}")
        return 1
    print(
        f"family {args.family} instance: N={args.n} seed={args.seed} "
        f"edges={instance.graph.n_edges()} -> {args.out} (valid)"
    )
    return 0


def _tester_params(args, n):
    return TesterParams.defaults(
        n,
        epsilon=args.epsilon,
        k_walks=args.k_walks,
        walk_length=args.walk_length,
        repetitions=args.repetitions,
    )


def cmd_test(args):
    with open(args.graph, "r", encoding="utf-8") as fh:
        graph = parse_graph(fh.read())
    params = _tester_params(args, graph.n_vertices)
    backend = CollisionBackend(BACKENDS[args.backend])
    session = QuerySession(graph)
    verdict = run_tester(session, graph.n_vertices, params, backend, args.seed)
    print(f"verdict: {verdict.decision}")
    if verdict.witness is not None:
        w = verdict.witness
        print(
            f"witness: x1={w.x1} x2={w.x2} negative edge ({w.endpoint1},{w.endpoint2}) "
            f"repetition={w.repetition} start={w.start_vertex}"
        )
    print(f"classical queries: {verdict.queries_used}")
    if verdict.modeled_quantum_queries is not None:
        print(f"modeled quantum queries: {verdict.modeled_quantum_queries}")
    return 0


def run_sweep(family, n_list, trials, backend_name, seed, epsilon=0.01,
              k_walks=None, walk_length=None, repetitions=1):
    """Measured query counts per N; returns (rows, params_by_n)."""
    backend = CollisionBackend(BACKENDS[backend_name])
    rows = []
    params_by_n = {}
    for n in n_list:
        params = TesterParams.defaults(
            n, epsilon=epsilon, k_walks=k_walks, walk_length=walk_length,
            repetitions=repetitions,
        )
        params_by_n[n] = params
        queries = []
        modeled = []
        rejected = 0
        for trial in range(trials):
            gen_seed = seeding.spawn_int(seed, seeding.STREAM_TRIAL, n, family, trial, 0)
            instance = generate(family, n, gen_seed)
            session = QuerySession(instance.graph)
            run_seed = seeding.spawn_int(seed, seeding.STREAM_TRIAL, n, family, trial, 1)
            verdict = run_tester(session, n, params, backend, run_seed)
            queries.append(verdict.queries_used)
            if verdict.modeled_quantum_queries is not None:
                modeled.append(verdict.modeled_quantum_queries)
            if not verdict.accepted:
                rejected += 1
        rows.append(
            {
                "N": n,
                "family": family,
                "tester_kind": TESTER_KIND[backend_name],
                "backend": backend_name,
                "trials": trials,
                "mean_classical_queries": sum(queries) / len(queries),
                "mean_modeled_quantum_queries": (
                    sum(modeled) / len(modeled) if modeled else None
                ),
                "rejection_rate": rejected / trials,
            }
        )
    return rows, params_by_n


def fit_slope(ns, counts):
    """Least-squares slope of log(count) vs log(N) with a 95% CI."""
    if len(ns) < 2 or any(c is None or c <= 0 for c in counts):
        return None
    xs = [math.log(n) for n in ns]
    ys = [math.log(c) for c in counts]
    res = stats.linregress(xs, ys)
    if len(ns) == 2:
        half = float("inf")
    else:
        half = stats.t.ppf(0.975, len(ns) - 2) * res.stderr
    return res.slope, res.slope - half, res.slope + half


def sweep_slopes(rows, params_by_n):
    """Raw and polylog-normalized slopes for both query counts."""
    ns = [r["N"] for r in rows]
    out = {}
    classical = [r["mean_classical_queries"] for r in rows]
    out["classical_raw"] = fit_slope(ns, classical)
    out["classical_normalized"] = fit_slope(
        ns, [c / classical_polylog(n, params_by_n[n]) for n, c in zip(ns, classical)]
    )
    modeled = [r["mean_modeled_quantum_queries"] for r in rows]
    if all(m is not None for m in modeled):
        out["quantum_raw"] = fit_slope(ns, modeled)
        out["quantum_normalized"] = fit_slope(
            ns, [m / quantum_polylog(n, params_by_n[n]) for n, m in zip(ns, modeled)]
        )
    else:
        out["quantum_raw"] = None
        out["quantum_normalized"] = None
    return out


SWEEP_COLUMNS = [
    "N", "family", "tester_kind", "backend", "trials",
    "mean_classical_queries", "mean_modeled_quantum_queries", "rejection_rate",
]


def cmd_sweep(args):
    n_list = [int(x) for x in args.n_list.split(",")]
    rows, params_by_n = run_sweep(
        args.family, n_list, args.trials, args.backend, args.seed,
        epsilon=args.epsilon, k_walks=args.k_walks,
        walk_length=args.walk_length, repetitions=args.repetitions or 1,
    )
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in SWEEP_COLUMNS])
    slopes = sweep_slopes(rows, params_by_n)
    for name in ("classical_raw", "classical_normalized", "quantum_raw", "quantum_normalized"):
        fit = slopes[name]
        if fit is None:
            print(f"{name} slope: NA")
        else:
            slope, lo, hi = fit
            print(f"{name} slope: {slope:.4f} [95% CI {lo:.4f}, {hi:.4f}]")
    print(f"wrote {args.out}")
    return 0


DISTINGUISH_COLUMNS = ["trial_block", "kind", "process", "step", "value", "ci_low", "ci_high"]


def cmd_distinguish(args):
    if args.trials < 1:
        raise ConfigError("trials must be positive")
    cfg = DistinguishConfig(
        n=args.n, delta=args.delta, trials=args.trials, strategy_name=args.strategy
    )
    cfg.validate()
    reports = []
    for block in range(args.blocks):
        block_seed = seeding.spawn_int(args.seed, seeding.STREAM_TRIAL, block)
        reports.append(distinguish_experiment(cfg, block_seed))
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(DISTINGUISH_COLUMNS)
        for block, rep in enumerate(reports):
            writer.writerow(
                [block, "tv_estimate", "both", "", _fmt(rep.tv_estimate),
                 _fmt(rep.ci_low), _fmt(rep.ci_high)]
            )
            writer.writerow(
                [block, "bootstrap_sigma", "both", "", _fmt(rep.bootstrap_sigma), "", ""]
            )
            for f_idx, family in enumerate((1, 2)):
                for t, rate in enumerate(rep.collision_rates[f_idx], start=1):
                    writer.writerow(
                        [block, "collision_rate", family, t, _fmt(rate), "", ""]
                    )
        for block, rep in enumerate(reports):
            print(
                f"block {block}: tv={rep.tv_estimate:.6f} sigma={rep.bootstrap_sigma:.6f} "
                f"bound(10*delta^2)={10 * args.delta ** 2:.4f}"
            )
    print(f"wrote {args.out}")
    return 0


def cmd_qwalk(args):
    """Quantum-walk simulator on a tiny planted instance: f is the identity
    on [x_size] and the relation holds exactly for the planted pair."""
    if not (2 <= args.x_size <= 10):
        raise ConfigError("x-size must be between 2 and 10")
    pairs = [(0, 1)] if args.plant else []
    relation = PairSetRelation(pairs)
    report = quantum_walk_simulate(
        lambda x: x,
        range(args.x_size),
        relation,
        r=args.subset_size,
        trials=args.trials,
        rng=seeding.spawn(args.seed, seeding.STREAM_QWALK),
    )
    outcome = f"Found{report.pair}" if report.found else "NoCollision"
    print(f"outcome: {outcome}")
    print(f"success_probability: {report.success_probability:.6f}")
    print(f"f_evaluations: {report.f_evaluations}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="clustertest",
        description="Signed-graph clusterability testing experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a family instance")
    p.add_argument("--family", type=int, choices=(1, 2), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("test", help="run the clusterability tester on a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--backend", choices=sorted(BACKENDS), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-walks", type=int, default=None)
    p.add_argument("--walk-length", type=int, default=None)
    p.add_argument("--repetitions", type=int, default=None)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("sweep", help="query-complexity sweep over N")
    p.add_argument("--family", type=int, choices=(1, 2), default=2)
    p.add_argument("--n-list", required=True, help="comma-separated N values")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--backend", choices=sorted(BACKENDS), default="qcost")
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-walks", type=int, default=None)
    p.add_argument("--walk-length", type=int, default=None)
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("distinguish", help="history-distribution experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--strategy", choices=("walker", "bfs", "chaser"), default="walker")
    p.add_argument("--blocks", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("qwalk", help="statevector quantum-walk demo on a planted instance")
    p.add_argument("--x-size", type=int, default=8)
    p.add_argument("--plant", type=int, choices=(0, 1), default=1)
    p.add_argument("--subset-size", type=int, default=None)
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_qwalk)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ClustertestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
