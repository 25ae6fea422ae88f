"""Command-line entry point: ``hisafe <poly|plan|round|sim|leakage|bench>``.

Exit codes: 0 success, 1 protocol error, 2 argument / configuration error.
All randomness flows from ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from hisafe import bench as bench_mod
from hisafe import planner
from hisafe.flsim import SimConfig, SyntheticTask, run_hisafe, run_signsgd_mv
from hisafe.hierarchy import (
    TieConfig,
    deal_round_triples,
    leakage_census,
    partition,
    plaintext_hierarchical_vote,
    run_hierarchical_round,
    subgroup_polynomial,
)
from hisafe.mvpoly import TiePolicy, construct_mv_polynomial
from hisafe.protocol import ProtocolError
from hisafe.sharing import STREAM_INPUTS, derive_rng, dump_triples, triple_records

log = logging.getLogger("hisafe")


def _policy(name: str) -> TiePolicy:
    return TiePolicy(name)


def _write(text: str) -> None:
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# poly
# ---------------------------------------------------------------------------


def cmd_poly(args: argparse.Namespace) -> int:
    poly = construct_mv_polynomial(args.n, _policy(args.policy))
    sched = poly.schedule
    if args.format == "json":
        _write(
            json.dumps(
                {
                    "n": poly.n,
                    "p": poly.p,
                    "policy": poly.policy.value,
                    "coefficients": list(poly.coeffs),
                    "gates": [[g.target, g.left, g.right] for g in sched.gates],
                    "mult_count": sched.mult_count,
                    "R": sched.R,
                    "formula_latency": sched.formula_latency,
                    "schedule_depth": sched.schedule_depth,
                },
                indent=2,
            )
            + "\n"
        )
        return 0
    buf = io.StringIO()
    if args.format == "human":
        buf.write(f"F(x) = {poly.format()}\n")
        buf.write(
            f"n={poly.n} policy={poly.policy.value} mult_count={sched.mult_count} R={sched.R} "
            f"formula_latency={sched.formula_latency} schedule_depth={sched.schedule_depth}\n"
        )
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["exponent", "coefficient"])
    for k, c in enumerate(poly.coeffs):
        w.writerow([k, c])
    _write(buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# plan
# ---------------------------------------------------------------------------


def cmd_plan(args: argparse.Namespace) -> int:
    policy = _policy(args.policy)
    if args.compare:
        _write(json.dumps(planner.comparison_report(args.n or None, policy), indent=2) + "\n")
        return 0
    if not args.n:
        _write(planner.emit_table([], "csv" if args.format == "human" else args.format))
        return 0
    if args.all_l:
        fmt = "csv" if args.format == "human" else args.format
        _write(planner.emit_table(args.n, fmt, policy, args.allow_n1_2, args.published_R))
        return 0
    reports = [planner.optimal(n, policy, args.allow_n1_2, args.published_R) for n in args.n]
    if args.format == "json":
        _write(json.dumps([planner.report_as_dict(r) for r in reports], indent=2) + "\n")
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(planner.COLUMNS)
    for r in reports:
        t = r.optimal.as_tuple()
        w.writerow([*t[:9], *("-" if v is None else f"{v:.1f}" for v in t[9:])])
    _write(buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# round
# ---------------------------------------------------------------------------


def _read_inputs(path: str, n: int) -> np.ndarray:
    rows = [[int(v) for v in row] for row in csv.reader(Path(path).read_text().splitlines()) if row]
    x = np.array(rows, dtype=np.int64)
    if x.ndim != 2 or x.shape[0] != n:
        raise ValueError(f"{path}: expected {n} rows of +-1 values")
    return x


def _tie_config(args: argparse.Namespace) -> TieConfig:
    if args.tie:
        return TieConfig.preset(args.tie)
    policy = _policy(args.policy)
    inter = policy if policy.is_binary else TiePolicy.RESOLVE_TO_MINUS
    return TieConfig(policy, inter)


def cmd_round(args: argparse.Namespace) -> int:
    layout = partition(args.n, args.l)
    ties = _tie_config(args)
    if args.inputs:
        inputs = _read_inputs(args.inputs, args.n)
    else:
        inputs = np.where(derive_rng(args.seed, STREAM_INPUTS).random((args.n, args.d)) < 0.5, -1, 1)
    poly = subgroup_polynomial(layout.n1, ties.intra)
    triples = deal_round_triples(args.seed, 0, layout, poly, inputs.shape[1])
    if args.dump_triples:
        dump_triples(
            (rec for j, t in enumerate(triples) for rec in triple_records(t, round=0, subgroup=j)),
            args.dump_triples,
        )
    vote, transcript = run_hierarchical_round(inputs, layout, ties, triples, 0, workers=args.threads)
    if args.trace:
        transcript.write(args.trace)
    expected = plaintext_hierarchical_vote(inputs, layout, ties)
    if args.format == "json":
        out = {
            "vote": vote.tolist(),
            "plaintext": expected.tolist(),
            "match": bool(np.array_equal(vote, expected)),
            "group_votes": [g.vote.tolist() for g in transcript.group_votes],
        }
        _write(json.dumps(out) + "\n")
    else:
        _write(f"vote: {' '.join(str(v) for v in vote.tolist())}\n")
        _write(f"plaintext majority match: {np.array_equal(vote, expected)}\n")
    return 0


# ---------------------------------------------------------------------------
# sim
# ---------------------------------------------------------------------------


def _metrics_csv(metrics) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["round", "l1_grad_norm", "objective", "vote_agreement"])
    for m in metrics:
        w.writerow([m.round, repr(m.l1_grad_norm), repr(m.objective), repr(m.vote_agreement)])
    return buf.getvalue()


def cmd_sim(args: argparse.Namespace) -> int:
    ties = TieConfig.preset(args.tie)
    task = SyntheticTask.quadratic(args.n, args.d, args.sigma, seed=args.seed)

    def cfg(mode: str) -> SimConfig:
        return SimConfig(args.n, args.l, args.d, ties, args.rounds, args.eta, args.seed, mode, workers=args.threads)

    results = {}
    if args.mode in ("plain", "both"):
        results["plain"] = run_signsgd_mv(task, cfg("plaintext"))
    if args.mode in ("secure", "both"):
        results["secure"] = run_hisafe(task, cfg("secure"))
    primary = results.get("secure") or results["plain"]
    if args.metrics:
        Path(args.metrics).write_text(_metrics_csv(primary.metrics))

    summary = {}
    for name, res in results.items():
        m = res.metrics
        summary[name] = {
            "final_l1_grad_norm": m[-1].l1_grad_norm if m else None,
            "final_objective": m[-1].objective if m else None,
            "mean_vote_agreement": float(np.mean([x.vote_agreement for x in m])) if m else None,
        }
    if len(results) == 2:
        summary["identical"] = bool(
            np.array_equal(results["plain"].votes, results["secure"].votes)
            and np.array_equal(results["plain"].theta, results["secure"].theta)
        )
    if args.format == "json":
        _write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    elif args.format == "csv" and not args.metrics:
        _write(_metrics_csv(primary.metrics))
    else:
        for name, s in summary.items():
            _write(f"{name}: {s}\n")
    if summary.get("identical") is False:
        log.error("secure and plaintext trajectories differ")
        return 1
    return 0


# ---------------------------------------------------------------------------
# leakage
# ---------------------------------------------------------------------------


def cmd_leakage(args: argparse.Namespace) -> int:
    policy = _policy(args.policy)
    sizes = range(args.n1, (args.max_n1 or args.n1) + 1)
    rows = []
    for n1 in sizes:
        frac = leakage_census(n1, policy)
        rows.append({"n1": n1, "fraction": str(frac), "value": float(frac), "closed_form": str(2.0 ** -(n1 - 1))})
    if args.format == "json":
        _write(json.dumps(rows, indent=2) + "\n")
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _write(buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def cmd_bench(args: argparse.Namespace) -> int:
    ties = TieConfig.preset(args.tie)
    results = [bench_mod.run_bench(args.n, args.l, d, ties, args.seed, args.threads) for d in args.d]
    if len(results) >= 2:
        _, _, r2 = bench_mod.linear_fit_r2([r.l_times_d for r in results], [r.online_mults for r in results])
    else:
        r2 = None
    if args.format == "json":
        _write(json.dumps({"rows": [r.__dict__ for r in results], "online_fit_r2": r2}, indent=2) + "\n")
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "l", "n1", "d", "gates", "offline_elements", "online_mults", "offline_s", "online_s"])
    for r in results:
        w.writerow([r.n, r.l, r.n1, r.d, r.gates, r.offline_elements, r.online_mults,
                    f"{r.offline_seconds:.6f}", f"{r.online_seconds:.6f}"])
    _write(buf.getvalue())
    if r2 is not None:
        _write(f"# online multiplications vs l*d: R^2 = {r2:.6f}\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed for every random stream (default 0)")
    common.add_argument("--format", choices=["human", "csv", "json"], default="human", help="output format")
    common.add_argument("-v", "--verbose", action="count", default=0, help="increase log verbosity")
    common.add_argument("--threads", type=int, default=1, help="worker threads for subgroup execution (default 1)")

    parser = argparse.ArgumentParser(prog="hisafe", description="Secure hierarchical majority-vote toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", parents=[common], help="print the majority-vote polynomial")
    p.add_argument("--n", type=int, required=True, help="number of users (>= 2)")
    p.add_argument("--policy", choices=["minus", "plus", "zero"], default="minus", help="value of sign(0)")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("plan", parents=[common], help="communication cost and optimal subgrouping")
    p.add_argument("--n", type=int, nargs="*", default=[], help="user counts")
    p.add_argument("--all-l", action="store_true", help="list every admissible l, not just the optimum")
    p.add_argument("--published-R", action="store_true", help="use published R values where they exist")
    p.add_argument("--allow-n1-2", action="store_true", help="admit two-user subgroups")
    p.add_argument("--compare", action="store_true", help="emit the computed-vs-published deviation report (JSON)")
    p.add_argument("--policy", choices=["minus", "plus", "zero"], default="minus", help="intra-group tie policy")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("round", parents=[common], help="run one secure aggregation round")
    p.add_argument("--n", type=int, required=True, help="number of users")
    p.add_argument("--d", type=int, default=1, help="number of coordinates (ignored with --inputs)")
    p.add_argument("--l", type=int, default=1, help="number of subgroups (default 1: flat)")
    p.add_argument("--policy", choices=["minus", "plus", "zero"], default="minus", help="intra tie policy")
    p.add_argument("--tie", choices=["A1", "B1"], help="named tie configuration (overrides --policy)")
    p.add_argument("--inputs", help="CSV file with n rows of +-1 votes")
    p.add_argument("--trace", help="write the JSON-lines transcript here")
    p.add_argument("--dump-triples", help="write dealt triples as JSON lines here")
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("sim", parents=[common], help="signSGD majority-vote simulation")
    p.add_argument("--n", type=int, default=12, help="number of users")
    p.add_argument("--l", type=int, default=1, help="number of subgroups")
    p.add_argument("--d", type=int, default=10, help="model dimension")
    p.add_argument("--rounds", type=int, default=200, help="global rounds T")
    p.add_argument("--eta", type=float, default=0.05, help="learning rate")
    p.add_argument("--sigma", type=float, default=1.0, help="gradient noise std")
    p.add_argument("--tie", choices=["A1", "B1"], default="A1", help="tie configuration")
    p.add_argument("--mode", choices=["plain", "secure", "both"], default="both", help="aggregation mode")
    p.add_argument("--metrics", help="write per-round metrics CSV here")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("leakage", parents=[common], help="residual-leakage census by enumeration")
    p.add_argument("--n1", type=int, required=True, help="subgroup size (2..20)")
    p.add_argument("--max-n1", type=int, help="enumerate n1..max-n1")
    p.add_argument("--policy", choices=["minus", "plus", "zero"], default="minus", help="tie policy")
    p.set_defaults(func=cmd_leakage)

    p = sub.add_parser("bench", parents=[common], help="offline/online cost of one secure round")
    p.add_argument("--n", type=int, default=24, help="number of users")
    p.add_argument("--l", type=int, default=8, help="number of subgroups")
    p.add_argument("--d", type=int, nargs="+", default=[1000], help="one or more dimensions")
    p.add_argument("--tie", choices=["A1", "B1"], default="A1", help="tie configuration")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ProtocolError as exc:
        log.error("protocol error: %s", exc)
        return 1
    except ValueError as exc:
        parser.exit(2, f"hisafe: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
