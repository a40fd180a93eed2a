"""Command-line front end.

Exit codes: 0 on success (and on feasible/within-bound verifications),
1 when a verification or bound check fails, 2 on input or usage errors.
All numeric output is exact: "p/q" strings, or plain integers when the
denominator is 1. Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import dualfit, experiments, transforms
from .engine import compute_metrics, metrics_to_json_dict, simulate, verify_schedule
from .generators import gen_lower_bound, gen_random
from .model import (
    InputError,
    Instance,
    Schedule,
    format_rational,
    instance_to_json,
    parse_instance,
    parse_rational,
    parse_schedule,
    schedule_to_json,
)
from .oracle import OracleSizeError, brute_force_opt
from .schedulers import POLICIES

_STDOUT = "-"


class _UsageError(Exception):
    pass


def _read_instance(path: str) -> Instance:
    return parse_instance(_read(path))


def _read_schedule(path: str) -> Schedule:
    return parse_schedule(_read(path))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == _STDOUT:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", "utf-8")


def _positive_speed(raw: str) -> Fraction:
    speed = parse_rational(raw, "speed")
    if speed <= 0:
        raise _UsageError("speed must be positive")
    return speed


def _trace_json(inst: Instance, trace: dualfit.Trace) -> str:
    data = {
        "makespan": trace.makespan,
        "slots": [
            {
                "t": t,
                "alive": list(alive),
                "degree": {
                    v: trace.degree[v, t]
                    for v in sorted(n.id for n in inst.nodes)
                    if (v, t) in trace.degree
                },
                "weight": {
                    v: format_rational(trace.weight[v, t])
                    for v in sorted(n.id for n in inst.nodes)
                    if (v, t) in trace.weight
                },
            }
            for t, alive in sorted(trace.alive.items())
        ],
        "arrival_peers": [
            {
                "id": req.id,
                "src_peers": list(trace.src_peers[req.id]),
                "dst_peers": list(trace.dst_peers[req.id]),
            }
            for req in inst.requests
        ],
    }
    return json.dumps(data, indent=2)


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "lb":
        inst = gen_lower_bound(args.L, args.variant)
    else:
        inst = gen_random(
            n_nodes=args.nodes,
            degree_max=args.max_degree,
            n_jobs=args.jobs,
            size_max=args.max_size,
            weight_max=args.max_weight,
            release_window=args.window,
            seed=args.seed,
        )
    _emit(instance_to_json(inst), args.output)
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    speed = _positive_speed(args.speed)
    sched, metrics = simulate(inst, args.algo, speed)
    if args.emit_schedule:
        _emit(schedule_to_json(sched), args.emit_schedule)
    if args.emit_trace:
        _emit(_trace_json(inst, dualfit.build_trace(inst, sched)), args.emit_trace)
    _emit(json.dumps(metrics_to_json_dict(inst, metrics), indent=2), None)
    return 0


def _cmd_verify_schedule(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    sched = _read_schedule(args.schedule)
    violations = verify_schedule(inst, sched)
    report = {
        "feasible": not violations,
        "violations": [str(v) for v in violations],
    }
    _emit(json.dumps(report, indent=2), None)
    return 0 if not violations else 1


def _cmd_verify_dual(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    sched = _read_schedule(args.schedule)
    if args.speed is not None:
        speed = _positive_speed(args.speed)
        if speed != sched.speed:
            raise _UsageError(
                f"--speed {args.speed} disagrees with the schedule's speed "
                f"{format_rational(sched.speed)}"
            )
    trace = dualfit.build_trace(inst, sched)
    if args.mode == "simple":
        dual = dualfit.build_dual_simple(inst, trace, sched.speed)
    else:
        dual = dualfit.build_dual_general(inst, trace, sched.speed)
    feas = dualfit.verify_dual_feasibility(dual, inst)
    bounds = dualfit.check_dual_bounds(dual, compute_metrics(inst, sched))
    report = feas.to_json_dict()
    report["bounds"] = bounds.to_json_dict()
    _emit(json.dumps(report, indent=2), None)
    return 0 if feas.feasible else 1


def _cmd_oracle(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    cost, sched = brute_force_opt(
        inst, objective=args.objective, max_jobs=args.max_jobs
    )
    report = {
        "objective": args.objective,
        "cost": format_rational(cost),
        "schedule": json.loads(schedule_to_json(sched)),
    }
    _emit(json.dumps(report, indent=2), None)
    return 0


def _cmd_transform(args: argparse.Namespace) -> int:
    if args.kind == "unit":
        inst = _read_instance(args.instance)
        reduced, mapping = transforms.unit_reduction(inst)
        _emit(instance_to_json(reduced), args.output)
        if args.mapping:
            _emit(
                json.dumps({str(k): v for k, v in mapping.items()}, indent=2),
                args.mapping,
            )
    else:
        sched = _read_schedule(args.schedule)
        stretched = transforms.stretch_schedule(sched, args.factor)
        _emit(schedule_to_json(stretched), args.output)
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    import io

    if args.kind == "lb-sweep":
        Ls = [int(x) for x in args.Ls.split(",") if x]
        rows = experiments.lb_sweep(Ls, args.algo)
        header = experiments.LB_SWEEP_HEADER
    else:
        epsilon = parse_rational(args.epsilon, "epsilon")
        corpus = [
            (
                f"seed{args.seed + k}",
                gen_random(
                    n_nodes=args.nodes,
                    degree_max=1,
                    n_jobs=args.jobs,
                    size_max=1,
                    weight_max=args.max_weight,
                    release_window=args.window,
                    seed=args.seed + k,
                ),
            )
            for k in range(args.count)
        ]
        rows = experiments.competitive_check(corpus, 2 + epsilon, epsilon)
        header = experiments.COMPETITIVE_HEADER
    buf = io.StringIO()
    experiments.write_csv(rows, header, buf)
    _emit(buf.getvalue(), args.output)
    if args.kind == "competitive":
        bad = [r for r in rows if r["within_bound"] == "false"]
        return 1 if bad else 0
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toposched",
        description="Degree-bounded transfer scheduling: simulate, verify, certify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate instances")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    gen_lb = gen_sub.add_parser("lb", help="adversarial lower-bound family")
    gen_lb.add_argument("--L", type=int, required=True, help="perfect square >= 4")
    gen_lb.add_argument("--variant", choices=("t1", "t2"), required=True)
    gen_lb.add_argument("-o", "--output", default=None)
    gen_lb.set_defaults(func=_cmd_gen)
    gen_rand = gen_sub.add_parser("random", help="seeded random instance")
    gen_rand.add_argument("--nodes", type=int, required=True)
    gen_rand.add_argument("--jobs", type=int, required=True)
    gen_rand.add_argument("--max-degree", type=int, default=1)
    gen_rand.add_argument("--max-size", type=int, default=1)
    gen_rand.add_argument("--max-weight", type=int, default=1)
    gen_rand.add_argument("--window", type=int, default=10)
    gen_rand.add_argument("--seed", type=int, required=True)
    gen_rand.add_argument("-o", "--output", default=None)
    gen_rand.set_defaults(func=_cmd_gen)

    run = sub.add_parser("run", help="simulate a policy and print metrics")
    run.add_argument("--instance", required=True)
    run.add_argument("--algo", choices=sorted(POLICIES), required=True)
    run.add_argument("--speed", required=True, help='rational, e.g. "3" or "5/2"')
    run.add_argument("--emit-schedule", default=None)
    run.add_argument("--emit-trace", default=None)
    run.set_defaults(func=_cmd_run)

    verify = sub.add_parser("verify", help="check schedules and dual certificates")
    verify_sub = verify.add_subparsers(dest="kind", required=True)
    vs = verify_sub.add_parser("schedule", help="feasibility of a schedule")
    vs.add_argument("--instance", required=True)
    vs.add_argument("--schedule", required=True)
    vs.set_defaults(func=_cmd_verify_schedule)
    vd = verify_sub.add_parser("dual", help="dual certificate from a schedule")
    vd.add_argument("--instance", required=True)
    vd.add_argument("--schedule", required=True)
    vd.add_argument("--speed", default=None, help="cross-check against the schedule")
    vd.add_argument("--mode", choices=("simple", "general"), required=True)
    vd.set_defaults(func=_cmd_verify_dual)

    oracle = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    oracle.add_argument("--instance", required=True)
    oracle.add_argument("--objective", choices=("wflow", "wcompletion"), default="wflow")
    oracle.add_argument("--max-jobs", type=int, default=8)
    oracle.set_defaults(func=_cmd_oracle)

    transform = sub.add_parser("transform", help="instance/schedule rewrites")
    transform_sub = transform.add_subparsers(dest="kind", required=True)
    tu = transform_sub.add_parser("unit", help="split jobs into unit fragments")
    tu.add_argument("--instance", required=True)
    tu.add_argument("-o", "--output", default=None)
    tu.add_argument("--mapping", default=None, help="write fragment map JSON here")
    tu.set_defaults(func=_cmd_transform)
    ts = transform_sub.add_parser("stretch", help="slow a schedule down to speed 1")
    ts.add_argument("--schedule", required=True)
    ts.add_argument("--factor", type=int, required=True)
    ts.add_argument("-o", "--output", default=None)
    ts.set_defaults(func=_cmd_transform)

    experiment = sub.add_parser("experiment", help="batch sweeps, CSV output")
    experiment_sub = experiment.add_subparsers(dest="kind", required=True)
    lbs = experiment_sub.add_parser("lb-sweep", help="adversarial family sweep")
    lbs.add_argument("--Ls", required=True, help="comma-separated perfect squares")
    lbs.add_argument("--algo", choices=sorted(POLICIES), default="release-greedy")
    lbs.add_argument("-o", "--output", default=None)
    lbs.set_defaults(func=_cmd_experiment)
    comp = experiment_sub.add_parser("competitive", help="speed-augmented vs oracle")
    comp.add_argument("--count", type=int, default=100)
    comp.add_argument("--seed", type=int, default=0)
    comp.add_argument("--nodes", type=int, default=6)
    comp.add_argument("--jobs", type=int, default=7)
    comp.add_argument("--max-weight", type=int, default=8)
    comp.add_argument("--window", type=int, default=6)
    comp.add_argument("--epsilon", default="1", help="rational; speed = 2 + epsilon")
    comp.add_argument("-o", "--output", default=None)
    comp.set_defaults(func=_cmd_experiment)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; keep both.
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (_UsageError, InputError, OracleSizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
