"""Batch harness: quantitative sweeps emitted as deterministic CSV.

`lb_sweep` runs a policy at speed 1 on both variants of the adversarial
family and compares the worse cost against the explicit near-optimal
schedule. `competitive_check` compares highest-density-first under
speed augmentation 2 + epsilon against the exhaustive optimum.
"""

from __future__ import annotations

import csv
import math
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from .engine import compute_metrics, simulate, verify_schedule
from .generators import gen_lower_bound
from .model import Instance, format_rational
from .oracle import OracleSizeError, brute_force_opt, explicit_lb_opt_schedule

LB_SWEEP_HEADER = [
    "L",
    "variant",
    "algo",
    "speed",
    "n_jobs",
    "weighted_flow",
    "opt_bound",
    "ratio",
    "check_backlog",
    "check_opt_ub",
]

COMPETITIVE_HEADER = [
    "instance",
    "algo",
    "speed",
    "alg_cost",
    "opt_cost",
    "bound_factor",
    "within_bound",
]

_ONE = Fraction(1)


def _cell(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(format_rational(value))
    return str(value)


def _verified_metrics(inst: Instance, sched, what: str):
    violations = verify_schedule(inst, sched)
    if violations:
        raise RuntimeError(f"{what}: schedule failed verification: {violations[0]}")
    return compute_metrics(inst, sched)


def lb_sweep(Ls: Sequence[int], policy: str) -> list[dict[str, str]]:
    """One row per (L, variant); ratio compares the worse variant cost
    to that variant's explicit schedule cost."""
    rows: list[dict[str, str]] = []
    for L in Ls:
        per_variant: dict[str, tuple[Instance, Fraction, Fraction]] = {}
        for variant in ("t1", "t2"):
            inst = gen_lower_bound(L, variant)
            sched, metrics = simulate(inst, policy, _ONE)
            _verified_metrics(inst, sched, f"L={L} {variant} {policy}")
            opt_sched = explicit_lb_opt_schedule(L, variant)
            opt_metrics = _verified_metrics(inst, opt_sched, f"L={L} {variant} opt")
            per_variant[variant] = (
                inst,
                metrics.weighted_flow,
                opt_metrics.weighted_flow,
            )
        worst = max(per_variant["t1"][1], per_variant["t2"][1])
        backlog_ok = worst >= Fraction(L * math.isqrt(L), 2)
        for variant in ("t1", "t2"):
            inst, flow, opt_ub = per_variant[variant]
            rows.append(
                {
                    "L": _cell(L),
                    "variant": variant,
                    "algo": policy,
                    "speed": _cell(_ONE),
                    "n_jobs": _cell(len(inst.requests)),
                    "weighted_flow": _cell(flow),
                    "opt_bound": _cell(opt_ub),
                    "ratio": _cell(worst / opt_ub),
                    "check_backlog": _cell(backlog_ok),
                    "check_opt_ub": _cell(opt_ub <= 4 * L),
                }
            )
    return rows


def competitive_check(
    corpus: Iterable[tuple[str, Instance]],
    speed: Fraction,
    epsilon: Fraction,
) -> list[dict[str, str]]:
    """Highest-density-first at speed 2 + epsilon against the oracle.

    Rows whose instance exceeds the oracle cap are marked skipped.
    """
    speed = Fraction(speed)
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if speed != 2 + epsilon:
        raise ValueError(f"speed must equal 2 + epsilon, got {speed} vs 2 + {epsilon}")
    factor = (2 * epsilon + 4) / epsilon
    rows: list[dict[str, str]] = []
    for name, inst in corpus:
        row = {
            "instance": name,
            "algo": "hdf",
            "speed": _cell(speed),
            "bound_factor": _cell(factor),
        }
        try:
            opt_cost, _ = brute_force_opt(inst, objective="wflow")
        except OracleSizeError:
            row.update(alg_cost="", opt_cost="", within_bound="skipped")
            rows.append(row)
            continue
        sched, metrics = simulate(inst, "hdf", speed)
        _verified_metrics(inst, sched, f"{name} hdf")
        alg_cost = metrics.weighted_flow
        row.update(
            alg_cost=_cell(alg_cost),
            opt_cost=_cell(opt_cost),
            within_bound=_cell(alg_cost <= factor * opt_cost),
        )
        rows.append(row)
    return rows


def write_csv(rows: list[dict[str, str]], header: Sequence[str], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=list(header), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
