"""Closed-form dual certificates built from a finished run, checked exactly.

A run's trace records, per slot, which jobs are in the system and how
much demand each node carries. From the trace we price each job (alpha)
by the congestion it met on arrival and each node-slot (beta) by the
demand present, then verify the dual constraints and the objective
bounds with exact rationals. A feasible dual certifies a lower bound on
the optimal cost via weak duality; for speed > 2 it also certifies the
competitive bound of the run itself.

Two pricing modes exist. "simple" requires unit sizes, weights, and
degree bounds and prices a job by the number of transfers incident to
its endpoints when it arrives. "general" requires unit sizes (use
unit_reduction first) and prices by the weight it must yield to heavier
competitors plus the weight of lighter ones it delays.

Arrival snapshots count every job released in the same slot as alive,
the arriving job included; its peer sets exclude the job itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .engine import Metrics, compute_metrics
from .model import Instance, Schedule, format_rational


@dataclass(frozen=True)
class Trace:
    """Alive sets and per-node demand for every slot of one run."""

    alive: dict[int, tuple[int, ...]]  # slot -> alive job ids, ascending
    degree: dict[tuple[str, int], int]  # (node, slot) -> alive incident count
    weight: dict[tuple[str, int], Fraction]  # (node, slot) -> alive incident weight
    src_peers: dict[int, tuple[int, ...]]  # job -> arrival peers at its src
    dst_peers: dict[int, tuple[int, ...]]  # job -> arrival peers at its dst
    completion: dict[int, int]
    makespan: int


@dataclass(frozen=True)
class DualSolution:
    alpha: dict[int, Fraction]
    beta: dict[tuple[str, int], Fraction]
    speed: Fraction
    mode: str


@dataclass(frozen=True)
class DualFeasibilityReport:
    feasible: bool
    violations: list[tuple[int, int, Fraction]]  # (job, slot, deficit)
    horizon: int
    sum_alpha: Fraction
    sum_beta: Fraction

    @property
    def dual_objective(self) -> Fraction:
        return self.sum_alpha - self.sum_beta

    def to_json_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "violations": [
                {"job": job, "slot": slot, "deficit": format_rational(deficit)}
                for job, slot, deficit in self.violations
            ],
            "sum_alpha": format_rational(self.sum_alpha),
            "sum_beta": format_rational(self.sum_beta),
            "dual_objective": format_rational(self.dual_objective),
            "horizon": self.horizon,
        }


@dataclass(frozen=True)
class DualBoundsReport:
    alg_cost: Fraction
    sum_alpha: Fraction
    sum_beta: Fraction
    alpha_covers_half: bool  # sum_alpha >= alg/2
    beta_within_speed: bool  # sum_beta <= alg/speed
    beta_identity: bool  # sum_beta == alg/speed exactly
    certified_bound: Fraction | None  # (2s/(s-2)) * dual objective, speed > 2 only
    certified_ok: bool | None
    note: str = ""

    def to_json_dict(self) -> dict:
        data = {
            "alg_cost": format_rational(self.alg_cost),
            "sum_alpha": format_rational(self.sum_alpha),
            "sum_beta": format_rational(self.sum_beta),
            "alpha_covers_half": self.alpha_covers_half,
            "beta_within_speed": self.beta_within_speed,
            "beta_identity": self.beta_identity,
        }
        if self.certified_bound is not None:
            data["certified_bound"] = format_rational(self.certified_bound)
            data["certified_ok"] = self.certified_ok
        if self.note:
            data["note"] = self.note
        return data


def build_trace(inst: Instance, sched: Schedule) -> Trace:
    """Replay a complete schedule into per-slot alive sets and demands."""
    completion = compute_metrics(inst, sched).completion
    makespan = max(completion.values(), default=0)
    alive: dict[int, tuple[int, ...]] = {}
    degree: dict[tuple[str, int], int] = {}
    weight: dict[tuple[str, int], Fraction] = {}
    for t in range(makespan):
        here = tuple(
            r.id for r in inst.requests if r.release <= t < completion[r.id]
        )
        if not here:
            continue
        alive[t] = here
        for job in here:
            req = inst.request(job)
            for v in (req.src, req.dst):
                degree[v, t] = degree.get((v, t), 0) + 1
                weight[v, t] = weight.get((v, t), Fraction(0)) + req.weight
    src_peers: dict[int, tuple[int, ...]] = {}
    dst_peers: dict[int, tuple[int, ...]] = {}
    for req in inst.requests:
        at_release = [
            other
            for other in inst.requests
            if other.id != req.id
            and other.release <= req.release < completion[other.id]
        ]
        src_peers[req.id] = tuple(
            o.id for o in at_release if req.src in (o.src, o.dst)
        )
        dst_peers[req.id] = tuple(
            o.id for o in at_release if req.dst in (o.src, o.dst)
        )
    return Trace(
        alive=alive,
        degree=degree,
        weight=weight,
        src_peers=src_peers,
        dst_peers=dst_peers,
        completion=completion,
        makespan=makespan,
    )


def _require_unit_sizes(inst: Instance, mode: str) -> None:
    for req in inst.requests:
        if req.size != 1:
            raise ValueError(
                f"{mode} mode requires unit sizes (job {req.id} has size {req.size});"
                " apply unit_reduction first"
            )


def build_dual_simple(inst: Instance, trace: Trace, speed: Fraction) -> DualSolution:
    """Price jobs by arrival congestion on a unit instance.

    alpha_i = (incident transfers at src + incident transfers at dst,
    both counted at arrival with job i alive) / (2 * speed);
    beta_{v,t} = (alive transfers incident to v in slot t) / (2 * speed).
    """
    speed = Fraction(speed)
    _require_unit_sizes(inst, "simple")
    for req in inst.requests:
        if req.weight != 1:
            raise ValueError(f"simple mode requires unit weights (job {req.id})")
    for node in inst.nodes:
        if node.degree_bound != 1:
            raise ValueError(f"simple mode requires unit degree bounds ({node.id})")
    two_s = 2 * speed
    alpha = {
        req.id: Fraction(
            len(trace.src_peers[req.id]) + 1 + len(trace.dst_peers[req.id]) + 1
        )
        / two_s
        for req in inst.requests
    }
    beta = {key: Fraction(d) / two_s for key, d in trace.degree.items()}
    return DualSolution(alpha=alpha, beta=beta, speed=speed, mode="simple")


def build_dual_general(inst: Instance, trace: Trace, speed: Fraction) -> DualSolution:
    """Price jobs by the weight ordering among arrival peers (unit sizes).

    At each endpoint, job i pays its own weight once per strictly
    heavier peer and collects the weight of each strictly lighter peer;
    equal weights contribute nothing. The endpoint total is divided by
    that node's degree bound, and the two endpoint terms by 2 * speed.
    beta_{v,t} = (alive weight incident to v in slot t) / (2 * speed).
    """
    speed = Fraction(speed)
    _require_unit_sizes(inst, "general")
    two_s = 2 * speed
    alpha: dict[int, Fraction] = {}
    for req in inst.requests:
        total = Fraction(0)
        for peers, node in (
            (trace.src_peers[req.id], req.src),
            (trace.dst_peers[req.id], req.dst),
        ):
            heavier = sum(
                1 for j in peers if inst.request(j).weight > req.weight
            )
            lighter_weight = sum(
                (
                    inst.request(j).weight
                    for j in peers
                    if inst.request(j).weight < req.weight
                ),
                Fraction(0),
            )
            total += (req.weight * heavier + lighter_weight) / inst.degree_of(node)
        alpha[req.id] = total / two_s
    beta = {key: w / two_s for key, w in trace.weight.items()}
    return DualSolution(alpha=alpha, beta=beta, speed=speed, mode="general")


def dual_auto_horizon(inst: Instance, dual: DualSolution) -> int:
    """First slot index beyond which every dual constraint is slack."""
    best = 0
    for req in inst.requests:
        bound = req.release + math.ceil(dual.alpha[req.id] / req.weight) + 1
        best = max(best, bound)
    return best


def verify_dual_feasibility(
    dual: DualSolution, inst: Instance, horizon: int | None = None
) -> DualFeasibilityReport:
    """Check every dual constraint up to the horizon, exactly.

    The constraint for job i at slot t >= release is
        alpha_i - beta_{src,t}/d_src - beta_{dst,t}/d_dst <= w_i (t - r_i)
    which in simple mode (all degree bounds 1, unit weights) coincides
    with the undivided form. Past the auto horizon the right side
    dominates alpha alone, so finitely many slots decide feasibility.
    """
    if horizon is None:
        horizon = dual_auto_horizon(inst, dual)
    zero = Fraction(0)
    violations: list[tuple[int, int, Fraction]] = []
    for req in inst.requests:
        a = dual.alpha[req.id]
        d_src = inst.degree_of(req.src)
        d_dst = inst.degree_of(req.dst)
        for t in range(req.release, horizon + 1):
            lhs = (
                a
                - dual.beta.get((req.src, t), zero) / d_src
                - dual.beta.get((req.dst, t), zero) / d_dst
            )
            rhs = req.weight * (t - req.release)
            if lhs > rhs:
                violations.append((req.id, t, lhs - rhs))
    return DualFeasibilityReport(
        feasible=not violations,
        violations=violations,
        horizon=horizon,
        sum_alpha=sum(dual.alpha.values(), Fraction(0)),
        sum_beta=sum(dual.beta.values(), Fraction(0)),
    )


def check_dual_bounds(dual: DualSolution, metrics: Metrics) -> DualBoundsReport:
    """Compare the dual sums against the run's cost.

    For speed > 2 the implied certificate is
        alg <= (2 * speed / (speed - 2)) * (sum_alpha - sum_beta).
    For speed <= 2 there is no implied certificate; the report says so.
    """
    alg = metrics.weighted_flow
    s = dual.speed
    sum_alpha = sum(dual.alpha.values(), Fraction(0))
    sum_beta = sum(dual.beta.values(), Fraction(0))
    certified_bound: Fraction | None = None
    certified_ok: bool | None = None
    note = ""
    if s > 2:
        certified_bound = 2 * s / (s - 2) * (sum_alpha - sum_beta)
        certified_ok = alg <= certified_bound
    else:
        note = "no certified bound: requires speed > 2"
    return DualBoundsReport(
        alg_cost=alg,
        sum_alpha=sum_alpha,
        sum_beta=sum_beta,
        alpha_covers_half=sum_alpha >= alg / 2,
        beta_within_speed=sum_beta <= alg / s,
        beta_identity=sum_beta == alg / s,
        certified_bound=certified_bound,
        certified_ok=certified_ok,
        note=note,
    )
