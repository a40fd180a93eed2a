"""Slot simulation, schedule verification, and objective computation.

The simulator advances one slot at a time. In each slot the policy is
shown the alive jobs (released, not yet finished) and returns the rates
for that slot; rates drain remaining sizes, and a job finishing in slot
t gets completion C = t + 1, so it is in the system over [release, C).

Two execution paths produce bit-identical schedules: a generic loop
that calls the policy's step function with exact Fractions, and a
compiled scaled-integer kernel for the built-in policies. The kernel is
selected at import when available (set TOPOSCHED_PURE=1 to refuse it).
"""

from __future__ import annotations

import os
from array import array
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .model import Instance, Schedule, SlotAssignment, format_rational
from .schedulers import POLICIES, PRIORITY_ORDERS, PolicyStep

try:
    from . import _kernel
except ImportError:
    _kernel = None

if os.environ.get("TOPOSCHED_PURE", "0") not in ("", "0"):
    _kernel = None

# Scaled int64 values must stay below this for the kernel to be exact.
_KERNEL_LIMIT = 1 << 62


class SchedulerContractError(RuntimeError):
    """A policy step emitted an infeasible assignment (a bug, not bad input)."""


class SimulationLimitError(RuntimeError):
    """The slot loop ran past its horizon bound (a bug, not bad input)."""


@dataclass(frozen=True)
class SystemState:
    """What a policy sees at the start of a slot."""

    slot: int
    remaining: Mapping[int, Fraction]
    alive: frozenset[int]


@dataclass(frozen=True)
class Metrics:
    """Exact objective values for one completed schedule."""

    completion: dict[int, int]
    weighted_flow: Fraction
    fractional_flow: Fraction
    weighted_completion: Fraction
    makespan: int


@dataclass(frozen=True)
class ScheduleViolation:
    kind: str
    subject: str
    slot: int | None
    amount: Fraction

    def __str__(self) -> str:
        at = "at end" if self.slot is None else f"at slot {self.slot}"
        return f"{self.kind}: {self.subject} {at}, amount {format_rational(self.amount)}"


def kernel_available() -> bool:
    """True when the compiled slot loop was imported and not disabled."""
    return _kernel is not None


def simulation_horizon(inst: Instance, speed: Fraction) -> int:
    """Upper bound on slots any work-conserving run can need.

    Every positive rate is at least 1/den(speed), so each nonempty slot
    drains at least that much of the total size.
    """
    return inst.max_release + speed.denominator * inst.total_size + 1


def simulate(
    inst: Instance,
    scheduler: str | PolicyStep,
    speed: Fraction | int,
    use_kernel: bool | None = None,
) -> tuple[Schedule, Metrics]:
    """Run a policy to completion; returns the schedule and its metrics.

    `scheduler` is a built-in policy name or a step callable. With
    use_kernel=None the compiled path is used when it applies; True
    demands it (raising if impossible), False forces the pure loop.
    """
    speed = Fraction(speed)
    if speed <= 0:
        raise ValueError("speed must be positive")
    order_fn: Callable[[Instance], list[int]] | None = None
    if isinstance(scheduler, str):
        if scheduler not in POLICIES:
            raise ValueError(f"unknown policy {scheduler!r}")
        step = POLICIES[scheduler]
        order_fn = PRIORITY_ORDERS[scheduler]
    else:
        step = scheduler

    if use_kernel is None:
        use_kernel = (
            _kernel is not None and order_fn is not None and _kernel_fits(inst, speed)
        )
    if use_kernel:
        if _kernel is None:
            raise RuntimeError("compiled kernel is not available")
        if order_fn is None:
            raise RuntimeError("compiled kernel only runs the built-in policies")
        if not _kernel_fits(inst, speed):
            raise RuntimeError("instance exceeds the compiled kernel's integer range")
        sched = _run_kernel(inst, order_fn(inst), speed)
    else:
        sched = _run_steps(inst, step, speed)
    return sched, compute_metrics(inst, sched)


def _kernel_fits(inst: Instance, speed: Fraction) -> bool:
    if not inst.requests:
        return True
    max_degree = max(n.degree_bound for n in inst.nodes) if inst.nodes else 0
    max_size = max(r.size for r in inst.requests)
    return (
        speed.numerator * max_degree < _KERNEL_LIMIT
        and max_size * speed.denominator < _KERNEL_LIMIT
        and simulation_horizon(inst, speed) < _KERNEL_LIMIT
    )


def _run_kernel(inst: Instance, order: list[int], speed: Fraction) -> Schedule:
    node_index = {n.id: k for k, n in enumerate(inst.nodes)}
    reqs = inst.requests
    src = array("q", (node_index[r.src] for r in reqs))
    dst = array("q", (node_index[r.dst] for r in reqs))
    size_scaled = array("q", (r.size * speed.denominator for r in reqs))
    release = array("q", (r.release for r in reqs))
    order_arr = array("q", order)
    by_release = array("q", sorted(range(len(reqs)), key=lambda i: reqs[i].release))
    caps = array("q", (speed.numerator * n.degree_bound for n in inst.nodes))
    if not reqs:
        return Schedule(speed=speed, slots=())
    raw_slots, _completions = _kernel.run_slots(
        src, dst, size_scaled, release, order_arr, by_release, caps,
        simulation_horizon(inst, speed),
    )
    den = speed.denominator
    slots = tuple(
        SlotAssignment(slot=t, rates={job: Fraction(num, den) for job, num in entries})
        for t, entries in raw_slots
    )
    return Schedule(speed=speed, slots=slots)


def _run_steps(inst: Instance, step: PolicyStep, speed: Fraction) -> Schedule:
    remaining: dict[int, Fraction] = {r.id: Fraction(r.size) for r in inst.requests}
    by_release = sorted(inst.requests, key=lambda r: r.release)
    horizon = simulation_horizon(inst, speed)
    alive: set[int] = set()
    slots: list[SlotAssignment] = []
    done = 0
    ptr = 0
    t = 0
    n = len(inst.requests)
    while done < n:
        while ptr < n and by_release[ptr].release <= t:
            alive.add(by_release[ptr].id)
            ptr += 1
        if not alive:
            t = by_release[ptr].release
            continue
        state = SystemState(slot=t, remaining=dict(remaining), alive=frozenset(alive))
        assignment = step(state, inst, speed)
        _check_assignment(assignment, state, inst, speed)
        for job, rate in assignment.rates.items():
            remaining[job] -= rate
            if remaining[job] == 0:
                alive.remove(job)
                done += 1
        if assignment.rates:
            slots.append(assignment)
        t += 1
        if t > horizon:
            raise SimulationLimitError(f"run exceeded horizon bound {horizon}")
    return Schedule(speed=speed, slots=tuple(slots))


def _check_assignment(
    assignment: SlotAssignment, state: SystemState, inst: Instance, speed: Fraction
) -> None:
    if assignment.slot != state.slot:
        raise SchedulerContractError(
            f"step returned slot {assignment.slot}, expected {state.slot}"
        )
    load: dict[str, Fraction] = {}
    for job, rate in assignment.rates.items():
        if job not in state.alive:
            raise SchedulerContractError(f"rate for job {job} which is not alive")
        if rate <= 0:
            raise SchedulerContractError(f"non-positive rate for job {job}")
        if rate > state.remaining[job]:
            raise SchedulerContractError(f"job {job} overprocessed in slot {state.slot}")
        req = inst.request(job)
        load[req.src] = load.get(req.src, Fraction(0)) + rate
        load[req.dst] = load.get(req.dst, Fraction(0)) + rate
    for node, total in load.items():
        if total > speed * inst.degree_of(node):
            raise SchedulerContractError(
                f"node {node} over capacity in slot {state.slot}"
            )


def verify_schedule(inst: Instance, sched: Schedule) -> list[ScheduleViolation]:
    """Check a schedule against an instance; empty list means feasible.

    Checked per slot: node loads within speed * degree bound, no rate
    before release, no cumulative overshoot. Checked at the end: every
    job fully processed.
    """
    violations: list[ScheduleViolation] = []
    cum: dict[int, Fraction] = {r.id: Fraction(0) for r in inst.requests}
    over_flagged: set[int] = set()
    for a in sched.slots:
        load: dict[str, Fraction] = {}
        for job, rate in sorted(a.rates.items()):
            if not inst.has_request(job):
                violations.append(
                    ScheduleViolation("unknown-job", f"job {job}", a.slot, rate)
                )
                continue
            req = inst.request(job)
            if a.slot < req.release:
                violations.append(
                    ScheduleViolation("early", f"job {job}", a.slot, rate)
                )
            cum[job] += rate
            if cum[job] > req.size and job not in over_flagged:
                over_flagged.add(job)
                violations.append(
                    ScheduleViolation(
                        "overprocessed", f"job {job}", a.slot, cum[job] - req.size
                    )
                )
            load[req.src] = load.get(req.src, Fraction(0)) + rate
            load[req.dst] = load.get(req.dst, Fraction(0)) + rate
        for node in sorted(load):
            cap = sched.speed * inst.degree_of(node)
            if load[node] > cap:
                violations.append(
                    ScheduleViolation(
                        "capacity", f"node {node}", a.slot, load[node] - cap
                    )
                )
    for req in inst.requests:
        if cum[req.id] < req.size and req.id not in over_flagged:
            violations.append(
                ScheduleViolation(
                    "incomplete", f"job {req.id}", None, req.size - cum[req.id]
                )
            )
    return violations


def schedule_events(sched: Schedule) -> dict[int, list[tuple[int, Fraction]]]:
    """Per-job (slot, rate) events in slot order."""
    events: dict[int, list[tuple[int, Fraction]]] = {}
    for a in sched.slots:
        for job, rate in a.rates.items():
            events.setdefault(job, []).append((a.slot, rate))
    return events


def compute_metrics(inst: Instance, sched: Schedule) -> Metrics:
    """Exact objectives for a complete schedule.

    The fractional objective charges each alive slot the weight scaled
    by the fraction of the job still unprocessed at the slot's start.
    """
    events = schedule_events(sched)
    completion: dict[int, int] = {}
    weighted_flow = Fraction(0)
    fractional_flow = Fraction(0)
    weighted_completion = Fraction(0)
    for req in inst.requests:
        job_events = events.get(req.id, [])
        remaining = Fraction(req.size)
        cursor = req.release
        alive_size_sum = Fraction(0)  # sum over alive slots of remaining-at-start
        for t, rate in job_events:
            if t < req.release:
                raise ValueError(f"job {req.id} processed before release")
            alive_size_sum += remaining * (t - cursor + 1)
            remaining -= rate
            cursor = t + 1
            if remaining < 0:
                raise ValueError(f"job {req.id} overprocessed")
        if remaining != 0:
            raise ValueError(f"schedule leaves job {req.id} incomplete")
        finished = job_events[-1][0] if job_events else req.release - 1
        completion[req.id] = finished + 1
        weighted_flow += req.weight * (completion[req.id] - req.release)
        weighted_completion += req.weight * completion[req.id]
        fractional_flow += req.weight * alive_size_sum / req.size
    makespan = max(completion.values(), default=0)
    return Metrics(
        completion=completion,
        weighted_flow=weighted_flow,
        fractional_flow=fractional_flow,
        weighted_completion=weighted_completion,
        makespan=makespan,
    )


def metrics_to_json_dict(inst: Instance, metrics: Metrics) -> dict:
    return {
        "weighted_flow": format_rational(metrics.weighted_flow),
        "fractional_flow": format_rational(metrics.fractional_flow),
        "weighted_completion": format_rational(metrics.weighted_completion),
        "makespan": metrics.makespan,
        "per_job": [
            {
                "id": req.id,
                "completion": metrics.completion[req.id],
                "flow": metrics.completion[req.id] - req.release,
            }
            for req in inst.requests
        ],
    }
