"""Exact optima for small unit-size instances, plus the hand-built
near-optimal schedule for the lower-bound family.

The brute-force search runs at speed 1 with integral assignments and
considers, per slot, every maximal set of alive jobs that respects the
degree bounds. Restricting to maximal sets loses nothing for unit
sizes: finishing a job earlier never hurts either objective.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .model import Instance, Schedule, SlotAssignment

DEFAULT_MAX_JOBS = 8

_ONE = Fraction(1)


class OracleSizeError(ValueError):
    """Instance too large for exhaustive search."""


def brute_force_opt(
    inst: Instance,
    objective: str = "wflow",
    horizon: int | None = None,
    max_jobs: int = DEFAULT_MAX_JOBS,
) -> tuple[Fraction, Schedule]:
    """Minimum cost over all speed-1 integral schedules, with a witness.

    `objective` is "wflow" (weighted flow time) or "wcompletion"
    (weighted completion time). Memoized on (slot, completed set).
    """
    if objective not in ("wflow", "wcompletion"):
        raise ValueError(f"unknown objective {objective!r}")
    n = len(inst.requests)
    if n > max_jobs:
        raise OracleSizeError(f"{n} jobs exceeds the exhaustive-search cap {max_jobs}")
    for req in inst.requests:
        if req.size != 1:
            raise ValueError(f"oracle requires unit sizes (job {req.id})")
    if n == 0:
        return Fraction(0), Schedule(speed=_ONE, slots=())
    if horizon is None:
        horizon = inst.max_release + n
    reqs = inst.requests
    releases = sorted(r.release for r in reqs)
    all_done = (1 << n) - 1
    memo: dict[tuple[int, int], tuple[Fraction, int]] = {}

    def job_cost(i: int, slot: int) -> Fraction:
        req = reqs[i]
        if objective == "wflow":
            return req.weight * (slot + 1 - req.release)
        return req.weight * (slot + 1)

    def next_release(t: int, done: int) -> int:
        pending = min(
            (r.release for r in reqs if not (done >> r.id) & 1 and r.release > t),
            default=-1,
        )
        return pending

    def maximal_sets(alive: list[int]) -> list[int]:
        loads: dict[str, int] = {}
        feasible: list[int] = []
        k = len(alive)
        for mask in range(1, 1 << k):
            loads.clear()
            ok = True
            for b in range(k):
                if (mask >> b) & 1:
                    req = reqs[alive[b]]
                    for v in (req.src, req.dst):
                        loads[v] = loads.get(v, 0) + 1
                        if loads[v] > inst.degree_of(v):
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                feasible.append(mask)
        feasible_set = set(feasible)
        result = []
        for mask in feasible:
            maximal = True
            for b in range(k):
                if not (mask >> b) & 1 and (mask | (1 << b)) in feasible_set:
                    maximal = False
                    break
            if maximal:
                result.append(mask)
        return result

    def solve(t: int, done: int) -> Fraction:
        if done == all_done:
            return Fraction(0)
        alive = [r.id for r in reqs if not (done >> r.id) & 1 and r.release <= t]
        if not alive:
            nxt = next_release(t, done)
            assert nxt >= 0
            return solve(nxt, done)
        key = (t, done)
        if key in memo:
            return memo[key][0]
        assert t <= horizon, "exhaustive search ran past its horizon"
        best_cost: Fraction | None = None
        best_mask = 0
        for mask in maximal_sets(alive):
            cost = Fraction(0)
            new_done = done
            for b, job in enumerate(alive):
                if (mask >> b) & 1:
                    cost += job_cost(job, t)
                    new_done |= 1 << job
            cost += solve(t + 1, new_done)
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_mask = mask
        assert best_cost is not None
        memo[key] = (best_cost, best_mask)
        return best_cost

    cost = solve(min(releases), 0)

    # Reconstruct the witness by replaying the memoized choices.
    slots: list[SlotAssignment] = []
    t, done = min(releases), 0
    while done != all_done:
        alive = [r.id for r in reqs if not (done >> r.id) & 1 and r.release <= t]
        if not alive:
            t = next_release(t, done)
            continue
        mask = memo[(t, done)][1]
        rates = {}
        for b, job in enumerate(alive):
            if (mask >> b) & 1:
                rates[job] = _ONE
                done |= 1 << job
        slots.append(SlotAssignment(slot=t, rates=rates))
        t += 1
    return cost, Schedule(speed=_ONE, slots=tuple(slots))


def explicit_lb_opt_schedule(L: int, variant: str) -> Schedule:
    """The hand-built speed-1 schedule for gen_lower_bound(L, variant).

    Serves the delayed batch first, then overlaps the other early batch
    with the stream, then the stream rides alone; total weighted flow is
    3L + sqrt(L) <= 4L.
    """
    root = math.isqrt(L)
    if root * root != L or L < 4:
        raise ValueError(f"L must be a perfect square >= 4, got {L}")
    if variant not in ("t1", "t2"):
        raise ValueError(f"variant must be 't1' or 't2', got {variant!r}")
    # Ids follow the generator: the early batch sharing an endpoint with
    # the stream is served in slots 1..root, the other early batch rides
    # alongside the first root stream jobs, the rest run on release.
    first_batch = range(root, 2 * root) if variant == "t1" else range(root)
    second_batch = range(root) if variant == "t1" else range(root, 2 * root)
    stream = range(2 * root, 2 * root + L)
    slots = []
    for k, job in enumerate(first_batch):
        slots.append(SlotAssignment(slot=1 + k, rates={job: _ONE}))
    for k, (job, stream_job) in enumerate(zip(second_batch, stream)):
        slots.append(
            SlotAssignment(slot=root + 1 + k, rates={job: _ONE, stream_job: _ONE})
        )
    for k, job in enumerate(list(stream)[root:], start=root):
        slots.append(SlotAssignment(slot=root + 1 + k, rates={job: _ONE}))
    return Schedule(speed=_ONE, slots=tuple(slots))
