"""Per-slot scheduling policies.

Both built-in policies walk the alive jobs in a fixed priority order and
grant each the largest rate its endpoints still allow:

    rate = min(residual src capacity, residual dst capacity, remaining size)

`release-greedy` orders by (release, id); `hdf` orders by density
weight/size descending with ties broken by (release, id). Both orders
are total and static, so a whole run is deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Iterable

from .model import Instance, Request, SlotAssignment

if TYPE_CHECKING:
    from .engine import SystemState

PolicyStep = Callable[["SystemState", Instance, Fraction], SlotAssignment]


def release_greedy_key(req: Request) -> tuple:
    return (req.release, req.id)


def hdf_key(req: Request) -> tuple:
    # Fractions compare exactly; negate for descending density.
    return (-req.density, req.release, req.id)


def release_greedy_order(inst: Instance) -> list[int]:
    """Static priority order over all job ids for release-greedy."""
    return [r.id for r in sorted(inst.requests, key=release_greedy_key)]


def hdf_order(inst: Instance) -> list[int]:
    """Static priority order over all job ids for highest-density-first."""
    return [r.id for r in sorted(inst.requests, key=hdf_key)]


def saturating_assignment(
    ordered_jobs: Iterable[Request],
    remaining: dict[int, Fraction] | dict[int, int],
    inst: Instance,
    speed: Fraction,
    slot: int,
) -> SlotAssignment:
    """Grant rates greedily in the given order until endpoints saturate."""
    residual: dict[str, Fraction] = {}
    rates: dict[int, Fraction] = {}
    for req in ordered_jobs:
        for v in (req.src, req.dst):
            if v not in residual:
                residual[v] = speed * inst.degree_of(v)
        rate = min(residual[req.src], residual[req.dst], Fraction(remaining[req.id]))
        if rate > 0:
            rates[req.id] = rate
            residual[req.src] -= rate
            residual[req.dst] -= rate
    return SlotAssignment(slot=slot, rates=rates)


def _step(key: Callable[[Request], tuple], state: "SystemState", inst: Instance, speed: Fraction) -> SlotAssignment:
    alive = sorted((inst.request(i) for i in state.alive), key=key)
    return saturating_assignment(alive, state.remaining, inst, speed, state.slot)


def release_greedy_step(state: "SystemState", inst: Instance, speed: Fraction) -> SlotAssignment:
    """One slot of the release-order greedy policy."""
    return _step(release_greedy_key, state, inst, speed)


def hdf_step(state: "SystemState", inst: Instance, speed: Fraction) -> SlotAssignment:
    """One slot of the highest-density-first policy."""
    return _step(hdf_key, state, inst, speed)


POLICIES: dict[str, PolicyStep] = {
    "release-greedy": release_greedy_step,
    "hdf": hdf_step,
}

PRIORITY_ORDERS: dict[str, Callable[[Instance], list[int]]] = {
    "release-greedy": release_greedy_order,
    "hdf": hdf_order,
}
