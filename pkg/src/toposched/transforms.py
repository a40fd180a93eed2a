"""Instance and schedule rewrites that preserve the objectives exactly.

`unit_reduction` splits every transfer into unit-size fragments whose
weights sum to the original, preserving density. Under a density-ordered
policy the fragments are served back to back, so the weighted flow of
the reduced instance equals the fractional flow of the original.

`stretch_schedule` trades speed for time: each slot of a speed-s run is
spread over k >= s unit-speed slots at 1/k of the rate, multiplying
every completion time by at most k.
"""

from __future__ import annotations

from fractions import Fraction

from .model import Instance, Request, Schedule, SlotAssignment


def unit_reduction(inst: Instance) -> tuple[Instance, dict[int, list[int]]]:
    """Split each job of size L into L unit jobs of weight w/L.

    Returns the reduced instance and a map from original job id to the
    (consecutive, arrival-ordered) fragment ids.
    """
    fragments: list[Request] = []
    mapping: dict[int, list[int]] = {}
    next_id = 0
    for req in inst.requests:
        ids = []
        fragment_weight = req.weight / req.size
        for _ in range(req.size):
            fragments.append(
                Request(
                    id=next_id,
                    src=req.src,
                    dst=req.dst,
                    size=1,
                    release=req.release,
                    weight=fragment_weight,
                )
            )
            ids.append(next_id)
            next_id += 1
        mapping[req.id] = ids
    return Instance(nodes=inst.nodes, requests=tuple(fragments)), mapping


def stretch_schedule(sched: Schedule, factor: int) -> Schedule:
    """Spread each slot over `factor` unit-speed slots at 1/factor rate.

    Requires an integer factor at least the schedule's speed, otherwise
    the stretched slots would exceed unit-speed capacity.
    """
    if not isinstance(factor, int) or isinstance(factor, bool) or factor < 1:
        raise ValueError(f"stretch factor must be a positive integer, got {factor!r}")
    if Fraction(factor) < sched.speed:
        raise ValueError(
            f"stretch factor {factor} is below the schedule speed "
            f"{sched.speed}; capacity would be exceeded"
        )
    slots: list[SlotAssignment] = []
    for a in sched.slots:
        split = {job: rate / factor for job, rate in a.rates.items()}
        for k in range(factor):
            slots.append(SlotAssignment(slot=a.slot * factor + k, rates=dict(split)))
    return Schedule(speed=Fraction(1), slots=tuple(slots))
