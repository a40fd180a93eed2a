"""Domain types and JSON wire formats.

Everything that enters an objective or a dual certificate is an exact
rational (fractions.Fraction). Sizes, releases, and slot indices are
integers; weights and rates may be proper fractions. Floats are
rejected at the boundary so exactness cannot silently degrade.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping

Rational = Fraction


class InputError(ValueError):
    """Malformed or invalid input; `path` names the offending field."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


def parse_rational(value: Any, path: str = "value") -> Fraction:
    """Parse an exact rational from an int or a "p/q" / "p" string."""
    if isinstance(value, bool):
        raise InputError(path, "expected an integer or 'p/q' string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InputError(path, "floats are not accepted; use 'p/q'")
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            if not sep:
                return Fraction(int(num))
            return Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError):
            raise InputError(path, f"not a rational: {value!r}") from None
    raise InputError(path, "expected an integer or 'p/q' string")


def format_rational(q: Fraction) -> int | str:
    """Render canonically: a JSON integer when integral, else "p/q"."""
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Node:
    """A network endpoint with its per-slot degree bound."""

    id: str
    degree_bound: int


@dataclass(frozen=True)
class Request:
    """One transfer: `size` units between two nodes, available from `release`."""

    id: int
    src: str
    dst: str
    size: int
    release: int
    weight: Fraction

    @property
    def density(self) -> Fraction:
        return self.weight / self.size


@dataclass(frozen=True)
class Instance:
    nodes: tuple[Node, ...]
    requests: tuple[Request, ...]
    _degree: dict[str, int] = field(init=False, repr=False, compare=False)
    _by_id: dict[int, Request] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_degree", {n.id: n.degree_bound for n in self.nodes})
        object.__setattr__(self, "_by_id", {r.id: r for r in self.requests})

    def degree_of(self, node_id: str) -> int:
        return self._degree[node_id]

    def request(self, job_id: int) -> Request:
        return self._by_id[job_id]

    def has_request(self, job_id: int) -> bool:
        return job_id in self._by_id

    @property
    def total_size(self) -> int:
        return sum(r.size for r in self.requests)

    @property
    def max_release(self) -> int:
        return max((r.release for r in self.requests), default=0)


@dataclass(frozen=True)
class SlotAssignment:
    """Rates granted in one slot; zero-rate entries are omitted."""

    slot: int
    rates: Mapping[int, Fraction]


@dataclass(frozen=True)
class Schedule:
    """An executed or proposed run: the speed factor and the nonempty slots."""

    speed: Fraction
    slots: tuple[SlotAssignment, ...]


def validate_instance(inst: Instance) -> list[str]:
    """Return every structural violation (empty list means valid)."""
    problems: list[str] = []
    seen_nodes: set[str] = set()
    for k, node in enumerate(inst.nodes):
        if node.id in seen_nodes:
            problems.append(f"nodes[{k}].id: duplicate node id {node.id!r}")
        seen_nodes.add(node.id)
        if node.degree_bound < 1:
            problems.append(f"nodes[{k}].degree: must be >= 1, got {node.degree_bound}")
    expected_id = 0
    for k, req in enumerate(inst.requests):
        where = f"jobs[{k}]"
        if req.id != expected_id:
            problems.append(f"{where}.id: ids must be 0..n-1 in order, got {req.id}")
        expected_id += 1
        if req.src not in seen_nodes:
            problems.append(f"{where}.src: unknown node id {req.src!r}")
        if req.dst not in seen_nodes:
            problems.append(f"{where}.dst: unknown node id {req.dst!r}")
        if req.src == req.dst:
            problems.append(f"{where}.dst: src and dst must differ")
        if req.size < 1:
            problems.append(f"{where}.size: must be >= 1, got {req.size}")
        if req.release < 0:
            problems.append(f"{where}.release: must be >= 0, got {req.release}")
        if req.weight <= 0:
            problems.append(f"{where}.weight: must be > 0")
    return problems


def _require(data: Any, key: str, kind: type, path: str) -> Any:
    if not isinstance(data, dict):
        raise InputError(path, "expected an object")
    if key not in data:
        raise InputError(f"{path}.{key}", "missing field")
    value = data[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise InputError(f"{path}.{key}", "expected an integer")
    if kind is not int and not isinstance(value, kind):
        raise InputError(f"{path}.{key}", f"expected {kind.__name__}")
    return value


def _parse_json(text: str | bytes, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(what, f"malformed JSON: {exc}") from None


def parse_instance(text: str | bytes) -> Instance:
    """Parse and validate the instance wire format; raise InputError on any defect."""
    data = _parse_json(text, "instance")
    nodes_raw = _require(data, "nodes", list, "instance")
    jobs_raw = _require(data, "jobs", list, "instance")
    nodes = tuple(
        Node(
            id=_require(n, "id", str, f"nodes[{k}]"),
            degree_bound=_require(n, "degree", int, f"nodes[{k}]"),
        )
        for k, n in enumerate(nodes_raw)
    )
    requests = []
    for k, j in enumerate(jobs_raw):
        where = f"jobs[{k}]"
        requests.append(
            Request(
                id=_require(j, "id", int, where),
                src=_require(j, "src", str, where),
                dst=_require(j, "dst", str, where),
                size=_require(j, "size", int, where),
                release=_require(j, "release", int, where),
                weight=parse_rational(
                    _require(j, "weight", object, where), f"{where}.weight"
                ),
            )
        )
    inst = Instance(nodes=nodes, requests=tuple(requests))
    problems = validate_instance(inst)
    if problems:
        first_path = problems[0].split(":", 1)[0]
        raise InputError(first_path, "; ".join(problems))
    return inst


def instance_to_json(inst: Instance) -> str:
    data = {
        "nodes": [{"id": n.id, "degree": n.degree_bound} for n in inst.nodes],
        "jobs": [
            {
                "id": r.id,
                "src": r.src,
                "dst": r.dst,
                "size": r.size,
                "release": r.release,
                "weight": format_rational(r.weight),
            }
            for r in inst.requests
        ],
    }
    return json.dumps(data, indent=2)


def parse_schedule(text: str | bytes) -> Schedule:
    """Parse the schedule wire format; shape errors raise InputError."""
    data = _parse_json(text, "schedule")
    speed = parse_rational(_require(data, "speed", object, "schedule"), "schedule.speed")
    if speed <= 0:
        raise InputError("schedule.speed", "speed must be positive")
    slots_raw = _require(data, "slots", list, "schedule")
    slots: list[SlotAssignment] = []
    prev_t = -1
    for k, entry in enumerate(slots_raw):
        where = f"slots[{k}]"
        t = _require(entry, "t", int, where)
        if t < 0:
            raise InputError(f"{where}.t", "slot index must be >= 0")
        if t <= prev_t:
            raise InputError(f"{where}.t", "slot indices must be strictly increasing")
        prev_t = t
        rates_raw = _require(entry, "rates", dict, where)
        rates: dict[int, Fraction] = {}
        for key, raw in rates_raw.items():
            rpath = f"{where}.rates[{key!r}]"
            try:
                job_id = int(key)
            except ValueError:
                raise InputError(rpath, "job id key must be an integer") from None
            rate = parse_rational(raw, rpath)
            if rate <= 0:
                raise InputError(rpath, "rates must be strictly positive")
            if job_id in rates:
                raise InputError(rpath, "duplicate job id")
            rates[job_id] = rate
        slots.append(SlotAssignment(slot=t, rates=rates))
    return Schedule(speed=speed, slots=tuple(slots))


def schedule_to_json(sched: Schedule) -> str:
    data = {
        "speed": format_rational(sched.speed),
        "slots": [
            {
                "t": a.slot,
                "rates": {
                    str(job): format_rational(rate)
                    for job, rate in sorted(a.rates.items())
                },
            }
            for a in sched.slots
        ],
    }
    return json.dumps(data, indent=2)


def requests_sharing_endpoint(requests: Iterable[Request], node_id: str) -> list[Request]:
    """All requests incident to `node_id` (parallel transfers count separately)."""
    return [r for r in requests if r.src == node_id or r.dst == node_id]
