"""Wire-format parsing, validation, and exact-arithmetic sanity."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toposched import (
    InputError,
    Instance,
    Node,
    Request,
    format_rational,
    instance_to_json,
    parse_instance,
    parse_rational,
    parse_schedule,
    schedule_to_json,
    validate_instance,
)
from toposched.model import SlotAssignment, Schedule, requests_sharing_endpoint

from conftest import make_instance

MINIMAL = json.dumps(
    {
        "nodes": [{"id": "a", "degree": 1}, {"id": "b", "degree": 1}],
        "jobs": [
            {"id": 0, "src": "a", "dst": "b", "size": 1, "release": 0, "weight": "1"}
        ],
    }
)


def test_parse_minimal_instance():
    inst = parse_instance(MINIMAL)
    assert len(inst.nodes) == 2
    assert len(inst.requests) == 1
    assert inst.requests[0].weight == 1
    assert inst.degree_of("a") == 1


def test_self_loop_rejected():
    text = MINIMAL.replace('"dst": "b"', '"dst": "a"')
    with pytest.raises(InputError) as err:
        parse_instance(text)
    assert "src and dst must differ" in str(err.value)


def test_fractional_weight_stored_exactly():
    text = MINIMAL.replace('"weight": "1"', '"weight": "3/2"')
    inst = parse_instance(text)
    assert inst.requests[0].weight == Fraction(3, 2)


def test_validate_minimal_is_clean():
    assert validate_instance(parse_instance(MINIMAL)) == []


def test_validate_zero_degree():
    inst = make_instance([("a", 0), ("b", 1)], [("a", "b", 1, 0, 1)])
    problems = validate_instance(inst)
    assert any(">= 1" in p and "degree" in p for p in problems)


def test_validate_unknown_node():
    inst = make_instance([("a", 1), ("b", 1)], [("a", "z", 1, 0, 1)])
    problems = validate_instance(inst)
    assert any("unknown node" in p for p in problems)


def test_validate_catches_every_field():
    inst = Instance(
        nodes=(Node("a", 1), Node("a", 0)),
        requests=(
            Request(id=1, src="a", dst="a", size=0, release=-1, weight=Fraction(0)),
        ),
    )
    problems = validate_instance(inst)
    # one violation per broken field, all reported together
    assert len(problems) >= 6
    assert any("duplicate node" in p for p in problems)
    assert any("ids must be 0..n-1" in p for p in problems)


def test_parse_reports_all_violations_in_one_error():
    data = json.loads(MINIMAL)
    data["jobs"][0]["size"] = 0
    data["jobs"][0]["release"] = -2
    with pytest.raises(InputError) as err:
        parse_instance(json.dumps(data))
    assert "size" in str(err.value) and "release" in str(err.value)


def test_parse_rational_accepts_int_and_string():
    assert parse_rational(7) == 7
    assert parse_rational("7") == 7
    assert parse_rational("-3/6") == Fraction(-1, 2)


@pytest.mark.parametrize("bad", [1.5, True, "x/y", "1/0", None, [1]])
def test_parse_rational_rejects(bad):
    with pytest.raises(InputError):
        parse_rational(bad)


def test_format_rational_canonical():
    assert format_rational(Fraction(3)) == 3
    assert format_rational(Fraction(3, 2)) == "3/2"
    assert format_rational(Fraction(-4, 8)) == "-1/2"


def test_missing_field_paths():
    with pytest.raises(InputError) as err:
        parse_instance('{"nodes": []}')
    assert "jobs" in str(err.value)
    with pytest.raises(InputError) as err:
        parse_instance('{"nodes": [{"id": "a"}], "jobs": []}')
    assert "nodes[0].degree" in str(err.value)


def test_float_fields_rejected():
    text = MINIMAL.replace('"size": 1', '"size": 1.0')
    with pytest.raises(InputError):
        parse_instance(text)


def test_malformed_json_rejected():
    with pytest.raises(InputError) as err:
        parse_instance("{nope")
    assert "malformed JSON" in str(err.value)


def test_instance_round_trip():
    inst = parse_instance(MINIMAL)
    again = parse_instance(instance_to_json(inst))
    assert again == inst


def test_parallel_requests_allowed():
    inst = make_instance(
        [("a", 1), ("b", 1)],
        [("a", "b", 1, 0, 1), ("a", "b", 2, 1, "3/2")],
    )
    assert validate_instance(inst) == []
    assert parse_instance(instance_to_json(inst)) == inst


names = st.sampled_from(["a", "b", "c", "d"])


@st.composite
def instances(draw):
    node_ids = draw(st.lists(names, min_size=2, max_size=4, unique=True))
    nodes = [(n, draw(st.integers(1, 3))) for n in node_ids]
    jobs = []
    for _ in range(draw(st.integers(1, 6))):
        src = draw(st.sampled_from(node_ids))
        dst = draw(st.sampled_from([n for n in node_ids if n != src]))
        weight = Fraction(draw(st.integers(1, 9)), draw(st.integers(1, 9)))
        jobs.append(
            (src, dst, draw(st.integers(1, 5)), draw(st.integers(0, 9)), weight)
        )
    return make_instance(nodes, jobs)


@given(instances())
def test_round_trip_is_identity(inst):
    assert parse_instance(instance_to_json(inst)) == inst


rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
)


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_schedule_round_trip():
    sched = Schedule(
        speed=Fraction(5, 2),
        slots=(
            SlotAssignment(slot=0, rates={0: Fraction(1), 1: Fraction(3, 2)}),
            SlotAssignment(slot=4, rates={1: Fraction(1, 2)}),
        ),
    )
    assert parse_schedule(schedule_to_json(sched)) == sched


def test_parse_schedule_rejects_bad_shapes():
    with pytest.raises(InputError):
        parse_schedule('{"speed": 0, "slots": []}')
    with pytest.raises(InputError):
        parse_schedule('{"speed": 1, "slots": [{"t": -1, "rates": {}}]}')
    ooo = '{"speed": 1, "slots": [{"t": 3, "rates": {}}, {"t": 3, "rates": {}}]}'
    with pytest.raises(InputError) as err:
        parse_schedule(ooo)
    assert "strictly increasing" in str(err.value)
    with pytest.raises(InputError):
        parse_schedule('{"speed": 1, "slots": [{"t": 0, "rates": {"x": 1}}]}')
    with pytest.raises(InputError):
        parse_schedule('{"speed": 1, "slots": [{"t": 0, "rates": {"0": 0}}]}')


def test_requests_sharing_endpoint():
    inst = make_instance(
        [("a", 1), ("b", 1), ("c", 1)],
        [("a", "b", 1, 0, 1), ("b", "c", 1, 0, 1), ("a", "c", 1, 0, 1)],
    )
    hits = requests_sharing_endpoint(inst.requests, "b")
    assert [r.id for r in hits] == [0, 1]
