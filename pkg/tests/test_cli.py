"""End-to-end command-line behavior: exit codes, JSON/CSV output, determinism."""

from __future__ import annotations

import json

import pytest

from toposched.cli import main

from conftest import make_instance
from toposched import instance_to_json


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def lb4(tmp_path):
    path = tmp_path / "lb4.json"
    assert main(["gen", "lb", "--L", "4", "--variant", "t1", "-o", str(path)]) == 0
    return path


def test_gen_lb_writes_parseable_instance(capsys, lb4):
    data = json.loads(lb4.read_text())
    assert len(data["jobs"]) == 8
    assert data["nodes"][0] == {"id": "v1", "degree": 1}


def test_run_prints_metrics(capsys, lb4):
    code, out, _ = run_cli(
        capsys, "run", "--instance", str(lb4), "--algo", "hdf", "--speed", "1"
    )
    assert code == 0
    metrics = json.loads(out)
    assert metrics["weighted_flow"] == 22
    assert metrics["makespan"] == 9
    assert len(metrics["per_job"]) == 8


def test_run_rejects_zero_speed(capsys, lb4):
    code, _, err = run_cli(
        capsys, "run", "--instance", str(lb4), "--algo", "hdf", "--speed", "0"
    )
    assert code == 2
    assert "speed must be positive" in err


def test_run_rejects_float_speed(capsys, lb4):
    code, _, err = run_cli(
        capsys, "run", "--instance", str(lb4), "--algo", "hdf", "--speed", "1.5"
    )
    assert code == 2
    assert "rational" in err or "not a rational" in err


def test_run_is_byte_identical(capsys, lb4):
    one = run_cli(
        capsys, "run", "--instance", str(lb4), "--algo", "hdf", "--speed", "3"
    )
    two = run_cli(
        capsys, "run", "--instance", str(lb4), "--algo", "hdf", "--speed", "3"
    )
    assert one == two


def test_verify_schedule_happy_and_sad(capsys, tmp_path, lb4):
    sched = tmp_path / "s.json"
    code, _, _ = run_cli(
        capsys,
        "run",
        "--instance",
        str(lb4),
        "--algo",
        "release-greedy",
        "--speed",
        "1",
        "--emit-schedule",
        str(sched),
    )
    assert code == 0
    code, out, _ = run_cli(
        capsys, "verify", "schedule", "--instance", str(lb4), "--schedule", str(sched)
    )
    assert code == 0
    assert json.loads(out)["feasible"] is True

    # drop a slot so one job is left unfinished
    data = json.loads(sched.read_text())
    data["slots"] = data["slots"][:-1]
    sched.write_text(json.dumps(data))
    code, out, _ = run_cli(
        capsys, "verify", "schedule", "--instance", str(lb4), "--schedule", str(sched)
    )
    assert code == 1
    report = json.loads(out)
    assert report["feasible"] is False
    assert any("incomplete" in v for v in report["violations"])


def test_verify_dual_general_on_hdf_trace(capsys, tmp_path):
    inst = tmp_path / "u.json"
    sched = tmp_path / "s.json"
    assert (
        main(
            [
                "gen",
                "random",
                "--nodes",
                "4",
                "--jobs",
                "12",
                "--max-degree",
                "3",
                "--max-weight",
                "8",
                "--window",
                "3",
                "--seed",
                "905",
                "-o",
                str(inst),
            ]
        )
        == 0
    )
    code, _, _ = run_cli(
        capsys,
        "run",
        "--instance",
        str(inst),
        "--algo",
        "hdf",
        "--speed",
        "3",
        "--emit-schedule",
        str(sched),
    )
    assert code == 0
    code, out, _ = run_cli(
        capsys,
        "verify",
        "dual",
        "--instance",
        str(inst),
        "--schedule",
        str(sched),
        "--speed",
        "3",
        "--mode",
        "general",
    )
    assert code == 0
    report = json.loads(out)
    assert report["feasible"] is True
    assert report["bounds"]["beta_identity"] is True
    assert "certified_bound" in report["bounds"]


def test_verify_dual_speed_cross_check(capsys, tmp_path, lb4):
    sched = tmp_path / "s.json"
    run_cli(
        capsys,
        "run",
        "--instance",
        str(lb4),
        "--algo",
        "release-greedy",
        "--speed",
        "1",
        "--emit-schedule",
        str(sched),
    )
    code, _, err = run_cli(
        capsys,
        "verify",
        "dual",
        "--instance",
        str(lb4),
        "--schedule",
        str(sched),
        "--speed",
        "2",
        "--mode",
        "simple",
    )
    assert code == 2
    assert "disagrees" in err


def test_oracle_command(capsys, lb4):
    code, out, _ = run_cli(capsys, "oracle", "--instance", str(lb4))
    assert code == 0
    report = json.loads(out)
    assert report["cost"] == 14
    assert report["objective"] == "wflow"
    assert report["schedule"]["speed"] == 1


def test_oracle_size_cap_exit_code(capsys, tmp_path):
    inst = tmp_path / "big.json"
    main(
        [
            "gen",
            "random",
            "--nodes",
            "5",
            "--jobs",
            "9",
            "--seed",
            "1",
            "-o",
            str(inst),
        ]
    )
    code, _, err = run_cli(
        capsys, "oracle", "--instance", str(inst), "--max-jobs", "8"
    )
    assert code == 2
    assert "exceeds" in err


def test_transform_unit_and_mapping(capsys, tmp_path):
    inst = tmp_path / "g.json"
    inst.write_text(
        instance_to_json(
            make_instance([("u", 1), ("v", 1)], [("u", "v", 3, 2, 6)])
        )
    )
    reduced = tmp_path / "r.json"
    mapping = tmp_path / "m.json"
    code = main(
        [
            "transform",
            "unit",
            "--instance",
            str(inst),
            "-o",
            str(reduced),
            "--mapping",
            str(mapping),
        ]
    )
    assert code == 0
    rdata = json.loads(reduced.read_text())
    assert len(rdata["jobs"]) == 3
    assert json.loads(mapping.read_text()) == {"0": [0, 1, 2]}


def test_transform_stretch_roundtrip(capsys, tmp_path, lb4):
    fast = tmp_path / "fast.json"
    slow = tmp_path / "slow.json"
    run_cli(
        capsys,
        "run",
        "--instance",
        str(lb4),
        "--algo",
        "hdf",
        "--speed",
        "3",
        "--emit-schedule",
        str(fast),
    )
    code = main(
        ["transform", "stretch", "--schedule", str(fast), "--factor", "3", "-o", str(slow)]
    )
    assert code == 0
    code, out, _ = run_cli(
        capsys, "verify", "schedule", "--instance", str(lb4), "--schedule", str(slow)
    )
    assert code == 0


def test_experiment_lb_sweep_csv(capsys):
    code, out, _ = run_cli(capsys, "experiment", "lb-sweep", "--Ls", "4,16")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("L,variant,algo")
    assert len(lines) == 5
    assert lines[1].split(",")[0] == "4"


def test_experiment_lb_sweep_empty(capsys):
    code, out, _ = run_cli(capsys, "experiment", "lb-sweep", "--Ls", "")
    assert code == 0
    assert out.strip().splitlines() == ["L,variant,algo,speed,n_jobs,weighted_flow,opt_bound,ratio,check_backlog,check_opt_ub"]


def test_experiment_competitive_small(capsys):
    code, out, _ = run_cli(
        capsys, "experiment", "competitive", "--count", "5", "--seed", "3000"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 6
    assert all(line.endswith(",true") for line in lines[1:])


def test_missing_file_reports_path(capsys):
    code, _, err = run_cli(
        capsys, "run", "--instance", "nope.json", "--algo", "hdf", "--speed", "1"
    )
    assert code == 2
    assert "nope.json" in err


def test_unknown_subcommand_exits_two(capsys):
    assert main(["simulate"]) == 2


def test_emit_trace_writes_alive_sets(capsys, tmp_path, lb4):
    trace = tmp_path / "t.json"
    code, _, _ = run_cli(
        capsys,
        "run",
        "--instance",
        str(lb4),
        "--algo",
        "hdf",
        "--speed",
        "1",
        "--emit-trace",
        str(trace),
    )
    assert code == 0
    data = json.loads(trace.read_text())
    assert data["makespan"] == 9
    assert data["slots"][0]["t"] == 1
    assert data["slots"][0]["alive"] == [0, 1, 2, 3]
    assert data["arrival_peers"][0]["id"] == 0
