"""Tests for the moyal-lab command line: parsing, exit codes and artifacts."""

import csv
import json
import logging

import pytest

from moyal_lab.cli.commands import all_commands
from moyal_lab.cli.commands.sweep import parse_fixed, parse_range
from moyal_lab.cli.main import main
from moyal_lab.diagnostics import DiagnosticsCollector
from moyal_lab.errors import DomainError

BUBBLE = "v: a+ b- c+ d-\nv: e+ f- g+ h-\ne: c f\ne: d e\n"


def _read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


# ---------------------------------------------------------------------------
# Registry and parsing
# ---------------------------------------------------------------------------

def test_every_subcommand_registered():
    names = {c.name for c in all_commands()}
    assert names == {"vacuum-scalar", "vacuum-gauge", "effective-action", "ribbon", "eps-check", "sweep", "verify"}


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["warp-drive"]) == 3
    assert "usage:" in capsys.readouterr().err


def test_missing_required_flag(out_dir):
    assert main(["vacuum-scalar", "--mu2", "24"]) == 3


def test_bad_log_level(out_dir):
    assert main(["vacuum-scalar", "--mu2", "24", "--lambda", "1", "--log-level", "chatty"]) == 3


def test_unknown_tolerance(out_dir):
    assert main(["vacuum-scalar", "--mu2", "24", "--lambda", "1", "--tolerance", "nonsense=1"]) == 3


# ---------------------------------------------------------------------------
# Artifacts
# ---------------------------------------------------------------------------

def test_vacuum_scalar_writes_csv_and_json(tmp_path):
    out = tmp_path / "vac.csv"
    assert main(["vacuum-scalar", "--mu2", "24", "--lambda", "1", "--out", str(out)]) == 0

    rows = _read_csv(out)
    assert rows[0] == ["k", "a_k"]
    assert len(rows) == 4
    assert float(rows[1][1]) ** 2 == pytest.approx(5.0)

    doc = json.loads(out.with_suffix(".json").read_text())
    assert doc["command"] == "vacuum-scalar"
    assert doc["parameters"]["lambda"] == 1.0
    assert doc["result"]["p"] == 2
    assert "diagnostics" in doc


def test_default_output_dir(out_dir):
    assert main(["vacuum-scalar", "--mu2", "24", "--lambda", "1"]) == 0
    assert (out_dir / "vacuum-scalar.csv").exists()
    assert (out_dir / "vacuum-scalar.json").exists()


def test_json_output_embeds_table(tmp_path):
    out = tmp_path / "vac.json"
    assert main(["vacuum-scalar", "--mu2", "24", "--lambda", "1", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["table"]["header"] == ["k", "a_k"]
    assert len(doc["table"]["rows"]) == 3
    assert not (tmp_path / "vac.csv").exists()


def test_identical_runs_give_identical_bytes(tmp_path):
    for name in ("a", "b"):
        assert main(["vacuum-scalar", "--mu2", "24", "--lambda", "1", "--out", str(tmp_path / f"{name}.csv")]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def test_ribbon_topology(tmp_path):
    graph = tmp_path / "bubble.txt"
    graph.write_text(BUBBLE)
    out = tmp_path / "bubble.json"
    assert main(["ribbon", "--in", str(graph), "--out", str(out)]) == 0
    result = json.loads(out.read_text())["result"]
    assert (result["F"], result["B"], result["g"]) == (2, 1, 0)
    assert result["d_c"] == 0
    assert result["orientability"] is True


def test_ribbon_missing_file(tmp_path):
    assert main(["ribbon", "--in", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "r.json")]) == 3


def test_config_file_with_flag_override(tmp_path):
    graph = tmp_path / "bubble.txt"
    graph.write_text(BUBBLE)
    cfg = tmp_path / "run.cfg"
    out = tmp_path / "from-config.json"
    cfg.write_text(f"# ribbon run\nin = {graph}\ndim = 4\nout = {out}\ntolerance.exact = 1e-9\n")
    assert main(["ribbon", "--config", str(cfg), "--dim", "2"]) == 0
    doc = json.loads(out.read_text())
    assert doc["parameters"]["dim"] == 2
    assert doc["result"]["d_c"] == -2


def test_config_file_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("in = x.txt\nflavour = strange\n")
    assert main(["ribbon", "--config", str(cfg), "--out", str(tmp_path / "r.json")]) == 3


def test_eps_check_fine_pauli(tmp_path):
    table = tmp_path / "eps.json"
    table.write_text(json.dumps({"table": [[1, -1], [-1, 1]]}))
    out = tmp_path / "eps-out.json"
    assert main(["eps-check", "--group", "Z2xZ2", "--eps-table", str(table), "--fine", "--out", str(out)]) == 0
    result = json.loads(out.read_text())["result"]
    assert result["validation"]["valid"] is True
    assert result["algebra"]["kind"] == "fine"
    assert "factor_set" in result


def test_eps_check_invalid_table(tmp_path):
    table = tmp_path / "eps.json"
    table.write_text(json.dumps([[-1]]))
    out = tmp_path / "eps-out.json"
    assert main(["eps-check", "--group", "Z3", "--eps-table", str(table), "--out", str(out)]) == 3
    result = json.loads(out.read_text())["result"]
    assert result["validation"]["valid"] is False
    assert result["validation"]["violations"]


def test_eps_check_exclusive_flags(tmp_path):
    table = tmp_path / "eps.json"
    table.write_text("[[-1]]")
    phi = tmp_path / "phi.json"
    phi.write_text("[0, 1]")
    argv = ["eps-check", "--group", "Z2", "--eps-table", str(table), "--fine", "--elementary", str(phi)]
    assert main(argv + ["--out", str(tmp_path / "x.json")]) == 3


def test_eps_check_super_elementary(tmp_path):
    table = tmp_path / "eps.json"
    table.write_text("[[-1]]")
    phi = tmp_path / "phi.json"
    phi.write_text("[0, 0, 1]")
    out = tmp_path / "super.json"
    assert main(["eps-check", "--group", "Z2", "--eps-table", str(table), "--elementary", str(phi),
                 "--out", str(out)]) == 0
    algebra = json.loads(out.read_text())["result"]["algebra"]
    assert algebra["size"] == 3
    assert len(algebra["center"]) == 1
    assert algebra["trace_of_unit"] == [1.0, 0.0]


def test_sweep_empty_range(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--target", "effective-action", "--x", "omega2=0.5:0.2:0.1", "--out", str(out)]) == 0
    rows = _read_csv(out)
    assert rows[0][:3] == ["omega2", "m2", "theta"]
    assert len(rows) == 1


def test_sweep_effective_action_grid(tmp_path):
    out = tmp_path / "sweep.csv"
    argv = ["sweep", "--target", "effective-action", "--x", "omega2=0.2:1.0:0.2", "--fixed", "theta=2",
            "--workers", "2", "--out", str(out)]
    assert main(argv) == 0
    rows = _read_csv(out)
    assert len(rows) == 6
    assert [float(r[0]) for r in rows[1:]] == pytest.approx([0.2, 0.4, 0.6, 0.8, 1.0])
    assert all(r[rows[0].index("passed")] == "true" for r in rows[1:])


@pytest.mark.parametrize("argv", [
    ["--x", "omega2=0.2:1.0:0"],
    ["--x", "omega2=0.2:1.0:0.2", "--fixed", "omega2=0.5"],
    ["--x", "warp=0:1:1"],
    ["--x", "omega2=0.2:0.4:0.2", "--y", "omega2=0.2:0.4:0.2"],
])
def test_sweep_rejects_bad_grids(tmp_path, argv):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--target", "effective-action", *argv, "--out", str(out)]) == 3


def test_verify_single_check(tmp_path, capsys):
    out = tmp_path / "verify.csv"
    assert main(["verify", "--only", "gauge-4d", "--out", str(out)]) == 0
    assert "All checks passed!" in capsys.readouterr().out
    doc = json.loads(out.with_suffix(".json").read_text())
    assert doc["result"]["passed"] is True
    assert [c["key"] for c in doc["result"]["checks"]] == ["gauge-4d"]


def test_verify_graded_check_runs_inner_generator(tmp_path):
    out = tmp_path / "verify.csv"
    assert main(["verify", "--only", "eps-graded", "--out", str(out)]) == 0
    check = json.loads(out.with_suffix(".json").read_text())["result"]["checks"][0]
    assert check["passed"] is True
    assert "inner generator recovered: True, plain commutator rejected: True" in check["detail"]


def test_verify_unknown_check(tmp_path):
    assert main(["verify", "--only", "99", "--out", str(tmp_path / "v.csv")]) == 3


# ---------------------------------------------------------------------------
# Range parsing
# ---------------------------------------------------------------------------

def test_parse_range_is_exact():
    name, values = parse_range("omega2=0.2:1.0:0.2")
    assert name == "omega2"
    assert values == [0.2, 0.4, 0.6, 0.8, 1.0]


def test_parse_range_descending_and_empty():
    assert parse_range("x=1:0:-0.5") == ("x", [1.0, 0.5, 0.0])
    assert parse_range("x=1:0:0.5") == ("x", [])


@pytest.mark.parametrize("text", ["omega2", "omega2=0:1", "omega2=a:b:c", "omega2=0:1:0"])
def test_parse_range_errors(text):
    with pytest.raises(DomainError):
        parse_range(text)


def test_parse_fixed():
    assert parse_fixed("m2=0.1, theta=2") == {"m2": 0.1, "theta": 2.0}
    assert parse_fixed(None) == {}
    with pytest.raises(DomainError):
        parse_fixed("theta")
    with pytest.raises(DomainError):
        parse_fixed("theta=big")


# ---------------------------------------------------------------------------
# Diagnostics buffer
# ---------------------------------------------------------------------------

def test_collector_warns_once_when_buffer_wraps(caplog):
    collector = DiagnosticsCollector(max_buffer=3)
    with caplog.at_level(logging.WARNING, logger="moyal_lab.diagnostics"):
        for i in range(6):
            collector.record({"level": "INFO", "msg": str(i)})
    assert collector.dropped == 3
    assert [r["msg"] for r in collector.records()] == ["3", "4", "5"]
    assert sum("buffer full" in r.getMessage() for r in caplog.records) == 1


def test_attached_collector_keeps_wrap_warning():
    collector = DiagnosticsCollector(max_buffer=2)
    source = logging.getLogger("moyal_lab.cli.test")
    with collector.attached("moyal_lab", level=logging.WARNING):
        for i in range(3):
            source.warning("slow quadrature %d", i)
    assert collector.dropped == 2
    assert collector.warnings()[-1]["name"] == "moyal_lab.diagnostics"
    assert "buffer full at 2 records" in collector.warnings()[-1]["msg"]


def test_collector_rejects_empty_buffer():
    with pytest.raises(ValueError):
        DiagnosticsCollector(max_buffer=0)
