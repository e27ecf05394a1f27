import json
import os
import subprocess
import sys

import numpy as np
import pytest

from campanato import io as cio
from campanato.cli import run
from campanato.errors import ConfigError
from campanato.grid import Cube, GridSpec, catalog
from campanato.oscillation import osc, osc_x
from campanato.scenario import load_scenario, scenario_from_dict
from campanato.spaces import Lp
from campanato.vanishing import DecayCurve


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_osc_command_matches_the_library(capsys):
    code, out, _ = _run(capsys, "osc", "--fn", "loglog", "--alpha", "0", "--space", "l1", "--cube", "-0.1,0.1")
    assert code == 0
    f = catalog("loglog", None, GridSpec(1, 1.0, 4096))
    Q = Cube.from_bounds([-0.1], [0.1])
    assert float(out) == osc_x(f, Q, 0.0, Lp(1.0))
    assert float(out) == pytest.approx(osc(f, Q, 0.0), rel=1e-12)


def test_decay_command_prints_a_flat_log_curve(capsys):
    code, out, err = _run(capsys, "decay", "--fn", "log_abs", "--alpha", "0", "--space", "l1", "--mode", "small")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "parameter,value"
    vals = [float(line.split(",")[1]) for line in lines[1:]]
    assert len(vals) >= 3
    # the finest cube spans 8 cells and carries the singular cell's quadrature error
    assert np.allclose(vals[:-1], 2 / np.e, rtol=5e-3)
    assert np.allclose(vals, 2 / np.e, rtol=5e-2)


def test_reports_name_their_context(capsys):
    _, _, err = _run(capsys, "decay", "--fn", "loglog", "--space", "l1")
    for key in ("resolution", "family", "thresholds", "truncation radius", "mollifier", "scenario"):
        assert f"# {key}" in err


@pytest.mark.parametrize("argv", [["frobnicate"], ["osc", "--bogus", "1"], ["norm", "--fn", "loglog", "--space", "lp:0.5"],
                                  ["osc", "--fn", "loglog", "--space", "l1"]])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = run(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_bad_exponent_names_the_range(capsys):
    code, _, err = _run(capsys, "norm", "--fn", "loglog", "--space", "lp:0.5")
    assert code == 2 and "[1,inf)" in err


def test_unwritable_output_exits_1(capsys, tmp_path):
    code, _, _ = _run(capsys, "decay", "--fn", "loglog", "--space", "l1", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 1


def test_svg_output(capsys, tmp_path):
    path = tmp_path / "c.svg"
    code, _, _ = _run(capsys, "decay", "--fn", "loglog", "--space", "l1", "--format", "svg", "--out", str(path))
    assert code == 0
    assert path.read_text().count("<polyline") == 1


def test_commutator_command_point_value(capsys):
    code, out, _ = _run(capsys, "commutator", "--fn", "indicator", "--params", '{"a": 0, "b": 1}',
                        "--half-width", "2", "--resolution", "1025", "--diagonal-rule", "symmetric_average",
                        "--at", "0")
    assert code == 0
    assert float(out) == pytest.approx(-2 / 3, abs=0.02)


def test_classify_command(capsys):
    code, out, _ = _run(capsys, "classify", "--fn", "loglog", "--space", "l1", "--space", "l2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "space,bounded,small_vanish,far_vanish,large_vanish"
    assert len(lines) == 3


# --------------------------------------------------------------------------- scenarios

def test_scenario_unknown_key_is_named(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"function": {"name": "loglog"}, "alhpa": 0}))
    with pytest.raises(ConfigError, match="alhpa"):
        load_scenario(path)
    code, _, err = _run(capsys, "decay", "--config", str(path))
    assert code == 2 and "alhpa" in err


def test_minimal_scenario_gets_defaults_echoed(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"function": {"name": "log_abs"}, "alpha": 0}))
    sc = load_scenario(path)
    assert sc.spaces == ("l1",) and sc.seed == 0
    code, out, err = _run(capsys, "decay", "--config", str(path))
    assert code == 0
    echo = [line for line in err.splitlines() if line.startswith("# scenario: ")][0]
    assert json.loads(echo[len("# scenario: "):])["spaces"] == ["l1"]


def test_scenario_rejects_bad_values():
    with pytest.raises(ConfigError, match=r"\[1,inf\)"):
        scenario_from_dict({"function": {"name": "loglog"}, "spaces": [{"kind": "lp", "p": 0.5}]})
    with pytest.raises(ConfigError):
        scenario_from_dict({"function": {"name": "nope"}})
    with pytest.raises(ConfigError):
        scenario_from_dict({"alpha": 0})
    with pytest.raises(ConfigError):
        scenario_from_dict({"function": {"name": "loglog"}, "alpha": 2})


def test_inline_sample_table(capsys, tmp_path):
    path = tmp_path / "s.json"
    xs = (np.arange(64) + 0.5) / 64
    path.write_text(json.dumps({"function": {"samples": list(xs), "box": [0, 1]}, "grid": {"half_width": 0.5}}))
    code, out, _ = _run(capsys, "osc", "--config", str(path), "--cube", "0,1")
    assert code == 0
    assert float(out) == pytest.approx(0.25, abs=1e-3)


def test_fixed_seed_gives_identical_bytes(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"function": {"name": "trig", "params": {"seed": 5}}, "seed": 3,
                                "spaces": ["l1", "morrey:3:2"]}))
    outs = []
    for _ in range(2):
        code, out, _ = _run(capsys, "decay", "--config", str(path), "--space", "l1")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


# --------------------------------------------------------------------------- io

def _curve(values):
    return DecayCurve("small_scale", [(0.5 ** k, v) for k, v in enumerate(values, 1)], "test family")


def test_two_point_curve_csv(tmp_path):
    path = tmp_path / "c.csv"
    c = _curve([0.3, 0.1])
    cio.write_curve(c, path)
    assert path.read_text().count("\n") == 3
    assert path.read_text().splitlines()[0] == "parameter,value"


def test_csv_round_trip_is_exact(tmp_path):
    c = _curve([1 / 3, np.pi / 7, 1e-300])
    path = tmp_path / "c.csv"
    cio.write_curve(c, path)
    back = cio.read_curve_csv(path)
    assert back.points == c.points


def test_svg_clamps_zero_values():
    svg = cio.curve_svg(_curve([1.0, 0.0, 0.0]))
    assert svg.count("<polyline") == 1
    assert "floor 1e-12" in svg
    svg0 = cio.curve_svg(_curve([0.0, 0.0]))
    assert "<polyline" in svg0


def test_write_errors():
    with pytest.raises(ConfigError):
        cio.write_curve(_curve([1.0]), "/tmp/x", format="png")


# --------------------------------------------------------------------------- verify

def _verify(suite, threads, seed):
    env = dict(os.environ, CAMPANATO_THREADS=str(threads))
    return subprocess.run([sys.executable, "-m", "campanato.cli", "verify", "--suite", suite, "--seed", str(seed)],
                          capture_output=True, env=env)


def test_verify_fast_suite_is_thread_independent():
    a, b = _verify("projection", 1, 3), _verify("projection", 4, 3)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout.startswith(b"quantity,value\n")


@pytest.mark.slow
def test_verify_theorem1():
    assert _verify("theorem1", 2, 7).returncode == 0
