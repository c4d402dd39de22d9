import json
import subprocess
import sys

import numpy as np
import pytest

from multiportlab import cli
from multiportlab.netspec import golden_path

from conftest import GROVER3

SUBCOMMANDS = ["unitary", "strict3", "scatter", "hamiltonian", "bands", "crossings", "decompose", "evolve",
               "prepare", "report", "validate"]


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    for key in ("TOLERANCE", "SAMPLES", "OUT_DIR", "SEED"):
        monkeypatch.delenv("MPLAB_" + key, raising=False)


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_unitary_json(capsys):
    rc, out, _ = run(capsys, "unitary", "--n", "3", "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    M = np.array(doc["real"]) + 1j * np.array(doc["imag"])
    assert np.max(np.abs(M - GROVER3)) <= 1e-15


def test_seventeen_digits(capsys):
    _, out, _ = run(capsys, "unitary", "--format", "csv")
    assert "-0.33333333333333331" in out


def test_bands_csv_sum_rule(tmp_path, capsys):
    rc, _, _ = run(capsys, "bands", "--source", "closed-form", "--samples", "256", "--out", "bands.csv")
    assert rc == 0
    lines = (tmp_path / "bands.csv").read_text().splitlines()
    assert lines[0] == "k,E1,E2,E3,source" and len(lines) == 257
    for line in lines[1:]:
        e = [float(x) for x in line.split(",")[1:4]]
        assert abs(sum(e) - 1) < 1e-12


def test_evolve_network_two_steps(tmp_path, capsys):
    net = tmp_path / "fig3.json"
    net.write_text(golden_path("fig3_chain_L4").read_text())
    rc, out, _ = run(capsys, "evolve", "--network", str(net), "--input", "port:0", "--steps", "2", "--shots", "0")
    assert rc == 0
    assert np.allclose(json.loads(out)["probabilities"], [1, 0, 0], atol=1e-12)


def test_evolve_shots_deterministic(capsys):
    a = run(capsys, "evolve", "--steps", "1", "--shots", "900", "--seed", "5")[1]
    b = run(capsys, "evolve", "--steps", "1", "--shots", "900", "--seed", "5")[1]
    assert a == b
    assert sum(json.loads(a)["shots"]["counts"]) == 900


def test_evolve_bad_input_is_usage_error(capsys):
    assert run(capsys, "evolve", "--input", "spin:1")[0] == 2


@pytest.mark.parametrize("argv", [
    ["strict3"], ["scatter"], ["scatter", "--phases", "0.5,0.5,0.5", "--profile", "single-pass"],
    ["hamiltonian"], ["hamiltonian", "--double", "--kind", "strict3"], ["crossings", "--samples", "64"],
    ["decompose", "su3", "--k", "0.4"], ["decompose", "su3", "--samples", "8", "--format", "csv"],
    ["prepare", "momentum", "--k", "2.0943951023931953", "--N", "3"], ["prepare", "w", "--n", "4"],
    ["prepare", "position", "--site", "1", "--N", "4", "--format", "csv"], ["report", "--samples", "8"],
    ["bands", "--source", "chain", "--samples", "8", "--N", "8", "--format", "json"],
])
def test_subcommands_deterministic(capsys, argv):
    rc, first, _ = run(capsys, *argv)
    assert rc == 0 and first
    assert run(capsys, *argv)[1] == first


def test_decompose_su2_matrix(tmp_path, capsys):
    (tmp_path / "m.json").write_text(json.dumps({"real": [[0, 1], [1, 0]], "imag": [[0, 0], [0, 0]]}))
    rc, out, _ = run(capsys, "decompose", "su2", "--matrix", "m.json")
    assert rc == 0 and json.loads(out)["dx"] == pytest.approx(1)
    assert run(capsys, "decompose", "su2")[0] == 1


def test_domain_errors_exit_1(capsys):
    rc, _, err = run(capsys, "prepare", "momentum", "--k", "0.5", "--N", "3")
    assert rc == 1 and "2*pi" in err
    assert run(capsys, "report", "--N", "4")[0] == 1
    assert run(capsys, "evolve", "--steps", "-1")[0] == 1


def test_validate(tmp_path, capsys):
    assert run(capsys, "validate", str(golden_path("compact_pair")))[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1, "nodes": [{"id": "a", "n": 3}], "terminals": [["a", 0], ["a", 0]]}')
    rc, out, err = run(capsys, "validate", str(bad))
    assert rc == 1
    got = {d["code"] for d in json.loads(out)["diagnostics"]}
    assert {"duplicate-port", "dangling-port"} <= got
    assert "duplicate-port" in err
    (tmp_path / "syntax.json").write_text("{")
    rc, out, _ = run(capsys, "validate", "syntax.json")
    assert rc == 1 and json.loads(out)["diagnostics"][0]["code"] == "syntax"


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "unitary", "--n", "x")[0] == 2


@pytest.mark.parametrize("name", SUBCOMMANDS)
def test_help_exits_zero(capsys, name):
    assert run(capsys, name, "--help")[0] == 0


def test_config_precedence(tmp_path, capsys, monkeypatch):
    (tmp_path / "multiportlab.toml").write_text('samples = 5\nseed = 3\nout_dir = "results"\n')
    run(capsys, "bands", "--out", "b.csv")
    assert len((tmp_path / "results" / "b.csv").read_text().splitlines()) == 6
    monkeypatch.setenv("MPLAB_SAMPLES", "7")
    run(capsys, "bands", "--out", "b.csv")
    assert len((tmp_path / "results" / "b.csv").read_text().splitlines()) == 8
    run(capsys, "bands", "--samples", "4", "--out", "b.csv")
    assert len((tmp_path / "results" / "b.csv").read_text().splitlines()) == 5


def test_config_from_home(tmp_path, capsys):
    home = tmp_path / "home"
    home.mkdir()
    (home / "multiportlab.toml").write_text("samples = 3\n")
    _, out, _ = run(capsys, "bands", "--format", "csv")
    assert len(out.splitlines()) == 4


def test_bad_config(tmp_path, capsys):
    (tmp_path / "multiportlab.toml").write_text("samples = 2\n")
    assert run(capsys, "unitary")[0] == 1
    (tmp_path / "multiportlab.toml").write_text("colour = 'red'\n")
    assert run(capsys, "unitary")[0] == 1


def test_load_config_env_override(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("tolerance = 1e-6\nseed = 4\n")
    cfg = cli.load_config(p, {"MPLAB_SEED": "9"})
    assert cfg.tolerance == 1e-6 and cfg.seed == 9


def test_dumps_format():
    assert cli.dumps({"b": [1.0, 2], "a": None, "c": True}) == '{\n  "a": null,\n  "b": [1, 2],\n  "c": true\n}'
    assert cli.num(0.1) == "0.10000000000000001"
    assert cli.num(float("nan")) == "null"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "multiportlab.cli", "unitary", "--format", "csv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("row,col,re,im")
