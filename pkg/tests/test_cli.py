import json
import subprocess
import sys

import pytest

from multiindex import decode_json, delta_primal, parse, z
from multiindex.cli import main

BETA = "z[l; b0; -]^2 z[l; -; (1,0)] z[l; b1; (0,1)^2]"


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_delta_text(capsys):
    status, out, _ = run(capsys, "delta", "z0^2 z1 z2")
    assert status == 0
    assert parse(out.strip()) == delta_primal(z(2, 1, 1))


def test_delta_latex(capsys):
    status, out, _ = run(capsys, "delta", "z0^2 z1 z2", "--mode", "ode", "--format", "latex")
    assert status == 0
    assert out.count(r"\otimes") == 8
    assert r"3\, z_{0} \odot z_{0} \otimes z_{0} z_{1}" in out


def test_delta_json_and_formula_flag(capsys):
    _, primal, _ = run(capsys, "delta", "z0^2 z1 z2", "--format", "json")
    _, adjoint, _ = run(capsys, "delta", "z0^2 z1 z2", "--format", "json", "--formula", "adjoint")
    assert primal == adjoint
    assert decode_json(primal) == delta_primal(z(2, 1, 1))


def test_delta_minus(capsys):
    status, out, _ = run(capsys, "delta-minus", "z0^2 z2")
    assert status == 0
    assert out.strip() == "{ z0 ; z0 ; z0 } ⊗ z0^2 z2 + 2*{ z0 ; z0 z1 } ⊗ z0 z1 + { z0^2 z2 } ⊗ z0"


def test_products_and_scalars(capsys):
    assert run(capsys, "star2", "{ z0 }", "z0 z1")[1].strip() == "z0 z1^2 + z0^2 z2"
    assert run(capsys, "star1", "{ z0 ; z0 z1 }", "z0 z1")[1].strip() == "2*z0 z1^2 + z0^2 z2"
    assert run(capsys, "insert", "z0", "z0 z1")[1].strip() == "2*z0 z1"
    assert run(capsys, "adjoint-d", "z0 z1^2 z2")[1].strip() == "6*z0 z1^3 + 2*z0^2 z1 z2"
    assert run(capsys, "pair", "z0^2 z1 z2", "2*z0^2 z1 z2")[1].strip() == "4"
    assert run(capsys, "symmetry", "z0 z1^2 z2")[1].strip() == "2"


def test_spde_commands(capsys):
    status, out, _ = run(capsys, "delta", BETA, "--mode", "spde", "--dim", "1", "--max-grade", "3")
    assert status == 0
    assert "2*d^(0,1){ z[l; b0; -] D(2,0) } ⊗ z[l; -; (0,1)^2] z[l; b0; -]^2" in out
    status, out, _ = run(capsys, "adjoint-partial", BETA, "--mode", "spde", "--k", "0,1")
    assert status == 0 and out.strip() == "z[l; -; (0,1)^2] z[l; -; (1,0)] z[l; b0; -]^2"
    status, out, _ = run(capsys, "adjoint-d", "z[l; b0; -] z[l; -; (1,0)] z[l; -; (0,1)^2]", "--mode", "spde", "--letter", "2,0")
    assert out.strip() == "2*z[l; -; (0,1)^2] z[l; b0; -]^2"


def test_enumerate(capsys):
    status, out, _ = run(capsys, "enumerate", "populated", "--max-norm", "3")
    assert status == 0 and out.split("\n")[:4] == ["z0", "z0 z1", "z0 z1^2", "z0^2 z2"]
    _, out, _ = run(capsys, "enumerate", "splittings", "z0^2 z1 z2")
    assert len(out.strip().splitlines()) == 6


def test_laws_command(capsys):
    status, out, _ = run(capsys, "laws", "ode-adjointness", "--max-norm", "5")
    assert status == 0
    assert out.startswith("ode-adjointness: PASS")


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "delta.txt"
    assert run(capsys, "delta", "z0", "--out", str(target))[1] == ""
    assert target.read_text(encoding="utf-8").strip() == "{ } ⊗ z0 + { z0 } ⊗ 1"


def test_grade_bound_required(capsys):
    status, out, err = run(capsys, "delta", BETA, "--mode", "spde")
    assert status != 0 and out == ""
    assert "grade bound required" in err


def test_precondition_error_text(capsys):
    status, _, err = run(capsys, "delta", "z0^2 z1")
    assert status == 1
    assert "not populated" in err


def test_json_error(capsys):
    status, _, err = run(capsys, "delta", "z0^2 z1", "--format", "json")
    doc = json.loads(err)
    assert status == 1 and doc["error"]["code"] == "not-populated"


def test_parse_error_exit(capsys):
    status, _, err = run(capsys, "symmetry", "z0 ^")
    assert status == 1 and "position 4" in err


def test_unknown_law(capsys):
    status, _, err = run(capsys, "laws", "no-such-law")
    assert status == 1 and "no-such-law" in err


def test_unknown_command():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate", "z0"])
    assert info.value.code != 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "multiindex", "symmetry", "z0 z1^2 z2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "2"
