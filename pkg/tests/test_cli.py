import contextlib
import io
import json
import subprocess
import sys

import numpy as np

from tpskit.cli import cli_main
from tpskit.examples import bell_states, rotation_x_pi, total_sz_squared
from tpskit.serialize import matrix_to_json, observable_pair_to_json, tps_to_json
from tpskit import god_given, observable_pair
from tpskit.algebra import tps_to_tpp
from tpskit.serialize import algebra_to_json


def run_cli(args):
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli_main(args)
    return code, out.getvalue(), err.getvalue()


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def state_file(tmp_path, name, vec):
    return write_json(tmp_path / name, matrix_to_json(np.asarray(vec).reshape(-1, 1)))


def test_analyze_bell_state(tmp_path):
    psi = bell_states()["psi_plus"]
    state = state_file(tmp_path, "state.json", psi)
    tps = write_json(tmp_path / "tps.json", tps_to_json(god_given(2, 2)))
    code, out, _ = run_cli(["analyze", "--state", state, "--tps", tps])
    assert code == 0
    report = json.loads(out)
    assert report["schmidt"]["rank"] == 2
    assert report["product"] is False
    assert report["tps_shape"] == [2, 2]
    assert report["compatibility"] is True


def test_build_tps_then_analyze(tmp_path):
    pair = observable_pair(rotation_x_pi(), total_sz_squared())
    obs = write_json(tmp_path / "pair.json", observable_pair_to_json(pair))
    code, out, _ = run_cli(["build-tps", "--observables", obs])
    assert code == 0
    tps_path = write_json(tmp_path / "built.json", json.loads(out))
    state = state_file(tmp_path, "state.json", bell_states()["phi_minus"])
    code, out, _ = run_cli(["analyze", "--state", state, "--tps", tps_path])
    assert code == 0
    assert json.loads(out)["schmidt"]["rank"] == 1


def test_refactor_dual(tmp_path):
    rng = np.random.default_rng(80)
    w = rng.normal(size=4) + 1j * rng.normal(size=4)
    state = state_file(tmp_path, "state.json", w)
    code, out, _ = run_cli(["refactor", "--state", state, "--shape", "2x2",
                            "--mode", "dual"])
    assert code == 0
    report = json.loads(out)
    assert report["verdicts"]["product_in_product_tps"] is True
    assert report["verdicts"]["product_in_entangled_tps"] is False


def test_refactor_modes(tmp_path):
    rng = np.random.default_rng(81)
    w = rng.normal(size=6) + 1j * rng.normal(size=6)
    state = state_file(tmp_path, "state.json", w)
    code, out, _ = run_cli(["refactor", "--state", state, "--shape", "2x3",
                            "--mode", "product", "--orthonormal"])
    assert code == 0 and json.loads(out)["verdict"]["product"] is True
    code, out, _ = run_cli(["refactor", "--state", state, "--shape", "2x3",
                            "--mode", "entangled"])
    assert code == 0 and json.loads(out)["verdict"]["schmidt_rank"] == 2


def test_verify_tpp_exit_codes(tmp_path):
    a1, a2 = tps_to_tpp(god_given(2, 2))
    f1 = write_json(tmp_path / "a1.json", algebra_to_json(a1))
    f2 = write_json(tmp_path / "a2.json", algebra_to_json(a2))
    code, out, _ = run_cli(["verify-tpp", "--a1", f1, "--a2", f2])
    assert code == 0 and json.loads(out)["is_tpp"] is True
    # a factor against itself fails certification and exits 1
    code, out, _ = run_cli(["verify-tpp", "--a1", f1, "--a2", f1])
    assert code == 1 and json.loads(out)["is_tpp"] is False


def test_input_errors_exit_2(tmp_path):
    code, _, err = run_cli(["analyze", "--state", "missing.json",
                            "--tps", "missing.json"])
    assert code == 2 and "not found" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    tps = write_json(tmp_path / "tps.json", tps_to_json(god_given(2, 2)))
    code, _, err = run_cli(["analyze", "--state", str(bad), "--tps", tps])
    assert code == 2 and "malformed" in err


def test_bad_tol_and_shape_exit_2(tmp_path):
    state = state_file(tmp_path, "state.json", np.ones(4))
    code, _, err = run_cli(["--tol", "eig=zero", "example", "bell"])
    assert code == 2
    code, _, err = run_cli(["refactor", "--state", state, "--shape", "two",
                            "--mode", "dual"])
    assert code == 2
    code, _, err = run_cli(["--tol", "foo=1", "example", "bell"])
    assert code == 2 and "foo" in err


def test_example_outputs_deterministic():
    for which in ("bell", "bargmann", "com"):
        code1, out1, _ = run_cli(["example", which])
        code2, out2, _ = run_cli(["example", which])
        assert code1 == code2 == 0
        assert out1 == out2
        json.loads(out1)


def test_installed_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tpskit.cli", "example", "com", "--degree", "3"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["grid_shape"] == [3, 3]
