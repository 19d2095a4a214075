import json
import math
import subprocess
import sys

import pytest

from pstchains.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "3", "--gamma", "1/3")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "pst-chains/1"
    assert data["points"] == pytest.approx([0, 1 / 3, 2, 7 / 3])
    assert data["t_min"] == pytest.approx(3 * math.pi)
    assert data["admissible"] is True


def test_spectrum_uniform_and_scaled(capsys):
    _, out, _ = run(capsys, "spectrum", "--n", "3", "--gamma", "1/1")
    assert json.loads(out)["points"] == [0, 1, 2, 3]
    _, out, _ = run(capsys, "spectrum", "--n", "3", "--gamma", "1/3", "--scale", "2", "--shift", "1")
    data = json.loads(out)
    assert data["points"][1] == pytest.approx(5 / 3)
    assert data["t_min"] == pytest.approx(1.5 * math.pi)


def test_spectrum_not_admissible(capsys):
    _, out, _ = run(capsys, "spectrum", "--n", "3", "--gamma", "2/3")
    data = json.loads(out)
    assert data["admissible"] is False and data["t_min"] is None


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--n", "3", "--gamma", "5/2"],
        ["spectrum", "--n", "4", "--gamma", "1/3"],
        ["spectrum", "--n", "3", "--gamma", "x"],
        ["spectrum", "--n", "3"],
        ["fidelity", "--n", "3", "--gamma", "1/3", "--scan", "1:0:5"],
        ["fidelity", "--n", "3", "--gamma", "1/3", "--scan", "0:1"],
        ["fidelity", "--n", "3", "--gamma", "1/3", "--time", "1", "--target", "9"],
        ["verify", "--suite", "nope"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_coeffs(capsys):
    _, out, _ = run(capsys, "coeffs", "--n", "3", "--gamma", "1/3")
    data = json.loads(out)
    assert data["b"] == pytest.approx([7 / 6] * 4)
    assert data["j"] == pytest.approx([math.sqrt(35 / 36), 1 / 3, math.sqrt(35 / 36)])
    _, out, _ = run(capsys, "coeffs", "--n", "3", "--gamma", "1/1")
    data = json.loads(out)
    assert data["b"] == pytest.approx([1.5] * 4) and data["j"] == pytest.approx([math.sqrt(0.75), 1, math.sqrt(0.75)])


def test_coeffs_odd_chain(capsys):
    _, out, _ = run(capsys, "coeffs", "--n", "3", "--gamma", "1/3", "--odd-chain")
    data = json.loads(out)
    assert data["b"] == pytest.approx([1 / 3, 5 / 3, 1 / 3], abs=1e-12)
    assert data["j"] == pytest.approx([math.sqrt(5 / 18)] * 2, abs=1e-12)


def test_fidelity_single_time(capsys):
    code, out, _ = run(capsys, "fidelity", "--n", "3", "--gamma", "1/3", "--time", "9.42477796")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,abs,re,im" and len(lines) == 2
    assert float(lines[1].split(",")[1]) == pytest.approx(1.0, abs=1e-9)
    _, out, _ = run(capsys, "fidelity", "--n", "3", "--gamma", "1/3", "--time", "0")
    assert abs(float(out.splitlines()[1].split(",")[1])) < 1e-14


def test_fidelity_scan(capsys):
    _, out, _ = run(capsys, "fidelity", "--n", "3", "--gamma", "1/3", "--scan", "0:9.43:100")
    rows = out.splitlines()[1:]
    assert len(rows) == 100
    assert all(float(r.split(",")[1]) <= 1 + 1e-12 for r in rows)


def _write(tmp_path, payload):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(payload))
    return str(path)


def test_reconstruct_methods(tmp_path, capsys):
    pts = [0, 1 / 3, 2, 7 / 3]
    path = _write(tmp_path, {"points": pts})
    _, out, _ = run(capsys, "reconstruct", "--spectrum", path)
    data = json.loads(out)
    assert data["b"] == pytest.approx([7 / 6] * 4) and data["mirror_residual"] < 1e-10
    seven = [0, 3 / 5, 2, 13 / 5, 4, 23 / 5, 6, 33 / 5]
    path = _write(tmp_path, {"points": seven})
    _, a, _ = run(capsys, "reconstruct", "--spectrum", path, "--method", "stieltjes")
    _, b, _ = run(capsys, "reconstruct", "--spectrum", path, "--method", "euclidean")
    a, b = json.loads(a), json.loads(b)
    diff = max(abs(x - y) for key in ("b", "j") for x, y in zip(a[key], b[key]))
    assert diff < 1e-8


def test_reconstruct_with_weights(tmp_path, capsys):
    path = _write(tmp_path, {"points": [0, 1, 2, 3], "weights": [1, 3, 3, 1]})
    _, out, _ = run(capsys, "reconstruct", "--spectrum", path)
    assert json.loads(out)["j"] == pytest.approx([math.sqrt(0.75), 1, math.sqrt(0.75)])


@pytest.mark.parametrize("payload", [{"points": [0, 1, 1, 2]}, {"pts": [0, 1]}, [0, 1]])
def test_reconstruct_bad_input(tmp_path, capsys, payload):
    code, _, err = run(capsys, "reconstruct", "--spectrum", _write(tmp_path, payload))
    assert code == 2 and "error" in err


def test_reconstruct_missing_file(capsys):
    assert run(capsys, "reconstruct", "--spectrum", "/nonexistent.json")[0] == 2


def test_verify_hahn(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hahn", "--n-max", "5")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    names = {c["name"] for c in data["checks"]}
    assert {"hahn.commutator_yz", "hahn.casimir_scalar", "hahn.eigenbasis"} <= names
    assert any("q_measured" in c for c in data["checks"])


def test_verify_corrupted_fixture(tmp_path, capsys):
    good = {
        "points": [0, 1 / 3, 2, 7 / 3],
        "weights": [5 / 24, 7 / 24, 7 / 24, 5 / 24],
        "b": [7 / 6] * 4,
        "j": [math.sqrt(35 / 36), 1 / 3, math.sqrt(35 / 36)],
    }
    code, _, _ = run(capsys, "verify", "--suite", "ortho", "--fixture", _write(tmp_path, good))
    assert code == 0
    bad = dict(good, weights=[5 / 24, 7 / 24 + 1e-3, 7 / 24, 5 / 24])
    code, out, err = run(capsys, "verify", "--suite", "ortho", "--fixture", _write(tmp_path, bad))
    assert code == 1
    assert "ortho.fixture_orthogonality" in json.loads(out)["failed"]
    assert "ortho.fixture_orthogonality" in err


def test_deterministic_bytes():
    cmd = [sys.executable, "-m", "pstchains", "verify", "--suite", "christoffel", "--n-max", "7"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b


def test_console_help():
    res = subprocess.run([sys.executable, "-m", "pstchains", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "verify" in res.stdout
