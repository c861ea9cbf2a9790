from __future__ import annotations

import hashlib
import io
import json

import pytest

from holocode.cli import main
from holocode.stabilizer import repetition_code


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.fixture
def tiling_file(tmp_path):
    path = tmp_path / "tiling.json"
    code, _ = run("tiling", "--n", "5", "--k", "4", "--inflation", "vertex", "--layers", "2", "--out", str(path))
    assert code == 0
    return path


def test_tiling_summary_and_files(tmp_path):
    svg = tmp_path / "t.svg"
    manifest = tmp_path / "m.json"
    code, text = run("--manifest", str(manifest), "tiling", "--n", "5", "--k", "4", "--layers", "1",
                     "--out", str(tmp_path / "t.json"), "--svg", str(svg))
    assert code == 0
    assert "tiles=11" in text and "boundary=25" in text
    assert svg.read_text().startswith("<svg")
    record = json.loads(manifest.read_text())
    assert record["seed"] == 0 and record["results"]["tiles"] == 11
    digest = hashlib.sha256((tmp_path / "t.json").read_bytes()).hexdigest()
    assert record["outputs"][str(tmp_path / "t.json")] == digest


def test_layers_zero_is_one_tile():
    code, text = run("tiling", "--n", "5", "--k", "4", "--layers", "0")
    assert code == 0 and "tiles=1 edges=5 boundary=5" in text


def test_flat_tiling_rejected(capsys):
    code, _ = run("tiling", "--n", "4", "--k", "4")
    assert code == 2
    assert "hyperbolic" in capsys.readouterr().err


def test_bad_arguments():
    assert run("tiling", "--n", "5", "--k", "4", "--inflation", "diagonal")[0] == 1
    assert run("tiling", "--n", "5", "--k", "4", "--layers", "-1")[0] == 1
    assert run("nonsense")[0] == 1
    assert run("--threads", "0", "verify", "--code", "five_qubit")[0] == 1


def test_analyze_outputs(tiling_file, tmp_path):
    curve, hist = tmp_path / "c.csv", tmp_path / "h.csv"
    code, text = run("analyze", "--tiling", str(tiling_file), "--entropy-curve", str(curve),
                     "--histogram", str(hist), "--check-rt", "--dimer-json", str(tmp_path / "d.json"),
                     "--dimer-svg", str(tmp_path / "d.svg"))
    assert code == 0
    assert "RT bound PASS: 0 violations" in text
    raw = curve.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "length,mean_entropy_nats,stddev,n_intervals"
    assert lines[1].split(",")[1] == "0.693147180560"
    assert hist.read_text().splitlines()[0] == "distance,count"
    assert len(json.loads((tmp_path / "d.json").read_text())["dimers"]) == 95


def test_random_input_is_deterministic(tiling_file, tmp_path):
    digests = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.json"
        assert run("analyze", "--tiling", str(tiling_file), "--input", "random:42", "--dimer-json", str(out))[0] == 0
        digests.append(out.read_bytes())
    assert digests[0] == digests[1]
    other = tmp_path / "c.json"
    run("--seed", "42", "analyze", "--tiling", str(tiling_file), "--input", "random", "--dimer-json", str(other))
    assert other.read_bytes() == digests[0]


def test_analyze_errors(tiling_file, tmp_path, monkeypatch):
    assert run("analyze", "--tiling", str(tmp_path / "missing.json"))[0] == 1
    assert run("analyze", "--tiling", str(tiling_file), "--input", "maybe")[0] == 1
    assert run("analyze", "--tiling", str(tiling_file), "--fit-c")[0] == 1  # too few layers
    monkeypatch.setenv("HOLOCODE_MAX_BOUNDARY", "50")
    assert run("analyze", "--tiling", str(tiling_file))[0] == 3


def test_non_pentagon_analysis_is_geometry_error(tmp_path):
    path = tmp_path / "t.json"
    run("tiling", "--n", "4", "--k", "5", "--layers", "1", "--out", str(path))
    assert run("analyze", "--tiling", str(path))[0] == 2


def test_verify_five_qubit():
    code, text = run("verify", "--code", "five_qubit", "--distance", "--bounds", "--perfect")
    assert code == 0
    assert "distance d=3" in text
    assert "hamming     16   16  True   True" in text
    assert "singleton    5    5  True   True" in text
    assert "perfect=true" in text


def test_verify_three_qutrit():
    code, text = run("verify", "--code", "three_qutrit", "--samples", "10")
    assert code == 0
    assert "single-site entropy=1.098612288668" in text
    assert "fidelity min over 10 states=1.000000000000" in text


def test_verify_code_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("verify", "--code", str(bad))[0] == 1
    bad.write_text(json.dumps({"n": 2}))
    assert run("verify", "--code", str(bad))[0] == 1
    assert run("verify", "--code", str(tmp_path / "none.json"))[0] == 1
    big = tmp_path / "big.json"
    big.write_text(json.dumps(repetition_code(13).to_dict()))
    assert run("verify", "--code", str(big), "--distance")[0] == 4
    small = tmp_path / "small.json"
    small.write_text(json.dumps(repetition_code(3).to_dict()))
    code, text = run("verify", "--code", str(small), "--distance")
    assert code == 0 and "distance d=1" in text
