"""CLI end-to-end: serialization round trips, report artifacts, operator
archives, and the fast suites."""

import json
import os

import numpy as np
import pytest

from superstar.cli import REPORT_SCHEMA, build_parser, main
from superstar.coeffs import PlaneWaveSum
from superstar.superfun import SuperFunction


def wave_fun():
    return SuperFunction(2, 1, {0: PlaneWaveSum.wave((0.8, -0.3), 1.0 - 0.5j),
                                1: PlaneWaveSum.wave((-0.2, 0.6), 0.7)})


def test_json_schema_round_trip():
    f = wave_fun()
    doc = json.loads(f.to_json())
    assert set(doc) >= {"n", "m", "backend", "comps"}
    assert doc["m"] == 2 and doc["n"] == 1
    for comp in doc["comps"]:
        assert set(comp) >= {"index_bits", "payload"}
    g = SuperFunction.from_json(f.to_json())
    pts = np.array([[0.3, -0.9]])
    for b in (0, 1):
        assert np.allclose(g.component(b).eval(pts), f.component(b).eval(pts),
                           atol=1e-14)


def test_parser_subcommands():
    parser = build_parser()
    args = parser.parse_args(["suite", "algebra"])
    assert args.name == "algebra"
    args = parser.parse_args(["star", "--f", "a.json", "--g", "b.json"])
    assert args.f == "a.json"


def test_cmd_star_round_trip(tmp_path):
    fa, fb = tmp_path / "a.json", tmp_path / "b.json"
    fa.write_text(wave_fun().to_json())
    fb.write_text(SuperFunction(
        2, 1, {0: PlaneWaveSum.wave((0.1, 0.4), 0.6)}).to_json())
    out = tmp_path / "out.json"
    rc = main(["star", "--f", str(fa), "--g", str(fb), "--out", str(out),
               "--direct-check"])
    assert rc == 0
    res = SuperFunction.from_json(out.read_text())
    assert res.m == 2 and res.n == 1
    rep = json.loads((tmp_path / "out_report.json").read_text())
    assert rep["schema"] == REPORT_SCHEMA
    assert rep["fast_vs_direct_residual"] < 1e-8


def test_cmd_quantize_npz(tmp_path):
    sym = tmp_path / "sym.json"
    sym.write_text(wave_fun().to_json())
    out = tmp_path / "op.npz"
    rc = main(["quantize", "--symbol", str(sym), "--levels", "12",
               "--out", str(out)])
    assert rc == 0
    data = np.load(out)
    assert int(data["levels"]) == 12
    mat = data["comp_0_re"] + 1j * data["comp_0_im"]
    assert mat.shape == (24, 24)


def test_cmd_qft_check_small(tmp_path):
    out = tmp_path / "qft.json"
    rc = main(["qft-check", "--grid", "96", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] is True
    assert rep["total_relative"] < 1e-6


def test_suite_algebra(tmp_path):
    rc = main(["suite", "algebra", "--out-dir", str(tmp_path)])
    assert rc == 0
    rep = json.loads((tmp_path / "suite_report.json").read_text())
    assert rep["passed"] is True
    assert "derived_constants" in rep


def test_threads_env_cap(monkeypatch):
    monkeypatch.setenv("SUPERSTAR_THREADS", "2")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        monkeypatch.delenv(var, raising=False)
    from superstar.cli import _cap_threads
    _cap_threads()
    assert os.environ["OMP_NUM_THREADS"] == "2"
