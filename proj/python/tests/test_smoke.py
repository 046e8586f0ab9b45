import csv
import json
import math

import numpy as np
import pytest

import erkn


def test_registry():
    names = erkn.method_names()
    assert len(names) == 9
    assert erkn.serkn_method_names() == names[:6]
    assert set(erkn.problem_names()) == {"sine-gordon", "duffing", "stellar"}
    m = erkn.make_method("SERKN2s4")
    assert (m.stages, m.order, m.classical) == (2, 4, False)
    assert erkn.rkn_limit(m).classical


def test_phi_and_coefficients():
    assert erkn.phi(0, 4.0) == pytest.approx(math.cos(2.0), rel=1e-15)
    m = erkn.make_method("SERKN1s2(1)")
    assert m.b(0, 0.0) == pytest.approx(1.0)
    coeffs = erkn.taylor_coefficients(m, "b", 0)
    assert len(coeffs) == 4
    with pytest.raises(ValueError):
        erkn.taylor_coefficients(m, "c", 0)


def test_symplectic_residuals():
    for name in erkn.serkn_method_names():
        res = erkn.symplectic_residuals(erkn.make_method(name), 10.0)
        assert max(res) < 1e-12


def test_integrate_duffing_against_reference():
    out = erkn.integrate("SERKN2s4", "duffing", {"k": 0.03}, h=1 / 200, t_end=1.0, record_stride=50)
    assert out["error"] == ""
    assert out["steps"] == 200
    assert out["q"].shape == (5, 1)
    # q(t) = sn(10 t, k/10); at small k close to sin(10 t)
    assert out["q"][-1, 0] == pytest.approx(math.sin(10.0), abs=1e-4)
    assert out["geh"] < 1e-8
    np.testing.assert_allclose(out["t"], [0, 0.25, 0.5, 0.75, 1.0], atol=1e-12)


def test_stability():
    m = erkn.make_method("SERKN3s4(1)")
    code, rho = erkn.classify_point(m, 2.0, 0.0)
    assert code == 2
    assert rho == pytest.approx(1.0, abs=1e-10)
    s = erkn.stability_matrix(m, 2.0, 0.0)
    assert s[0] * s[3] - s[1] * s[2] == pytest.approx(1.0, abs=1e-12)
    grid = erkn.scan_region(m, nv=10, nz=11)
    assert grid["code"].shape == (10, 11)
    assert (grid["code"][:, 5] == 2).all()


def test_config_errors():
    with pytest.raises(erkn.ConfigError, match="methods"):
        erkn.parse_config("")
    with pytest.raises(erkn.ConfigError, match="strictly decreasing"):
        erkn.parse_config('{"methods": ["SERKN2s3"], "problem": "duffing", "h": [0.1, 0.2]}')
    cfg = erkn.parse_config('{"methods": ["SERKN2s3"], "problem": "duffing"}')
    assert cfg["h"] == pytest.approx([1 / 200, 1 / 400, 1 / 600, 1 / 800])


def test_run_experiment(tmp_path):
    config = tmp_path / "energy.json"
    config.write_text(json.dumps({"methods": ["SERKN2s3"], "problem": "duffing", "t_end": [1, 10]}))
    result = erkn.run_experiment(config, kind="energy", out_dir=tmp_path / "out")
    assert not result["verify_failed"]
    with open(tmp_path / "out" / "energy.csv") as f:
        rows = list(csv.DictReader(f))
    assert [r["t_end"] for r in rows] == ["1", "10"]
    assert all(r["status"] == "ok" for r in rows)
    manifest = json.loads((tmp_path / "out" / "run.json").read_text())
    assert manifest["config"]["experiment"] == "energy"
