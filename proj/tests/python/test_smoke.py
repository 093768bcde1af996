import json
import math

import pytest

import mprk


def test_builtin_tableaus_validate():
    for name in ("4s3pA", "4s3pB", "4s3pC"):
        t = mprk.builtin(name)
        assert t.name == name
        assert t.q == 4
        assert mprk.validate(t) == []


def test_midpoint_matches_closed_form():
    z = complex(-1.25, 0.7)
    want = mprk.corrected_midpoint_reference(z)
    for p in (0, 3, 8):
        t = mprk.midpoint_corrected(p)
        assert t.q == p + 1
        got = mprk.stability_function(t, z)
        assert abs(got - want) < 1e-13


def test_json_round_trip():
    t = mprk.builtin("4s3pB")
    text = mprk.tableau_to_json(t)
    parsed = json.loads(text)
    assert parsed["name"] == "4s3pB"
    back = mprk.tableau_from_json(text)
    assert back.b == t.b
    assert back.a_eps == t.a_eps


def test_truncation_changes_eps_entries():
    t = mprk.builtin("4s3pA")
    t16 = mprk.truncate_eps(t, "f16")
    flat = [x for row in t.a_eps for x in row]
    flat16 = [x for row in t16.a_eps for x in row]
    assert flat != flat16
    assert all(x == mprk.round_binary16(x) for x in flat16)
    assert t16.a_high == t.a_high
    with pytest.raises(ValueError):
        mprk.truncate_eps(t, "f8")


def test_region_scan_shape_and_stability():
    g = mprk.region_scan(mprk.builtin("4s3pB"), -4.0, 0.0, -2.0, 2.0, 9, 9)
    assert g["nx"] == 9 and g["ny"] == 9
    assert len(g["values"]) == 81
    assert g["stable_count"] == 81


def test_rounding_helpers():
    assert mprk.round_binary32(1.0) == 1.0
    assert mprk.round_binary16(1.0) == 1.0
    assert mprk.round_binary32(0.1) == pytest.approx(0.1, abs=1e-8)
    assert mprk.round_binary32(0.1) != 0.1
    assert math.isinf(mprk.round_binary16(1.0e6))


def test_integrate_heat_smoke():
    r = mprk.integrate(mprk.builtin("4s3pB"), "heat", 8, 0.025, 0.1, tol=1e-6)
    assert r["steps"] == 4
    assert not r["solver_failure"]
    assert r["mean_iterations"] == 1.0
    assert r["error_max"] > 0.0
    assert r["error_l2"] <= r["error_max"] * (1 + 1e-12)
    assert len(r["state"]) == 8**3
    assert r["timings"]["solver"]["count"] == 16


def test_integrate_advection_no_reference():
    r = mprk.integrate(
        mprk.midpoint_corrected(1), "advection", 8, 1.0 / 640.0, 8.0 / 640.0, tol=1e-3
    )
    assert r["steps"] == 8
    assert r["error_max"] is None
    assert r["error_l2"] is None
    assert not r["solver_failure"]


def test_integrate_rejects_bad_arguments():
    t = mprk.builtin("4s3pB")
    with pytest.raises(ValueError):
        mprk.integrate(t, "plasma", 8, 0.025, 0.1)
    with pytest.raises(mprk.MprkError):
        mprk.integrate(t, "heat", 8, 0.03, 0.1)
    with pytest.raises(mprk.MprkError):
        mprk.integrate(t, "heat", 1, 0.025, 0.1)
