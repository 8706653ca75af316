"""Smoke tests for the _growthlab extension module."""

import math
import os
import sys

import pytest

sys.path.insert(0, os.environ["GROWTHLAB_MODULE_DIR"])

import _growthlab as gl  # noqa: E402

FIXTURES = os.environ["GROWTHLAB_FIXTURES"]


def fixture(name):
    return os.path.join(FIXTURES, name)


def test_version():
    assert gl.__version__


def test_free_group_census_closed_form():
    g = gl.load(fixture("free2.group"))
    assert g.kind() == "matrix"
    counts = g.ball(5)["cumulative"]
    assert counts == [2 * 3**r - 1 for r in range(6)]


def test_ball_deterministic_across_threads():
    g = gl.load(fixture("free2.group"))
    assert g.ball(5, threads=1) == g.ball(5, threads=8)


def test_entropy_classifications():
    free2 = gl.load(fixture("free2.group"))
    report = free2.entropy(8)
    assert report["classification"] == "exponential-consistent"
    assert math.isclose(report["certified_upper"], math.log(2 * 3**8 - 1) / 8)

    heis = gl.load(fixture("heisenberg.group"))
    assert heis.entropy(10)["classification"] == "polynomial-consistent"


def test_word_reduction_and_keys():
    g = gl.load(fixture("heisenberg.group"))
    assert g.reduce("x y y^-1 x") == "x x"
    commutator = g.evaluate_key("x y x^-1 y^-1")
    assert commutator != g.evaluate_key("")
    assert g.element_length("x y x^-1 y^-1", budget=4) == 4


def test_modp_relation():
    g = gl.load(fixture("modp5.group"))
    assert g.evaluate_key("g a g^-1") == g.evaluate_key("a a")
    assert g.graded_ok()


def test_closure_orders():
    assert gl.load(fixture("heis_mod3.group")).closure(1000) == {
        "finite": True,
        "enumerated": 27,
        "order": 27,
    }
    assert not gl.load(fixture("heisenberg.group")).closure(500)["finite"]


def test_screen_sol_fails_with_osin_bound():
    entries = gl.load(fixture("sol_fib.group")).screen()
    t_entry = next(e for e in entries if e["generator"] == "t")
    assert not t_entry["unit_circle"]
    assert t_entry["lambda_max_lo"] <= (3 + 5**0.5) / 2 <= t_entry["lambda_max_hi"]
    assert abs(t_entry["osin_bound"] - 0.1212) < 5e-4


def test_screen_unipotent_passes():
    entries = gl.load(fixture("heis_by_z.group")).screen()
    assert entries and all(e["unit_circle"] for e in entries)


def test_spectral_helpers():
    assert gl.char_poly([[2, 1], [1, 1]]) == [1, -3, 1]
    assert gl.unit_circle_test([[1, 1], [0, 1]])
    assert not gl.unit_circle_test([[2, 1], [1, 1]])
    lo, hi = gl.lambda_max([[2, 1], [1, 1]])
    assert lo <= (3 + 5**0.5) / 2 <= hi
    assert math.isclose(gl.osin_lower_bound(2.0), math.log(2) / 6, rel_tol=1e-9)
    with pytest.raises(ValueError):
        gl.osin_lower_bound(0.5)


def test_sandwich():
    report = gl.load(fixture("z_cross_z2.group")).sandwich(8)
    assert report["ok"]
    assert report["kernel_order"] == 2


def test_distortion_sol():
    profile = gl.load(fixture("sol_fib.group")).distortion(8, n_budget=120)
    assert profile["delta"] == sorted(profile["delta"])
    assert profile["delta"][-1] > 8  # super-linear already at radius 8


def test_prefix_growth_dichotomy():
    heis = gl.load(fixture("heis_by_z.group")).prefix_growth(5, 25, samples=15)
    assert heis["screened"]
    sol = gl.load(fixture("sol_fib.group")).prefix_growth(5, 25, samples=15)
    assert not sol["screened"]
    assert sol["semilog_slope"] > heis["semilog_slope"]


def test_load_errors():
    with pytest.raises(RuntimeError):
        gl.load(fixture("does_not_exist.group"))
