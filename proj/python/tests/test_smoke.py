import json
import math

import pytest

import ising2mm as m


def test_multicritical_point():
    p = m.map_abc(1.0, 1.0, 1.0)
    assert p.tau == pytest.approx(0.25, abs=1e-14)
    assert p.t == pytest.approx(-5 / 72, abs=1e-14)
    assert p.q == pytest.approx(1.0, abs=1e-14)
    c = m.critical_curve_b(1.0)
    assert (c.tau, c.t) == pytest.approx((0.25, -5 / 72))


def test_sigma_roundtrip():
    a, b, c = 1.2, 0.8, 0.5
    p = m.map_abc(a, b, c)
    assert p.tau == pytest.approx(0.33574547411256287932, rel=1e-14)
    assert m.solve_sigma(p.tau, p.t, p.H) == pytest.approx(a * a * b * c, abs=1e-10)


def test_free_energy_two_ways():
    f = m.free_energy(0.3, -0.02, 0.1)
    g = m.free_energy_lambda(0.3, -0.02, 0.1)
    assert abs(f - g) < 1e-9
    coeffs = m.free_energy_series(0.3, 0.1, 8)
    assert sum(c * (-0.02) ** k for k, c in enumerate(coeffs)) == pytest.approx(f, rel=1e-4)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        m.free_energy(0.3, 0.02)
    with pytest.raises(ArithmeticError):
        m.solve_sigma(0.3, -1.0)
    assert m.classify(0.3, 0.02) == "Outside"


def test_exact_enumeration():
    assert m.wick_genus0_exact("1/2", "1", 3) == ["-16/9", "236/27", "-6400/81"]


def test_curve_and_measures():
    bp = m.curve_branch_points(1.1, 0.9, 0.7)
    assert 0 < bp["alpha"] < bp["beta"]
    assert m.measure_mass(1.1, 0.9, 0.7) == pytest.approx(1.0, abs=1e-6)
    assert m.endpoint_exponent(1.1, 0.9, 0.7, "mu", "+alpha") == pytest.approx(0.5, abs=0.05)


def test_coefficient_asymptotics():
    e = m.sigma_coeff_asymptotic(0.5, 40)
    assert e["regime"] == m.Regime.HighTemp
    assert abs(e["ratio"] - 1) < 0.02
    assert m.sigma_coeff_exact(0.5, 1) == pytest.approx(-4.0)


def test_check_suite():
    r = m.run_check("lensing", samples=20)
    assert r["pass"] and r["failures"] == 0


def test_cli_entry_point():
    code, out, err = m.run_cli(["free-energy", "--tau", "0.3", "--t", "-0.02"])
    assert code == 0 and err == ""
    rec = json.loads(out)
    assert rec["schema"] == m.SCHEMA
    assert math.isfinite(rec["F"])
    code, out, err = m.run_cli(["free-energy", "--tau", "0.3", "--t", "0.5"])
    assert code == 2 and json.loads(err)["error"] == "DomainError"
