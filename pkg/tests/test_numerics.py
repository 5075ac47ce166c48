"""Quadrature, principal-value integration, and root finding.

Principal-value results are checked two ways: against antiderivatives
evaluated by hand, and against an independent epsilon-exclusion oracle
(tests/_oracles.py) that integrates with symmetric pole exclusions and
extrapolates the exclusion radius to zero.
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from wgqed import NonConvergence, PoleOutsideDomain
from wgqed.numerics import RootBracket, adaptive_quadrature, find_roots, pv_integral

from _oracles import pv_epsilon_exclusion


def test_quadrature_sin():
    res = adaptive_quadrature(np.sin, 0.0, math.pi, 1e-12)
    assert res.value == pytest.approx(2.0, rel=1e-12)
    # the error gauge must bound the true error
    assert abs(res.value - 2.0) <= res.error_estimate + 1e-14
    assert res.evaluations >= 22


def test_quadrature_exp():
    res = adaptive_quadrature(np.exp, 0.0, 1.0, 1e-13)
    assert res.value == pytest.approx(math.e - 1.0, rel=1e-13)


def test_quadrature_sqrt_singularity_at_edge():
    # endpoints are never evaluated, so x**-0.5 at 0 integrates fine
    def f(t):
        return 1.0 / np.sqrt(t)

    res = adaptive_quadrature(f, 0.0, 1.0, 1e-9)
    assert res.value == pytest.approx(2.0, rel=1e-9)


def test_quadrature_vectorized_contract():
    shapes = []

    def f(t):
        shapes.append(np.shape(t))
        return t * t

    res = adaptive_quadrature(f, 0.0, 2.0, 1e-12)
    assert res.value == pytest.approx(8.0 / 3.0, rel=1e-12)
    assert shapes and all(len(s) == 1 for s in shapes)


def test_quadrature_rejects_bad_interval():
    with pytest.raises(ValueError):
        adaptive_quadrature(np.exp, 0.0, math.inf, 1e-10)
    with pytest.raises(ValueError):
        adaptive_quadrature(np.exp, 1.0, 0.0, 1e-10)
    with pytest.raises(ValueError):
        adaptive_quadrature(np.exp, 0.0, 1.0, 0.0)


def test_quadrature_nonconvergence():
    def steep(t):
        return np.power(t, -0.9)

    with pytest.raises(NonConvergence):
        adaptive_quadrature(steep, 1e-300, 1.0, 1e-13, max_panels=8)


def test_pv_symmetric_window_is_zero():
    def f(t):
        return 1.0 / (t - 1.0)

    res = pv_integral(f, 1.0, 0.0, 2.0, 1e-12)
    # the window's achievable absolute accuracy is anchored to the outer
    # magnitudes (~ln 2 each), so rel_tol * ~1.4 is the honest floor here
    assert res.value == pytest.approx(0.0, abs=5e-12)


def test_pv_log_tail():
    # PV over [0,3] of 1/(t-1): the symmetric part cancels, leaving ln 2
    def f(t):
        return 1.0 / (t - 1.0)

    res = pv_integral(f, 1.0, 0.0, 3.0, 1e-12)
    assert res.value == pytest.approx(math.log(2.0), rel=1e-11)


def test_pv_pole_near_edge():
    def f(t):
        return 1.0 / (t - 0.125)

    res = pv_integral(f, 0.125, 0.0, 3.0, 1e-12)
    # antiderivative ln|t - 1/8|: (ln(23/8) - ln(1/8)) = ln 23
    assert res.value == pytest.approx(math.log(23.0), rel=1e-11)


def test_pv_against_epsilon_exclusion_oracle():
    def f(t):
        return np.cos(t) / (t - 1.0)

    def f_scalar(t):
        return math.cos(t) / (t - 1.0)

    res = pv_integral(f, 1.0, 0.0, 2.0, 1e-12)
    ref = pv_epsilon_exclusion(f_scalar, 1.0, 0.0, 2.0)
    assert res.value == pytest.approx(ref, abs=5e-11)


def test_pv_pole_outside_domain():
    def f(t):
        return 1.0 / (t - 5.0)

    with pytest.raises(PoleOutsideDomain):
        pv_integral(f, 5.0, 0.0, 2.0, 1e-12)
    with pytest.raises(PoleOutsideDomain):
        pv_integral(f, 0.0, 0.0, 2.0, 1e-12)


def test_find_roots_sin():
    roots = find_roots(math.sin, 0.1, 9.0, 64)
    assert len(roots) == 2
    assert roots[0] == pytest.approx(math.pi, abs=1e-10)
    assert roots[1] == pytest.approx(2.0 * math.pi, abs=1e-10)


def test_find_roots_cubic():
    def f(x):
        return (x - 1.0) * (x - 2.0) * (x - 3.5)

    roots = find_roots(f, 0.0, 4.0, 200)
    assert len(roots) == 3
    for got, want in zip(roots, (1.0, 2.0, 3.5)):
        assert got == pytest.approx(want, abs=1e-10)


def test_find_roots_exact_grid_hit():
    # a scan point landing exactly on the root keeps it single
    roots = find_roots(lambda x: x - 2.0, 0.0, 4.0, 5)
    assert roots == [2.0]


def test_find_roots_none():
    assert find_roots(lambda x: x * x + 1.0, -3.0, 3.0, 50) == []


def test_find_roots_kinked_function():
    def f(x):
        return x - 1.0 if x > 1.0 else 2.0 * (x - 1.0)

    roots = find_roots(f, 0.0, 3.0, 10)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(1.0, abs=1e-10)


def test_find_roots_validation():
    with pytest.raises(ValueError):
        find_roots(math.sin, 2.0, 1.0, 10)
    with pytest.raises(ValueError):
        find_roots(math.sin, 0.0, 1.0, 1)


def test_root_bracket_validation():
    with pytest.raises(ValueError):
        RootBracket(2.0, 1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        RootBracket(0.0, 1.0, 1.0, 2.0)
