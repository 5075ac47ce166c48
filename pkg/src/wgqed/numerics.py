"""Adaptive quadrature, Cauchy principal values, and bracketed root finding.

Quadrature integrands must be vectorized: they receive a numpy array of
abscissae and return an array of the same shape.  Integration endpoints are
never evaluated (Gauss nodes are interior), so integrable endpoint
singularities such as x**-0.5 at 0 are fine.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonConvergence, PoleOutsideDomain

#: Absolute floor added to relative tolerances so that integrals whose true
#: value is zero can still converge.
ABS_FLOOR = 1e-300

_EPS = float(np.finfo(float).eps)

_GL7_X, _GL7_W = np.polynomial.legendre.leggauss(7)
_GL15_X, _GL15_W = np.polynomial.legendre.leggauss(15)
_PANEL_X = np.concatenate((_GL15_X, _GL7_X))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class RootBracket:
    """A sign-change interval [lo, hi] with the function values at its ends."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"bracket endpoints out of order: [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0:
            raise ValueError("bracket endpoints do not straddle a sign change")


def _panel(f: Callable, lo: float, hi: float) -> tuple[float, float]:
    """15-point Gauss estimate over [lo, hi] with a 7-point error gauge."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (lo + hi)
    ys = np.asarray(f(mid + half * _PANEL_X), dtype=float)
    i15 = half * float(np.dot(ys[:15], _GL15_W))
    i7 = half * float(np.dot(ys[15:], _GL7_W))
    return i15, abs(i15 - i7)


def adaptive_quadrature(
    f: Callable,
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    max_panels: int = 4096,
    abs_tol: float = 0.0,
) -> QuadratureResult:
    """Globally adaptive panel integration of f over [lo, hi].

    The worst panel (largest error gauge) is bisected until the summed error
    estimate drops below rel_tol * |value| + abs_tol + ABS_FLOOR, or
    NonConvergence is raised once max_panels panels exist.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"bad interval [{lo!r}, {hi!r}]")
    if not rel_tol > 0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol!r}")
    value, err = _panel(f, lo, hi)
    evals = 22
    # heap entries: (-error, insertion counter, lo, hi, value, error)
    counter = 0
    heap = [(-err, counter, lo, hi, value, err)]
    total, total_err = value, err
    while total_err > rel_tol * abs(total) + abs_tol + ABS_FLOOR:
        if len(heap) >= max_panels:
            raise NonConvergence(
                f"adaptive_quadrature: {max_panels} panels reached with "
                f"error {total_err:.3e} on value {total:.6e}"
            )
        _, _, a, b, v, e = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            raise NonConvergence(
                f"adaptive_quadrature: panel [{a!r}, {b!r}] cannot be split further"
            )
        v1, e1 = _panel(f, a, mid)
        v2, e2 = _panel(f, mid, b)
        evals += 44
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        counter += 1
        heapq.heappush(heap, (-e1, counter, a, mid, v1, e1))
        counter += 1
        heapq.heappush(heap, (-e2, counter, mid, b, v2, e2))
    return QuadratureResult(total, total_err, evals)


def pv_integral(
    f: Callable,
    pole: float,
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    max_panels: int = 4096,
) -> QuadratureResult:
    """Cauchy principal value of f over [lo, hi] around a simple pole.

    A window of half-width w = min(pole - lo, hi - pole) / 2 around the pole
    is integrated as the symmetric pairing f(pole + u) + f(pole - u) over
    u in (0, w], which is regular because the pole's odd part cancels; the
    two outer intervals are regular and integrated directly.
    """
    if not (lo < pole < hi):
        raise PoleOutsideDomain(f"pole {pole!r} not strictly inside [{lo!r}, {hi!r}]")
    w = 0.5 * min(pole - lo, hi - pole)

    def paired(u):
        return f(pole + u) + f(pole - u)

    outer = [
        adaptive_quadrature(f, lo, pole - w, rel_tol, max_panels),
        adaptive_quadrature(f, pole + w, hi, rel_tol, max_panels),
    ]
    # The pairing cancels the pole analytically, but evaluating f at
    # pole +/- u in floating point cannot: roundoff in f's own arithmetic
    # grows like eps / u near the pole. When the window's true value is
    # tiny (e.g. f is an almost-pure pole), a purely relative target would
    # chase that noise into endless refinement, so anchor an absolute
    # floor to the magnitude of the outer pieces.
    floor = rel_tol * sum(abs(p.value) for p in outer)
    parts = [adaptive_quadrature(paired, 0.0, w, rel_tol, max_panels, abs_tol=floor)]
    parts.extend(outer)
    return QuadratureResult(
        value=sum(p.value for p in parts),
        error_estimate=sum(p.error_estimate for p in parts),
        evaluations=sum(p.evaluations for p in parts),
    )


def _refine_bracket(
    f: Callable[[float], float],
    bracket: RootBracket,
    tol: float,
    max_iter: int,
) -> float:
    """Brent-style hybrid bisection / inverse interpolation.

    Stops when the bracket is narrower than tol *and* the residual at the
    returned point is within tol; raises NonConvergence on the iteration cap.
    """
    a, b = bracket.lo, bracket.hi
    fa, fb = bracket.f_lo, bracket.f_hi
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        mid = 0.5 * (c - b)
        if fb == 0.0 or (abs(mid) <= tol1 and abs(fb) <= tol):
            return b
        if abs(e) < tol1 or abs(fa) <= abs(fb):
            d = e = mid
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * mid * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * mid * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            prev_e = e
            e = d
            if 2.0 * p < 3.0 * mid * q - abs(tol1 * q) and p < abs(0.5 * prev_e * q):
                d = p / q
            else:
                d = e = mid
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += tol1 if mid > 0 else -tol1
        fb = f(b)
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
    raise NonConvergence(f"root refinement did not converge in {max_iter} iterations")


def find_roots(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    scan_points: int,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> list[float]:
    """All roots of a continuous scalar f on [lo, hi], ascending.

    A uniform scan of scan_points samples collects sign-change brackets;
    each bracket is refined until both the bracket width and the residual
    |f| are within tol.  Roots closer together than the scan resolution can
    be merged or missed, as with any sampling-based search.
    """
    if not lo < hi:
        raise ValueError(f"bad interval [{lo!r}, {hi!r}]")
    if scan_points < 2:
        raise ValueError(f"scan_points must be >= 2, got {scan_points}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    xs = np.linspace(lo, hi, int(scan_points))
    roots: list[float] = []
    prev_x = float(xs[0])
    prev_f = float(f(prev_x))
    if prev_f == 0.0:
        roots.append(prev_x)
    for x in xs[1:]:
        x = float(x)
        fx = float(f(x))
        if fx == 0.0:
            roots.append(x)
        elif prev_f != 0.0 and (fx > 0.0) != (prev_f > 0.0):
            bracket = RootBracket(prev_x, x, prev_f, fx)
            roots.append(_refine_bracket(f, bracket, tol, max_iter))
        prev_x, prev_f = x, fx
    return sorted(roots)
