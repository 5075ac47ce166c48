"""Independent numerical routes for checking the package's integrals.

Everything here goes through scipy.integrate.quad plus generic Richardson
extrapolation and shares no code with the library's own quadrature, so an
agreement between the two is evidence rather than tautology.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-13, limit=400)


def pv_epsilon_exclusion(f, pole, lo, hi, eps0=1e-3):
    """Principal value by symmetric pole exclusion, extrapolated to zero
    window size.

    For a simple pole the excluded-window value behaves as
    I(eps) = I_PV - 2*s(p)*eps - s''(p)*eps**3/3 + O(eps**5) with s the
    smooth part, so three window sizes determine the constant term.
    """
    u_values = (1.0, 0.5, 0.25)
    samples = []
    for u in u_values:
        eps = eps0 * u
        left, _ = quad(f, lo, pole - eps, **_QUAD_OPTS)
        right, _ = quad(f, pole + eps, hi, **_QUAD_OPTS)
        samples.append(left + right)
    a = np.array([[1.0, u, u**3] for u in u_values])
    return float(np.linalg.solve(a, np.asarray(samples))[0])


def gamma_broadened(energy, cutoffs, g_squared, eps0=2e-3):
    """Decay rate via a Gaussian-broadened energy delta, extrapolated in
    the squared width.

    Per open mode the on-shell rate is smeared as
        int dw  phi((w - E)/eps)/eps * Omega**2 / k(w)
    which expands in even powers of eps; a 3-point Richardson solve in
    {1, eps^2, eps^4} recovers the eps -> 0 limit Omega**2 / k(E).
    Energies must sit well away from every cutoff (>> eps) so neither the
    truncated Gaussian mass nor a closed mode's leakage contributes.
    """
    norm = 1.0 / math.sqrt(2.0 * math.pi)

    def one(eps):
        total = 0.0
        for om in cutoffs:
            if om >= energy:
                continue

            def integrand(u, om=om, eps=eps):
                w = energy + eps * u
                return norm * math.exp(-0.5 * u * u) / math.sqrt((w - om) * (w + om))

            val, _ = quad(integrand, -30.0, 30.0, **_QUAD_OPTS)
            total += om * om * val
        return 2.0 * math.pi * g_squared * total

    u_values = (1.0, 1.0 / math.sqrt(2.0), 0.5)
    samples = [one(eps0 * u) for u in u_values]
    a = np.array([[1.0, u**2, u**4] for u in u_values])
    return float(np.linalg.solve(a, np.asarray(samples))[0])


def shift_integral_direct_k(energy, cutoff):
    """The level-shift integral evaluated on the wavenumber axis:

        I = PV int_0^inf dk / (w(k) * (E - w(k))),   w = sqrt(cutoff^2+k^2)

    (equal to the t-substituted form used by the library).  Open modes
    are handled by subtracting the simple pole C/(k_j - k) with
    C = 1/k_j, integrating the smooth remainder, and adding the analytic
    principal-value logarithm; the removable point is bridged with the
    exact limit L = (E^2 + k_j^2) / (2 E^2 k_j^2).
    """
    om = cutoff

    def f(k):
        w = math.sqrt(om * om + k * k)
        return 1.0 / (w * (energy - w))

    if energy <= om:
        val, _ = quad(f, 0.0, np.inf, **_QUAD_OPTS)
        return val

    kj = math.sqrt((energy - om) * (energy + om))
    c = 1.0 / kj
    limit_val = (energy * energy + kj * kj) / (2.0 * energy * energy * kj * kj)
    cap = 2.0 * kj + 10.0

    def subtracted(k):
        if abs(k - kj) < 1e-7:
            return limit_val
        return f(k) - c / (kj - k)

    h = 1e-4  # bridge half-width: midpoint rule error is O(h^3)
    left, _ = quad(subtracted, 0.0, kj - h, **_QUAD_OPTS)
    bridge = 2.0 * h * limit_val
    right, _ = quad(subtracted, kj + h, cap, **_QUAD_OPTS)
    log_term = c * math.log(kj / (cap - kj))
    tail, _ = quad(f, cap, np.inf, **_QUAD_OPTS)
    return left + bridge + right + log_term + tail


def shift_integral_closed_form(energy, cutoff):
    """Antiderivative-based value of the same integral (third route)."""
    if energy > cutoff:
        k = math.sqrt((energy - cutoff) * (energy + cutoff))
        return 2.0 * math.atanh(math.sqrt((energy - cutoff) / (energy + cutoff))) / k
    kappa = math.sqrt((cutoff - energy) * (cutoff + energy))
    return -2.0 * math.atan(math.sqrt((cutoff + energy) / (cutoff - energy))) / kappa
