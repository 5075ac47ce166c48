from __future__ import annotations

import numpy as np
import pytest

from wgqed import OrderingPolicy, make_context

#: cutoffs of the five coupled modes used in the plots, aspect ratio 2
FIGURE_CUTOFFS = (5.0, 13.0, 37.0, 45.0, 61.0)


@pytest.fixture(scope="session")
def ctx():
    """Standard context: the five plot modes, g^2 = 0.01."""
    return make_context(g_squared=0.01, policy=OrderingPolicy.FIGURE)


@pytest.fixture(scope="session")
def ctx_strong():
    return make_context(g_squared=0.02, policy=OrderingPolicy.FIGURE)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260817)


def draw_energies(rng, count, lo, hi, cutoffs, min_dist=5e-2):
    """Uniform energies in (lo, hi) at least min_dist from every cutoff."""
    out = []
    while len(out) < count:
        e = float(rng.uniform(lo, hi))
        if all(abs(e - c) >= min_dist for c in cutoffs):
            out.append(e)
    return out
