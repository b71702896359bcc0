"""Shared oracles for the test suite.

The analytic code paths are double-precision series; the oracles here are
deliberately different routes: extended-precision mpmath series, dense
matrix algebra, and Monte Carlo.  Tests must never compare an analytic
result against itself.
"""

import math

import mpmath
import numpy as np
import pytest

from cvpqc import CoherentLabel, coherent_projector

TWO_PI = 2.0 * math.pi


def mp_bessel_i(order: int, x: float, terms: int = 200) -> float:
    """I_order(x) by direct extended-precision series summation."""
    with mpmath.workdps(50):
        h = mpmath.mpf(x) / 2
        total = mpmath.mpf(0)
        for s in range(terms):
            total += h ** (order + 2 * s) / (
                mpmath.factorial(order + s) * mpmath.factorial(s)
            )
        return float(total)


def mp_poisson_tail(n: int, lam: float) -> float:
    """P(X > n) through the regularized incomplete gamma function."""
    with mpmath.workdps(50):
        return float(mpmath.gammainc(n + 1, 0, lam, regularized=True))


def projector_average(labels, cutoff):
    """Uniform mixture of coherent projectors; the brute-force route."""
    acc = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
    for label in labels:
        acc += coherent_projector(label, cutoff).mat
    return acc / len(labels)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
