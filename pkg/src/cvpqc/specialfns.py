"""Series evaluation of modified Bessel functions and Poisson tail sums.

Everything downstream (analytic distances, the optimizer, the Holevo
entropies) reduces to three scalar series: I_n(x), stripe sums of I_nk(x),
and upper Poisson tails.  All series run in plain double precision with
relative truncation; factorials never appear explicitly, only term ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Documented support window; series terms stay inside double range here.
SUPPORTED_X_MAX = 200.0
SUPPORTED_ORDER_MAX = 500


class ArgumentRangeError(ValueError):
    """Argument outside the supported (x, order) window."""


@dataclass(frozen=True)
class SeriesTolerance:
    """Relative truncation rule for infinite series.

    A series stops once a term drops below ``eps_abs`` times the running
    partial sum (or ``max_terms`` is hit).
    """

    eps_abs: float = 1e-15
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.eps_abs > 0:
            raise ValueError(f"eps_abs must be positive, got {self.eps_abs}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_TOL = SeriesTolerance()


def _check_range(order: int, x: float):
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    if x > SUPPORTED_X_MAX or order > SUPPORTED_ORDER_MAX:
        raise ArgumentRangeError(
            f"argument out of supported range: order={order} (max "
            f"{SUPPORTED_ORDER_MAX}), x={x} (max {SUPPORTED_X_MAX})"
        )


def bessel_i(order: int, x: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Modified Bessel function of the first kind, I_order(x).

    Evaluated as sum_s (x/2)^(order+2s) / ((order+s)! s!) with the leading
    term built by incremental ratios (no factorial table) and the tail cut
    by the relative rule in ``tol``.
    """
    _check_range(order, x)
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    h = 0.5 * x
    term = 1.0
    for k in range(1, order + 1):
        term *= h / k
    if term == 0.0:
        # leading term underflows; every later term is smaller still
        return 0.0
    total = term
    h2 = h * h
    for s in range(1, tol.max_terms):
        term *= h2 / ((order + s) * s)
        total += term
        if term < tol.eps_abs * total:
            break
    return total


def bessel_sum(order_step: int, x: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Stripe sum sum_{k>=1} I_{order_step*k}(x).

    Terms decay super-exponentially once order_step*k exceeds x, so the
    sum is cut when a term falls below eps_abs*(running sum + 1).
    """
    if order_step < 1:
        raise ValueError(f"order_step must be >= 1, got {order_step}")
    _check_range(0, x)
    if x == 0.0:
        return 0.0
    total = 0.0
    for k in range(1, tol.max_terms):
        order = order_step * k
        if order > SUPPORTED_ORDER_MAX:
            break  # term already below any representable contribution
        term = bessel_i(order, x, tol)
        total += term
        if term < tol.eps_abs * (total + 1.0):
            break
    return total


def poisson_tail(n: int, lam: float) -> float:
    """Upper Poisson tail P(X > n) = sum_{m>n} lam^m e^(-lam) / m!.

    For n < lam the complement of the lower partial sum is used (fsum
    compensated); for n >= lam the tail is summed directly.  Both flanks
    avoid the catastrophic cancellation the other one would suffer.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    if lam == 0.0:
        return 0.0
    if n < lam:
        term = math.exp(-lam)
        terms = [term]
        for m in range(1, n + 1):
            term *= lam / m
            terms.append(term)
        tail = 1.0 - math.fsum(terms)
        return max(tail, 0.0)
    # n >= lam: terms beyond n are decreasing
    term = math.exp(-lam)
    for m in range(1, n + 2):
        term *= lam / m
    total = term
    m = n + 2
    while term > 1e-18 * total and m < n + 10_000:
        term *= lam / m
        total += term
        m += 1
    return total
