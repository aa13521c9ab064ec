"""Hand-rolled reference computations that pin expected values.

Nothing here touches the package: plain power series, bisection, and
adaptive Simpson quadrature, so oracle agreement is an independent check
rather than the code testing itself.
"""

from __future__ import annotations

import math
from typing import Callable


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 48,
) -> float:
    """Recursive Simpson with the standard 1/15 error update."""

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid = f(0.5 * (lo + mid))
        rmid = f(0.5 * (mid + hi))
        left = simpson(lo, mid, flo, lmid, fmid)
        right = simpson(mid, hi, fmid, rmid, fhi)
        if depth <= 0:
            return left + right
        if abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, flo, lmid, fmid, left, eps / 2.0, depth - 1) + recurse(
            mid, hi, fmid, rmid, fhi, right, eps / 2.0, depth - 1
        )

    fa, fb = f(a), f(b)
    mid = 0.5 * (a + b)
    fmid = f(mid)
    whole = simpson(a, b, fa, fmid, fb)
    return recurse(a, b, fa, fmid, fb, whole, tol, max_depth)


def bessel_j1(x: float) -> float:
    """J1 by its power series; adequate and fast for |x| < 20."""
    term = x / 2.0
    total = term
    k = 0
    while abs(term) > 1e-18 * max(1.0, abs(total)):
        k += 1
        term *= -(x * x / 4.0) / (k * (k + 1))
        total += term
    return total


def bessel_j1_prime(x: float) -> float:
    # differentiate the series termwise: each x^{2k+1} term gains (2k+1)/x
    if x == 0.0:
        return 0.5
    term = x / 2.0
    total = term / x  # k = 0: (2*0+1)/x
    k = 0
    while abs(term) > 1e-18 * max(1.0, abs(total * x)):
        k += 1
        term *= -(x * x / 4.0) / (k * (k + 1))
        total += term * (2 * k + 1) / x
    return total


def bisect_root(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-15
) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def first_j1prime_root() -> float:
    """First positive root of J1' (J1 rises to its first maximum there)."""
    return bisect_root(bessel_j1_prime, 1.5, 2.5)


def normalized_bessel_mode(root: float) -> Callable[[float], float]:
    """phi(r) = J1(root*r) scaled to unit L2(r dr) norm on (0, 1).

    The closed-form norm uses the Bessel integral
    int_0^1 J1(a r)^2 r dr = (J1'(a)^2 + (1 - 1/a^2) J1(a)^2) / 2,
    where the derivative term vanishes at a root of J1'.
    """
    gamma = root * root
    norm = math.sqrt(0.5 * (1.0 - 1.0 / gamma) * bessel_j1(root) ** 2)

    def phi(r: float) -> float:
        return bessel_j1(root * r) / norm

    return phi


def quartic_coefficient(root: float) -> float:
    """Continuum value of the quartic branch coefficient at mu = gamma0/2."""
    gamma = root * root
    mu = gamma / 2.0
    phi = normalized_bessel_mode(root)

    def f(r: float) -> float:
        if r == 0.0:
            return 0.0
        p4 = phi(r) ** 4
        return -(2.0 / 3.0) * p4 / r + (16.0 / 3.0) * mu * p4 * r

    return adaptive_simpson(f, 0.0, 1.0, tol=1e-13)


def tilted_profile_energy() -> float:
    """Continuum energy of h(r) = pi*r/2 at mu = 1."""

    def f(r: float) -> float:
        if r == 0.0:
            return 0.0
        quarter = math.pi / 2.0
        return (
            quarter**2 * r
            + math.sin(quarter * r) ** 2 / r
            - 0.5 * math.sin(2.0 * quarter * r) ** 2 * r
        )

    return math.pi * adaptive_simpson(f, 0.0, 1.0, tol=1e-13)


# Frozen oracle outputs (recomputed and re-asserted by the test suite).
J1PRIME_ROOT = 1.8411837813406597
GAMMA0_CONTINUUM = 3.38995771667189
CBAR_CONTINUUM = 18.309365249651385
TILTED_ENERGY_CONTINUUM = 6.072193963753959
