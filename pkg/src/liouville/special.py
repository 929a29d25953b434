"""Plane-wave integrals over spheres: J0, sinc and friends in double precision."""

from __future__ import annotations

import math

from scipy import integrate

from .errors import QuadratureFailure

J0_SERIES_LIMIT = 12.0


def _j0_series(x: float) -> float:
    q = -(x * x) / 4.0
    term = 1.0
    terms = [1.0]
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        terms.append(term)
        if k > 4 and abs(term) < 1e-18:
            return math.fsum(terms)


def _j0_asymptotic(x: float) -> float:
    # Hankel expansion, truncated at its smallest term
    P, Q = [], []
    a = 1.0
    prev = math.inf
    for k in range(200):
        term = a / x**k
        if abs(term) > prev or term < 1e-20:
            break
        prev = abs(term)
        if k % 2 == 0:
            P.append((-1) ** (k // 2) * term)
        else:
            Q.append(-((-1) ** ((k - 1) // 2)) * term)
        a *= (2 * k + 1) ** 2 / (8 * (k + 1))
    chi = x - math.pi / 4
    return math.sqrt(2 / (math.pi * x)) * (math.fsum(P) * math.cos(chi) - math.fsum(Q) * math.sin(chi))


def j0(x: float) -> float:
    """Bessel J0; absolute error below 1e-12 on the whole real line."""
    x = abs(float(x))
    if x <= J0_SERIES_LIMIT:
        return _j0_series(x)
    return _j0_asymptotic(x)


def sinc(x: float) -> float:
    """sin(x)/x with the removable singularity filled in."""
    if abs(x) < 1e-4:
        x2 = x * x
        return 1 - x2 / 6 + x2 * x2 / 120
    return math.sin(x) / x


def unit_sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d (d = 1 counts the two points)."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def sphere_area(d: int, r: float) -> float:
    return unit_sphere_area(d) * r ** (d - 1)


def sphere_plane_wave(d: int, r: float, rho: float) -> float:
    """Integral of exp(i z.eta) over {|z| = r} in R^d with |eta| = rho (a real number)."""
    x = r * rho
    if d == 1:
        return 2 * math.cos(x)
    if d == 2:
        return 2 * math.pi * r * j0(x)
    if d == 3:
        return 4 * math.pi * r * r * sinc(x)
    val, err = integrate.quad(lambda t: math.cos(x * math.cos(t)) * math.sin(t) ** (d - 2), 0, math.pi,
                              limit=200, epsabs=1e-13, epsrel=1e-13)
    if not math.isfinite(val) or err > 1e-10:
        raise QuadratureFailure(f"sphere integral in d={d} did not converge (error {err:g})")
    return unit_sphere_area(d - 1) * r ** (d - 1) * val
