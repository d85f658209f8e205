"""Fixed quadrature rules shared by the error and constants modules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def simpson_rule(a: float, b: float, m: int):
    """Nodes and weights of composite Simpson on ``m`` (odd) uniform nodes."""
    if m < 3 or m % 2 == 0:
        raise ValueError("Simpson needs an odd node count >= 3")
    x = np.linspace(a, b, m)
    h = (b - a) / (m - 1)
    w = np.full(m, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return x, w * h / 3.0


@lru_cache(maxsize=None)
def _leggauss(m: int):
    return np.polynomial.legendre.leggauss(m)


def gauss_legendre(a: float, b: float, m: int):
    x, w = _leggauss(m)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


@lru_cache(maxsize=None)
def gauss_hermite(m: int):
    """Nodes and weights for E f(X), X ~ N(0, 1)."""
    x, w = np.polynomial.hermite_e.hermegauss(m)
    return x, w / np.sqrt(2 * np.pi)
