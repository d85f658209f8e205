"""Compactly supported smoothing kernels and boundary correction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np
from numpy.polynomial import Polynomial

_GL256 = np.polynomial.legendre.leggauss(256)


@dataclass(frozen=True)
class KernelSpec:
    """A symmetric probability density supported on [-1, 1].

    ``K0``, ``K1`` and ``K2`` are the partial moments
    ``int_{-1}^s u^j k(u) du`` for j = 0, 1, 2; arguments are clipped to
    [-1, 1] so they can be applied to unrestricted window bounds.
    """

    name: str
    k: Callable
    kprime: Callable
    K0: Callable
    K1: Callable
    K2: Callable

    @property
    def Dsq(self) -> float:
        return _Dsq(self)

    @property
    def second_moment(self) -> float:
        return float(self.K2(1.0))


def polynomial_kernel(coeffs, name: str) -> KernelSpec:
    """Build a kernel from the coefficients of its polynomial on [-1, 1]."""
    p = Polynomial(coeffs)
    u = Polynomial([0, 1])
    dp = p.deriv()
    prims = [(p * u**j).integ(lbnd=-1) for j in range(3)]

    def inside(fn):
        def f(x):
            x = np.asarray(x, dtype=float)
            return np.where(np.abs(x) <= 1.0, fn(x), 0.0)
        return f

    def clipped(fn):
        return lambda s: fn(np.clip(np.asarray(s, dtype=float), -1.0, 1.0))

    return KernelSpec(name, inside(p), inside(dp), *(clipped(P) for P in prims))


# (35/32)(1-u^2)^3 and (315/256)(1-u^2)^4; both vanish with their first
# derivative at +-1, as twice differentiability on the real line requires
KERNELS: Dict[str, KernelSpec] = {
    "triweight": polynomial_kernel(((35 / 32) * Polynomial([1, 0, -1]) ** 3).coef, "triweight"),
    "quadweight": polynomial_kernel(((315 / 256) * Polynomial([1, 0, -1]) ** 4).coef, "quadweight"),
}


def get_kernel(name: str = "triweight") -> KernelSpec:
    try:
        return KERNELS[name]
    except KeyError:
        raise KeyError(f"unknown kernel {name!r}; available: {sorted(KERNELS)}") from None


_DSQ_CACHE: Dict[str, float] = {}


def _Dsq(kernel: KernelSpec) -> float:
    if kernel.name not in _DSQ_CACHE:
        x, w = _GL256
        _DSQ_CACHE[kernel.name] = float(np.sum(w * kernel.k(x) ** 2))
    return _DSQ_CACHE[kernel.name]


def boundary_coeffs(kernel: KernelSpec, s):
    """Coefficients (psi1, psi2) making psi1*k + psi2*u*k a kernel on
    [-1, s] with unit mass and vanishing first moment."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(s > 1):
        raise ValueError("s must lie in [0, 1]")
    m0, m1, m2 = kernel.K0(s), kernel.K1(s), kernel.K2(s)
    det = m0 * m2 - m1 * m1
    if np.any(det <= 1e-14):
        raise ArithmeticError("boundary system is singular")
    return m2 / det, -m1 / det


def location_coeffs(kernel: KernelSpec, x, b: float, corrected: bool = True):
    """Per-location multipliers (a, c) with k^(x)(u) = a*k(u) + c*u*k(u).

    Left boundary [0, b): (psi1, psi2)(x/b); right boundary (1-b, 1]:
    (psi1, -psi2)((1-x)/b); interior, or ``corrected=False``: (1, 0).
    """
    x = np.asarray(x, dtype=float)
    a = np.ones_like(x)
    c = np.zeros_like(x)
    if not corrected:
        return a, c
    left = x < b
    right = x > 1 - b
    if np.any(left):
        p1, p2 = boundary_coeffs(kernel, x[left] / b)
        a[left], c[left] = p1, p2
    if np.any(right):
        p1, p2 = boundary_coeffs(kernel, (1 - x[right]) / b)
        a[right], c[right] = p1, -p2
    return a, c


def _check_bandwidth(b: float) -> None:
    if not 0 < b < 0.5:
        raise ValueError(f"bandwidth b={b} outside (0, 1/2)")


def boundary_kernel_value(kernel: KernelSpec, x: float, b: float, u):
    _check_bandwidth(b)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    a, c = location_coeffs(kernel, np.array([x]), b)
    u = np.asarray(u, dtype=float)
    return a[0] * kernel.k(u) + c[0] * u * kernel.k(u)


def window_mass(kernel: KernelSpec, a, c, v_lo, v_hi):
    """int_{v_lo}^{v_hi} (a k(v) + c v k(v)) dv with bounds clipped to [-1, 1]."""
    return a * (kernel.K0(v_hi) - kernel.K0(v_lo)) + c * (kernel.K1(v_hi) - kernel.K1(v_lo))


def local_dsq(kernel: KernelSpec, x, b: float, corrected: bool = True, m: int = 64):
    """int (k^(x)(v))^2 dv over the part of the window inside [0, 1].

    Equals D^2 on [b, 1-b]; near the edges it is the variance factor of
    the kernel actually used there.
    """
    _check_bandwidth(b)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lo = np.maximum(-1.0, (x - 1) / b)
    hi = np.minimum(1.0, x / b)
    nodes, w = np.polynomial.legendre.leggauss(m)
    half = 0.5 * (hi - lo)
    v = 0.5 * (hi + lo)[:, None] + half[:, None] * nodes
    a, c = location_coeffs(kernel, x, b, corrected)
    kv = (a[:, None] + c[:, None] * v) * kernel.k(v)
    return half * np.sum(w * kv * kv, axis=1)


def autocorrelation_r(kernel: KernelSpec, s):
    """r(s) = int k(z) k(s+z) dz / int k^2 on the overlap of the supports."""
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=float))
    x, w = _GL256
    lo = np.maximum(-1.0, -1.0 - s)
    hi = np.minimum(1.0, 1.0 - s)
    half = np.where(hi > lo, 0.5 * (hi - lo), 0.0)
    z = 0.5 * (hi + lo)[:, None] + half[:, None] * x
    num = half * np.sum(w * kernel.k(z) * kernel.k(z + s[:, None]), axis=1)
    out = num / kernel.Dsq
    return float(out[0]) if scalar else out
