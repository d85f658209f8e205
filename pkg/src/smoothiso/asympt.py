"""Limiting constants of the L_p-error central limit theorems.

Gaussian expectations are evaluated by conditioning: for a standard
bivariate normal pair (X, Y) with correlation rho,

    E[f(X) h(Y)] = E_Y[ h(Y) E[f(rho Y + sqrt(1 - rho^2) Z)] ].

The inner absolute moment E|mu + s Z|^p has a confluent-hypergeometric
closed form; the outer integral over Y uses Gauss-Legendre pieces split at
the kinks of |.|^p, which keeps p = 1 as accurate as p = 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import hyp1f1

from .core import ModelSpec, MonotoneFunction, WeightMeasure
from .kernel import KernelSpec, autocorrelation_r, local_dsq, location_coeffs
from .quadrature import gauss_legendre, simpson_rule

Y_RANGE = 10.0
RHO_LIMIT = 1 - 1e-8


def abs_moment(mu, sd, p: float):
    """E|mu + sd * Z|^p for Z ~ N(0, 1), elementwise."""
    scalar = np.ndim(mu) == 0 and np.ndim(sd) == 0
    mu, sd = np.broadcast_arrays(np.atleast_1d(np.asarray(mu, float)), np.atleast_1d(np.asarray(sd, float)))
    out = np.abs(mu) ** p
    pos = sd > 0
    if np.any(pos):
        s = sd[pos]
        const = 2 ** (p / 2) * gamma_fn((p + 1) / 2) / math.sqrt(math.pi)
        out[pos] = s**p * const * hyp1f1(-p / 2, 0.5, -mu[pos] ** 2 / (2 * s * s))
    return float(out[0]) if scalar else out


def _kinked_rule(breaks, m: int):
    """Gauss-Legendre nodes/weights on [-Y_RANGE, Y_RANGE] split at ``breaks``."""
    pts = sorted({-Y_RANGE, Y_RANGE, *(b for b in breaks if -Y_RANGE < b < Y_RANGE)})
    xs, ws = zip(*(gauss_legendre(a, c, m) for a, c in zip(pts[:-1], pts[1:])))
    return np.concatenate(xs), np.concatenate(ws)


def _phi(y):
    return np.exp(-0.5 * y * y) / math.sqrt(2 * math.pi)


def product_moment(g: float, a: float, rho: float, p: float, m: int = 64) -> float:
    """E[|g + aX|^p |g + aY|^p] for standard normals with correlation rho."""
    if abs(rho) > RHO_LIMIT:
        rho = math.copysign(1.0, rho)
    if a == 0:
        return abs(g) ** (2 * p)
    breaks = [-g / a]
    if rho != 0:
        breaks.append(-g / (a * rho))
    y, w = _kinked_rule(breaks, m)
    inner = abs_moment(g + a * rho * y, a * math.sqrt(max(1 - rho * rho, 0.0)), p)
    return float(np.sum(w * _phi(y) * np.abs(g + a * y) ** p * inner))


def _product_moment_grid(g: float, a: float, rhos: np.ndarray, p: float, m: int) -> np.ndarray:
    return np.array([product_moment(g, a, r, p, m) for r in rhos])


def _first_moment_weighted(g: float, a: float, p: float, m: int = 64) -> float:
    """E[|g + aX|^p X]."""
    if a == 0:
        return 0.0
    y, w = _kinked_rule([-g / a], m)
    return float(np.sum(w * _phi(y) * np.abs(g + a * y) ** p * y))


# ---------------------------------------------------------------------------
# bias
# ---------------------------------------------------------------------------

def smoothed_target(lam: MonotoneFunction, b: float, kernel: KernelSpec, t, corrected: bool = False,
                    m: int = 64):
    """int k_b^(t)(t - u) lam(u) du over u in [0, 1]."""
    t = np.atleast_1d(np.asarray(t, float))
    lo = np.maximum(-1.0, (t - 1) / b)
    hi = np.minimum(1.0, t / b)
    x, w = np.polynomial.legendre.leggauss(m)
    half = 0.5 * (hi - lo)
    v = 0.5 * (hi + lo)[:, None] + half[:, None] * x
    a, c = location_coeffs(kernel, t, b, corrected)
    kv = (a[:, None] + c[:, None] * v) * kernel.k(v)
    return half * np.sum(w * kv * lam(t[:, None] - b * v), axis=1)


def bias_gn(lam: MonotoneFunction, n: int, b: float, t, mode: str = "finite", C0: Optional[float] = None,
            kernel: Optional[KernelSpec] = None, corrected: bool = False):
    """Scaled bias (nb)^(1/2) (lam_(n)(t) - lam(t)), or its limit
    0.5 * C0 * lam''(t) * int k(y) y^2 dy (``mode="limit"``).

    By default the boundary regions use the raw kernel restricted to
    [0, 1]; ``corrected=True`` uses the boundary kernel instead.
    """
    from .kernel import get_kernel

    kernel = kernel or get_kernel()
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, float))
    if mode == "limit":
        if C0 is None or C0 <= 0:
            raise ValueError("limit mode needs C0 > 0")
        out = 0.5 * C0 * lam.deriv2(t) * kernel.second_moment
    elif mode == "finite":
        if np.any(t < 0) or np.any(t > 1):
            raise ValueError("t must lie in [0, 1]")
        out = math.sqrt(n * b) * (smoothed_target(lam, b, kernel, t, corrected) - lam(t))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = np.asarray(out, float)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# centering and variance constants
# ---------------------------------------------------------------------------

def centering_constant(model: ModelSpec, weight: WeightMeasure, kernel: KernelSpec, p: float,
                       n: int = 0, b: float = 0.0, variant: str = "full", corrected: bool = False,
                       interval: Optional[Tuple[float, float]] = None, t_nodes: int = 513,
                       local_norm: bool = False) -> float:
    """Mean of the rescaled L_p-error.

    ``full`` integrates over [0, 1], ``truncated`` over [b, 1-b] and
    ``interval`` over an explicit sub-interval; ``limit`` is the
    n-independent E|X|^p D^p int |L'|^(p/2) dmu.

    With ``local_norm`` the constant D is replaced by the norm of the
    kernel used at each t, which differs from D only within b of the
    edges.  Both versions share the same limit, but the local one removes
    an O(b) term that is visible at moderate n.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    D = math.sqrt(kernel.Dsq)
    ex_p = float(abs_moment(0.0, 1.0, p))
    if variant == "limit":
        x, wq = simpson_rule(0.0, 1.0, t_nodes)
        return ex_p * D**p * float(np.sum(wq * np.abs(model.Lprime(x)) ** (p / 2) * weight(x)))
    if variant == "full":
        lo, hi = 0.0, 1.0
    elif variant == "truncated":
        lo, hi = b, 1 - b
    elif variant == "interval":
        if interval is None:
            raise ValueError("variant 'interval' needs an interval")
        lo, hi = interval
    else:
        raise ValueError(f"unknown variant {variant!r}")
    x, wq = simpson_rule(lo, hi, t_nodes)
    g = bias_gn(model.lam, n, b, x, "finite", kernel=kernel, corrected=corrected)
    Dt = np.sqrt(local_dsq(kernel, x, b, corrected)) if local_norm else D
    inner = abs_moment(g, np.sqrt(model.Lprime(x)) * Dt, p)
    return float(np.sum(wq * inner * weight(x)))


def sigma1(kernel: KernelSpec, p: float, s_nodes: int = 128, y_nodes: int = 64) -> float:
    """int over s of { E|XY|^p at correlation r(s) - (E|X|^p)^2 }."""
    if p < 1:
        raise ValueError("p must be >= 1")
    s, ws = gauss_legendre(0.0, 2.0, s_nodes)
    rho = autocorrelation_r(kernel, s)
    base = float(abs_moment(0.0, 1.0, p)) ** 2
    vals = _product_moment_grid(0.0, 1.0, rho, p, y_nodes) - base
    return 2.0 * float(np.sum(ws * vals))


def variance_sigma2(model: ModelSpec, weight: WeightMeasure, kernel: KernelSpec, p: float,
                    t_nodes: int = 513, s1: Optional[float] = None) -> float:
    s1 = sigma1(kernel, p) if s1 is None else s1
    x, wq = simpson_rule(0.0, 1.0, t_nodes)
    integral = float(np.sum(wq * np.abs(model.Lprime(x)) ** p * weight(x) ** 2))
    return s1 * kernel.Dsq**p * integral


def variance_theta(model: ModelSpec, weight: WeightMeasure, kernel: KernelSpec, p: float, C0: float,
                   u_nodes: int = 257, s_nodes: int = 64, y_nodes: int = 64):
    """(theta^2, theta_1, theta_tilde^2) for the regime n b^5 -> C0^2."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if C0 <= 0:
        raise ValueError("C0 must be positive")
    D = math.sqrt(kernel.Dsq)
    u, wu = simpson_rule(0.0, 1.0, u_nodes)
    s, ws = gauss_legendre(0.0, 2.0, s_nodes)
    rho = autocorrelation_r(kernel, s)
    g = bias_gn(model.lam, 0, 0.0, u, "limit", C0=C0, kernel=kernel)
    a = np.sqrt(model.Lprime(u)) * D
    w = weight(u)
    theta2 = 0.0
    theta1 = 0.0
    for gi, ai, wi, wui in zip(g, a, w, wu):
        if wi == 0:
            continue
        single = float(abs_moment(gi, ai, p))
        cov = _product_moment_grid(float(gi), float(ai), rho, p, y_nodes) - single**2
        theta2 += wui * wi**2 * 2.0 * float(np.sum(ws * cov))
        theta1 += wui * wi * (ai / D) * _first_moment_weighted(float(gi), float(ai), p, y_nodes)
    L1 = float(np.sum(wu * model.Lprime(u)))
    return theta2, theta1, theta2 - theta1**2 / (kernel.Dsq * L1)


def c1(model: ModelSpec, t):
    """|lam'(t) / (2 L'(t)^2)|^(1/3)."""
    t = np.asarray(t, float)
    return np.abs(model.lam.deriv1(t) / (2 * model.Lprime(t) ** 2)) ** (1 / 3)


def c1_ratio(model: ModelSpec, t):
    """c1'(t) / c1(t)^2 from the analytic derivatives of lam and L."""
    t = np.asarray(t, float)
    d1, d2 = model.lam.deriv1(t), model.lam.deriv2(t)
    lp, lpp = model.Lprime(t), model.Lsecond(t)
    if np.any(d1 >= 0):
        raise ValueError("c1 needs lam' < 0 everywhere")
    h = -d1 / (2 * lp**2)
    dh = -d2 / (2 * lp**2) + 2 * d1 * lpp / lp**3
    return dh / (3 * h ** (4 / 3))


def alpha0(model: ModelSpec, weight: WeightMeasure, p: float, t_nodes: int = 513) -> float:
    """(int |c1'/c1^2|^p dmu)^(1/p): the scale of the smoothed Grenander
    versus kernel distance."""
    if p < 1:
        raise ValueError("p must be >= 1")
    x, wq = simpson_rule(0.0, 1.0, t_nodes)
    vals = np.abs(c1_ratio(model, x)) ** p * weight(x)
    return float(np.sum(wq * vals)) ** (1 / p)


# ---------------------------------------------------------------------------
# standardisation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticConstants:
    p: float
    regime: str
    m_center: float
    scale_variance: float
    C0: Optional[float] = None
    components: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.regime not in ("smallband", "fixedband"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if not self.scale_variance > 0:
            raise ValueError("scale variance must be positive")


def select_variance(regime: str, embedding: str, components: Dict[str, float]) -> float:
    key = "sigma2" if regime == "smallband" else ("theta2" if embedding == "motion" else "theta_tilde2")
    if key not in components:
        raise KeyError(f"regime {regime!r} with {embedding} embedding needs {key}")
    return components[key]


def standardize(raw_error: float, p: float, n: int, b: float, constants: AsymptoticConstants) -> float:
    """z = (b V)^(-1/2) ((nb)^(p/2) raw_error - m)."""
    return ((n * b) ** (p / 2) * raw_error - constants.m_center) / math.sqrt(b * constants.scale_variance)


def clt_constants(model: ModelSpec, weight: WeightMeasure, kernel: KernelSpec, p: float, n: int, b: float,
                  regime: str, centering: str = "full", corrected: bool = True,
                  interval: Optional[Tuple[float, float]] = None,
                  local_norm: bool = False) -> AsymptoticConstants:
    """Centering and variance for one CLT configuration."""
    C0 = math.sqrt(n * b**5)
    comps: Dict[str, float] = {}
    if regime == "smallband":
        comps["sigma2"] = variance_sigma2(model, weight, kernel, p)
    else:
        th2, th1, tt2 = variance_theta(model, weight, kernel, p, C0)
        comps.update(theta2=th2, theta1=th1, theta_tilde2=tt2)
    V = select_variance(regime, model.embedding, comps)
    m = centering_constant(model, weight, kernel, p, n, b, centering, corrected, interval, local_norm=local_norm)
    return AsymptoticConstants(p=p, regime=regime, m_center=m, scale_variance=V, C0=C0, components=comps)
