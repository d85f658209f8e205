"""Function containers, statistical models and synthetic data.

Everything here is immutable once built.  Callables stored on the
containers are vectorised: they accept scalars or numpy arrays.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np
from scipy import integrate

from ._rng import SeedLike, stream

Fn = Callable[[np.ndarray], np.ndarray]

CHECK_GRID = np.linspace(0.0, 1.0, 1001)


@dataclass(frozen=True)
class MonotoneFunction:
    """A smooth target function on [0, 1] with analytic derivatives."""

    eval: Fn
    deriv1: Fn
    deriv2: Fn
    is_decreasing: bool = False
    name: str = "custom"

    def __call__(self, t):
        return self.eval(t)

    def __post_init__(self):
        vals = [np.asarray(f(CHECK_GRID), dtype=float) for f in (self.eval, self.deriv1, self.deriv2)]
        if not all(np.all(np.isfinite(v)) for v in vals):
            raise ValueError(f"{self.name}: function or derivatives not finite on [0, 1]")
        if self.is_decreasing and not np.all(vals[1] < 0):
            raise ValueError(f"{self.name}: flagged decreasing but deriv1 >= 0 somewhere")


@dataclass(frozen=True)
class StepFunction:
    """Step function on [0, 1], right-continuous by default.

    ``values[j]`` is the value on ``[breakpoints[j], breakpoints[j+1])``;
    before the first breakpoint the function equals ``initial``.  With
    ``right_continuous=False`` the cells are ``(breakpoints[j], breakpoints[j+1]]``
    instead.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    initial: float = 0.0
    right_continuous: bool = True

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.ndim != 1 or bp.shape != vals.shape:
            raise ValueError("breakpoints and values must be 1-d arrays of equal length")
        if bp.size and (bp[0] < 0 or bp[-1] > 1 or np.any(np.diff(bp) <= 0)):
            raise ValueError("breakpoints must be strictly ascending in [0, 1]")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        side = "right" if self.right_continuous else "left"
        idx = np.searchsorted(self.breakpoints, t, side=side) - 1
        padded = np.concatenate(([self.initial], self.values))
        return padded[idx + 1]

    @property
    def jumps(self) -> np.ndarray:
        return np.diff(np.concatenate(([self.initial], self.values)))

    def cells(self):
        """Constancy cells as ``(left_edges, right_edges, levels)`` covering [0, 1]."""
        bp = self.breakpoints
        left = np.concatenate(([0.0], bp))
        right = np.concatenate((bp, [1.0]))
        levels = np.concatenate(([self.initial], self.values))
        keep = right > left
        return left[keep], right[keep], levels[keep]


@dataclass(frozen=True)
class PiecewiseLinear:
    knots: np.ndarray
    knot_values: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        v = np.asarray(self.knot_values, dtype=float)
        if k.ndim != 1 or k.shape != v.shape or k.size < 2:
            raise ValueError("need at least two knots with matching values")
        if np.any(np.diff(k) <= 0):
            raise ValueError("knots must be strictly ascending")
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "knot_values", v)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.knots[0]) or np.any(t > self.knots[-1]):
            raise ValueError("evaluation point outside the knot range")
        return np.interp(t, self.knots, self.knot_values)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.knot_values) / np.diff(self.knots)


@dataclass(frozen=True)
class WeightMeasure:
    w: Fn
    name: str = "custom"

    def __call__(self, t):
        return self.w(t)


def uniform_weight() -> WeightMeasure:
    return WeightMeasure(lambda t: np.ones_like(np.asarray(t, dtype=float)), "uniform")


def boundary_weight(p: float) -> WeightMeasure:
    """w(t) = t^(2p) (1-t)^(2p): damps both boundary regions."""
    return WeightMeasure(lambda t: (np.asarray(t, float) * (1 - np.asarray(t, float))) ** (2 * p),
                         f"boundary{p:g}")


def scaled_weight(weight: WeightMeasure, factor: Fn, name: str | None = None) -> WeightMeasure:
    return WeightMeasure(lambda t: weight(t) * factor(t), name or f"{weight.name}*f")


@dataclass(frozen=True)
class Sample:
    n: int
    xs: np.ndarray
    ys: np.ndarray
    sigma_true: Optional[float] = None
    kind: str = "regression"

    def __post_init__(self):
        ys = np.asarray(self.ys, dtype=float)
        if ys.shape != (self.n,):
            raise ValueError("ys must have length n")
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "xs", np.asarray(self.xs, dtype=float))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["x", "y"])
            for x, y in zip(self.xs, self.ys):
                out.writerow([repr(float(x)), repr(float(y))])

    @classmethod
    def from_csv(cls, path, kind: str = "regression") -> "Sample":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
            raise ValueError(f"{path}: expected header 'x,y'")
        data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float)
        if data.size == 0:
            raise ValueError(f"{path}: no data rows")
        return cls(n=len(data), xs=data[:, 0], ys=data[:, 1], kind=kind)


def design_points(n: int) -> np.ndarray:
    return np.arange(1, n + 1) / n


# ---------------------------------------------------------------------------
# builtin test functions
# ---------------------------------------------------------------------------

def _bump(height: float, rate: float, center: float):
    def f(x):
        return height * np.exp(-rate * (x - center) ** 2)

    def d1(x):
        return f(x) * (-2 * rate * (x - center))

    def d2(x):
        return f(x) * (4 * rate**2 * (x - center) ** 2 - 2 * rate)

    return f, d1, d2


def _linear(intercept: float, slope: float):
    return (lambda x: intercept + slope * np.asarray(x, float),
            lambda x: np.full_like(np.asarray(x, float), slope),
            lambda x: np.zeros_like(np.asarray(x, float)))


def _add(*parts):
    return tuple((lambda x, fs=fs: sum(f(np.asarray(x, float)) for f in fs)) for fs in zip(*parts))


def _cosine(amp: float, freq: float):
    # amp * cos(freq * x)
    return (lambda x: amp * np.cos(freq * np.asarray(x, float)),
            lambda x: -amp * freq * np.sin(freq * np.asarray(x, float)),
            lambda x: -amp * freq**2 * np.cos(freq * np.asarray(x, float)))


def _lambda1():
    def cubic(x):
        x = np.asarray(x, float)
        return np.where(x <= 0.5, -15 * (x - 0.5) ** 3, 0.0)

    def cubic1(x):
        x = np.asarray(x, float)
        return np.where(x <= 0.5, -45 * (x - 0.5) ** 2, 0.0)

    def cubic2(x):
        x = np.asarray(x, float)
        return np.where(x <= 0.5, -90 * (x - 0.5), 0.0)

    return _add((cubic, cubic1, cubic2), _linear(0.15, -0.3), _bump(1.0, 250.0, 0.25))


_REQUIRED = {"lambda2": ("sigma",), "lambda_a": ("a",)}
_OPTIONAL = {
    "linear": {"intercept": 1.0, "slope": 1.0},
    "expdec": {"rate": 1.0},
}
BUILTIN_IDS = ("lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "lambda6",
               "lambda7", "lambda_a", "linear", "quadratic", "expdec")


def builtin_function(fid: str, params: Optional[Mapping[str, float]] = None) -> MonotoneFunction:
    """Look up one of the named test functions.

    ``lambda1`` ... ``lambda7`` and ``lambda_a`` are the regression functions
    of the power study; ``linear`` (intercept - slope*x), ``quadratic``
    (1 - x - x^2/2) and ``expdec`` (exp(-rate*x)) are decreasing helpers.
    """
    params = dict(params or {})
    if fid not in BUILTIN_IDS:
        raise KeyError(f"unknown function id {fid!r}")
    allowed = set(_REQUIRED.get(fid, ())) | set(_OPTIONAL.get(fid, {}))
    extra = set(params) - allowed
    if extra:
        raise ValueError(f"{fid}: unexpected parameter(s) {sorted(extra)}")
    for key in _REQUIRED.get(fid, ()):
        if key not in params:
            raise ValueError(f"{fid}: missing parameter {key!r}")
    opts = {**_OPTIONAL.get(fid, {}), **params}

    lam3 = _bump(0.2, 50.0, 0.5)
    lam4 = _cosine(-0.1, 6 * math.pi)
    decreasing = False
    if fid == "lambda1":
        parts = _lambda1()
    elif fid == "lambda2":
        parts = _linear(0.0, 16 * float(opts["sigma"]))
    elif fid == "lambda3":
        parts = lam3
    elif fid == "lambda4":
        parts = lam4
    elif fid == "lambda5":
        parts = _add(_linear(0.0, -0.2), lam3)
    elif fid == "lambda6":
        parts = _add(_linear(0.0, -0.2), lam4)
    elif fid == "lambda7":
        parts = _add(_linear(-1.0, -1.0), _bump(0.45, 50.0, 0.5))
    elif fid == "lambda_a":
        a = float(opts["a"])
        parts = _add(_linear(-1.0, -1.0), _bump(a, 50.0, 0.5))
        decreasing = a == 0.0
    elif fid == "linear":
        parts = _linear(float(opts["intercept"]), -float(opts["slope"]))
        decreasing = float(opts["slope"]) > 0
    elif fid == "quadratic":
        parts = (lambda x: 1 - np.asarray(x, float) - np.asarray(x, float) ** 2 / 2,
                 lambda x: -1 - np.asarray(x, float),
                 lambda x: np.full_like(np.asarray(x, float), -1.0))
        decreasing = True
    else:
        r = float(opts["rate"])
        parts = (lambda x: np.exp(-r * np.asarray(x, float)),
                 lambda x: -r * np.exp(-r * np.asarray(x, float)),
                 lambda x: r * r * np.exp(-r * np.asarray(x, float)))
        decreasing = r > 0
    return MonotoneFunction(*parts, is_decreasing=decreasing, name=fid)


def polynomial_function(coeffs, name: str = "poly") -> MonotoneFunction:
    """Polynomial with ``coeffs`` in increasing degree order."""
    p = np.polynomial.Polynomial(coeffs)
    d1, d2 = p.deriv(1), p.deriv(2)
    decreasing = bool(np.all(d1(CHECK_GRID) < 0))
    return MonotoneFunction(p, d1, d2, is_decreasing=decreasing, name=name)


def true_cumulative(lam: MonotoneFunction, t: float) -> float:
    """Integral of ``lam`` over [0, t] by adaptive quadrature."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t} outside [0, 1]")
    val, _ = integrate.quad(lambda u: float(lam(u)), 0.0, t, epsabs=1e-10, epsrel=1e-12, limit=200)
    return val


_GL_X, _GL_W = np.polynomial.legendre.leggauss(40)


def _cumulative_piece(lam: MonotoneFunction, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # fixed 40-node Gauss-Legendre on [a, b]; vectorised
    half = 0.5 * (np.asarray(b, dtype=float) - a)
    nodes = (a + half)[..., None] + half[..., None] * _GL_X
    return half * np.sum(_GL_W * lam(nodes), axis=-1)


def _cumulative_gl(lam: MonotoneFunction, t: np.ndarray) -> np.ndarray:
    # fixed 40-node Gauss-Legendre on [0, t]; vectorised over t
    t = np.asarray(t, dtype=float)
    nodes = 0.5 * t[..., None] * (_GL_X + 1.0)
    return 0.5 * t * np.sum(_GL_W * lam(nodes), axis=-1)


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    """A monotone estimation problem together with its Gaussian embedding.

    ``L``, ``Lprime`` and ``Lsecond`` describe the time change of the
    Brownian motion (regression) or Brownian bridge (density) that
    approximates the centred cumulative process.
    """

    kind: str
    lam: MonotoneFunction
    L: Fn
    Lprime: Fn
    Lsecond: Fn
    sigma: Optional[float] = None
    embedding: str = "motion"
    q_exponent: float = math.inf
    name: str = field(default="model")

    def __post_init__(self):
        if self.kind not in ("regression", "density"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        expected = "motion" if self.kind == "regression" else "bridge"
        if self.embedding != expected:
            raise ValueError(f"{self.kind} model requires a Brownian {expected} embedding")
        lp = np.asarray(self.Lprime(CHECK_GRID), dtype=float)
        if not (np.all(np.isfinite(lp)) and np.all(lp > 0)):
            raise ValueError("L' must be positive and finite on [0, 1]")

    def simulate(self, n: int, seed: SeedLike) -> Sample:
        if self.kind == "regression":
            return simulate_regression(self.lam, n, self.sigma, seed)
        return simulate_density(self.lam, n, seed)


def regression_model(lam: MonotoneFunction, sigma: float, name: str = "regression") -> ModelSpec:
    """Fixed-design Gaussian regression; the partial-sum process embeds in a
    Brownian motion with L(t) = sigma^2 t."""
    if sigma <= 0:
        raise ValueError("regression model needs sigma > 0")
    s2 = float(sigma) ** 2
    return ModelSpec(
        kind="regression", lam=lam, sigma=float(sigma), embedding="motion",
        L=lambda t: s2 * np.asarray(t, float),
        Lprime=lambda t: np.full_like(np.asarray(t, float), s2),
        Lsecond=lambda t: np.zeros_like(np.asarray(t, float)),
        name=name,
    )


def density_model(lam: MonotoneFunction, name: str = "density") -> ModelSpec:
    """Monotone density on [0, 1]; the empirical process embeds in a
    Brownian bridge with L the distribution function."""
    _check_density(lam)
    return ModelSpec(
        kind="density", lam=lam, embedding="bridge",
        L=lambda t: _cumulative_gl(lam, t),
        Lprime=lam.eval, Lsecond=lam.deriv1,
        name=name,
    )


def _check_density(lam: MonotoneFunction) -> None:
    if np.any(np.asarray(lam(CHECK_GRID)) < 0):
        raise ValueError(f"{lam.name} is negative somewhere on [0, 1]; not a density")
    total = true_cumulative(lam, 1.0)
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"{lam.name} integrates to {total:.8g}, not 1; not a density")


# ---------------------------------------------------------------------------
# data generation
# ---------------------------------------------------------------------------

def simulate_regression(lam: MonotoneFunction, n: int, sigma: float, seed: SeedLike) -> Sample:
    if n < 2:
        raise ValueError("need n >= 2")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    xs = design_points(n)
    eps = stream(seed).standard_normal(n)
    return Sample(n=n, xs=xs, ys=lam(xs) + sigma * eps, sigma_true=float(sigma), kind="regression")


CDF_TABLE_SIZE = 4097


def simulate_density(lam: MonotoneFunction, n: int, seed: SeedLike) -> Sample:
    """Draw ``n`` points from the density ``lam`` by inverting its
    distribution function.

    The distribution function is tabulated on a uniform grid; each uniform
    is bracketed by table cells and refined by Newton steps that fall back
    to bisection whenever they leave the bracket.  Converged to 1e-12.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    _check_density(lam)
    u = stream(seed).random(n)
    grid = np.linspace(0.0, 1.0, CDF_TABLE_SIZE)
    pieces = _cumulative_piece(lam, grid[:-1], grid[1:])
    table = np.concatenate(([0.0], np.cumsum(pieces)))
    u = u * table[-1]  # table[-1] equals 1 up to quadrature error
    j = np.clip(np.searchsorted(table, u, side="right") - 1, 0, CDF_TABLE_SIZE - 2)
    lo, hi = grid[j], grid[j + 1]
    base = table[j]
    x = lo + (hi - lo) * np.clip((u - base) / np.maximum(pieces[j], 1e-300), 0.0, 1.0)
    for _ in range(100):
        resid = base + _cumulative_piece(lam, grid[j], x) - u
        lo = np.where(resid < 0, x, lo)
        hi = np.where(resid < 0, hi, x)
        dens = lam(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = resid / dens
        newton = x - step
        ok = (dens > 0) & (newton >= lo) & (newton <= hi)
        x = np.where(ok, newton, 0.5 * (lo + hi))
        if np.all((ok & (np.abs(step) <= 1e-12)) | (hi - lo <= 1e-12)):
            break
    return Sample(n=n, xs=design_points(n), ys=np.sort(x), kind="density")


def cumulative_step(sample: Sample, kind: Optional[str] = None) -> StepFunction:
    """The cumulative estimator of Lambda built from ``sample``.

    Regression: partial sums n^-1 sum_{i <= nt} Y_i.  Density: the
    empirical distribution function of the draws.
    """
    kind = kind or sample.kind
    n = sample.n
    if kind == "regression":
        return StepFunction(sample.xs, np.cumsum(sample.ys) / n, 0.0)
    if kind == "density":
        pts, counts = np.unique(sample.ys, return_counts=True)
        return StepFunction(pts, np.cumsum(counts) / n, 0.0)
    raise ValueError(f"unknown sample kind {kind!r}")
