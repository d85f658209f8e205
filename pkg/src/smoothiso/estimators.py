"""Kernel, smoothed Grenander and isotonized kernel estimators.

Every estimator is an integral of a (boundary-corrected) kernel against
either the jumps of a step function or a piecewise-constant density.  Both
are evaluated in closed form through the kernel's partial moments, so the
estimators carry no quadrature error.  The weights depend only on the
jump locations and the evaluation grid, which lets repeated fits on a fixed
design share one sparse weight matrix (see :class:`DesignPlan`).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import sparse

from .core import PiecewiseLinear, StepFunction
from .kernel import KernelSpec, _check_bandwidth, location_coeffs, window_mass
from .lcm import hull_indices

FINE_STEPS_PER_BANDWIDTH = 50


@dataclass(frozen=True)
class SampledFunction:
    grid: np.ndarray
    values: np.ndarray
    interval: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if np.shape(self.grid) != np.shape(self.values):
            raise ValueError("grid and values must have equal length")

    def __call__(self, t):
        return np.interp(t, self.grid, self.values)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["t", "value"])
            for t, v in zip(self.grid, self.values):
                out.writerow([repr(float(t)), repr(float(v))])


def _row_layout(lo, hi):
    counts = hi - lo
    rows = np.repeat(np.arange(lo.size), counts)
    starts = np.cumsum(counts) - counts
    cols = np.repeat(lo, counts) + np.arange(counts.sum()) - np.repeat(starts, counts)
    return rows, cols


def jump_weights(locs, t, b: float, kernel: KernelSpec, corrected: bool = True) -> sparse.csr_matrix:
    """Sparse matrix with entries k_b^(t)(t - u) for evaluation points ``t``
    (rows) and jump locations ``u`` (columns)."""
    locs = np.asarray(locs, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    lo = np.searchsorted(locs, t - b, side="right")
    hi = np.searchsorted(locs, t + b, side="left")
    rows, cols = _row_layout(lo, hi)
    a, c = location_coeffs(kernel, t, b, corrected)
    v = (t[rows] - locs[cols]) / b
    vals = (a[rows] + c[rows] * v) * kernel.k(v) / b
    return sparse.csr_matrix((vals, (rows, cols)), shape=(t.size, locs.size))


def cell_weights(left, right, t, b: float, kernel: KernelSpec, corrected: bool = True) -> sparse.csr_matrix:
    """Sparse matrix with entries int_{cell} k_b^(t)(t - u) du for
    contiguous ascending cells ``[left[j], right[j]]``."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    lo = np.searchsorted(right, t - b, side="right")
    hi = np.searchsorted(left, t + b, side="left")
    rows, cols = _row_layout(lo, hi)
    a, c = location_coeffs(kernel, t, b, corrected)
    tr = t[rows]
    vals = window_mass(kernel, a[rows], c[rows], (tr - right[cols]) / b, (tr - left[cols]) / b)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(t.size, left.size))


def _scalar_or_array(t, out):
    return float(out[0]) if np.ndim(t) == 0 else out


def kernel_estimator(cumul: StepFunction, b: float, kernel: KernelSpec, t,
                     corrected: bool = False, extend: bool = False):
    """Kernel estimate sum_i k_b^(t)(t - u_i) * jump_i at ``t``.

    The standard estimator (``corrected=False``) is only defined on
    [b, 1-b]; ``extend=True`` evaluates it with the raw kernel in the
    boundary regions as well, which is what the boundary analysis needs.
    """
    _check_bandwidth(b)
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < 0) or np.any(tt > 1):
        raise ValueError("t must lie in [0, 1]")
    if not corrected and not extend and (np.any(tt < b - 1e-12) or np.any(tt > 1 - b + 1e-12)):
        raise ValueError("standard kernel estimator is undefined in the boundary regions")
    W = jump_weights(cumul.breakpoints, tt, b, kernel, corrected)
    return _scalar_or_array(t, W @ cumul.jumps)


def smooth_cumulative(cumul: StepFunction, b: float, kernel: KernelSpec, t):
    """Kernel-smoothed version of the step function itself (not its derivative)."""
    _check_bandwidth(b)
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < 0) or np.any(tt > 1):
        raise ValueError("t must lie in [0, 1]")
    left, right, levels = cumul.cells()
    W = cell_weights(left, right, tt, b, kernel, corrected=True)
    return _scalar_or_array(t, W @ levels)


def cumulative_hull(cumul: StepFunction) -> PiecewiseLinear:
    """Least concave majorant of the step function's values at its
    breakpoints, anchored at t = 0 and closed at t = 1."""
    bp, vals = cumul.breakpoints, cumul.values
    t = bp
    v = vals
    if bp.size == 0 or bp[0] > 0:
        t = np.concatenate(([0.0], t))
        v = np.concatenate(([cumul.initial], v))
    if t[-1] < 1:
        t = np.concatenate((t, [1.0]))
        v = np.concatenate((v, [v[-1]]))
    idx = hull_indices(t, v)
    return PiecewiseLinear(t[idx], v[idx])


def smoothed_grenander(cumul: StepFunction, b: float, kernel: KernelSpec, grid) -> SampledFunction:
    """Boundary-corrected kernel smoothing of the Grenander-type slopes."""
    _check_bandwidth(b)
    grid = np.asarray(grid, dtype=float)
    hull = cumulative_hull(cumul)
    W = cell_weights(hull.knots[:-1], hull.knots[1:], grid, b, kernel, corrected=True)
    return SampledFunction(grid, W @ hull.slopes)


def naive_derivative(cumul: StepFunction, b: float, kernel: KernelSpec, t, h: float = 1e-6) -> np.ndarray:
    """Derivative of the smoothed cumulative.

    On [b, 1-b] this is exactly the standard kernel estimator; in the
    boundary regions, where the kernel shape moves with t, a second-order
    finite difference of the closed-form smoothed cumulative is used.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    mid = (t >= b) & (t <= 1 - b)
    if np.any(mid):
        out[mid] = kernel_estimator(cumul, b, kernel, t[mid])
    edge = ~mid
    if np.any(edge):
        te = t[edge]
        F = lambda x: smooth_cumulative(cumul, b, kernel, x)
        d = np.empty_like(te)
        fwd = te - h < 0
        bwd = te + h > 1
        ctr = ~(fwd | bwd)
        if np.any(ctr):
            d[ctr] = (F(te[ctr] + h) - F(te[ctr] - h)) / (2 * h)
        if np.any(fwd):
            x = te[fwd]
            d[fwd] = (-3 * F(x) + 4 * F(x + h) - F(x + 2 * h)) / (2 * h)
        if np.any(bwd):
            x = te[bwd]
            d[bwd] = (3 * F(x) - 4 * F(x - h) + F(x - 2 * h)) / (2 * h)
        out[edge] = d
    return out


def isotonized_kernel(cumul: StepFunction, b: float, kernel: KernelSpec, grid,
                      gamma: float = 0.8) -> SampledFunction:
    """Left-hand slopes of the least concave majorant of the smoothed cumulative.

    The smoothed cumulative is sampled on an internal grid of step at most
    b/50 and its majorant is taken.  On cells where the majorant touches the
    curve at both ends the curve itself is concave there, and the exact
    derivative is reported (clamped between the neighbouring chord slopes);
    elsewhere the chord slope of the majorant.  ``interval`` holds
    [b^gamma, 1 - b^gamma].
    """
    _check_bandwidth(b)
    if not 0.5 < gamma < 1:
        raise ValueError("gamma must lie in (1/2, 1)")
    grid = np.asarray(grid, dtype=float)
    if grid.size > 1 and (np.any(np.diff(grid) <= 0) or np.max(np.diff(grid)) > b / 10 + 1e-12):
        raise ValueError("grid must be ascending with spacing at most b/10")
    m = int(np.ceil(FINE_STEPS_PER_BANDWIDTH / b)) + 1
    fine = np.linspace(0.0, 1.0, m)
    F = smooth_cumulative(cumul, b, kernel, fine)
    idx = hull_indices(fine, F)
    seg = np.diff(F[idx]) / np.diff(fine[idx])
    cell_slope = np.repeat(seg, np.diff(idx))
    knot = np.zeros(m, dtype=bool)
    knot[idx] = True
    touching = knot[:-1] & knot[1:]

    j = np.clip(np.searchsorted(fine, grid, side="left") - 1, 0, m - 2)
    values = cell_slope[j].copy()
    sel = touching[j]
    if np.any(sel):
        js = j[sel]
        upper = np.where(js > 0, cell_slope[np.maximum(js - 1, 0)], np.inf)
        lower = np.where(js < m - 2, cell_slope[np.minimum(js + 1, m - 2)], -np.inf)
        exact = naive_derivative(cumul, b, kernel, grid[sel])
        values[sel] = np.clip(exact, lower, upper)
    # guard against sub-1e-9 reorderings between adjacent clamped cells
    values = np.minimum.accumulate(values)
    return SampledFunction(grid, values, (b**gamma, 1 - b**gamma))


class DesignPlan:
    """Precomputed estimator weights for the regression design i/n.

    ``kernel(ys)`` is the boundary-corrected kernel estimate and ``sg(ys)``
    the smoothed Grenander estimate on ``grid``; both agree with the
    generic functions applied to ``cumulative_step`` of the sample.
    """

    def __init__(self, n: int, b: float, kernel: KernelSpec, grid, corrected: bool = True):
        _check_bandwidth(b)
        self.n = n
        self.b = b
        self.grid = np.asarray(grid, dtype=float)
        edges = np.arange(n + 1) / n
        self._jw = jump_weights(edges[1:], self.grid, b, kernel, corrected) / n
        self._cw = cell_weights(edges[:-1], edges[1:], self.grid, b, kernel, corrected=True)
        self._steps = np.arange(n + 1, dtype=float)

    def cell_slopes(self, ys) -> np.ndarray:
        """Grenander-type slope on each design cell ((i-1)/n, i/n]."""
        S = np.concatenate(([0.0], np.cumsum(ys)))
        idx = hull_indices(self._steps, S)
        seg = np.diff(S[idx]) / np.diff(idx)
        return np.repeat(seg, np.diff(idx))

    def kernel(self, ys) -> np.ndarray:
        return self._jw @ np.asarray(ys, dtype=float)

    def sg(self, ys) -> np.ndarray:
        return self._cw @ self.cell_slopes(ys)
