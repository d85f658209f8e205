"""Least concave majorants of point sequences.

The hull is built by one monotone-chain sweep.  Points that are collinear
with their hull neighbours (up to a relative tolerance) are dropped, so
the knot set is minimal.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .core import PiecewiseLinear, StepFunction

COLLINEAR_RTOL = 1e-14


@njit(cache=True)
def _hull_indices(t, v):
    n = t.shape[0]
    idx = np.empty(n, dtype=np.int64)
    m = 0
    for i in range(n):
        while m >= 2:
            i0 = idx[m - 2]
            i1 = idx[m - 1]
            lhs = (t[i1] - t[i0]) * (v[i] - v[i0])
            rhs = (v[i1] - v[i0]) * (t[i] - t[i0])
            # middle point on or below the chord from i0 to i
            if lhs - rhs >= -COLLINEAR_RTOL * (abs(lhs) + abs(rhs)):
                m -= 1
            else:
                break
        idx[m] = i
        m += 1
    return idx[:m]


def _as_points(t, v=None):
    if v is None:
        pts = np.asarray(t, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("points must be an (m, 2) array of (t, v) pairs")
        t, v = pts[:, 0], pts[:, 1]
    t = np.ascontiguousarray(t, dtype=float)
    v = np.ascontiguousarray(v, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise ValueError("t and v must be 1-d arrays of equal length")
    if t.size < 2:
        raise ValueError("need at least two points")
    if np.any(np.diff(t) <= 0):
        raise ValueError("t must be strictly ascending")
    return t, v


def hull_indices(t, v=None) -> np.ndarray:
    """Indices of the input points that are knots of the least concave majorant."""
    t, v = _as_points(t, v)
    return _hull_indices(t, v)


def least_concave_majorant(t, v=None) -> PiecewiseLinear:
    """Least concave majorant of the points ``(t[i], v[i])``.

    Accepts either two 1-d arrays or a single ``(m, 2)`` array.
    """
    t, v = _as_points(t, v)
    idx = _hull_indices(t, v)
    return PiecewiseLinear(t[idx], v[idx])


def grenander_slopes(pl: PiecewiseLinear) -> StepFunction:
    """Left-hand slopes of a concave piecewise-linear curve.

    The result is left-continuous: the slope of segment ``j`` is taken on
    ``(knot[j], knot[j+1]]``.  At the first knot the first slope is used.
    """
    slopes = pl.slopes
    if np.any(np.diff(slopes) > 1e-12 * (1 + np.abs(slopes[1:]))):
        raise ValueError("curve is not concave")
    return StepFunction(pl.knots[:-1], slopes, float(slopes[0]), right_continuous=False)


def concave_gap(t, v, t0: float) -> float:
    """Distance at ``t0`` between the least concave majorant and the
    linear interpolation of the points."""
    t, v = _as_points(t, v)
    if not t[0] <= t0 <= t[-1]:
        raise ValueError(f"t0={t0} outside [{t[0]}, {t[-1]}]")
    idx = _hull_indices(t, v)
    gap = np.interp(t0, t[idx], v[idx]) - np.interp(t0, t, v)
    return float(max(gap, 0.0))


@njit(cache=True)
def _gap_at_zero(left_steps, right_steps, step, c_idx):
    # Z(t) = W(t) - t^2 on the grid j*step, j = -c_idx..c_idx; returns the
    # concave majorant at 0 (Z(0) = 0).
    m = 2 * c_idx + 1
    t = np.empty(m)
    z = np.empty(m)
    t[c_idx] = 0.0
    z[c_idx] = 0.0
    acc = 0.0
    for j in range(1, c_idx + 1):
        acc += right_steps[j - 1]
        t[c_idx + j] = j * step
        z[c_idx + j] = acc - (j * step) ** 2
    acc = 0.0
    for j in range(1, c_idx + 1):
        acc += left_steps[j - 1]
        t[c_idx - j] = -j * step
        z[c_idx - j] = acc - (j * step) ** 2
    idx = _hull_indices(t, z)
    for k in range(idx.shape[0] - 1):
        a = idx[k]
        b = idx[k + 1]
        if a <= c_idx <= b:
            if a == b:
                return 0.0
            gap = z[a] + (z[b] - z[a]) * (0.0 - t[a]) / (t[b] - t[a])
            # the collinearity tolerance may leave the chord a hair below Z(0)
            return max(gap, 0.0)
    return 0.0
