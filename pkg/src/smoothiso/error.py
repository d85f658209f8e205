"""Weighted global error functionals on [0, 1].

All integrals use a fixed composite Simpson rule (2049 nodes by default) so
results are reproducible across platforms.
"""

from __future__ import annotations

from typing import Callable, Optional, Tuple, Union

import numpy as np

from .core import WeightMeasure, uniform_weight
from .quadrature import simpson_rule

NODES = 2049

Evaluable = Union[Callable, float]


def _evaluate(f: Evaluable, x: np.ndarray) -> np.ndarray:
    if callable(f):
        return np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return np.full_like(x, float(f))


def lp_error(f: Evaluable, g: Evaluable, p: float, weight: Optional[WeightMeasure] = None,
             interval: Tuple[float, float] = (0.0, 1.0), nodes: int = NODES) -> float:
    """int_{a1}^{a2} |f - g|^p w dt  (the integral itself, no p-th root)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    a1, a2 = interval
    if not 0 <= a1 < a2 <= 1:
        raise ValueError(f"invalid interval {interval}")
    weight = weight or uniform_weight()
    x, wq = simpson_rule(a1, a2, nodes)
    diff = _evaluate(f, x) - _evaluate(g, x)
    return float(np.sum(wq * np.abs(diff) ** p * weight(x)))


def hellinger(f: Evaluable, g: Evaluable, weight: Optional[WeightMeasure] = None,
              nodes: int = NODES) -> float:
    """Weighted Hellinger distance (0.5 int (sqrt f - sqrt g)^2 w)^(1/2).

    Raises if either function is not strictly positive on the quadrature
    nodes, since the distance is then undefined.
    """
    weight = weight or uniform_weight()
    x, wq = simpson_rule(0.0, 1.0, nodes)
    fv, gv = _evaluate(f, x), _evaluate(g, x)
    if np.any(fv <= 0) or np.any(gv <= 0):
        raise ValueError("Hellinger distance needs strictly positive functions")
    return float(np.sqrt(0.5 * np.sum(wq * (np.sqrt(fv) - np.sqrt(gv)) ** 2 * weight(x))))
