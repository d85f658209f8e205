"""Bootstrap test of monotonicity for the regression model Y_i = lambda(i/n) + e_i.

The statistic compares the smoothed Grenander estimator, which is
monotone by construction, with the boundary-corrected kernel estimator,
which is not.  Under a decreasing lambda both estimate the same curve and
the statistic stays small; a non-monotone lambda pulls them apart.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional

import numpy as np

from ._parallel import parallel_map
from ._rng import SeedLike, seed_path, stream
from .core import Sample, builtin_function, design_points, simulate_regression
from .estimators import cell_weights, jump_weights
from .kernel import KernelSpec, _check_bandwidth, get_kernel
from .lcm import hull_indices
from .quadrature import simpson_rule

DEFAULT_NODES = 513
MIN_BOOTSTRAP = 20


def rice_sigma(sample: Sample) -> float:
    """First-difference noise estimate sqrt(sum (Y_{i+1} - Y_i)^2 / (2(n-1)))."""
    ys = np.asarray(sample.ys, dtype=float)
    if ys.size < 2:
        raise ValueError("rice_sigma needs at least two observations")
    return float(np.sqrt(np.sum(np.diff(ys) ** 2) / (2 * (ys.size - 1))))


class _TnPlan:
    """Weights for T_n on a fixed design: both estimators on the quadrature
    nodes, plus the smoothed Grenander fit at the design points."""

    def __init__(self, n: int, b: float, kernel: KernelSpec, p: int, nodes: int):
        _check_bandwidth(b)
        if p not in (1, 2):
            raise ValueError("p must be 1 or 2")
        self.n, self.b, self.p = n, b, p
        lo, hi = (b, 1 - b) if p == 2 else (0.0, 1.0)
        self.x, self.wq = simpson_rule(lo, hi, nodes)
        edges = np.arange(n + 1) / n
        self._jw = jump_weights(edges[1:], self.x, b, kernel, corrected=True) / n
        self._cw = cell_weights(edges[:-1], edges[1:], self.x, b, kernel, corrected=True)
        self._fit_w = cell_weights(edges[:-1], edges[1:], design_points(n), b, kernel, corrected=True)
        self._steps = np.arange(n + 1, dtype=float)

    def cell_slopes(self, ys: np.ndarray) -> np.ndarray:
        S = np.concatenate(([0.0], np.cumsum(ys)))
        idx = hull_indices(self._steps, S)
        return np.repeat(np.diff(S[idx]) / np.diff(idx), np.diff(idx))

    def statistics(self, Y: np.ndarray) -> np.ndarray:
        """T_n for every row of ``Y`` (shape (m, n))."""
        Y = np.atleast_2d(Y)
        slopes = np.stack([self.cell_slopes(y) for y in Y], axis=1)
        diff = self._cw @ slopes - self._jw @ Y.T
        scale = self.n ** (2 / 3)
        if self.p == 2:
            return scale * np.sqrt(self.wq @ diff**2)
        return scale * (self.wq @ np.abs(diff))

    def sg_at_design(self, ys: np.ndarray) -> np.ndarray:
        return self._fit_w @ self.cell_slopes(ys)


@lru_cache(maxsize=16)
def _plan(n: int, b: float, kernel_name: str, p: int, nodes: int) -> _TnPlan:
    return _TnPlan(n, b, get_kernel(kernel_name), p, nodes)


def _check_design(sample: Sample) -> None:
    if sample.kind != "regression":
        raise ValueError("the monotonicity test needs a regression sample")
    if not np.allclose(sample.xs, design_points(sample.n), rtol=0, atol=1e-9):
        raise ValueError("the monotonicity test needs the design x_i = i/n")


def statistic_Tn(sample: Sample, b: float = 0.1, kernel: Optional[KernelSpec] = None,
                 nodes: int = DEFAULT_NODES, p: int = 2) -> float:
    """n^(2/3) (int_b^{1-b} (SG - kernel)^2)^(1/2), or with ``p=1`` the
    L_1 version n^(2/3) int_0^1 |SG - kernel| over the whole interval."""
    _check_design(sample)
    kernel = kernel or get_kernel()
    return float(_plan(sample.n, b, kernel.name, p, nodes).statistics(sample.ys)[0])


def critical_index(alpha: float, B: int) -> int:
    """1-based rank ceil((1 - alpha) B) of the bootstrap critical value."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if B < MIN_BOOTSTRAP:
        raise ValueError(f"B must be at least {MIN_BOOTSTRAP}")
    # rounding guards against (1 - 0.05) * 200 = 190.00000000000003
    if math.ceil(round(alpha * B, 9)) < 1:
        raise ValueError(f"B={B} is too small for alpha={alpha}")
    return min(B, math.ceil(round((1 - alpha) * B, 9)))


@dataclass
class TestOutcome:
    __test__ = False  # keep pytest from collecting this as a test class

    Tn: float
    critical_value: float
    alpha: float
    reject: bool
    B: int
    seed: List[int]
    sigma_hat: float
    p: int = 2

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def bootstrap_test(sample: Sample, b: float = 0.1, B: int = 200, alpha: float = 0.05, seed: SeedLike = 0,
                   kernel: Optional[KernelSpec] = None, p: int = 2, nodes: int = DEFAULT_NODES) -> TestOutcome:
    """Reject monotonicity when T_n exceeds the bootstrap critical value.

    Bootstrap samples are the smoothed Grenander fit at i/n plus Gaussian
    noise with the Rice scale; bootstrap sample j uses stream (seed, j).
    """
    _check_design(sample)
    k = critical_index(alpha, B)
    kernel = kernel or get_kernel()
    plan = _plan(sample.n, b, kernel.name, p, nodes)
    ys = np.asarray(sample.ys, dtype=float)
    Tn = float(plan.statistics(ys)[0])
    sigma_hat = rice_sigma(sample)
    fit = plan.sg_at_design(ys)
    noise = np.stack([stream(seed, j).standard_normal(sample.n) for j in range(B)])
    boot = np.sort(plan.statistics(fit + sigma_hat * noise))
    crit = float(boot[k - 1])
    return TestOutcome(Tn=Tn, critical_value=crit, alpha=alpha, reject=bool(Tn > crit), B=B,
                       seed=list(seed_path(seed)), sigma_hat=sigma_hat, p=p)


@dataclass
class PowerResult:
    config: Dict[str, Any]
    outcomes: List[TestOutcome] = field(default_factory=list)

    @property
    def rejections(self) -> int:
        return sum(o.reject for o in self.outcomes)

    @property
    def rate(self) -> float:
        return self.rejections / len(self.outcomes)

    CSV_COLUMNS = ("function", "params", "n", "sigma", "b", "alpha", "N", "B", "p", "seed",
                   "rejections", "rate")

    def csv_row(self) -> List[Any]:
        c = self.config
        params = ";".join(f"{k}={v}" for k, v in sorted(c["params"].items()))
        seed = "/".join(str(s) for s in c["seed"])
        return [c["function"], params, c["n"], c["sigma"], c["b"], c["alpha"], c["N"], c["B"], c["p"],
                seed, self.rejections, repr(self.rate)]

    def to_dict(self) -> Dict[str, Any]:
        return {"config": self.config, "rejections": self.rejections, "rate": self.rate,
                "outcomes": [o.to_dict() for o in self.outcomes]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        if header:
            out.writerow(self.CSV_COLUMNS)
        out.writerow(self.csv_row())
        return buf.getvalue()


def power_trial(function_id: str, params: Mapping[str, float], n: int, sigma: float, b: float, B: int,
                alpha: float, seed: SeedLike, trial: int, p: int = 2,
                kernel: Optional[KernelSpec] = None) -> TestOutcome:
    """Trial ``trial``: data from stream (seed, trial, 0), bootstrap from (seed, trial, 1, j)."""
    lam = builtin_function(function_id, dict(params))
    sample = simulate_regression(lam, n, sigma, seed_path(seed, trial, 0))
    return bootstrap_test(sample, b, B, alpha, seed_path(seed, trial, 1), kernel, p)


def power_study(function_id: str, params: Optional[Mapping[str, float]] = None, n: int = 100,
                sigma: float = 0.1, b: float = 0.1, N: int = 200, B: int = 200, alpha: float = 0.05,
                seed: SeedLike = 0, workers: Optional[int] = None, p: int = 2, first_trial: int = 0,
                kernel: Optional[KernelSpec] = None) -> PowerResult:
    """Rejection rate of the bootstrap test over N simulated data sets.

    Trials ``first_trial .. first_trial + N - 1`` are run, so disjoint
    ranges of one study can be computed separately and pooled.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    params = dict(params or {})
    builtin_function(function_id, params)  # validate before fanning out
    critical_index(alpha, B)
    outcomes = parallel_map(
        lambda i: power_trial(function_id, params, n, sigma, b, B, alpha, seed, i, p, kernel),
        range(first_trial, first_trial + N), workers)
    config = {"function": function_id, "params": params, "n": n, "sigma": sigma, "b": b, "alpha": alpha,
              "N": N, "B": B, "p": p, "seed": list(seed_path(seed)), "first_trial": first_trial}
    return PowerResult(config, list(outcomes))
