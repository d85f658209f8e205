"""Seeded Monte-Carlo experiments for the L_p-error limit theorems.

Every replication draws from its own counter-based stream keyed by
``(seed, ..., index)``, so results do not depend on how replications are
distributed over workers.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from ._parallel import parallel_map
from ._rng import SeedLike, seed_path, stream
from .asympt import alpha0, centering_constant, clt_constants, standardize
from .core import ModelSpec, WeightMeasure, cumulative_step, design_points, uniform_weight
from .estimators import (
    DesignPlan,
    isotonized_kernel,
    jump_weights,
    kernel_estimator,
    smoothed_grenander,
)
from .kernel import KernelSpec, get_kernel
from .lcm import _gap_at_zero
from .quadrature import simpson_rule

ESTIMATORS = ("kernel", "kernel_corrected", "sg", "gs")
CLT_NODES = 2049
BOUNDARY_NODES = 257


@dataclass(frozen=True)
class BandwidthRule:
    """b = c * n^(-alpha), or a fixed bandwidth when ``fixed`` is set."""

    c: float = 1.0
    alpha: float = 0.2
    fixed: Optional[float] = None

    def __call__(self, n: int) -> float:
        b = self.fixed if self.fixed is not None else self.c * n ** (-self.alpha)
        if not 0 < b < 0.5:
            raise ValueError(f"bandwidth {b} for n={n} is outside (0, 1/2)")
        return float(b)

    @property
    def regime(self) -> str:
        """Bandwidths shrinking faster than n^(-1/5) make the bias negligible."""
        if self.fixed is None and self.alpha > 0.2 + 1e-12:
            return "smallband"
        return "fixedband"

    def describe(self) -> Dict[str, Any]:
        return asdict(self)


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def ks_distance(z) -> float:
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        raise ValueError("no values")
    return float(stats.kstest(z, "norm").statistic)


def _z_summary(z) -> Dict[str, Any]:
    z = np.asarray(z, dtype=float)
    return {
        "z_values": [_json_float(v) for v in z],
        "mean": _json_float(np.mean(z)),
        "variance": _json_float(np.var(z, ddof=1)) if z.size > 1 else 0.0,
        "ks_distance": _json_float(ks_distance(z)),
    }


@dataclass
class CltReport:
    """Standardized errors of one CLT experiment.

    ``alternatives`` holds the same raw errors standardized with other
    admissible constants (for instance the other variance for a density
    model), keyed by a short label.
    """

    config: Dict[str, Any]
    z_values: np.ndarray
    mean: float = field(init=False)
    variance: float = field(init=False)
    ks_distance: float = field(init=False)
    alternatives: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.z_values = np.asarray(self.z_values, dtype=float)
        if self.z_values.size == 0:
            raise ValueError("no replications")
        self.mean = float(np.mean(self.z_values))
        # sample variance; zero for a single replication
        self.variance = float(np.var(self.z_values, ddof=1)) if self.z_values.size > 1 else 0.0
        self.ks_distance = ks_distance(self.z_values)

    def to_dict(self) -> Dict[str, Any]:
        out = {"config": self.config, **_z_summary(self.z_values)}
        out["mean"], out["variance"], out["ks_distance"] = self.mean, self.variance, self.ks_distance
        if self.alternatives:
            out["alternatives"] = {k: _z_summary(v) for k, v in sorted(self.alternatives.items())}
        return out

    def to_json(self) -> str:
        return _dump(self.to_dict())

    def z_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["z"])
            for z in self.z_values:
                out.writerow([repr(float(z))])


def _interval_for(estimator: str, b: float, gamma: float):
    if estimator == "kernel":
        return (b, 1 - b)
    if estimator in ("kernel_corrected", "sg"):
        return (0.0, 1.0)
    return (b**gamma, 1 - b**gamma)


class _Fitter:
    """Evaluates one estimator on fixed nodes, reusing weights when the
    design is deterministic (regression)."""

    def __init__(self, model: ModelSpec, estimator: str, n: int, b: float, kernel: KernelSpec,
                 nodes: np.ndarray, gamma: float = 0.8):
        if estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {estimator!r}; choose from {ESTIMATORS}")
        self.model, self.estimator, self.n, self.b = model, estimator, n, b
        self.kernel, self.nodes, self.gamma = kernel, nodes, gamma
        self.plan = None
        if model.kind == "regression" and estimator != "gs":
            self.plan = DesignPlan(n, b, kernel, nodes, corrected=(estimator != "kernel"))

    def __call__(self, sample) -> np.ndarray:
        if self.plan is not None:
            return self.plan.sg(sample.ys) if self.estimator == "sg" else self.plan.kernel(sample.ys)
        cumul = cumulative_step(sample, self.model.kind)
        if self.estimator == "sg":
            return smoothed_grenander(cumul, self.b, self.kernel, self.nodes).values
        if self.estimator == "gs":
            grid = self.nodes
            return isotonized_kernel(cumul, self.b, self.kernel, grid, self.gamma).values
        return kernel_estimator(cumul, self.b, self.kernel, self.nodes,
                                corrected=(self.estimator == "kernel_corrected"))


def _clt_constants_for(model, estimator, weight, kernel, p, n, b, regime, interval, local_norm):
    if estimator == "kernel":
        return clt_constants(model, weight, kernel, p, n, b, regime, "truncated", corrected=False)
    if estimator == "gs":
        return clt_constants(model, weight, kernel, p, n, b, regime, "interval", corrected=False,
                             interval=interval)
    return clt_constants(model, weight, kernel, p, n, b, regime, "full", corrected=True, local_norm=local_norm)


def clt_experiment(model: ModelSpec, estimator: str, p: float, n: int, bandwidth_rule: BandwidthRule,
                   weight: Optional[WeightMeasure] = None, M: int = 100, seed: SeedLike = 0,
                   kernel: Optional[KernelSpec] = None, workers: Optional[int] = None,
                   gamma: float = 0.8, regime: Optional[str] = None, centering: str = "local",
                   first_replication: int = 0) -> CltReport:
    """Standardized L_p errors z_i of one estimator over M replications.

    Interval, centering and variance follow the estimator: the standard
    kernel estimator on [b, 1-b] centered by the interior integral, the
    corrected kernel and smoothed Grenander estimators on [0, 1], and the
    isotonized kernel estimator on [b^gamma, 1 - b^gamma].

    For estimators on [0, 1], ``centering="local"`` uses the kernel norm
    in force at each t and ``"constant"`` uses D everywhere; the other
    choice is reported under ``alternatives``.  For a density model in the
    bias-carrying regime, the standardization with theta^2 instead of
    theta_tilde^2 is reported there as well.

    Replication i draws its data from stream (seed, i); a run can be split
    into chunks through ``first_replication``.
    """
    if M < 1:
        raise ValueError("no replications")
    if estimator not in ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}; choose from {ESTIMATORS}")
    if centering not in ("local", "constant"):
        raise ValueError(f"unknown centering {centering!r}")
    weight = weight or uniform_weight()
    kernel = kernel or get_kernel("triweight")
    b = bandwidth_rule(n)
    regime = regime or bandwidth_rule.regime
    interval = _interval_for(estimator, b, gamma)
    if estimator == "gs" and b**gamma >= 0.5:
        raise ValueError(f"b^gamma={b**gamma:.3f} leaves an empty interval")
    whole = estimator in ("kernel_corrected", "sg")
    constants = _clt_constants_for(model, estimator, weight, kernel, p, n, b, regime, interval,
                                   centering == "local")
    nodes, wq = simpson_rule(interval[0], interval[1], CLT_NODES)
    truth = model.lam(nodes)
    wvals = wq * weight(nodes)
    fit = _Fitter(model, estimator, n, b, kernel, nodes, gamma)

    def one(i):
        est = fit(model.simulate(n, seed_path(seed, i)))
        return float(np.sum(wvals * np.abs(est - truth) ** p))

    raw = np.array(parallel_map(one, range(first_replication, first_replication + M), workers))
    z = np.array([standardize(r, p, n, b, constants) for r in raw])

    alternatives = {}
    if whole:
        other = "constant" if centering == "local" else "local"
        alt_m = centering_constant(model, weight, kernel, p, n, b, "full", corrected=True,
                                   local_norm=(other == "local"))
        alt = replace(constants, m_center=alt_m)
        alternatives[f"{other}_centering"] = np.array([standardize(r, p, n, b, alt) for r in raw])
    comps = constants.components
    if model.embedding == "bridge" and regime == "fixedband" and "theta2" in comps:
        alt = replace(constants, scale_variance=comps["theta2"])
        alternatives["theta2_variance"] = np.array([standardize(r, p, n, b, alt) for r in raw])
    config = {
        "experiment": "clt",
        "model": model.name,
        "estimator": estimator,
        "p": p,
        "n": n,
        "b": b,
        "bandwidth_rule": bandwidth_rule.describe(),
        "weight": weight.name,
        "kernel": kernel.name,
        "regime": regime,
        "centering": centering if whole else "constant",
        "interval": list(interval),
        "M": M,
        "first_replication": first_replication,
        "seed": list(seed_path(seed)),
        "m_center": constants.m_center,
        "scale_variance": constants.scale_variance,
    }
    return CltReport(config=config, z_values=z, alternatives=alternatives)


@dataclass
class ChernoffGapSample:
    c: float
    step: float
    draws: np.ndarray

    def __post_init__(self):
        self.draws = np.asarray(self.draws, dtype=float)
        if np.any(self.draws < 0):
            raise ValueError("gap draws must be nonnegative")

    @property
    def mean(self) -> float:
        return float(np.mean(self.draws))

    @property
    def stderr(self) -> float:
        return float(np.std(self.draws, ddof=1) / math.sqrt(self.draws.size)) if self.draws.size > 1 else math.nan

    def to_dict(self) -> Dict[str, Any]:
        return {"c": self.c, "step": self.step, "M": int(self.draws.size), "mean": _json_float(self.mean),
                "stderr": _json_float(self.stderr), "draws": [float(d) for d in self.draws]}


def gap_draw(c: float, step: float, seed: SeedLike, j: int) -> float:
    """[concave majorant of W(t) - t^2] - [W(t) - t^2] at t = 0, with W
    simulated on [-c, c] from two independent halves started at 0."""
    K = int(round(c / step))
    right = stream(seed, j, 0).standard_normal(K) * math.sqrt(step)
    left = stream(seed, j, 1).standard_normal(K) * math.sqrt(step)
    return float(_gap_at_zero(left, right, step, K))


def chernoff_gap_sample(c: float = 4.0, step: float = 5e-4, M: int = 1000, seed: SeedLike = 0,
                        workers: Optional[int] = None) -> ChernoffGapSample:
    """M draws of the Chernoff-type gap.

    Increments are generated forward from 0 on each half-axis, so a run
    with smaller ``c`` and the same seed sees a prefix of the same path.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    if not 0 < step <= 1e-3 * c:
        raise ValueError("step must lie in (0, 1e-3 * c]")
    if int(round(c / step)) < 2:
        raise ValueError("degenerate grid")
    if M < 1:
        raise ValueError("no replications")
    draws = parallel_map(lambda j: gap_draw(c, step, seed, j), range(M), workers)
    return ChernoffGapSample(c=c, step=step, draws=np.array(draws))


def qq_correlation(x, y) -> float:
    """Correlation of the sorted samples (equal sizes required)."""
    x, y = np.sort(np.asarray(x, float)), np.sort(np.asarray(y, float))
    if x.size != y.size:
        raise ValueError("samples must have equal size")
    if x.size < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return math.nan
    return float(np.corrcoef(x, y)[0, 1])


@dataclass
class SgKernelComparison:
    config: Dict[str, Any]
    statistics: np.ndarray
    reference: np.ndarray
    alpha0: float
    qq_correlation: float

    @property
    def median(self) -> float:
        return float(np.median(self.statistics))

    def to_dict(self) -> Dict[str, Any]:
        return {"config": self.config, "alpha0": _json_float(self.alpha0),
                "qq_correlation": _json_float(self.qq_correlation),
                "median": _json_float(self.median),
                "statistics": [float(s) for s in self.statistics],
                "reference": [float(r) for r in self.reference]}

    def to_json(self) -> str:
        return _dump(self.to_dict())


def sg_vs_kernel_experiment(model: ModelSpec, p: float, n: int, b: float,
                            weight: Optional[WeightMeasure] = None, M: int = 100, seed: SeedLike = 0,
                            kernel: Optional[KernelSpec] = None, workers: Optional[int] = None,
                            c: float = 4.0, step: float = 5e-4, nodes: int = CLT_NODES) -> SgKernelComparison:
    """Draws of n^(2/3) (int_b^{1-b} |SG - kernel|^p w)^(1/p) next to draws
    of alpha0 times the Chernoff-type gap."""
    if M < 1:
        raise ValueError("no replications")
    if not 1 <= p < 5:
        raise ValueError("p must lie in [1, 5)")
    weight = weight or uniform_weight()
    kernel = kernel or get_kernel("triweight")
    a0 = alpha0(model, weight, p)
    if not math.isfinite(a0):
        raise ValueError("alpha0 evaluation failed")
    x, wq = simpson_rule(b, 1 - b, nodes)
    wvals = wq * weight(x)
    sg_fit = _Fitter(model, "sg", n, b, kernel, x)
    k_fit = _Fitter(model, "kernel_corrected", n, b, kernel, x)

    def one(i):
        sample = model.simulate(n, seed_path(seed, 0, i))
        d = np.abs(sg_fit(sample) - k_fit(sample)) ** p
        return n ** (2 / 3) * float(np.sum(wvals * d)) ** (1 / p)

    statistics = np.array(parallel_map(one, range(M), workers))
    gaps = chernoff_gap_sample(c, step, M, seed_path(seed, 1), workers).draws
    reference = a0 * gaps
    config = {"experiment": "sgdist", "model": model.name, "p": p, "n": n, "b": b, "weight": weight.name,
              "kernel": kernel.name, "M": M, "seed": list(seed_path(seed)), "c": c, "step": step}
    return SgKernelComparison(config, statistics, reference, a0, qq_correlation(statistics, reference))


@dataclass
class LadderTable:
    columns: List[str]
    rows: List[List[float]]
    config: Dict[str, Any]

    def column(self, name: str) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([r[j] for r in self.rows], dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {"config": self.config, "columns": self.columns,
                "rows": [[_json_float(v) for v in r] for r in self.rows]}

    def to_json(self) -> str:
        return _dump(self.to_dict())

    def to_csv(self, fh) -> None:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(self.columns)
        for r in self.rows:
            out.writerow([repr(float(v)) if isinstance(v, float) else v for v in r])


def boundary_blowup_experiment(model: ModelSpec, p: float, n_ladder: Sequence[int], bandwidth_rule: BandwidthRule,
                               M: int = 100, seed: SeedLike = 0, weight: Optional[WeightMeasure] = None,
                               kernel: Optional[KernelSpec] = None,
                               workers: Optional[int] = None) -> LadderTable:
    """Per n, the mean over M replications of (nb)^(p/2) int_0^b |est - lambda|^p w
    for the raw kernel estimator (extended into the boundary region) and
    for the boundary-corrected one."""
    if M < 1:
        raise ValueError("no replications")
    weight = weight or uniform_weight()
    kernel = kernel or get_kernel("triweight")
    rows = []
    for level, n in enumerate(n_ladder):
        b = bandwidth_rule(n)
        x, wq = simpson_rule(0.0, b, BOUNDARY_NODES)
        wvals = wq * weight(x)
        truth = model.lam(x)
        scale = (n * b) ** (p / 2)
        plans = None
        if model.kind == "regression":
            locs = design_points(n)
            plans = [jump_weights(locs, x, b, kernel, corrected=False) / n,
                     jump_weights(locs, x, b, kernel, corrected=True) / n]

        def one(i, n=n, b=b, x=x, wvals=wvals, truth=truth, plans=plans, level=level):
            sample = model.simulate(n, seed_path(seed, level, i))
            if plans is not None:
                ests = [W @ sample.ys for W in plans]
            else:
                cumul = cumulative_step(sample, model.kind)
                ests = [jump_weights(cumul.breakpoints, x, b, kernel, corrected=cor) @ cumul.jumps
                        for cor in (False, True)]
            return [scale * float(np.sum(wvals * np.abs(e - truth) ** p)) for e in ests]

        vals = np.array(parallel_map(one, range(M), workers))
        rows.append([n, b, float(vals[:, 0].mean()), float(vals[:, 1].mean())])
    config = {"experiment": "boundary", "model": model.name, "p": p, "n_ladder": list(n_ladder),
              "bandwidth_rule": bandwidth_rule.describe(), "weight": weight.name, "kernel": kernel.name,
              "M": M, "seed": list(seed_path(seed))}
    return LadderTable(["n", "b", "uncorrected", "corrected"], rows, config)


def hellinger_experiment(model: ModelSpec, n_ladder: Sequence[int], bandwidth_rule: BandwidthRule,
                         M: int = 50, seed: SeedLike = 0, weight: Optional[WeightMeasure] = None,
                         kernel: Optional[KernelSpec] = None, workers: Optional[int] = None) -> LadderTable:
    """Per n, the mean of |2H^2 - int (est - lambda)^2 w / (4 lambda)| (nb)^(3/2)
    for the corrected kernel estimator."""
    if M < 1:
        raise ValueError("no replications")
    weight = weight or uniform_weight()
    kernel = kernel or get_kernel("triweight")
    x, wq = simpson_rule(0.0, 1.0, CLT_NODES)
    truth = model.lam(x)
    if np.any(truth <= 0):
        raise ValueError("Hellinger distance needs a strictly positive lambda")
    wvals = wq * weight(x)
    rows = []
    for level, n in enumerate(n_ladder):
        b = bandwidth_rule(n)
        fit = _Fitter(model, "kernel_corrected", n, b, kernel, x)

        def one(i, n=n, fit=fit, level=level):
            est = fit(model.simulate(n, seed_path(seed, level, i)))
            if np.any(est <= 0):
                return math.nan
            two_h2 = float(np.sum(wvals * (np.sqrt(est) - np.sqrt(truth)) ** 2))
            l2 = float(np.sum(wvals * (est - truth) ** 2 / (4.0 * truth)))
            return abs(two_h2 - l2)

        diffs = np.array(parallel_map(one, range(M), workers))
        if np.any(np.isnan(diffs)):
            raise ValueError(f"estimate not positive for n={n}; Hellinger distance undefined")
        mean = float(diffs.mean())
        rows.append([n, b, mean, mean * (n * b) ** 1.5])
    config = {"experiment": "hellinger", "model": model.name, "n_ladder": list(n_ladder),
              "bandwidth_rule": bandwidth_rule.describe(), "weight": weight.name,
              "kernel": kernel.name, "M": M, "seed": list(seed_path(seed))}
    return LadderTable(["n", "b", "mean_gap", "scaled_gap"], rows, config)
