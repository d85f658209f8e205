"""Command-line front end.

Every subcommand resolves its parameters as defaults, then an optional
JSON config file (``--config``), then explicit flags, logs the resolved
configuration and master seed to standard error, and writes its primary
output to ``--out`` or standard output.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from . import asympt, mc, montest
from ._parallel import WORKERS_ENV, default_workers
from ._rng import fresh_seed
from .core import (
    BUILTIN_IDS,
    ModelSpec,
    Sample,
    WeightMeasure,
    boundary_weight,
    builtin_function,
    cumulative_step,
    density_model,
    regression_model,
    uniform_weight,
)
from .error import hellinger, lp_error
from .estimators import isotonized_kernel, kernel_estimator, smoothed_grenander, SampledFunction
from .kernel import KERNELS, get_kernel

log = logging.getLogger("smoothiso")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_RUNTIME = 4
EXIT_REJECT = 10

COMMANDS = ("estimate", "errors", "constants", "clt", "sgdist", "boundary", "chernoff", "test", "power")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """A named (model, weight, kernel, bandwidth rule) bundle."""

    name: str
    build: Callable[[Dict[str, Any]], ModelSpec]
    bandwidth: mc.BandwidthRule = mc.BandwidthRule(1.0, 0.2)
    description: str = ""


def _reg(fid: str, params: Dict[str, float], default_sigma: float = 0.1):
    def build(cfg: Dict[str, Any]) -> ModelSpec:
        sigma = cfg["sigma"] if cfg["sigma"] is not None else default_sigma
        merged = dict(params)
        if fid == "lambda_a" and cfg["a"] is not None:
            merged["a"] = cfg["a"]
        merged.update(cfg["params"])
        return regression_model(builtin_function(fid, merged), sigma, name=f"{fid}-regression")
    return build


def _dens(fid: str, params: Dict[str, float]):
    def build(cfg: Dict[str, Any]) -> ModelSpec:
        merged = dict(params)
        merged.update(cfg["params"])
        return density_model(builtin_function(fid, merged), name=f"{fid}-density")
    return build


SCENARIOS: Dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario("linear-regression", _reg("linear", {"intercept": 0.0, "slope": 1.0}),
                 description="lambda(x) = -x, Gaussian noise"),
        Scenario("positive-regression", _reg("linear", {"intercept": 2.0, "slope": 1.0}),
                 description="lambda(x) = 2 - x, Gaussian noise"),
        Scenario("quadratic-regression", _reg("quadratic", {}),
                 description="lambda(x) = 1 - x - x^2/2, Gaussian noise"),
        Scenario("lambda_a-regression", _reg("lambda_a", {"a": 0.0}),
                 description="test function lambda_a (set a), Gaussian noise"),
        Scenario("linear-density", _dens("linear", {"intercept": 1.5, "slope": 1.0}),
                 description="density 1.5 - x on [0, 1]"),
    )
}


def build_scenario(cfg: Dict[str, Any]):
    name = cfg["scenario"]
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    scen = SCENARIOS[name]
    model = scen.build(cfg)
    weight = _weight(cfg)
    kernel = get_kernel(cfg["kernel"])
    return model, weight, kernel, bandwidth_rule(cfg, scen.bandwidth)


def _weight(cfg) -> WeightMeasure:
    if cfg["weight"] == "uniform":
        return uniform_weight()
    if cfg["weight"] == "boundary":
        return boundary_weight(cfg["p"])
    raise ConfigError(f"unknown weight {cfg['weight']!r}; choose uniform or boundary")


def bandwidth_rule(cfg, fallback: mc.BandwidthRule) -> mc.BandwidthRule:
    if cfg["b"] is not None:
        return mc.BandwidthRule(fixed=cfg["b"])
    c = cfg["bw_c"] if cfg["bw_c"] is not None else fallback.c
    alpha = cfg["bw_alpha"] if cfg["bw_alpha"] is not None else fallback.alpha
    return mc.BandwidthRule(c, alpha)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

# key -> (default, accepted types); None in the types tuple allows null
SCHEMA: Dict[str, tuple] = {
    "scenario": ("linear-regression", (str,)),
    "sigma": (None, (float, None)),
    "a": (None, (float, None)),
    "params": ({}, (dict,)),
    "p": (2.0, (float,)),
    "n": (None, (int, None)),
    "b": (None, (float, None)),
    "bw_c": (None, (float, None)),
    "bw_alpha": (None, (float, None)),
    "weight": ("uniform", (str,)),
    "kernel": ("triweight", (str,)),
    "estimator": ("kernel_corrected", (str,)),
    "centering": ("local", (str,)),
    "regime": (None, (str, None)),
    "gamma": (0.8, (float,)),
    "M": (100, (int,)),
    "n_ladder": ([1000, 10000, 100000], (list,)),
    "c": (4.0, (float,)),
    "step": (5e-4, (float,)),
    "seed": (None, (int, None)),
    "workers": (None, (int, None)),
    "method": ("sg", (str,)),
    "kind": ("regression", (str,)),
    "grid": (513, (int,)),
    "in": (None, (str, None)),
    "out": (None, (str, None)),
    "z_csv": (None, (str, None)),
    "format": ("json", (str,)),
    "B": (200, (int,)),
    "alpha": (0.05, (float,)),
    "fn": ("lambda_a", (str,)),
    "N": (200, (int,)),
    "test_p": (2, (int,)),
}


CHOICES: Dict[str, tuple] = {
    "scenario": tuple(SCENARIOS),
    "weight": ("uniform", "boundary"),
    "kernel": tuple(KERNELS),
    "estimator": mc.ESTIMATORS,
    "method": mc.ESTIMATORS,
    "centering": ("local", "constant"),
    "regime": ("smallband", "fixedband"),
    "kind": ("regression", "density"),
    "format": ("json", "csv"),
    "fn": BUILTIN_IDS,
    "test_p": (1, 2),
}


def _check_type(key: str, value: Any):
    value = _coerce(key, value)
    if value is not None and key in CHOICES and value not in CHOICES[key]:
        raise ConfigError(f"config key {key!r} must be one of {list(CHOICES[key])}, got {value!r}")
    return value


def _coerce(key: str, value: Any):
    _, types = SCHEMA[key]
    if value is None:
        if None in types:
            return None
        raise ConfigError(f"config key {key!r} must not be null")
    if float in types and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if int in types and isinstance(value, int) and not isinstance(value, bool):
        return value
    if str in types and isinstance(value, str):
        return value
    if list in types and isinstance(value, list):
        if key == "n_ladder" and not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            raise ConfigError("config key 'n_ladder' must be a list of integers")
        return list(value)
    if dict in types and isinstance(value, dict):
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value.values()):
            raise ConfigError(f"config key {key!r} must map names to numbers")
        return {k: float(v) for k, v in value.items()}
    names = "/".join("null" if t is None else t.__name__ for t in types)
    raise ConfigError(f"config key {key!r} expects {names}, got {type(value).__name__}")


def defaults() -> Dict[str, Any]:
    return {k: (v.copy() if isinstance(v, (list, dict)) else v) for k, (v, _) in SCHEMA.items()}


def load_config(path: Optional[str]) -> Dict[str, Any]:
    """Defaults merged with the JSON object in ``path`` (if given)."""
    cfg = defaults()
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    for key, value in data.items():
        if key not in SCHEMA:
            raise ConfigError(f"unknown config key {key!r}")
        cfg[key] = _check_type(key, value)
    return cfg


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _param(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not a number") from None


def _common(sp: argparse.ArgumentParser):
    S = argparse.SUPPRESS
    sp.add_argument("--config", default=None, help="JSON config file (flags override it)")
    sp.add_argument("--seed", type=int, default=S, help="master seed (generated and printed if omitted)")
    sp.add_argument("--workers", type=int, default=S, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    sp.add_argument("--out", default=S, help="output path (default stdout)")


def _model_flags(sp):
    S = argparse.SUPPRESS
    sp.add_argument("--scenario", default=S, choices=sorted(SCENARIOS))
    sp.add_argument("--sigma", type=float, default=S, help="noise s.d. for regression scenarios")
    sp.add_argument("--a", type=float, default=S, help="parameter of lambda_a")
    sp.add_argument("--param", dest="params", type=_param, action="append", default=S,
                    help="extra function parameter NAME=VALUE (repeatable)")
    sp.add_argument("--weight", default=S, choices=("uniform", "boundary"))
    sp.add_argument("--kernel", default=S, choices=sorted(KERNELS))


def _bw_flags(sp):
    S = argparse.SUPPRESS
    sp.add_argument("--b", type=float, default=S, help="fixed bandwidth")
    sp.add_argument("--bw-c", dest="bw_c", type=float, default=S, help="bandwidth rule c n^-alpha: c")
    sp.add_argument("--bw-alpha", dest="bw_alpha", type=float, default=S, help="bandwidth rule: alpha")


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    ap = argparse.ArgumentParser(prog="smoothiso", description="Smooth isotonic estimation toolkit.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sp = sub.add_parser("estimate", help="fit an estimator to a sample CSV")
    _common(sp)
    _bw_flags(sp)
    sp.add_argument("--in", dest="in", default=S, help="sample CSV with header x,y")
    sp.add_argument("--kind", default=S, choices=("regression", "density"))
    sp.add_argument("--method", default=S, choices=("kernel", "kernel_corrected", "sg", "gs"))
    sp.add_argument("--grid", type=int, default=S, help="number of evaluation points")
    sp.add_argument("--gamma", type=float, default=S)
    sp.add_argument("--kernel", default=S, choices=sorted(KERNELS))

    sp = sub.add_parser("errors", help="L_p and Hellinger errors of an estimate against a scenario")
    _common(sp)
    _model_flags(sp)
    _bw_flags(sp)
    sp.add_argument("--in", dest="in", default=S)
    sp.add_argument("--method", default=S, choices=("kernel", "kernel_corrected", "sg", "gs"))
    sp.add_argument("--p", type=float, default=S)
    sp.add_argument("--gamma", type=float, default=S)

    sp = sub.add_parser("constants", help="limiting constants for a scenario")
    _common(sp)
    _model_flags(sp)
    _bw_flags(sp)
    sp.add_argument("--p", type=float, default=S)
    sp.add_argument("--n", type=int, default=S)

    sp = sub.add_parser("clt", help="Monte-Carlo check of an L_p-error CLT")
    _common(sp)
    _model_flags(sp)
    _bw_flags(sp)
    sp.add_argument("--estimator", default=S, choices=mc.ESTIMATORS)
    sp.add_argument("--centering", default=S, choices=("local", "constant"))
    sp.add_argument("--regime", default=S, choices=("smallband", "fixedband"))
    sp.add_argument("--p", type=float, default=S)
    sp.add_argument("--n", type=int, default=S)
    sp.add_argument("--M", type=int, default=S)
    sp.add_argument("--gamma", type=float, default=S)
    sp.add_argument("--z-csv", dest="z_csv", default=S, help="also write z values as one-column CSV")

    sp = sub.add_parser("sgdist", help="smoothed Grenander versus kernel distance")
    _common(sp)
    _model_flags(sp)
    _bw_flags(sp)
    sp.add_argument("--p", type=float, default=S)
    sp.add_argument("--n", type=int, default=S)
    sp.add_argument("--M", type=int, default=S)
    sp.add_argument("--c", type=float, default=S)
    sp.add_argument("--step", type=float, default=S)

    sp = sub.add_parser("boundary", help="boundary blow-up of the uncorrected kernel estimator")
    _common(sp)
    _model_flags(sp)
    _bw_flags(sp)
    sp.add_argument("--p", type=float, default=S)
    sp.add_argument("--n-ladder", dest="n_ladder", type=int, nargs="+", default=S)
    sp.add_argument("--M", type=int, default=S)
    sp.add_argument("--format", default=S, choices=("json", "csv"))

    sp = sub.add_parser("chernoff", help="draws of the Chernoff-type concave-majorant gap")
    _common(sp)
    sp.add_argument("--c", type=float, default=S)
    sp.add_argument("--step", type=float, default=S)
    sp.add_argument("--M", type=int, default=S)

    sp = sub.add_parser("test", help="bootstrap monotonicity test on a sample CSV")
    _common(sp)
    sp.add_argument("--in", dest="in", default=S)
    sp.add_argument("--b", type=float, default=S)
    sp.add_argument("--B", type=int, default=S)
    sp.add_argument("--alpha", type=float, default=S)
    sp.add_argument("--p", dest="test_p", type=int, choices=(1, 2), default=S)
    sp.add_argument("--kernel", default=S, choices=sorted(KERNELS))

    sp = sub.add_parser("power", help="rejection rate of the test over simulated data")
    _common(sp)
    sp.add_argument("--fn", default=S, help="test function id, e.g. lambda1..lambda7, lambda_a")
    sp.add_argument("--a", type=float, default=S)
    sp.add_argument("--param", dest="params", type=_param, action="append", default=S)
    sp.add_argument("--sigma", type=float, default=S)
    sp.add_argument("--n", type=int, default=S)
    sp.add_argument("--b", type=float, default=S)
    sp.add_argument("--N", type=int, default=S)
    sp.add_argument("--B", type=int, default=S)
    sp.add_argument("--alpha", type=float, default=S)
    sp.add_argument("--p", dest="test_p", type=int, choices=(1, 2), default=S)
    sp.add_argument("--kernel", default=S, choices=sorted(KERNELS))
    return ap


def resolve(args: argparse.Namespace) -> Dict[str, Any]:
    cfg = load_config(args.config)
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if key == "params":
            value = {**cfg["params"], **dict(value)}
        cfg[key] = _check_type(key, value)
    if cfg["seed"] is None:
        cfg["seed"] = fresh_seed()
        print(f"seed: {cfg['seed']}", file=sys.stderr)
    if cfg["workers"] is None:
        cfg["workers"] = default_workers()
    return cfg


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit(text: str, cfg) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg["out"]:
        with open(cfg["out"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    def clean(x):
        if isinstance(x, float) and not math.isfinite(x):
            return None
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        if isinstance(x, np.generic):
            return clean(x.item())
        return x
    return json.dumps(clean(obj), sort_keys=True, indent=2)


def _sampled_csv(f: SampledFunction) -> str:
    lines = ["t,value"] + [f"{float(t)!r},{float(v)!r}" for t, v in zip(f.grid, f.values)]
    return "\n".join(lines)


def _need_input(cfg) -> str:
    if not cfg["in"]:
        raise ConfigError("this command needs an input sample (--in)")
    return cfg["in"]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def fit_estimate(sample: Sample, kind: str, method: str, b: float, kernel, grid_size: int,
                 gamma: float = 0.8) -> SampledFunction:
    cumul = cumulative_step(sample, kind)
    if method == "kernel":
        grid = np.linspace(b, 1 - b, grid_size)
        return SampledFunction(grid, kernel_estimator(cumul, b, kernel, grid), (b, 1 - b))
    grid = np.linspace(0.0, 1.0, grid_size)
    if method == "kernel_corrected":
        return SampledFunction(grid, kernel_estimator(cumul, b, kernel, grid, corrected=True), (0.0, 1.0))
    if method == "sg":
        return smoothed_grenander(cumul, b, kernel, grid)
    if method == "gs":
        return isotonized_kernel(cumul, b, kernel, grid, gamma)
    raise ConfigError(f"unknown method {method!r}")


def _n(cfg, default: int) -> int:
    """Sample size: the simulation commands default to 1000, the test to 100."""
    return cfg["n"] if cfg["n"] is not None else default


def _sample_bandwidth(cfg, n: int) -> float:
    return bandwidth_rule(cfg, mc.BandwidthRule(1.0, 0.2))(n)


def cmd_estimate(cfg) -> int:
    sample = Sample.from_csv(_need_input(cfg), cfg["kind"])
    b = _sample_bandwidth(cfg, sample.n)
    est = fit_estimate(sample, cfg["kind"], cfg["method"], b, get_kernel(cfg["kernel"]), cfg["grid"],
                       cfg["gamma"])
    _emit(_sampled_csv(est), cfg)
    return EXIT_OK


def cmd_errors(cfg) -> int:
    model, weight, kernel, rule = build_scenario(cfg)
    sample = Sample.from_csv(_need_input(cfg), model.kind)
    b = rule(sample.n)
    est = fit_estimate(sample, model.kind, cfg["method"], b, kernel, 2049, cfg["gamma"])
    lo, hi = est.interval if est.interval is not None else (0.0, 1.0)
    p = cfg["p"]
    out = {"method": cfg["method"], "n": sample.n, "b": b, "p": p, "interval": [lo, hi],
           "lp_error": lp_error(est, model.lam, p, weight, (lo, hi))}
    try:
        out["hellinger"] = hellinger(est, model.lam, weight) if (lo, hi) == (0.0, 1.0) else None
    except ValueError:
        out["hellinger"] = None
    _emit(_json(out), cfg)
    return EXIT_OK


def cmd_constants(cfg) -> int:
    model, weight, kernel, rule = build_scenario(cfg)
    p, n = cfg["p"], _n(cfg, 1000)
    b = rule(n)
    C0 = math.sqrt(n * b**5)
    th2, th1, tt2 = asympt.variance_theta(model, weight, kernel, p, C0)
    try:
        a0 = asympt.alpha0(model, weight, p)
    except (ValueError, ArithmeticError):
        a0 = None
    out = {
        "scenario": cfg["scenario"], "p": p, "n": n, "b": b, "C0": C0, "kernel": kernel.name,
        "weight": weight.name,
        "Dsq": kernel.Dsq,
        "sigma1": asympt.sigma1(kernel, p),
        "m_n": asympt.centering_constant(model, weight, kernel, p, n, b, "full", corrected=True),
        "m_n_local": asympt.centering_constant(model, weight, kernel, p, n, b, "full", corrected=True,
                                               local_norm=True),
        "m_c": asympt.centering_constant(model, weight, kernel, p, n, b, "truncated"),
        "m_limit": asympt.centering_constant(model, weight, kernel, p, n, b, "limit"),
        "sigma2": asympt.variance_sigma2(model, weight, kernel, p),
        "theta2": th2, "theta1": th1, "theta_tilde2": tt2,
        "alpha0": a0,
    }
    _emit(_json(out), cfg)
    return EXIT_OK


def cmd_clt(cfg) -> int:
    model, weight, kernel, rule = build_scenario(cfg)
    report = mc.clt_experiment(model, cfg["estimator"], cfg["p"], _n(cfg, 1000), rule, weight, cfg["M"], cfg["seed"],
                               kernel, cfg["workers"], cfg["gamma"], cfg["regime"], cfg["centering"])
    report.config["scenario"] = cfg["scenario"]
    _emit(report.to_json(), cfg)
    if cfg["z_csv"]:
        report.z_csv(cfg["z_csv"])
    return EXIT_OK


def cmd_sgdist(cfg) -> int:
    model, weight, kernel, rule = build_scenario(cfg)
    n = _n(cfg, 1000)
    b = rule(n)
    res = mc.sg_vs_kernel_experiment(model, cfg["p"], n, b, weight, cfg["M"], cfg["seed"], kernel,
                                     cfg["workers"], cfg["c"], cfg["step"])
    res.config["scenario"] = cfg["scenario"]
    _emit(res.to_json(), cfg)
    return EXIT_OK


def cmd_boundary(cfg) -> int:
    model, weight, kernel, rule = build_scenario(cfg)
    table = mc.boundary_blowup_experiment(model, cfg["p"], cfg["n_ladder"], rule, cfg["M"], cfg["seed"], weight,
                                          kernel, cfg["workers"])
    table.config["scenario"] = cfg["scenario"]
    if cfg["format"] == "csv":
        import io

        buf = io.StringIO()
        table.to_csv(buf)
        _emit(buf.getvalue(), cfg)
    else:
        _emit(table.to_json(), cfg)
    return EXIT_OK


def cmd_chernoff(cfg) -> int:
    res = mc.chernoff_gap_sample(cfg["c"], cfg["step"], cfg["M"], cfg["seed"], cfg["workers"])
    out = res.to_dict()
    out["seed"] = cfg["seed"]
    _emit(_json(out), cfg)
    return EXIT_OK


def cmd_test(cfg) -> int:
    sample = Sample.from_csv(_need_input(cfg), "regression")
    b = cfg["b"] if cfg["b"] is not None else 0.1
    outcome = montest.bootstrap_test(sample, b, cfg["B"], cfg["alpha"], cfg["seed"], get_kernel(cfg["kernel"]),
                                     cfg["test_p"])
    _emit(outcome.to_json(), cfg)
    return EXIT_REJECT if outcome.reject else EXIT_OK


def cmd_power(cfg) -> int:
    params = dict(cfg["params"])
    if cfg["a"] is not None:
        params["a"] = cfg["a"]
    if cfg["fn"] == "lambda_a":
        params.setdefault("a", 0.0)
    sigma = cfg["sigma"] if cfg["sigma"] is not None else 0.1
    b = cfg["b"] if cfg["b"] is not None else 0.1
    n = _n(cfg, 100)
    res = montest.power_study(cfg["fn"], params, n, sigma, b, cfg["N"], cfg["B"], cfg["alpha"], cfg["seed"],
                              cfg["workers"], cfg["test_p"], kernel=get_kernel(cfg["kernel"]))
    _emit(res.to_csv(), cfg)
    return EXIT_OK


HANDLERS = {
    "estimate": cmd_estimate,
    "errors": cmd_errors,
    "constants": cmd_constants,
    "clt": cmd_clt,
    "sgdist": cmd_sgdist,
    "boundary": cmd_boundary,
    "chernoff": cmd_chernoff,
    "test": cmd_test,
    "power": cmd_power,
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run one subcommand and return its exit code."""
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = resolve(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    log.info("command %s, seed %s", args.command, cfg["seed"])
    log.info("config %s", json.dumps(cfg, sort_keys=True))
    try:
        return HANDLERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - report any failure as a runtime error
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
