from __future__ import annotations

import json
import math

import numpy as np
import pytest

from smoothiso.core import Sample, builtin_function, polynomial_function, simulate_regression
from smoothiso.montest import (
    bootstrap_test, critical_index, power_study, rice_sigma, statistic_Tn,
)


def test_rice_sigma_examples():
    assert rice_sigma(Sample(n=2, xs=np.array([0.5, 1.0]), ys=np.array([0.0, 1.0]))) == pytest.approx(math.sqrt(0.5))
    lam = builtin_function("quadratic")
    s = simulate_regression(lam, 1000, 0.0, 0)
    assert rice_sigma(s) <= 2 * 2.0 / 1000
    zero = polynomial_function([0.0])
    assert abs(rice_sigma(simulate_regression(zero, 10_000, 0.1, 1)) - 0.1) < 0.005
    with pytest.raises(ValueError):
        rice_sigma(Sample(n=1, xs=np.array([1.0]), ys=np.array([0.0])))


def test_statistic_noise_free_linear_bound():
    s = simulate_regression(polynomial_function([1.0, -1.0]), 500, 0.0, 0)
    assert 0 <= statistic_Tn(s, 0.1) <= 0.05


def test_statistic_noise_free_linear_offset():
    # the Grenander slope on ((i-1)/n, i/n] is lambda(i/n), half a cell off
    # the kernel estimate, so SG - kernel is about |lambda'| / (2n) inside
    n, b = 500, 0.1
    s = simulate_regression(polynomial_function([1.0, -1.0]), n, 0.0, 0)
    expected = n ** (2 / 3) / (2 * n) * math.sqrt(1 - 2 * b)
    assert statistic_Tn(s, b) == pytest.approx(expected, rel=0.02)
    assert statistic_Tn(s, 0.1) == statistic_Tn(s, 0.1)
    assert statistic_Tn(s, 0.1, p=1) >= 0


def test_statistic_matches_generic_estimators():
    from smoothiso.core import cumulative_step
    from smoothiso.estimators import kernel_estimator, smoothed_grenander
    from smoothiso.kernel import get_kernel

    from oracles import composite_simpson

    s = simulate_regression(builtin_function("lambda7"), 100, 0.1, 3)
    c = cumulative_step(s)
    K = get_kernel()
    diff = lambda t: smoothed_grenander(c, 0.1, K, t).values - kernel_estimator(c, 0.1, K, t, corrected=True)
    oracle = 100 ** (2 / 3) * math.sqrt(composite_simpson(lambda t: diff(t) ** 2, 0.1, 0.9, 4001))
    assert statistic_Tn(s, 0.1) == pytest.approx(oracle, rel=1e-5)


def test_statistic_requires_design():
    s = Sample(n=3, xs=np.array([0.1, 0.2, 0.3]), ys=np.zeros(3))
    with pytest.raises(ValueError, match="design"):
        statistic_Tn(s)


def test_critical_index():
    assert critical_index(0.05, 200) == 190
    assert critical_index(0.1, 20) == 18
    with pytest.raises(ValueError):
        critical_index(0.05, 19)
    with pytest.raises(ValueError):
        critical_index(1.0, 200)


def test_bootstrap_outcome():
    s = simulate_regression(builtin_function("lambda_a", {"a": 0.25}), 100, 0.05, 7)
    a = bootstrap_test(s, 0.1, 40, 0.05, seed=3)
    b = bootstrap_test(s, 0.1, 40, 0.05, seed=3)
    assert a == b
    assert a.reject == (a.Tn > a.critical_value)
    assert json.loads(a.to_json())["B"] == 40
    crits = [bootstrap_test(s, 0.1, 40, alpha, seed=3).critical_value for alpha in (0.025, 0.05, 0.1, 0.25, 0.5)]
    assert all(x >= y for x, y in zip(crits, crits[1:]))


def test_power_study_split():
    kw = dict(params={"a": 0.25}, n=60, sigma=0.05, b=0.1, B=20, alpha=0.1, seed=5)
    whole = power_study("lambda_a", N=5, **kw)
    first = power_study("lambda_a", N=3, **kw)
    rest = power_study("lambda_a", N=2, first_trial=3, **kw)
    assert whole.outcomes == first.outcomes + rest.outcomes
    assert whole.rate == whole.rejections / 5
    assert power_study("lambda_a", N=5, workers=2, **kw).outcomes == whole.outcomes
    lines = whole.to_csv().splitlines()
    assert lines[0].startswith("function,params,n,sigma") and lines[1].startswith("lambda_a,a=0.25,60")
    with pytest.raises(ValueError):
        power_study("lambda_a", N=0, **kw)
