from __future__ import annotations

import numpy as np
import pytest

from smoothiso.core import StepFunction, builtin_function, cumulative_step, polynomial_function, simulate_regression
from smoothiso.estimators import (
    DesignPlan, SampledFunction, cumulative_hull, isotonized_kernel, kernel_estimator,
    smooth_cumulative, smoothed_grenander,
)
from smoothiso.kernel import boundary_kernel_value, get_kernel

from oracles import majorant_by_chords, quad, triweight

K = get_kernel()


def test_single_jump():
    c = StepFunction(np.array([0.5]), np.array([1.0]))
    assert kernel_estimator(c, 0.25, K, 0.5) == pytest.approx(4.375, abs=1e-12)
    assert kernel_estimator(c, 0.25, K, 0.5, corrected=True) == pytest.approx(4.375, abs=1e-12)
    assert kernel_estimator(c, 0.1, K, 0.75) == 0.0


def test_standard_estimator_domain():
    c = cumulative_step(simulate_regression(builtin_function("linear"), 100, 0.1, 0))
    with pytest.raises(ValueError, match="boundary"):
        kernel_estimator(c, 0.1, K, 0.05)
    with pytest.raises(ValueError):
        kernel_estimator(c, 0.6, K, 0.5)
    kernel_estimator(c, 0.1, K, 0.05, extend=True)


def test_corrected_matches_standard_in_interior():
    c = cumulative_step(simulate_regression(builtin_function("lambda6"), 300, 0.1, 4))
    t = np.linspace(0.1, 0.9, 81)
    np.testing.assert_allclose(kernel_estimator(c, 0.1, K, t, corrected=True), kernel_estimator(c, 0.1, K, t),
                               atol=1e-13)


def test_kernel_estimator_against_direct_sum():
    s = simulate_regression(builtin_function("lambda1"), 200, 0.1, 6)
    c = cumulative_step(s)
    b = 0.15
    for t in (0.0, 0.04, 0.5, 0.93, 1.0):
        u = s.xs
        direct = np.sum(boundary_kernel_value(K, t, b, (t - u) / b) * (np.abs(t - u) < b) * s.ys / s.n) / b
        assert kernel_estimator(c, b, K, t, corrected=True) == pytest.approx(direct, abs=1e-12)


def test_smooth_cumulative_constant_and_linear():
    c = StepFunction(np.array([0.2]), np.array([3.0]), initial=3.0)
    np.testing.assert_allclose(smooth_cumulative(c, 0.1, K, np.array([0.0, 0.05, 0.5, 1.0])), 3.0, atol=1e-13)
    N = 100_000
    grid = np.arange(N) / N
    lin = StepFunction(grid, 2 * grid + 1 / N)  # cell midpoints of 2u
    t = np.array([0.0, 0.03, 0.4, 0.97, 1.0])
    np.testing.assert_allclose(smooth_cumulative(lin, 0.1, K, t), 2 * t, atol=1e-8)


def test_smooth_cumulative_against_quadrature():
    rng = np.random.default_rng(3)
    bp = np.sort(rng.uniform(0, 1, 15))
    vals = np.cumsum(rng.normal(size=15))
    c = StepFunction(bp, vals, initial=0.3)
    b = 0.2
    edges = np.concatenate(([0.0], bp, [1.0]))
    levels = np.concatenate(([0.3], vals))
    for t in (0.0, 0.1, 0.45, 0.85, 1.0):
        total = 0.0
        for lo, hi, lev in zip(edges[:-1], edges[1:], levels):
            lo, hi = max(lo, t - b), min(hi, t + b)
            if hi > lo:
                total += lev * quad(lambda u: boundary_kernel_value(K, t, b, (t - u) / b) / b, lo, hi)
        assert smooth_cumulative(c, b, K, t) == pytest.approx(total, abs=1e-8)


def test_sg_linear_cumulative_is_constant():
    n = 200
    c = StepFunction(np.arange(1, n + 1) / n, -0.7 * np.arange(1, n + 1) / n)
    est = smoothed_grenander(c, 0.1, K, np.linspace(0, 1, 101))
    np.testing.assert_allclose(est.values, -0.7, atol=1e-12)


def test_sg_noise_free_linear():
    lam = polynomial_function([1.0, -1.0])
    c = cumulative_step(simulate_regression(lam, 1000, 0.0, 0))
    est = smoothed_grenander(c, 0.1, K, np.array([0.5])).values[0]
    assert abs(est - 0.5) < 5e-3
    # oracle: Riemann sum of the kernel against the hull slopes
    u = (np.arange(100_000) + 0.5) / 100_000
    hull = cumulative_hull(c)
    slope = hull.slopes[np.searchsorted(hull.knots, u) - 1]
    riemann = np.mean(triweight((0.5 - u) / 0.1) / 0.1 * slope)
    assert est == pytest.approx(riemann, abs=1e-6)


def test_cumulative_hull_matches_oracle():
    s = simulate_regression(builtin_function("lambda4"), 40, 0.2, 12)
    c = cumulative_step(s)
    hull = cumulative_hull(c)
    t = np.concatenate(([0.0], s.xs))
    v = np.concatenate(([0.0], c.values))
    np.testing.assert_allclose(hull(t), majorant_by_chords(t, v), atol=1e-12)


def test_monotone_outputs_on_random_samples():
    lam = builtin_function("lambda_a", {"a": 0.25})
    grid = np.linspace(0, 1, 201)
    inner = (grid >= 0.1) & (grid <= 0.9)
    for seed in range(200):
        c = cumulative_step(simulate_regression(lam, 100, 0.1, seed))
        sg = smoothed_grenander(c, 0.1, K, grid).values
        assert np.all(np.diff(sg[inner]) <= 1e-12)
        if seed % 10 == 0:
            gs = isotonized_kernel(c, 0.1, K, grid).values
            assert np.all(np.diff(gs) <= 0)


def test_gs_equals_kernel_for_monotone_estimate():
    lam = polynomial_function([1.0, 0.0, -1.0])
    c = cumulative_step(simulate_regression(lam, 1000, 0.0, 0))
    b = 0.1
    lo, hi = b**0.8, 1 - b**0.8
    grid = np.linspace(lo, hi, 1001)
    gs = isotonized_kernel(c, b, K, grid)
    assert gs.interval == pytest.approx((lo, hi))
    assert np.max(np.abs(gs.values - kernel_estimator(c, b, K, grid))) < 1e-6


def test_gs_argument_checks():
    c = cumulative_step(simulate_regression(builtin_function("linear"), 50, 0.1, 0))
    with pytest.raises(ValueError, match="gamma"):
        isotonized_kernel(c, 0.1, K, np.linspace(0, 1, 101), gamma=0.4)
    with pytest.raises(ValueError, match="spacing"):
        isotonized_kernel(c, 0.1, K, np.linspace(0, 1, 5))


def test_design_plan_agrees_with_generic():
    lam = builtin_function("lambda7")
    n, b = 150, 0.12
    grid = np.linspace(0, 1, 257)
    plan = DesignPlan(n, b, K, grid)
    s = simulate_regression(lam, n, 0.1, 2)
    c = cumulative_step(s)
    np.testing.assert_allclose(plan.kernel(s.ys), kernel_estimator(c, b, K, grid, corrected=True), atol=1e-12)
    np.testing.assert_allclose(plan.sg(s.ys), smoothed_grenander(c, b, K, grid).values, atol=1e-10)


def test_sampled_function_csv(tmp_path):
    f = SampledFunction(np.linspace(0, 1, 5), np.arange(5.0))
    f.to_csv(tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "t,value" and len(lines) == 6
    assert f(0.125) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        SampledFunction(np.zeros(3), np.zeros(2))
