from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothiso.core import BUILTIN_IDS, WeightMeasure, builtin_function, polynomial_function
from smoothiso.error import hellinger, lp_error

from oracles import quad


def test_lp_error_examples():
    f = builtin_function("lambda5")
    assert lp_error(f, f, 2) == 0.0
    assert lp_error(lambda t: t + 0.3, lambda t: t, 3) == pytest.approx(0.027, abs=1e-14)
    assert lp_error(lambda t: t, 0.0, 2) == pytest.approx(1 / 3, abs=1e-10)
    with pytest.raises(ValueError):
        lp_error(f, f, 0.5)
    with pytest.raises(ValueError):
        lp_error(f, f, 2, interval=(0.5, 0.5))


def test_lp_error_against_quadrature():
    f, g = builtin_function("lambda6"), builtin_function("lambda3")
    w = WeightMeasure(lambda t: 1 + np.asarray(t) ** 2)
    oracle = quad(lambda t: abs(f(t) - g(t)) ** 1.5 * (1 + t * t), 0.2, 0.7)
    assert lp_error(f, g, 1.5, w, (0.2, 0.7)) == pytest.approx(oracle, rel=1e-8)


def test_lp_error_interval_monotone():
    f, g = builtin_function("lambda7"), builtin_function("linear")
    assert lp_error(f, g, 2, interval=(0.3, 0.6)) <= lp_error(f, g, 2, interval=(0.2, 0.6)) <= lp_error(f, g, 2)


PAIRS = [(a, b) for a in BUILTIN_IDS for b in ("linear", "quadratic")]


@pytest.mark.parametrize("fa,fb", PAIRS)
def test_quadrature_refinement(fa, fb):
    params = {"lambda2": {"sigma": 0.1}, "lambda_a": {"a": 0.25}}
    f, g = builtin_function(fa, params.get(fa)), builtin_function(fb)
    for p in (1, 2):
        assert abs(lp_error(f, g, p) - lp_error(f, g, p, nodes=4097)) < 1e-6


@settings(max_examples=300, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 3), st.floats(1, 5))
def test_lp_inequality(q0, h0, scale, p):
    # |q + h|^p <= 2^(p-1) (|q|^p + |h|^p) integrated
    q = lambda t: q0 * np.cos(3 * t) * scale
    h = lambda t: h0 + t
    lhs = lp_error(lambda t: q(t) + h(t), 0.0, p)
    rhs = 2 ** (p - 1) * (lp_error(q, 0.0, p) + lp_error(h, 0.0, p))
    assert rhs - lhs >= -1e-9


def test_hellinger_examples():
    one = polynomial_function([1.0])
    assert hellinger(one, one) == 0.0
    assert hellinger(4.0, 1.0) == pytest.approx(math.sqrt(0.5), abs=1e-14)
    with pytest.raises(ValueError, match="positive"):
        hellinger(builtin_function("linear"), one)


@pytest.mark.parametrize("delta", [0.1, 0.03, 0.01])
def test_hellinger_quadratic_link(delta):
    lam = polynomial_function([1.5, -1.0])
    bump = lambda t: delta * np.cos(2 * np.pi * np.asarray(t))
    f = lambda t: lam(t) + bump(t)
    w = WeightMeasure(lambda t: 1 / (4 * lam(t)))
    gap = abs(2 * hellinger(f, lam) ** 2 - lp_error(f, lam, 2, w))
    assert gap <= 10 * delta**3
    # oracle: cubic term of the expansion of (sqrt(l + d) - sqrt(l))^2
    cubic = quad(lambda t: -bump(t) ** 3 / (8 * lam(t) ** 2), 0, 1)
    assert gap == pytest.approx(abs(cubic), rel=0.2 + 5 * delta)
