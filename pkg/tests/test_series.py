import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taylorsl.errors import SeriesMismatchError, SingularityError
from taylorsl.series import (
    TruncatedSeries,
    add,
    derivative,
    evaluate,
    exp_series,
    integrate,
    mul,
    reciprocal,
)

S = TruncatedSeries


def coeffs(order, lo=-1.0, hi=1.0):
    return st.lists(st.floats(lo, hi), min_size=order + 1, max_size=order + 1)



def test_add_examples():
    assert np.allclose((S([1, 1]) + S([2, -1])).coeffs, [3, 0])
    a = S([0.3, -2.0, 5.0])
    assert np.array_equal(add(a, S.zero(2)).coeffs, a.coeffs)
    assert np.array_equal((S([0, 0, 1, 0]) + S([0, 0, 0, 1])).coeffs, [0, 0, 1, 1])


def test_mul_examples():
    assert np.allclose(mul(S([1, 1, 0]), S([1, -1, 0])).coeffs, [1, 0, -1])
    a = S([0.3, -2.0, 5.0])
    assert np.array_equal(mul(a, S.one(2)).coeffs, a.coeffs)
    assert np.allclose(mul(S([1, 1, 1]), S([1, 1, 1])).coeffs, [1, 2, 3])


def test_reciprocal_examples():
    assert np.allclose(reciprocal(S([1, 1, 0, 0])).coeffs, [1, -1, 1, -1])
    assert np.allclose(reciprocal(S([2.0])).coeffs, [0.5])


def test_reciprocal_zero_constant_term():
    with pytest.raises(SingularityError) as info:
        reciprocal(S([0.0, 1.0], origin=0.25))
    assert info.value.origin == 0.25


def test_exp_examples():
    assert np.allclose(exp_series(S.zero(4)).coeffs, S.one(4).coeffs)
    want = [1 / math.factorial(j) for j in range(5)]
    assert np.allclose(exp_series(S.variable(4)).coeffs, want)


def test_integrate_examples():
    assert np.array_equal(integrate(S([1, 0, 0]), 0.0).coeffs, [0, 1, 0])
    assert np.array_equal(integrate(S.zero(3), 5.0).coeffs, [5, 0, 0, 0])


def test_evaluate_examples():
    assert evaluate(S([3.0]), 17.0) == 3.0
    assert evaluate(S([0.0, 1.0]), 0.25) == 0.25


def test_order_preserved():
    a, b = S([1, 2, 3]), S([4, 5, 6])
    for r in (a + b, a - b, a * b, a / b, exp_series(a), integrate(a, 1.0), derivative(a)):
        assert r.order == 2


def test_mismatch_rejected():
    with pytest.raises(SeriesMismatchError):
        add(S([1, 2]), S([1, 2, 3]))
    with pytest.raises(SeriesMismatchError):
        mul(S([1, 2], 0.0), S([1, 2], 1.0))


def test_coeffs_read_only():
    a = S([1.0, 2.0])
    with pytest.raises(ValueError):
        a.coeffs[0] = 5.0


def test_batched_matches_scalar():
    lam = np.array([1.0, 2.0, 3.0])
    x = S.variable(5, 0.5)
    batched = mul(lam * x, exp_series(x))
    for i, l in enumerate(lam):
        assert np.allclose(batched.coeffs[:, i], mul(l * x, exp_series(x)).coeffs)
    # ndarray on the left must give a series, not an object array
    assert isinstance(lam * x, TruncatedSeries)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 20).flatmap(lambda n: st.tuples(coeffs(n), coeffs(n), coeffs(n))))
def test_ring_axioms(abc):
    a, b, c = (S(v) for v in abc)
    tol = 1e-13
    assert np.allclose((a + b).coeffs, (b + a).coeffs, rtol=tol, atol=tol)
    assert np.allclose(((a + b) + c).coeffs, (a + (b + c)).coeffs, rtol=tol, atol=tol)
    assert np.allclose((a * b).coeffs, (b * a).coeffs, rtol=tol, atol=tol)
    lhs, rhs = ((a * b) * c).coeffs, (a * (b * c)).coeffs
    assert np.all(np.abs(lhs - rhs) <= tol * (1 + np.abs(rhs)) * (len(lhs) ** 2))
    dist = (a * (b + c)).coeffs - (a * b + a * c).coeffs
    assert np.max(np.abs(dist)) <= 1e-13 * len(lhs) ** 2


def _leading(n):
    return st.tuples(st.floats(0.1, 1.0), st.sampled_from([-1.0, 1.0]), coeffs(n)).map(
        lambda t: [t[1] * t[0]] + t[2][:n]
    )


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 30).flatmap(_leading))
def test_reciprocal_inverse(c):
    # 1/a grows like |a0|**-k, so roundoff is measured against the size of
    # the products that cancel; it is an absolute 1e-12 when that size is O(1)
    a = S(c)
    r = reciprocal(a)
    err = np.abs(mul(a, r).coeffs - S.one(a.order).coeffs)
    size = np.convolve(np.abs(a.coeffs), np.abs(r.coeffs))[: a.order + 1]
    assert np.all(err <= 1e-12 * np.maximum(1.0, size))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 30).flatmap(lambda n: coeffs(n, -0.1, 0.1)), st.floats(0.5, 1.0))
def test_reciprocal_inverse_absolute(c, a0):
    a = S([a0] + list(c)[1:])
    err = mul(a, reciprocal(a)).coeffs - S.one(a.order).coeffs
    assert np.max(np.abs(err)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12).flatmap(lambda n: coeffs(n)))
def test_reciprocal_round_trip(c):
    c = list(c)
    c[0] = 0.5 + abs(c[0])
    a = S(c)
    assert np.allclose(reciprocal(reciprocal(a)).coeffs, a.coeffs, rtol=1e-10, atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 20).flatmap(lambda n: st.tuples(coeffs(n), coeffs(n))))
def test_exp_identities(ab):
    a, b = S(ab[0]), S(ab[1])
    one = S.one(a.order).coeffs
    assert np.max(np.abs(mul(exp_series(a), exp_series(-a)).coeffs - one)) <= 1e-11
    err = exp_series(a + b).coeffs - mul(exp_series(a), exp_series(b)).coeffs
    assert np.max(np.abs(err)) <= 1e-11


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 20).flatmap(lambda n: coeffs(n)), st.floats(-2, 2))
def test_derivative_of_integral(c, c0):
    a = S(c)
    d = derivative(integrate(a, c0))
    # the top coefficient of a is lost to truncation
    assert np.allclose(d.coeffs[:-1], a.coeffs[:-1], rtol=1e-14, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(coeffs(8), st.floats(-0.5, 0.5))
def test_evaluate_matches_polyval(c, dx):
    assert evaluate(S(c), dx) == pytest.approx(np.polynomial.polynomial.polyval(dx, c), abs=1e-13)
