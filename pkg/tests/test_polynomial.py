import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthojulia.errors import InvalidPolynomialError, PreconditionError
from orthojulia.polynomial import (
    Polynomial,
    escape_radius,
    evaluate,
    root_residual,
    zeros_of,
)


def test_evaluate_examples():
    p = Polynomial([-1, 0, 1])
    assert evaluate(p, 2) == 3
    assert evaluate(p, 1j) == -2


def test_leading_coefficient_must_be_nonzero():
    with pytest.raises(InvalidPolynomialError):
        Polynomial([1, 0])


def test_compose_and_iterate():
    q = Polynomial([-1, 0, 1])
    np.testing.assert_array_equal(q.iterate(2).coeffs, [0, 0, -2, 0, 1])
    z = 0.3 + 0.7j
    assert abs(q.compose(q)(z) - q(q(z))) < 1e-14


def test_from_highest_first():
    assert np.array_equal(Polynomial.from_highest_first([1, 0, -1]).coeffs, [-1, 0, 1])


@pytest.mark.parametrize("coeffs, expected", [
    ([-1, 0, 1], [-1, 1]),
    ([0, 0, 0, 1], [0, 0, 0]),
    ([0, -3, 0, 1], [-math.sqrt(3), 0, math.sqrt(3)]),  # z^3 - 3z = z (z - √3)(z + √3)
])
def test_zeros_examples(coeffs, expected):
    roots = zeros_of(Polynomial(coeffs))
    np.testing.assert_allclose(np.sort(roots.real), expected, atol=1e-10)
    assert np.max(np.abs(roots.imag)) < 1e-10


def test_zeros_needs_degree_one():
    with pytest.raises(PreconditionError):
        zeros_of(Polynomial([2]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=2, max_size=12),
       st.complex_numbers(min_magnitude=0.1, max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_zeros_residual_property(coeffs, lead):
    p = Polynomial(list(coeffs) + [lead])
    roots = zeros_of(p)
    assert roots.size == p.degree
    assert np.all(root_residual(p, roots) < 1e-8)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=10),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_evaluate_matches_polyval(coeffs, z):
    if coeffs[-1] == 0:
        coeffs[-1] = 1
    p = Polynomial(coeffs)
    ref = np.polyval(np.array(coeffs)[::-1], z)
    assert abs(evaluate(p, z) - ref) <= 1e-9 * (1 + abs(ref))


def test_escape_radius_examples():
    assert escape_radius(Polynomial([0, 0, 1])) >= 1
    r = escape_radius(Polynomial([-2, 0, 1]))
    assert r >= 4
    r3 = escape_radius(Polynomial([0, 0, 0, 3]))
    # direct check of 3 R^2 >= 2
    assert abs(r3 - (4 / 3) ** 0.5) < 1e-12
    assert 3 * r3**2 >= 2


@pytest.mark.parametrize("coeffs", [[0, 0, 1], [-2, 0, 1], [0, 0, 0, 3], [1 + 1j, -3, 0.5, 0.2j]])
def test_escape_radius_guarantee(coeffs):
    p = Polynomial(coeffs)
    R = escape_radius(p)
    t = np.linspace(0, 2 * np.pi, 400)
    for scale in (1.0000001, 1.5, 10.0):
        z = scale * R * np.exp(1j * t)
        assert np.all(np.abs(p(z)) >= 2 * np.abs(z))


def test_escape_radius_precondition():
    with pytest.raises(PreconditionError):
        escape_radius(Polynomial([0, 1]))
