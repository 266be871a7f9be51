import math

import numpy as np
import pytest
from scipy import integrate

from orthojulia import measures
from orthojulia.errors import (
    InvalidGeometryError,
    InvalidMeasureError,
    InvalidPolynomialError,
    MeasureParseError,
)
from orthojulia.potential import leja_capacity

from conftest import SQUARE


def assert_valid(m):
    assert abs(m.weights.sum() - 1) < 1e-12
    assert np.all(m.weights >= 0)
    assert np.all(np.isfinite(m.nodes))
    assert m.n_distinct() >= 2


def test_circle_four_nodes():
    m = measures.build_circle(0, 1, 4)
    np.testing.assert_allclose(m.nodes, [1, 1j, -1, -1j], atol=1e-15)
    np.testing.assert_array_equal(m.weights, [0.25] * 4)


def test_circle_first_moment_vanishes():
    assert abs(measures.build_circle(0, 1, 512).moment(1)) < 1e-12


def test_circle_nodes_on_circle():
    m = measures.build_circle(2 + 1j, 0.5, 256)
    assert np.max(np.abs(np.abs(m.nodes - (2 + 1j)) - 0.5)) < 1e-12
    assert "radius=0.5" in m.label


@pytest.mark.parametrize("radius", [0.0, -1.0])
def test_circle_rejects_bad_radius(radius):
    with pytest.raises(InvalidGeometryError):
        measures.build_circle(0, radius, 16)


def test_arcsine_two_nodes():
    m = measures.build_interval_arcsine(-2, 2, 2)
    np.testing.assert_allclose(sorted(m.nodes.real), [-math.sqrt(2), math.sqrt(2)], atol=1e-15)
    np.testing.assert_array_equal(m.weights, [0.5, 0.5])


def test_arcsine_moments():
    m = measures.build_interval_arcsine(-2, 2, 2048)
    assert abs(m.moment(1)) < 1e-12
    # oracle: quadrature against the arcsine density on [-2, 2]
    second, _ = integrate.quad(lambda x: x * x / math.pi, -2, 2, weight="alg", wvar=(-0.5, -0.5))
    assert abs(second - 2.0) < 1e-10
    assert abs(m.moment(2).real - second) < 1e-3


def test_arcsine_rejects_reversed_interval():
    with pytest.raises(InvalidGeometryError, match="a < b required"):
        measures.build_interval_arcsine(2, -2, 16)


@pytest.mark.parametrize("builder", [
    lambda: measures.build_circle(0, 1, 64),
    lambda: measures.build_circle(1 - 1j, 2, 64),
    lambda: measures.build_interval_arcsine(-1, 3, 101),
])
def test_symmetric_about_center(builder):
    m = builder()
    assert_valid(m)
    center = np.mean(m.nodes)
    reflected = 2 * center - m.nodes
    dist = np.abs(reflected[:, None] - m.nodes[None, :]).min(axis=1)
    assert dist.max() < 1e-12


def test_polygon_nodes_on_edges_and_normalized():
    unit = [0, 1, 1 + 1j, 1j]
    m = measures.build_polygon_boundary(unit, 400)
    assert_valid(m)
    x, y = m.nodes.real, m.nodes.imag
    on_edge = (np.minimum.reduce([np.abs(x), np.abs(x - 1), np.abs(y), np.abs(y - 1)]) < 1e-12)
    inside = (x > -1e-12) & (x < 1 + 1e-12) & (y > -1e-12) & (y < 1 + 1e-12)
    assert np.all(on_edge & inside)
    assert len(m) == 400


def test_polygon_capacity_matches_square_formula():
    side = 4.0
    # classical capacity of a square of side s: s * Gamma(1/4)^2 / (4 pi^(3/2))
    oracle = side * math.gamma(0.25) ** 2 / (4 * math.pi**1.5)
    m = measures.build_polygon_boundary(SQUARE, 400)
    est = leja_capacity(m.as_sample()).value
    assert abs(est / oracle - 1) < 0.05


def test_polygon_capacity_stable_under_refinement():
    a = leja_capacity(measures.build_polygon_boundary(SQUARE, 200).as_sample()).value
    b = leja_capacity(measures.build_polygon_boundary(SQUARE, 400).as_sample()).value
    assert abs(b / a - 1) < 0.02


@pytest.mark.parametrize("verts", [
    [0, 1, 2],  # collinear
    [0, 1 + 1j, 1, 1j],  # bow tie
    [0, 1],
])
def test_polygon_rejects_bad_geometry(verts):
    with pytest.raises(InvalidGeometryError):
        measures.build_polygon_boundary(verts, 100)


def test_boomerang_is_valid_polygon():
    m = measures.build_polygon_boundary(measures.boomerang_vertices(), 200)
    assert_valid(m)


def test_brolin_z_squared_on_unit_circle():
    m = measures.build_brolin([0, 0, 1], 2**14, 7)
    assert np.max(np.abs(np.abs(m.nodes) - 1)) < 1e-6
    assert abs(m.moment(1)) < 0.02


def test_brolin_basilica_first_moment(brolin_basilica):
    m, _ = brolin_basilica
    # invariance oracle: averaging f(w) = w over the two preimages of z gives
    # (sum of roots of w^2 - 1 - z) / 2 = 0, so the exact first moment is 0
    z = m.nodes
    pre = np.sqrt(z + 1)
    oracle = np.mean((pre + (-pre)) / 2)
    assert abs(oracle) < 1e-15
    assert abs(m.moment(1) - oracle) < 0.02


def test_brolin_reproducible():
    a = measures.build_brolin([-1, 0, 1], 4096, 3)
    b = measures.build_brolin([-1, 0, 1], 4096, 3)
    c = measures.build_brolin([-1, 0, 1], 4096, 4)
    assert a == b
    assert not np.array_equal(a.nodes, c.nodes)


@pytest.mark.parametrize("coeffs", [[0, 2], [0, 0, 2], [1, 1]])
def test_brolin_rejects_bad_polynomial(coeffs):
    with pytest.raises(InvalidPolynomialError):
        measures.build_brolin(coeffs, 2000, 0)


def test_explicit_measure_invariants():
    with pytest.raises(InvalidMeasureError):
        measures.build_explicit([0, 1], [0.5, 0.6])
    with pytest.raises(InvalidMeasureError):
        measures.build_explicit([1, 1], [0.5, 0.5])
    with pytest.raises(InvalidMeasureError):
        measures.build_explicit([0, np.nan], [0.5, 0.5])


def test_measure_spec_dispatch():
    m = measures.MeasureSpec("interval", n_nodes=16, a=-1, b=1).build()
    assert len(m) == 16
    with pytest.raises(InvalidGeometryError):
        measures.MeasureSpec("nonsense").build()


def test_save_load_roundtrip(tmp_path):
    for m in (measures.build_circle(0, 1, 16), measures.build_brolin([-1, 0, 1], 1000, 1)):
        path = tmp_path / "m.json"
        measures.save_measure(m, path)
        back = measures.load_measure(path)
        assert back == m
        np.testing.assert_array_equal(back.nodes, m.nodes)


def _write(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    return path


def test_load_rejects_unnormalized(tmp_path):
    path = _write(tmp_path, '{"label": "x", "nodes": [[0, 0], [1, 0]], "weights": [0.25, 0.25]}')
    with pytest.raises(MeasureParseError, match="normalization"):
        measures.load_measure(path)


def test_load_rejects_nan_with_field(tmp_path):
    path = _write(tmp_path, '{"label": "x",\n "nodes": [\n  [0, 0],\n  [NaN, 0]\n ],\n "weights": [0.5, 0.5]}')
    with pytest.raises(MeasureParseError) as info:
        measures.load_measure(path)
    assert info.value.field == "nodes[1]"
    assert info.value.line == 4


def test_load_reports_json_syntax_line(tmp_path):
    path = _write(tmp_path, '{"label": "x",\n "nodes": [[0, 0],,\n')
    with pytest.raises(MeasureParseError) as info:
        measures.load_measure(path)
    assert info.value.line == 2
