import json
import math

import numpy as np
import pytest

from orthojulia import dynamics
from orthojulia.dynamics import GridSpec
from orthojulia.errors import EmptySetError, PreconditionError
from orthojulia.polynomial import Polynomial, escape_radius, zeros_of
from orthojulia.setmetrics import distance
from orthojulia.samples import circle_sample, segment_sample

from conftest import joukowski_green

Z2 = Polynomial([0, 0, 1])
CHEB = Polynomial([-2, 0, 1])
BASILICA = Polynomial([-1, 0, 1])


def escape_oracle(p, z, radius, max_iter):
    """Plain numpy escape time: first j with |P^j(z)| > radius, 0 if none."""
    w = np.array(z, dtype=complex)
    out = np.zeros(w.shape, dtype=int)
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(1, max_iter + 1):
            w = np.where(out == 0, np.polyval(p.coeffs[::-1], w), w)
            hit = (out == 0) & ~(np.abs(w) <= radius)
            out[hit] = j
    return out


def test_grid_layout():
    g = GridSpec(-1, 1, -2, 2, width=3, height=5)
    np.testing.assert_array_equal(g.xs, [-1, 0, 1])
    assert g.ys[0] == 2 and g.ys[-1] == -2
    assert g.pixel_diagonal == pytest.approx(math.hypot(1, 1))
    with pytest.raises(PreconditionError):
        GridSpec(1, -1, 0, 1)


def test_grid_rejects_small_escape_radius():
    with pytest.raises(PreconditionError):
        dynamics.classify(CHEB, GridSpec.square(2, 50, escape_radius=2.0))


@pytest.mark.parametrize("p", [Z2, BASILICA, Polynomial([0.3j, 0, 0, 1])])
def test_classification_matches_oracle(p):
    g = GridSpec.square(2, 121, max_iter=64)
    c = dynamics.classify(p, g)
    ref = escape_oracle(p, g.centers(), c.radius, g.max_iter)
    assert np.mean(c.escape_iter != ref) < 1e-3


def test_z_squared_unit_disk():
    g = GridSpec.square(1.5, 301, max_iter=200)
    c = dynamics.classify(Z2, g)
    r = np.abs(g.centers())
    margin = 2 * g.pixel_diagonal
    assert np.all(c.bounded[r < 1 - margin])
    assert not np.any(c.bounded[r > 1 + margin])
    julia = dynamics.extract_julia(c)
    assert distance(julia, circle_sample(0, 1, 8000)).full < g.pixel_diagonal


def test_chebyshev_filled_set_is_segment():
    g = GridSpec.square(3, 301)  # odd width keeps the real axis on the grid
    c = dynamics.classify(CHEB, g)
    filled = dynamics.extract_filled(c)
    assert np.max(np.abs(filled.points.imag)) < 1e-12
    assert distance(filled, segment_sample(-2, 2, 2001)).full < g.pixel_diagonal
    julia = dynamics.extract_julia(c)
    assert distance(julia, segment_sample(-2, 2, 2001)).full < g.pixel_diagonal


@pytest.mark.parametrize("n", [2, 3, 5])
def test_power_map_disk(n):
    p = Polynomial([0] * n + [1])
    g = GridSpec.square(1.5, 201)
    c = dynamics.classify(p, g)
    r = np.abs(g.centers())
    assert np.all(c.bounded[r < 0.95]) and not np.any(c.bounded[r > 1.05])


def test_empty_filled_set():
    # z^2 + 10 has its Cantor set far outside this window
    c = dynamics.classify(Polynomial([10, 0, 1]), GridSpec.square(0.5, 50))
    with pytest.raises(EmptySetError):
        dynamics.extract_filled(c)
    with pytest.raises(EmptySetError):
        dynamics.extract_julia(c)


def test_fixed_points_added_on_request():
    p = Polynomial([-6, 0, 1])  # Cantor dust with fixed points 3 and -2
    c = dynamics.classify(p, GridSpec.square(4, 101))
    s = dynamics.extract_filled(c, include_fixed_points=True)
    assert np.min(np.abs(s.points - 3)) < 1e-12 and np.min(np.abs(s.points + 2)) < 1e-12


def test_monotone_stability():
    g = GridSpec.square(2, 151, max_iter=16)
    prev = None
    for n_iter in (16, 32, 64, 128):
        c = dynamics.classify(BASILICA, GridSpec(**{**g.to_dict(), "max_iter": n_iter}))
        if prev is not None:
            assert not np.any(c.bounded & ~prev)
        prev = c.bounded


def test_escape_time_shifts_under_p():
    # complete invariance at the level of orbits: z escapes at j iff P(z) escapes at j - 1
    rng = np.random.default_rng(0)
    z = rng.uniform(-2, 2, 4000) + 1j * rng.uniform(-2, 2, 4000)
    R = escape_radius(BASILICA)
    e_z = escape_oracle(BASILICA, z, R, 80)
    e_pz = escape_oracle(BASILICA, BASILICA(z), R, 79)
    moved = e_z > 1
    np.testing.assert_array_equal(e_pz[moved], e_z[moved] - 1)
    np.testing.assert_array_equal(e_pz[e_z == 0], 0)


@pytest.mark.parametrize("p", [Z2, BASILICA, CHEB, Polynomial([0.1, 0.5j, 0.7, 2])])
def test_filled_set_maps_inside_escape_disk(p):
    g = GridSpec.square(2.5, 151)
    c = dynamics.classify(p, g)
    z = g.centers()[c.bounded]
    assert z.size > 0
    assert np.all(np.abs(z) <= c.radius) and np.all(np.abs(p(z)) <= c.radius)


def test_greens_iterated_examples():
    assert dynamics.greens_iterated(Z2, 2.0, k=20) == pytest.approx(math.log(2), abs=1e-12)
    assert dynamics.greens_iterated(Z2, 0.5, k=20) == 0.0
    oracle = float(joukowski_green(3.0))
    assert oracle == pytest.approx(0.9624, abs=1e-4)
    assert dynamics.greens_iterated(CHEB, 3.0, k=30) == pytest.approx(oracle, abs=1e-6)


def test_greens_iterated_matches_joukowski():
    rng = np.random.default_rng(1)
    z = rng.uniform(-4, 4, 500) + 1j * rng.uniform(-4, 4, 500)
    np.testing.assert_allclose(dynamics.greens_iterated(CHEB, z), joukowski_green(z), atol=1e-9)


def test_greens_scaling_for_monic_dilation():
    # g for z^2 scaled by a in the plane: P(z) = z^2 / a has K = disk of radius a
    a = 3.0
    p = Polynomial([0, 0, 1 / a])
    z = np.array([4.0, 5j, -7 + 1j])
    np.testing.assert_allclose(dynamics.greens_iterated(p, z), np.log(np.abs(z) / a), atol=1e-12)


def test_functional_equation():
    rng = np.random.default_rng(2)
    z = rng.uniform(-3, 3, 300) + 1j * rng.uniform(-3, 3, 300)
    for p in (BASILICA, Polynomial([0.2, 0, -0.5j, 1.3])):
        assert dynamics.verify_functional_equation(p, z).max_residual < 1e-8


def test_greens_field_zero_on_filled_set():
    g = GridSpec.square(2, 161)
    c, field = dynamics.classify_with_green(BASILICA, g)
    assert np.all(field.values >= 0)
    assert np.all(field.values[c.bounded] == 0)
    assert np.all(field.values[~c.bounded] > 0)
    np.testing.assert_array_equal(c.escape_iter, dynamics.classify(BASILICA, g).escape_iter)


def test_greens_field_matches_iterated():
    g = GridSpec.square(3, 101)
    field = dynamics.greens_field(CHEB, g)
    np.testing.assert_allclose(field.values, joukowski_green(g.centers()), atol=1e-6)


def test_pgm_export(tmp_path):
    g = GridSpec.square(2, 64, max_iter=50)
    c = dynamics.classify(BASILICA, g)
    path = tmp_path / "b.pgm"
    c.save_pgm(path)
    img = dynamics.read_pgm(path)
    assert img.shape == (64, 64) and img.dtype == np.uint8
    np.testing.assert_array_equal(img == 0, c.bounded)
    meta = json.loads((tmp_path / "b.pgm.json").read_text())
    assert meta["width"] == 64 and meta["radius_used"] == c.radius


def _window_for(p, pixels=161):
    pts = np.concatenate([zeros_of(p), dynamics.fixed_points(p)])
    half = 1.2 * max(np.max(np.abs(pts.real - pts.real.mean())), np.max(np.abs(pts.imag - pts.imag.mean())), 0.5)
    return GridSpec.square(half, pixels, center=complex(pts.real.mean(), pts.imag.mean()))


@pytest.mark.parametrize("fixture", ["circle", "arcsine", "square", "brolin_basilica"])
def test_filled_sets_nonempty(fixture, request):
    _, seq = request.getfixturevalue(fixture)
    for n in range(2, seq.max_degree + 1):
        p = seq[n]
        c = dynamics.classify(p, _window_for(p))
        assert len(dynamics.extract_filled(c)) > 0, n


def test_disk_filled_sets_nonempty_with_fixed_points(disks):
    _, seq = disks
    for n in range(2, seq.max_degree + 1):
        c = dynamics.classify(seq[n], _window_for(seq[n]))
        assert len(dynamics.extract_filled(c, include_fixed_points=True)) > 0
