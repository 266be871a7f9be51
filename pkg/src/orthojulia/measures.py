"""Discrete probability measures: construction, sampling and persistence.

Every measure used downstream is a finite set of nodes carrying
non-negative weights that sum to one.  Constructors cover the uniform
measure on a circle, the arcsine law on a segment (Chebyshev nodes), the
equilibrium measure of a polygon boundary (approximated by Leja points),
the balanced (Brolin) measure of a monic polynomial sampled by inverse
iteration, and explicit node/weight lists.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    InvalidGeometryError,
    InvalidMeasureError,
    InvalidPolynomialError,
    MeasureParseError,
    NumericError,
)
from .polynomial import Polynomial, escape_radius, zeros_of
from .samples import SetSample, polygon_sample

WEIGHT_SUM_TOL = 1e-12
BROLIN_BURN_IN = 100


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    nodes: np.ndarray
    weights: np.ndarray
    label: str = ""

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=np.complex128).ravel()
        weights = np.array(self.weights, dtype=np.float64).ravel()
        _validate(nodes, weights)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    @property
    def support(self) -> np.ndarray:
        return self.nodes[self.weights > 0]

    def n_distinct(self) -> int:
        return np.unique(self.support).size

    def moment(self, k: int = 1) -> complex:
        return complex(np.sum(self.weights * self.nodes**k))

    def pushforward(self, alpha: complex, shift: complex = 0.0) -> "DiscreteMeasure":
        """Image of the measure under ``z -> alpha*z + shift``."""
        return DiscreteMeasure(alpha * self.nodes + shift, self.weights,
                               f"{self.label}|push({alpha},{shift})")

    def as_sample(self, resolution: float | None = None) -> SetSample:
        pts = self.support
        if resolution is None:
            resolution = _typical_spacing(pts)
        return SetSample(pts, resolution)

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return (self.label == other.label
                and np.array_equal(self.nodes, other.nodes)
                and np.array_equal(self.weights, other.weights))

    __hash__ = None


def _validate(nodes, weights):
    if nodes.size != weights.size:
        raise InvalidMeasureError(
            f"{nodes.size} nodes but {weights.size} weights")
    if not np.all(np.isfinite(nodes)):
        raise InvalidMeasureError("nodes must be finite")
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise InvalidMeasureError("weights must be finite and non-negative")
    total = weights.sum()
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise InvalidMeasureError(f"weights sum to {total!r}, expected 1")
    if np.unique(nodes[weights > 0]).size < 2:
        raise InvalidMeasureError("support needs at least 2 distinct nodes")


def _typical_spacing(pts: np.ndarray) -> float:
    from scipy.spatial import cKDTree

    if pts.size < 2:
        return 1.0
    xy = np.column_stack([pts.real, pts.imag])
    d, _ = cKDTree(xy).query(xy, k=2)
    spacing = float(np.max(d[:, 1]))
    return spacing if spacing > 0 else 1.0


def _uniform(n):
    return np.full(n, 1.0 / n)


def _check_count(n_nodes, minimum=2):
    if int(n_nodes) != n_nodes or n_nodes < minimum:
        raise InvalidGeometryError(f"node count must be an integer >= {minimum}, got {n_nodes}")


def build_circle(center: complex = 0.0, radius: float = 1.0, n_nodes: int = 512) -> DiscreteMeasure:
    """Uniform weights on ``n_nodes`` equispaced points of a circle."""
    if not radius > 0:
        raise InvalidGeometryError(f"radius must be positive, got {radius}")
    _check_count(n_nodes)
    n = int(n_nodes)
    # exact values at multiples of pi/2 keep the symmetric node sets symmetric
    j = np.arange(n)
    unit = np.exp(2j * np.pi * j / n)
    if n % 4 == 0:
        q = n // 4
        unit[::q] = np.array([1, 1j, -1, -1j])
    elif n % 2 == 0:
        unit[:: n // 2] = np.array([1, -1])
    if n % 2 == 0:
        unit[n // 2:] = -unit[: n // 2]
    center = complex(center)
    return DiscreteMeasure(center + radius * unit, _uniform(n),
                           f"circle(center={center!r}, radius={radius!r}, n={n})")


def build_interval_arcsine(a: float, b: float, n_nodes: int = 2048) -> DiscreteMeasure:
    """Discrete arcsine law: Chebyshev points of ``[a, b]`` with equal weights."""
    if not a < b:
        raise InvalidGeometryError("a < b required")
    _check_count(n_nodes)
    n = int(n_nodes)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x = np.cos((2 * np.arange(n) + 1) * np.pi / (2 * n))
    # cos is only approximately odd in floating point; mirror the second half
    x[n - 1 - np.arange(n // 2)] = -x[: n // 2]
    if n % 2:
        x[n // 2] = 0.0
    return DiscreteMeasure(mid + half * x + 0j, _uniform(n),
                           f"arcsine(a={a!r}, b={b!r}, n={n})")


def _segments_cross(p1, p2, q1, q2):
    def orient(a, b, c):
        return np.sign(((b - a).conjugate() * (c - a)).imag)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True

    def on_seg(a, b, c):
        return (min(a.real, b.real) <= c.real <= max(a.real, b.real)
                and min(a.imag, b.imag) <= c.imag <= max(a.imag, b.imag))

    return ((o1 == 0 and on_seg(p1, p2, q1)) or (o2 == 0 and on_seg(p1, p2, q2))
            or (o3 == 0 and on_seg(q1, q2, p1)) or (o4 == 0 and on_seg(q1, q2, p2)))


def check_simple_polygon(vertices) -> np.ndarray:
    v = np.asarray(vertices, dtype=np.complex128).ravel()
    if v.size < 3:
        raise InvalidGeometryError("polygon needs at least 3 vertices")
    if not np.all(np.isfinite(v)):
        raise InvalidGeometryError("polygon vertices must be finite")
    n = v.size
    area = 0.5 * np.sum((v.conjugate() * np.roll(v, -1)).imag)
    if abs(area) < 1e-14:
        raise InvalidGeometryError("degenerate polygon (zero area)")
    if np.any(np.abs(np.roll(v, -1) - v) == 0):
        raise InvalidGeometryError("repeated consecutive vertices")
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                raise InvalidGeometryError(f"polygon edges {i} and {j} intersect")
    return v


def build_polygon_boundary(vertices, n_nodes: int = 400, oversample: int = 20) -> DiscreteMeasure:
    """Approximate equilibrium measure of a polygon boundary.

    Leja points are picked greedily from a dense arclength sample of the
    boundary and carry equal weights; Leja points are asymptotically
    distributed like the equilibrium measure, so they crowd at convex corners.
    """
    from .potential import leja_points

    v = check_simple_polygon(vertices)
    _check_count(n_nodes, 3)
    pool = polygon_sample(v, max(oversample * int(n_nodes), 2000))
    nodes = leja_points(pool, int(n_nodes))
    label = "polygon(" + ";".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in v) + f", n={int(n_nodes)})"
    return DiscreteMeasure(nodes, _uniform(nodes.size), label)


def boomerang_vertices(scale: float = 1.0) -> np.ndarray:
    """A concave quadrilateral ("boomerang"), symmetric about the real axis."""
    return scale * np.array([-1.0 + 0j, 1.2 - 1.0j, 0.2 + 0j, 1.2 + 1.0j])


def build_union(measures, masses=None, label=None) -> DiscreteMeasure:
    """Convex combination of measures (default: equal masses)."""
    measures = list(measures)
    if masses is None:
        masses = np.full(len(measures), 1.0 / len(measures))
    masses = np.asarray(masses, dtype=float)
    nodes = np.concatenate([m.nodes for m in measures])
    weights = np.concatenate([w * m.weights for w, m in zip(masses, measures)])
    weights = weights / weights.sum()
    if label is None:
        label = "union(" + " + ".join(m.label for m in measures) + ")"
    return DiscreteMeasure(nodes, weights, label)


def build_symmetric_disks(offset: float = 2.0, radius: float = 0.5, n_per_circle: int = 256) -> DiscreteMeasure:
    """Uniform measures on the circles around ``±offset``, exactly symmetric under ``z -> -z``."""
    if not (radius > 0 and offset > radius):
        raise InvalidGeometryError("need 0 < radius < offset for disjoint disks")
    right = build_circle(offset, radius, n_per_circle)
    left = DiscreteMeasure(-right.nodes, right.weights, "")
    return build_union([right, left],
                       label=f"two-disks(offset={offset!r}, radius={radius!r}, n={n_per_circle})")


def brolin_chain(q: Polynomial, n_samples: int, seed: int, burn_in: int = BROLIN_BURN_IN) -> np.ndarray:
    """Backward orbit of ``q``: each step jumps to a uniformly chosen preimage."""
    d = q.degree
    rng = np.random.default_rng(seed)
    choices = rng.integers(0, d, size=n_samples + burn_in)
    # start outside the escape disk, away from any exceptional point
    z = complex(2.0 * escape_radius(q))
    out = np.empty(n_samples, dtype=np.complex128)
    shifted = np.array(q.coeffs)
    c0 = q.coeffs[0]
    for t in range(n_samples + burn_in):
        shifted[0] = c0 - z
        roots = zeros_of(Polynomial(shifted))
        if roots.size != d or not np.all(np.isfinite(roots)):
            raise NumericError(f"preimage solve failed at step {t}")
        roots = roots[np.lexsort((roots.imag, roots.real))]
        z = complex(roots[choices[t]])
        if t >= burn_in:
            out[t - burn_in] = z
    return out


def build_brolin(q_coeffs, n_samples: int = 2**16, seed: int = 0) -> DiscreteMeasure:
    """Monte-Carlo sample of the balanced measure of a monic polynomial.

    ``q_coeffs`` is lowest-degree first (or a ``Polynomial``).
    """
    q = q_coeffs if isinstance(q_coeffs, Polynomial) else Polynomial(q_coeffs)
    if q.degree < 2:
        raise InvalidPolynomialError("Brolin measure needs deg Q >= 2")
    if abs(q.leading - 1) > 1e-14:
        raise InvalidPolynomialError("Q must be monic")
    if n_samples < 1000:
        raise InvalidMeasureError("n_samples must be >= 1000")
    nodes = brolin_chain(q, int(n_samples), int(seed))
    coeffs = ",".join(repr(complex(c)) for c in q.coeffs)
    return DiscreteMeasure(nodes, _uniform(nodes.size),
                           f"brolin(q=[{coeffs}], n={int(n_samples)}, seed={int(seed)})")


def build_explicit(nodes, weights, label="explicit") -> DiscreteMeasure:
    return DiscreteMeasure(nodes, weights, label)


@dataclass
class MeasureSpec:
    """Declarative recipe for a measure; ``build()`` dispatches on ``variant``."""

    variant: str
    n_nodes: int = 512
    center: complex = 0.0
    radius: float = 1.0
    a: float = -2.0
    b: float = 2.0
    vertices: list = field(default_factory=list)
    q_coeffs: list = field(default_factory=list)  # lowest-degree first
    seed: int = 0
    path: str | None = None
    offset: float = 2.0

    VARIANTS = ("circle", "interval", "polygon-boundary", "brolin", "explicit", "two-disks")

    def build(self) -> DiscreteMeasure:
        if self.variant == "circle":
            return build_circle(self.center, self.radius, self.n_nodes)
        if self.variant == "interval":
            return build_interval_arcsine(self.a, self.b, self.n_nodes)
        if self.variant == "polygon-boundary":
            return build_polygon_boundary(self.vertices, self.n_nodes)
        if self.variant == "brolin":
            return build_brolin(self.q_coeffs, self.n_nodes, self.seed)
        if self.variant == "explicit":
            if self.path is None:
                raise InvalidGeometryError("explicit measure needs a file path")
            return load_measure(self.path)
        if self.variant == "two-disks":
            return build_symmetric_disks(self.offset, self.radius, self.n_nodes)
        raise InvalidGeometryError(f"unknown measure variant {self.variant!r}")


# -- persistence ---------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_measure(m: DiscreteMeasure, path) -> None:
    """Write ``{"label", "nodes": [[re, im], ...], "weights": [...]}`` with 17 digits."""
    lines = ["{", f'  "label": {json.dumps(m.label)},', '  "nodes": [']
    lines += [f"    [{_fmt(z.real)}, {_fmt(z.imag)}]" + ("," if i < m.nodes.size - 1 else "")
              for i, z in enumerate(m.nodes)]
    lines += ["  ],", '  "weights": [']
    lines += [f"    {_fmt(w)}" + ("," if i < m.weights.size - 1 else "")
              for i, w in enumerate(m.weights)]
    lines += ["  ]", "}"]
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_json(text, path):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureParseError(f"{path}: {exc.msg}", line=exc.lineno) from exc


def _line_of_entry(text, key, index):
    """Best-effort line number of the ``index``-th entry of array ``key``."""
    lines = text.splitlines()
    for i, row in enumerate(lines):
        if f'"{key}"' in row:
            target = i + 1 + index
            return target + 1 if target < len(lines) else None
    return None


def load_measure(path) -> DiscreteMeasure:
    text = Path(path).read_text()
    obj = _parse_json(text, path)
    if not isinstance(obj, dict):
        raise MeasureParseError(f"{path}: top level must be an object")
    for key in ("nodes", "weights"):
        if key not in obj or not isinstance(obj[key], list):
            raise MeasureParseError(f"{path}: missing list", field=key)
    nodes = np.empty(len(obj["nodes"]), dtype=np.complex128)
    for i, pair in enumerate(obj["nodes"]):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise MeasureParseError(f"{path}: node must be [re, im]", field=f"nodes[{i}]",
                                    line=_line_of_entry(text, "nodes", i))
        if not all(math.isfinite(x) for x in pair):
            raise MeasureParseError(f"{path}: non-finite node", field=f"nodes[{i}]",
                                    line=_line_of_entry(text, "nodes", i))
        nodes[i] = complex(pair[0], pair[1])
    weights = np.empty(len(obj["weights"]))
    for i, w in enumerate(obj["weights"]):
        if not isinstance(w, (int, float)) or isinstance(w, bool) or not math.isfinite(w) or w < 0:
            raise MeasureParseError(f"{path}: weight must be a finite non-negative number",
                                    field=f"weights[{i}]", line=_line_of_entry(text, "weights", i))
        weights[i] = w
    if nodes.size != weights.size:
        raise MeasureParseError(f"{path}: {nodes.size} nodes but {weights.size} weights",
                                field="weights")
    total = weights.sum()
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise MeasureParseError(f"{path}: weights sum to {total!r}, normalization violated",
                                field="weights")
    try:
        return DiscreteMeasure(nodes, weights, str(obj.get("label", "")))
    except InvalidMeasureError as exc:
        raise MeasureParseError(f"{path}: {exc}") from exc
