"""Orthonormal polynomials of a discrete measure and their exact identities.

The sequence is built by Gram-Schmidt on function values at the nodes
(Arnoldi style: the next candidate is ``z * P_{n-1}``), with one full
re-orthogonalization pass per degree.  Monomial coefficients are carried
along with the value vectors, never recovered from a moment matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateMeasureError,
    MeasureParseError,
    PreconditionError,
    RankDeficiencyError,
)
from .measures import DiscreteMeasure
from .polynomial import Polynomial, coefficient_distance, evaluate, zeros_of

DEFAULT_MAX_DEGREE = 24
RESIDUAL_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class OrthoSequence:
    measure_label: str
    polys: tuple
    gammas: np.ndarray

    @property
    def max_degree(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, n) -> Polynomial:
        return self.polys[n]

    def monic(self, n: int) -> Polynomial:
        return self.polys[n].monic()

    def save(self, path) -> None:
        obj = {
            "measure_label": self.measure_label,
            "N": self.max_degree,
            "gammas": [float(g) for g in self.gammas],
            "polys": [[[float(c.real), float(c.imag)] for c in p.coeffs] for p in self.polys],
        }
        # repr of a Python float round-trips exactly
        Path(path).write_text(json.dumps(obj, indent=1) + "\n")

    @classmethod
    def load(cls, path) -> "OrthoSequence":
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise MeasureParseError(f"{path}: {exc.msg}", line=exc.lineno) from exc
        for key in ("measure_label", "N", "gammas", "polys"):
            if key not in obj:
                raise MeasureParseError(f"{path}: missing key", field=key)
        polys = []
        for n, coeffs in enumerate(obj["polys"]):
            arr = np.array([complex(re, im) for re, im in coeffs])
            if arr.size != n + 1 or not np.all(np.isfinite(arr)):
                raise MeasureParseError(f"{path}: bad coefficients", field=f"polys[{n}]")
            polys.append(Polynomial(arr))
        if len(polys) != obj["N"] + 1 or len(obj["gammas"]) != len(polys):
            raise MeasureParseError(f"{path}: N does not match data", field="N")
        return cls(obj["measure_label"], tuple(polys), np.array(obj["gammas"], dtype=float))


def orthonormalize(m: DiscreteMeasure, N: int = DEFAULT_MAX_DEGREE) -> OrthoSequence:
    """Orthonormal ``P_0..P_N`` in ``<f, g> = sum_i w_i f(z_i) conj(g(z_i))``."""
    if N < 0:
        raise PreconditionError("N must be >= 0")
    n_distinct = m.n_distinct()
    if N + 1 > n_distinct:
        raise RankDeficiencyError(
            f"degree {N} needs {N + 1} distinct nodes, measure has {n_distinct}")
    keep = m.weights > 0
    z = m.nodes[keep]
    w = m.weights[keep]

    values = np.zeros((N + 1, z.size), dtype=np.complex128)
    coeffs = np.zeros((N + 1, N + 1), dtype=np.complex128)
    values[0] = 1.0
    coeffs[0, 0] = 1.0
    for n in range(1, N + 1):
        v = z * values[n - 1]
        c = np.zeros(N + 1, dtype=np.complex128)
        c[1:n + 1] = coeffs[n - 1, :n]
        start = np.sqrt(np.sum(w * np.abs(v) ** 2))
        for _ in range(2):
            h = (values[:n].conj() * w) @ v
            v = v - h @ values[:n]
            c = c - h @ coeffs[:n]
        norm = np.sqrt(np.sum(w * np.abs(v) ** 2))
        if norm < RESIDUAL_FLOOR * max(start, 1.0):
            raise DegenerateMeasureError(
                f"orthogonalization residual {norm:.3g} at degree {n}", degree=n)
        phase = c[n] / abs(c[n])
        values[n] = v / (norm * phase)
        coeffs[n] = c / (norm * phase)

    polys = []
    for n in range(N + 1):
        cn = coeffs[n, :n + 1].copy()
        cn[-1] = cn[-1].real
        polys.append(Polynomial(cn))
    gammas = np.array([p.leading.real for p in polys])
    return OrthoSequence(m.label, tuple(polys), gammas)


def gram_matrix(seq: OrthoSequence, m: DiscreteMeasure) -> np.ndarray:
    """``G[j, k] = sum_i w_i P_j(z_i) conj(P_k(z_i))`` from the stored coefficients."""
    vals = np.array([evaluate(p, m.nodes) for p in seq.polys])
    return (vals * m.weights) @ vals.conj().T


def gram_defect(seq: OrthoSequence, m: DiscreteMeasure) -> float:
    return float(np.max(np.abs(gram_matrix(seq, m) - np.eye(seq.max_degree + 1))))


# -- Fejér zero confinement -------------------------------------------------------

def _hull_polygon(points: np.ndarray):
    """Counter-clockwise hull vertices, or ``None`` when the points are collinear."""
    from scipy.spatial import ConvexHull, QhullError

    xy = np.column_stack([points.real, points.imag])
    try:
        hull = ConvexHull(xy)
    except QhullError:
        return None
    return points[hull.vertices]


def _segment_distance(z, a, b):
    ab = b - a
    t = np.clip(((z - a) * np.conj(ab)).real / abs(ab) ** 2, 0.0, 1.0)
    return np.abs(z - (a + t * ab))


def signed_hull_distance(z, points: np.ndarray) -> np.ndarray:
    """Signed distance to ``Co(points)``: negative inside, positive outside."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    hull = _hull_polygon(points)
    if hull is None:
        order = np.lexsort((points.imag, points.real))
        a, b = points[order[0]], points[order[-1]]
        return _segment_distance(z, a, b)
    edges_a = hull
    edges_b = np.roll(hull, -1)
    dist = np.min([_segment_distance(z, a, b) for a, b in zip(edges_a, edges_b)], axis=0)
    # counter-clockwise hull: inside iff left of every edge
    cross = np.array([((b - a).conjugate() * (z - a)).imag for a, b in zip(edges_a, edges_b)])
    inside = np.all(cross >= 0, axis=0)
    return np.where(inside, -dist, dist)


@dataclass
class FejerReport:
    max_distance: dict  # n -> max signed hull distance over zeros of P_n
    tolerance: float
    zeros: dict = field(repr=False, default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(d <= self.tolerance for d in self.max_distance.values())

    @property
    def worst(self) -> float:
        return max(self.max_distance.values()) if self.max_distance else float("-inf")


def verify_fejer(seq: OrthoSequence, m: DiscreteMeasure, tol: float = 1e-8) -> FejerReport:
    """Check that every zero of every ``P_n`` (n >= 1) lies in the convex hull of the nodes."""
    support = m.support
    out, zs = {}, {}
    for n in range(1, seq.max_degree + 1):
        roots = zeros_of(seq[n])
        zs[n] = roots
        out[n] = float(np.max(signed_hull_distance(roots, support)))
    return FejerReport(out, tol, zs)


# -- identities for balanced measures -------------------------------------------

@dataclass
class BGHReport:
    q: Polynomial
    p1_distance: float
    composition_distance: dict  # k -> ||p_{kd} - p_k o Q||
    iterate_distance: dict  # k -> ||p_{d^k} - (Q^k + a/d)||

    def rows(self):
        yield ("p1", 1, self.p1_distance)
        for k, v in self.composition_distance.items():
            yield ("composition", k, v)
        for k, v in self.iterate_distance.items():
            yield ("iterate", k, v)


def verify_bgh(q: Polynomial, seq: OrthoSequence, k_max: int = 2) -> BGHReport:
    """Coefficient distances for ``p_1 = z + a/d``, ``p_{kd} = p_k∘Q``, ``p_{d^k} = Q^k + a/d``.

    All comparisons are between monic polynomials.
    """
    d = q.degree
    if d < 2 or abs(q.leading - 1) > 1e-14:
        raise PreconditionError("Q must be monic of degree >= 2")
    if k_max < 1 or seq.max_degree < d**k_max:
        raise PreconditionError(
            f"sequence degree {seq.max_degree} < d^k_max = {d ** k_max}")
    a = complex(q.coeffs[-2])
    p1_expected = Polynomial([a / d, 1.0])
    p1 = coefficient_distance(seq.monic(1), p1_expected)
    comp = {}
    k = 1
    while k * d <= seq.max_degree:
        comp[k] = coefficient_distance(seq.monic(k * d), seq.monic(k).compose(q))
        k += 1
    iters = {}
    for k in range(1, k_max + 1):
        target = q.iterate(k) + a / d
        iters[k] = coefficient_distance(seq.monic(d**k), target)
    return BGHReport(q, p1, comp, iters)


# -- parity for symmetric measures ------------------------------------------------

def is_symmetric(m: DiscreteMeasure, tol: float = 1e-10) -> bool:
    """Whether ``m`` is invariant under ``z -> -z`` (nodes and weights)."""
    from scipy.spatial import cKDTree

    xy = np.column_stack([m.nodes.real, m.nodes.imag])
    dist, idx = cKDTree(xy).query(-xy)
    return bool(np.all(dist <= tol) and np.allclose(m.weights[idx], m.weights, rtol=0, atol=1e-15))


@dataclass
class ParityReport:
    even_residual: float  # max |odd-index coefficient| over even n
    odd_residual: float  # max |even-index coefficient| over odd n
    value_at_zero: dict  # n -> |P_n(0)| for odd n

    @property
    def max_residual(self) -> float:
        return max(self.even_residual, self.odd_residual)


def verify_parity(seq: OrthoSequence, m: DiscreteMeasure) -> ParityReport:
    if not is_symmetric(m):
        raise PreconditionError("measure is not invariant under z -> -z")
    even_res = odd_res = 0.0
    at_zero = {}
    for n, p in enumerate(seq.polys):
        c = np.abs(p.coeffs)
        if n % 2 == 0:
            if n >= 1:
                even_res = max(even_res, float(c[1::2].max()))
        else:
            odd_res = max(odd_res, float(c[0::2].max()))
            at_zero[n] = float(c[0])
    return ParityReport(even_res, odd_res, at_zero)
