"""Capacity estimation and Green's functions with pole at infinity.

Capacities come from Leja points.  For ``m`` Leja points the transfinite
diameter ``d_m = (prod_{j<k} |z_j - z_k|)^(2/(m(m-1)))`` overestimates the
capacity by a factor close to ``m^(1/(m-1))`` (exact for equispaced points
on a circle).  We compute ``d_m`` and ``d_2m`` from one Leja sequence and
eliminate that leading term:

    log cap ~ (b log d_m - a log d_2m) / (b - a),
    a = log(m)/(m-1),  b = log(2m)/(2m-1).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import GridSpec, classify, classify_with_green
from .errors import NearSingularityError, PreconditionError
from .orthopoly import OrthoSequence
from .polynomial import Polynomial, evaluate
from .samples import SetSample

DEFAULT_LEJA_M = 64


def leja_sequence(points, m: int):
    """Greedy Leja selection.

    Returns the chosen points and, per pick ``k >= 1``, the log of the
    maximized product ``prod_{j<k} |z_k - z_j|``.  The first pick is the
    point farthest from the centroid.  Ties go to the lexicographically
    smallest point (real part, then imaginary part).
    """
    pool = np.asarray(points, dtype=np.complex128).ravel()
    pool = pool[np.lexsort((pool.imag, pool.real))]
    if m > pool.size:
        raise PreconditionError(f"requested {m} Leja points from {pool.size} candidates")
    first = int(np.argmax(np.abs(pool - pool.mean())))
    chosen = np.empty(m, dtype=np.complex128)
    log_products = np.zeros(m)
    chosen[0] = pool[first]
    with np.errstate(divide="ignore"):
        acc = np.log(np.abs(pool - pool[first]))
        for k in range(1, m):
            j = int(np.argmax(acc))
            if not np.isfinite(acc[j]):
                raise PreconditionError(f"only {k} distinct points available")
            chosen[k] = pool[j]
            log_products[k] = acc[j]
            acc += np.log(np.abs(pool - pool[j]))
    return chosen, log_products


def leja_points(s: SetSample, m: int) -> np.ndarray:
    if m < 2:
        raise PreconditionError("need m >= 2")
    if m > len(s):
        raise PreconditionError(f"m = {m} exceeds the {len(s)} sample points")
    return leja_sequence(s.points, m)[0]


def _log_transfinite(log_products: np.ndarray, m: int) -> float:
    # sum_{j<k<m} log|z_j - z_k| is the running sum of the greedy products
    return 2.0 * log_products[:m].sum() / (m * (m - 1))


@dataclass
class CapacityEstimate:
    value: float
    n_points_used: int
    method: str = "leja-diameter"
    diameter_m: float = float("nan")  # raw d_m
    diameter_2m: float = float("nan")  # raw d_2m
    polar: bool = False

    @property
    def delta(self) -> float:
        """Change of the raw transfinite diameter between m and 2m points."""
        return self.diameter_m - self.diameter_2m


def leja_capacity(s: SetSample, m: int = DEFAULT_LEJA_M) -> CapacityEstimate:
    """Capacity of the sampled set from 2m Leja points (see module docstring)."""
    if m < 8:
        raise PreconditionError("leja_capacity needs m >= 8")
    pts = np.unique(s.points)
    if pts.size < 2 or s.diameter() <= s.resolution:
        return CapacityEstimate(0.0, int(pts.size), polar=True)
    if pts.size < 2 * m:
        m = pts.size // 2
    if m < 2:
        return CapacityEstimate(0.0, int(pts.size), polar=True)
    _, logs = leja_sequence(pts, 2 * m)
    lm = _log_transfinite(logs, m)
    l2m = _log_transfinite(logs, 2 * m)
    a = math.log(m) / (m - 1)
    b = math.log(2 * m) / (2 * m - 1)
    value = math.exp((b * lm - a * l2m) / (b - a))
    # a set never has capacity above its diameter; the cap only bites on tiny samples
    value = min(value, s.diameter())
    return CapacityEstimate(value, 2 * m, diameter_m=math.exp(lm), diameter_2m=math.exp(l2m))


# -- Green's functions --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EquilibriumPotential:
    """Discrete equilibrium potential of a boundary sample: uniform charges on Leja points."""

    charges: np.ndarray
    log_capacity: float
    resolution: float

    @classmethod
    def from_sample(cls, s: SetSample, m: int = DEFAULT_LEJA_M) -> "EquilibriumPotential":
        m = min(m, len(s) // 2)
        cap = leja_capacity(s, m)
        if cap.polar:
            raise PreconditionError("sample is (numerically) polar")
        pts = leja_points(s, m)
        return cls(pts, math.log(cap.value), s.resolution)

    def __call__(self, z, check: bool = True):
        z = np.asarray(z, dtype=np.complex128)
        flat = z.ravel()
        out = np.empty(flat.size)
        step = max(1, 2**20 // self.charges.size)
        for start in range(0, flat.size, step):
            block = flat[start:start + step]
            dist = np.abs(block[:, None] - self.charges[None, :])
            if check and np.any(dist.min(axis=1) <= self.resolution):
                raise NearSingularityError("evaluation point within sample resolution of a charge")
            with np.errstate(divide="ignore"):
                out[start:start + step] = np.log(dist).mean(axis=1)
        out = np.maximum(out - self.log_capacity, 0.0)
        return out.reshape(z.shape) if z.ndim else float(out[0])


def greens_equilibrium(s: SetSample, m: int, z):
    """``g(z) ~ (1/m) sum_j log|z - zeta_j| - log cap`` on m Leja points, clamped at 0."""
    return EquilibriumPotential.from_sample(s, m)(z)


def greens_orthopoly(seq: OrthoSequence, n: int, z):
    """``(1/n) log+ |P_n(z)|``."""
    if not 1 <= n <= seq.max_degree:
        raise PreconditionError(f"n must lie in 1..{seq.max_degree}")
    with np.errstate(divide="ignore"):
        val = np.maximum(np.log(np.abs(evaluate(seq[n], z))), 0.0) / n
    return float(val) if np.ndim(val) == 0 else val


# -- reports --------------------------------------------------------------------------

def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


@dataclass
class SupnormReport:
    """Columns: n, D_n, n*D_n."""

    rows: list  # (n, D_n, n*D_n)
    bounded: bool

    def to_csv(self, path):
        _write_csv(path, ["n", "D_n", "n_times_D_n"], self.rows)


def bounded_flag(scaled) -> bool:
    """Boundedness heuristic for ``n*D_n``: max at the smallest n, or max <= 2*median."""
    scaled = np.asarray(scaled, dtype=float)
    if scaled.size == 0:
        return True
    return bool(np.argmax(scaled) == 0 or scaled.max() <= 2.0 * np.median(scaled))


def supnorm_bound_report(seq: OrthoSequence, grid: GridSpec, n_list) -> SupnormReport:
    """``D_n = max_grid |g_n - (1/n) log+|P_n||`` for each n."""
    rows = []
    for n in n_list:
        if n < 2:
            raise PreconditionError("supnorm report needs n >= 2")
        _, field_n = classify_with_green(seq[n], grid)
        approx = greens_orthopoly(seq, n, grid.centers())
        dn = float(np.max(np.abs(field_n.values - approx)))
        rows.append((n, dn, n * dn))
    return SupnormReport(rows, bounded_flag([r[2] for r in rows]))


def polynomial_capacity(p: Polynomial) -> float:
    """Capacity of the filled Julia set: ``|lead|^(-1/(d-1))``."""
    if p.degree < 2:
        raise PreconditionError("needs degree >= 2")
    return abs(p.leading) ** (-1.0 / (p.degree - 1))


@dataclass
class CapacityFormulaReport:
    lhs: float  # leading-coefficient capacity
    rhs: float  # Leja capacity of the Julia sample
    relative_gap: float


def capacity_formula_check_poly(p: Polynomial, julia: SetSample, m: int = DEFAULT_LEJA_M) -> CapacityFormulaReport:
    lhs = polynomial_capacity(p)
    rhs = leja_capacity(julia, m).value
    return CapacityFormulaReport(lhs, rhs, abs(lhs - rhs) / lhs)


def capacity_formula_check(seq: OrthoSequence, n: int, julia: SetSample, m: int = DEFAULT_LEJA_M) -> CapacityFormulaReport:
    """Compare ``gamma_n^(-1/(n-1))`` with the Leja capacity of the extracted ``J_n``."""
    return capacity_formula_check_poly(seq[n], julia, m)


def trend_non_increasing(values, jitter: float) -> bool:
    values = list(values)
    return all(b <= a * (1.0 + jitter) + 1e-300 for a, b in zip(values, values[1:]))


@dataclass
class CapacityDecayReport:
    """Columns: n, pixels in V_eps ∩ K_n, capacity, polar flag."""

    eps: float
    rows: list  # (n, n_pixels, capacity, polar)
    jitter: float = 0.10

    @property
    def capacities(self):
        return [r[2] for r in self.rows]

    @property
    def non_increasing(self) -> bool:
        return trend_non_increasing(self.capacities, self.jitter)

    @property
    def decreasing(self) -> bool:
        c = self.capacities
        return len(c) >= 2 and c[-1] < c[0]

    @property
    def all_empty(self) -> bool:
        return all(r[1] == 0 for r in self.rows)

    def to_csv(self, path):
        _write_csv(path, ["n", "pixels", "capacity", "polar"], self.rows)


def capacity_decay(seq: OrthoSequence, boundary: SetSample, eps: float, n_list,
                   grid: GridSpec, m: int = DEFAULT_LEJA_M, jitter: float = 0.10) -> CapacityDecayReport:
    """Capacity of ``V_eps ∩ K_n``, with ``V_eps = {g >= eps}`` from the boundary sample."""
    if not eps > 0:
        raise PreconditionError("eps must be positive")
    potential = EquilibriumPotential.from_sample(boundary, m)
    # pixels within resolution of the boundary sit on J where g = 0
    g = potential(grid.centers(), check=False)
    in_v = g >= eps
    rows = []
    for n in n_list:
        c = classify(seq[n], grid)
        mask = in_v & c.bounded
        count = int(mask.sum())
        if count == 0:
            rows.append((n, 0, 0.0, True))
            continue
        est = leja_capacity(SetSample(grid.centers()[mask], grid.pixel_diagonal), 8 if count < 128 else m)
        rows.append((n, count, est.value, est.polar))
    return CapacityDecayReport(eps, rows, jitter)


@dataclass
class CapacityBoundsReport:
    rows: list  # (n, capacity of K_n)
    reference: float  # Leja capacity of K
    slack: float = 0.05

    @property
    def tail_max(self) -> float:
        vals = [r[1] for r in self.rows]
        return max(vals[len(vals) // 2:])

    @property
    def passed(self) -> bool:
        return self.tail_max <= (1.0 + self.slack) * self.reference


def capacity_bounds_check(seq: OrthoSequence, K_sample: SetSample, n_list,
                          m: int = DEFAULT_LEJA_M, slack: float = 0.05) -> CapacityBoundsReport:
    """Upper capacity bound: large-n ``Cpct(K_n)`` against ``Cpct(K)`` plus slack."""
    rows = [(n, polynomial_capacity(seq[n])) for n in n_list]
    return CapacityBoundsReport(rows, leja_capacity(K_sample, m).value, slack)
