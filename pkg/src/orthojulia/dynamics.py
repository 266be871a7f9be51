"""Escape-time dynamics of a single polynomial on a pixel grid.

Pixels are identified with their centers; ``xs`` runs left to right from
``x_min`` to ``x_max`` and ``ys`` top to bottom from ``y_max`` to
``y_min`` (both inclusive), so row 0 is the top image row.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import EmptySetError, PreconditionError
from .polynomial import Polynomial, escape_radius, evaluate, zeros_of
from .samples import SetSample

DEFAULT_MAX_ITER = 256
GREEN_BAILOUT = 1e6


@dataclass(frozen=True)
class GridSpec:
    x_min: float = -2.0
    x_max: float = 2.0
    y_min: float = -2.0
    y_max: float = 2.0
    width: int = 400
    height: int = 400
    escape_radius: float | None = None  # None: use the polynomial's own bound
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise PreconditionError("grid window must satisfy x_min < x_max and y_min < y_max")
        if self.width < 2 or self.height < 2:
            raise PreconditionError("grid needs width, height >= 2")
        if self.escape_radius is not None and not self.escape_radius > 0:
            raise PreconditionError("escape radius must be positive")
        if self.max_iter < 1:
            raise PreconditionError("max_iter must be >= 1")

    @classmethod
    def square(cls, half_width: float, pixels: int, center: complex = 0.0, **kw) -> "GridSpec":
        c = complex(center)
        return cls(c.real - half_width, c.real + half_width, c.imag - half_width,
                   c.imag + half_width, pixels, pixels, **kw)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.width)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_max, self.y_min, self.height)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.width - 1)

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / (self.height - 1)

    @property
    def pixel_diagonal(self) -> float:
        return math.hypot(self.dx, self.dy)

    def centers(self) -> np.ndarray:
        return self.xs[None, :] + 1j * self.ys[:, None]

    def radius_for(self, p: Polynomial) -> float:
        bound = escape_radius(p)
        if self.escape_radius is None:
            return bound
        if self.escape_radius < bound:
            raise PreconditionError(
                f"grid escape radius {self.escape_radius} below the bound {bound:.6g} for this polynomial")
        return float(self.escape_radius)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class GridClassification:
    spec: GridSpec
    escape_iter: np.ndarray  # int32, 0 = never escaped
    last_modulus: np.ndarray
    radius: float
    poly: Polynomial | None = None

    @property
    def bounded(self) -> np.ndarray:
        return self.escape_iter == 0

    def boundary_mask(self) -> np.ndarray:
        """Non-escaping pixels with at least one escaping 4-neighbour inside the grid."""
        inside = self.bounded
        out = ~inside
        touch = np.zeros_like(inside)
        touch[1:, :] |= out[:-1, :]
        touch[:-1, :] |= out[1:, :]
        touch[:, 1:] |= out[:, :-1]
        touch[:, :-1] |= out[:, 1:]
        return inside & touch

    def save_pgm(self, path) -> None:
        """8-bit P5 image of ``escape_iter`` plus a JSON sidecar with the grid."""
        img = np.round(255.0 * self.escape_iter / self.spec.max_iter).astype(np.uint8)
        write_pgm(path, img)
        sidecar = dict(self.spec.to_dict(), radius_used=self.radius)
        Path(str(path) + ".json").write_text(json.dumps(sidecar, indent=1) + "\n")


@dataclass(frozen=True, eq=False)
class GreensField:
    spec: GridSpec
    values: np.ndarray


def write_pgm(path, img: np.ndarray) -> None:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM file")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError("only 8-bit PGM supported")
    return np.frombuffer(parts[4][: w * h], dtype=np.uint8).reshape(h, w)


def _kernel_coeffs(p: Polynomial) -> np.ndarray:
    return np.ascontiguousarray(p.coeffs[::-1], dtype=np.complex128)


def _require_dynamic(p: Polynomial):
    if p.degree < 2:
        raise PreconditionError("dynamics needs a polynomial of degree >= 2")


def green_bailout(p: Polynomial, radius: float) -> float:
    # keep |lead| * bail**d well inside the double range
    cap = 10.0 ** (250.0 / p.degree) / max(1.0, abs(p.leading)) ** (1.0 / p.degree)
    return max(radius, min(GREEN_BAILOUT, cap))


def classify(p: Polynomial, spec: GridSpec) -> GridClassification:
    """Escape-time classification of every pixel center."""
    _require_dynamic(p)
    radius = spec.radius_for(p)
    it = np.zeros((spec.height, spec.width), dtype=np.int32)
    mod = np.zeros((spec.height, spec.width), dtype=np.float64)
    _kernels.classify_grid(_kernel_coeffs(p), spec.xs, spec.ys, radius, spec.max_iter, it, mod)
    return GridClassification(spec, it, mod, radius, p)


def classify_with_green(p: Polynomial, spec: GridSpec):
    """Classification and Green's field from a single pass over the grid."""
    _require_dynamic(p)
    radius = spec.radius_for(p)
    shape = (spec.height, spec.width)
    it = np.zeros(shape, dtype=np.int32)
    mod = np.zeros(shape, dtype=np.float64)
    green = np.zeros(shape, dtype=np.float64)
    d = p.degree
    _kernels.classify_green_grid(_kernel_coeffs(p), spec.xs, spec.ys, radius, spec.max_iter,
                                 green_bailout(p, radius), math.log(abs(p.leading)) / (d - 1), d,
                                 it, mod, green)
    return GridClassification(spec, it, mod, radius, p), GreensField(spec, green)


def greens_field(p: Polynomial, spec: GridSpec) -> GreensField:
    return classify_with_green(p, spec)[1]


def fixed_points(p: Polynomial) -> np.ndarray:
    """Solutions of ``p(z) = z``; they always belong to the filled Julia set."""
    shifted = np.array(p.coeffs)
    shifted[1] -= 1.0
    return zeros_of(Polynomial(shifted))


def extract_filled(c: GridClassification, include_fixed_points: bool = False) -> SetSample:
    """Centers of non-escaping pixels.

    When ``include_fixed_points`` is set, the fixed points of the classified
    polynomial that fall inside the window are added.  This keeps filled
    sets with empty interior (Cantor dust) visible at grid resolution.
    """
    mask = c.bounded
    pts = c.spec.centers()[mask]
    if include_fixed_points:
        if c.poly is None:
            raise PreconditionError("classification does not carry its polynomial")
        fp = fixed_points(c.poly)
        s = c.spec
        fp = fp[(fp.real >= s.x_min) & (fp.real <= s.x_max) & (fp.imag >= s.y_min) & (fp.imag <= s.y_max)]
        pts = np.concatenate([pts, fp])
    if pts.size == 0:
        raise EmptySetError("no non-escaping pixel: enlarge the window or max_iter")
    return SetSample(pts, c.spec.pixel_diagonal)


def extract_julia(c: GridClassification) -> SetSample:
    if not c.bounded.any():
        raise EmptySetError("no non-escaping pixel: enlarge the window or max_iter")
    mask = c.boundary_mask()
    if not mask.any():
        # the filled set covers the whole window; its boundary lies outside
        raise EmptySetError("non-escaping set has no boundary inside the window")
    return SetSample(c.spec.centers()[mask], c.spec.pixel_diagonal)


def greens_iterated(p: Polynomial, z, k: int = 256, R: float | None = None):
    """Green's function of the basin of infinity by iteration.

    Iterates until the first index ``j <= k`` with ``|P^j(z)| > R`` and
    returns ``(log|P^j(z)| + log|lead|/(d-1)) / d^j`` clamped at zero; the
    constant is minus the log of the capacity of the filled Julia set, the
    limit of ``g(w) - log|w|``.  Points that stay within ``R`` for all
    ``k`` steps get ``log+|P^k(z)| / d^k``.  ``R`` defaults to a large
    bailout so the neglected term ``O(1/|P^j(z)|)`` is small.
    """
    _require_dynamic(p)
    if k < 1:
        raise PreconditionError("k must be >= 1")
    d = p.degree
    if R is None:
        R = green_bailout(p, escape_radius(p))
    lead_term = math.log(abs(p.leading)) / (d - 1)
    scalar = np.isscalar(z)
    w = np.atleast_1d(np.asarray(z, dtype=np.complex128)).copy()
    out = np.zeros(w.shape)
    active = np.ones(w.shape, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for j in range(1, k + 1):
            prev = w[active]
            nxt = evaluate(p, prev)
            mod = np.abs(nxt)
            overflow = ~np.isfinite(mod)
            escaped = (mod > R) | overflow
            idx = np.flatnonzero(active)
            if escaped.any():
                e = idx[escaped]
                logs = np.where(overflow[escaped], np.log(np.abs(prev[escaped])), np.log(mod[escaped]))
                power = np.where(overflow[escaped], j - 1, j)
                out[e] = np.maximum((logs + lead_term) / float(d) ** power, 0.0)
                active[e] = False
            w[idx] = nxt
            if not active.any():
                break
        if active.any():
            out[active] = np.maximum(np.log(np.abs(w[active])), 0.0) / float(d) ** k
    return float(out[0]) if scalar else out.reshape(np.shape(z))


@dataclass
class FunctionalEquationReport:
    max_residual: float
    n_samples: int


def verify_functional_equation(p: Polynomial, samples, k: int = 256) -> FunctionalEquationReport:
    """Max of ``|g(P(z)) - d*g(z)|`` over the samples."""
    z = np.asarray(samples, dtype=np.complex128).ravel()
    if not np.all(np.isfinite(z)):
        raise PreconditionError("samples must be finite")
    lhs = greens_iterated(p, evaluate(p, z), k)
    rhs = p.degree * greens_iterated(p, z, k)
    return FunctionalEquationReport(float(np.max(np.abs(lhs - rhs))), z.size)
