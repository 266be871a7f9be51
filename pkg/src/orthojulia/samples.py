"""Finite point clouds standing in for compact planar sets."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError


@dataclass(frozen=True, eq=False)
class SetSample:
    """A finite sample of a compact set together with its sampling scale.

    ``resolution`` is the scale ``h`` below which the sample cannot resolve
    the underlying set (a pixel diagonal for grid extractions).
    """

    points: np.ndarray
    resolution: float

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.complex128).ravel())
        if pts.size == 0:
            raise PreconditionError("SetSample must contain at least one point")
        if not np.all(np.isfinite(pts)):
            raise PreconditionError("SetSample points must be finite")
        if not (self.resolution > 0 and np.isfinite(self.resolution)):
            raise PreconditionError(f"resolution must be positive, got {self.resolution}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "resolution", float(self.resolution))

    def __len__(self):
        return self.points.size

    def scaled(self, alpha: float) -> "SetSample":
        return SetSample(self.points * alpha, self.resolution * abs(alpha))

    def diameter(self) -> float:
        return _diameter(self.points)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"# resolution={self.resolution!r}\n")
            fh.write("re,im\n")
            for z in self.points:
                fh.write(f"{z.real:.17g},{z.imag:.17g}\n")

    @classmethod
    def from_csv(cls, path) -> "SetSample":
        with open(path) as fh:
            header = fh.readline().strip()
            if not header.startswith("# resolution="):
                raise PreconditionError(f"{path}: missing resolution header")
            resolution = float(header.split("=", 1)[1])
            data = np.loadtxt(fh, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0] + 1j * data[:, 1], resolution)


def _diameter(points: np.ndarray) -> float:
    if points.size < 2:
        return 0.0
    # the diameter is attained between hull vertices; fall back to brute force
    # for collinear or tiny sets where a hull is not defined
    xy = np.column_stack([points.real, points.imag])
    try:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(xy)
        pts = points[hull.vertices]
    except Exception:
        pts = points
        if pts.size > 4096:
            order = np.lexsort((pts.imag, pts.real))
            pts = pts[[order[0], order[-1]]]
            return float(abs(pts[1] - pts[0]))
    return float(np.max(np.abs(pts[:, None] - pts[None, :])))


def circle_sample(center: complex = 0.0, radius: float = 1.0, n: int = 1024) -> SetSample:
    """Equispaced sample of a circle; resolution is the chord length."""
    t = 2 * np.pi * np.arange(n) / n
    return SetSample(center + radius * np.exp(1j * t), 2 * radius * np.sin(np.pi / n))


def segment_sample(a: complex, b: complex, n: int = 1001) -> SetSample:
    t = np.linspace(0.0, 1.0, n)
    return SetSample(a + (b - a) * t, abs(b - a) / (n - 1))


def polygon_sample(vertices, n: int = 4000) -> SetSample:
    """Arclength-equispaced sample of a closed polygon boundary (vertices included)."""
    v = np.asarray(vertices, dtype=np.complex128)
    edges = np.roll(v, -1) - v
    lengths = np.abs(edges)
    perimeter = lengths.sum()
    pts = []
    step = 0.0
    for start, edge, length in zip(v, edges, lengths):
        k = max(1, int(round(n * length / perimeter)))
        pts.append(start + edge * (np.arange(k) / k))
        step = max(step, length / k)
    return SetSample(np.concatenate(pts), step)
