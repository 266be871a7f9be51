"""Hausdorff distances between finite samples and set-convergence diagnostics.

Asymptotic notions (liminf, limsup of a sequence of compact sets) are
evaluated over the finite family that is supplied; every verdict records
the horizon (smallest and largest n) it was computed on.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import PreconditionError
from .samples import SetSample

BRUTE_FORCE_BLOCK = 2048


def _points(s) -> np.ndarray:
    pts = s.points if isinstance(s, SetSample) else np.atleast_1d(np.asarray(s, dtype=np.complex128))
    if pts.size == 0:
        raise PreconditionError("Hausdorff distances need nonempty sets")
    return pts


def nearest_distances_brute(L, M) -> np.ndarray:
    """For each point of L, the distance to the nearest point of M (O(|L||M|))."""
    lp, mp = _points(L), _points(M)
    out = np.empty(lp.size)
    for start in range(0, lp.size, BRUTE_FORCE_BLOCK):
        block = lp[start:start + BRUTE_FORCE_BLOCK]
        out[start:start + block.size] = np.abs(block[:, None] - mp[None, :]).min(axis=1)
    return out


def nearest_distances(L, M) -> np.ndarray:
    """KD-tree version of :func:`nearest_distances_brute`."""
    lp, mp = _points(L), _points(M)
    tree = cKDTree(np.column_stack([mp.real, mp.imag]))
    d, idx = tree.query(np.column_stack([lp.real, lp.imag]))
    # recompute with the same formula as the brute-force path
    out = np.abs(lp - mp[idx])
    # squared offsets below ~1e-154 underflow inside the tree, so exact hits may be missed
    out[np.isin(lp, mp)] = 0.0
    return out


def semidistance(L, M, brute_force: bool = False) -> float:
    """``sup_{z in L} inf_{w in M} |z - w|``."""
    d = nearest_distances_brute(L, M) if brute_force else nearest_distances(L, M)
    return float(d.max())


def _resolution(s) -> float:
    return s.resolution if isinstance(s, SetSample) else 0.0


@dataclass
class DistanceReport:
    semi_LM: float
    semi_ML: float
    resolution: float

    @property
    def full(self) -> float:
        return max(self.semi_LM, self.semi_ML)


def distance(L, M, brute_force: bool = False) -> DistanceReport:
    return DistanceReport(semidistance(L, M, brute_force), semidistance(M, L, brute_force),
                          max(_resolution(L), _resolution(M)))


def point_distance(z0: complex, s) -> float:
    return float(np.min(np.abs(_points(s) - z0)))


@dataclass
class MembershipVerdict:
    inside: bool
    delta: float
    distances: dict  # n -> dist(z0, set_n)
    witness: list  # indices n with distance > delta among the tail
    horizon: tuple  # (first n, last n) of the supplied family

    @property
    def label(self) -> str:
        return "IN" if self.inside else "OUT"


def _indexed(sets):
    if isinstance(sets, dict):
        items = sorted(sets.items())
    else:
        items = list(sets)
        if items and not isinstance(items[0], tuple):
            items = list(enumerate(items))
    return items


def membership_liminf(z0: complex, sets, delta: float | None = None) -> MembershipVerdict:
    """Finite-horizon test of ``z0 in liminf S_n``.

    IN when ``dist(z0, S_n) <= delta`` for every n in the upper half of the
    family (past its midpoint); otherwise OUT, with the offending n as the
    witness subsequence.  ``delta`` defaults to twice the largest sample
    resolution.
    """
    items = _indexed(sets)
    if len(items) < 3:
        raise PreconditionError("membership needs at least 3 sets")
    if delta is None:
        delta = 2.0 * max(s.resolution for _, s in items)
    dists = {n: point_distance(z0, s) for n, s in items}
    tail = [n for n, _ in items[len(items) // 2:]]
    witness = [n for n in tail if dists[n] > delta]
    if witness and all(dists[n] > delta for n, _ in items):
        witness = [n for n, _ in items]
    return MembershipVerdict(not witness, delta, dists, witness, (items[0][0], items[-1][0]))


@dataclass
class ConvergenceTable:
    """Columns: n, d_H(target->J_n), d_H(J_n->target), D_H, resolution."""

    rows: list = field(default_factory=list)

    @property
    def directed(self):
        return [r[1] for r in self.rows]

    @property
    def decreasing(self) -> bool:
        d = self.directed
        return all(b <= a for a, b in zip(d, d[1:]))

    @property
    def strictly_decreasing(self) -> bool:
        d = self.directed
        return all(b < a for a, b in zip(d, d[1:]))

    @property
    def ratio(self) -> float:
        d = self.directed
        return d[-1] / d[0] if d[0] > 0 else float("nan")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "d_target_to_Jn", "d_Jn_to_target", "D_H", "resolution"])
            w.writerows(self.rows)


def convergence_table(target: SetSample, family) -> ConvergenceTable:
    items = _indexed(family)
    ns = [n for n, _ in items]
    if ns != sorted(ns):
        raise PreconditionError("family must be indexed by increasing n")
    table = ConvergenceTable()
    for n, s in items:
        rep = distance(target, s)
        table.rows.append((n, rep.semi_LM, rep.semi_ML, rep.full, rep.resolution))
    return table
