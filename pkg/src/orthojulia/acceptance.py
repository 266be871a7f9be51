"""The acceptance suite: every criterion as a function returning checks.

Each check records the measured value, the threshold and the verdict; the
CLI ``verify`` command and the test-suite both run these functions.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import dynamics as dyn
from . import measures as ms
from . import orthopoly as op
from . import potential as pot
from . import setmetrics as sm
from .polynomial import Polynomial
from .samples import SetSample, circle_sample, polygon_sample, segment_sample

SQUARE = (-2 - 2j, 2 - 2j, 2 + 2j, -2 + 2j)


@dataclass
class VerifyConfig:
    """Sizes and tolerances of the acceptance run (all overridable from TOML)."""

    seed: int = 7
    circle_nodes: int = 512
    arcsine_nodes: int = 2048
    square_nodes: int = 400
    disk_nodes: int = 256
    brolin_samples: int = 2**16
    max_degree: int = 20
    render_pixels: int = 800
    bridge_pixels: int = 400
    leja_m: int = 64

    tol_circle_coeff: float = 1e-10
    tol_circle_gamma: float = 1e-10
    tol_chebyshev: float = 1e-8
    tol_bgh_p1: float = 0.02
    tol_bgh_p2: float = 0.02
    tol_bgh_p4: float = 0.05
    tol_capacity_exact: float = 0.03
    tol_capacity_square: float = 0.05
    tol_supnorm_circle: float = 1e-10
    tol_julia_exact_diagonals: float = 2.0
    decay_eps: float = 0.2
    decay_jitter: float = 0.10
    tol_parity: float = 1e-8
    tol_fejer: float = 1e-8
    tol_functional: float = 1e-6
    tol_scaling: float = 0.01
    tol_gram: float = 1e-8
    random_pairs: int = 200

    @classmethod
    def from_mapping(cls, data: dict) -> "VerifyConfig":
        known = {f.name: f.type for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"unknown verify keys: {sorted(unknown)}")
        cfg = cls()
        for k, v in data.items():
            setattr(cfg, k, type(getattr(cfg, k))(v))
        return cfg


@dataclass
class Check:
    criterion: int
    name: str
    measured: float
    threshold: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] C{self.criterion} {self.name}: measured={self.measured:.6g} "
                f"threshold={self.threshold:.6g}{' ' + self.detail if self.detail else ''}")


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)
    runtime: float = 0.0
    runtime_budget: float = float("inf")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and self.runtime < self.runtime_budget

    def add(self, name, measured, threshold, passed, detail=""):
        self.checks.append(Check(self.number, name, float(measured), float(threshold), bool(passed), detail))

    def to_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "runtime_s": self.runtime, "runtime_budget_s": self.runtime_budget,
                "checks": [asdict(c) for c in self.checks]}


class _Cache:
    """Measures and sequences shared between criteria of one run."""

    def __init__(self, cfg: VerifyConfig):
        self.cfg = cfg
        self._store = {}

    def get(self, key, build):
        if key not in self._store:
            self._store[key] = build()
        return self._store[key]

    def circle(self):
        c = self.cfg
        m = self.get("circle", lambda: ms.build_circle(0, 1, c.circle_nodes))
        return m, self.get("circle-seq", lambda: op.orthonormalize(m, c.max_degree))

    def arcsine(self):
        c = self.cfg
        m = self.get("arcsine", lambda: ms.build_interval_arcsine(-2, 2, c.arcsine_nodes))
        return m, self.get("arcsine-seq", lambda: op.orthonormalize(m, c.max_degree))

    def square(self):
        c = self.cfg
        m = self.get("square", lambda: ms.build_polygon_boundary(SQUARE, c.square_nodes))
        return m, self.get("square-seq", lambda: op.orthonormalize(m, c.max_degree))

    def disks(self):
        c = self.cfg
        m = self.get("disks", lambda: ms.build_symmetric_disks(2.0, 0.5, c.disk_nodes))
        return m, self.get("disks-seq", lambda: op.orthonormalize(m, 11))

    def brolin(self, q_coeffs, samples, degree):
        key = ("brolin", tuple(q_coeffs), samples)
        m = self.get(key, lambda: ms.build_brolin(q_coeffs, samples, self.cfg.seed))
        return m, self.get(key + (degree,), lambda: op.orthonormalize(m, degree))


def _timed(result: CriterionResult, fn):
    t0 = time.perf_counter()
    fn(result)
    result.runtime = time.perf_counter() - t0
    return result


def criterion_1(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(1, "circle exactness", runtime_budget=10.0)

    def run(res):
        m, seq = cache.circle()
        coeff_err = max(
            float(np.max(np.abs(seq[n].coeffs - np.eye(n + 1)[n]))) for n in range(seq.max_degree + 1))
        gamma_err = float(np.max(np.abs(seq.gammas - 1.0)))
        res.add("P_n = z^n coefficient error", coeff_err, cfg.tol_circle_coeff, coeff_err < cfg.tol_circle_coeff)
        res.add("gamma_n = 1", gamma_err, cfg.tol_circle_gamma, gamma_err < cfg.tol_circle_gamma)
        grid = dyn.GridSpec.square(2.0, cfg.render_pixels)
        target = circle_sample(0, 1, 4096)
        worst = 0.0
        for n in range(2, seq.max_degree + 1):
            jn = dyn.extract_julia(dyn.classify(seq[n], grid))
            worst = max(worst, sm.distance(jn, target).full)
        res.add("max_n D_H(J_n, unit circle)", worst, grid.pixel_diagonal, worst <= grid.pixel_diagonal,
                f"n=2..{seq.max_degree}, {cfg.render_pixels}^2 grid")

    return _timed(res, run)


def chebyshev_monic(n: int) -> np.ndarray:
    """Monomial coefficients of ``2 T_n(z/2)`` from the three-term recurrence."""
    # monic recurrence: c_0 = 1, c_1 = z, c_2 = z^2 - 2, c_{k+1} = z c_k - c_{k-1}
    prev = np.array([1.0])
    if n == 0:
        return prev
    cur = np.array([0.0, 1.0])
    for k in range(1, n):
        nxt = np.zeros(k + 2)
        nxt[1:] = cur
        nxt[: prev.size] -= prev * (2.0 if k == 1 else 1.0)
        prev, cur = cur, nxt
    return cur


def criterion_2(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(2, "Chebyshev exactness", runtime_budget=10.0)

    def run(res):
        m, seq = cache.arcsine()
        gamma_err = float(np.max(np.abs(seq.gammas[1:] - 2**-0.5)))
        res.add("gamma_n = 2^-1/2", gamma_err, cfg.tol_chebyshev, gamma_err < cfg.tol_chebyshev)
        coeff_err = max(float(np.max(np.abs(seq.monic(n).coeffs - chebyshev_monic(n))))
                        for n in range(1, seq.max_degree + 1))
        res.add("monic p_n vs 2T_n(z/2)", coeff_err, cfg.tol_chebyshev, coeff_err < cfg.tol_chebyshev)

    return _timed(res, run)


def criterion_3(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(3, "balanced-measure identities", runtime_budget=60.0)

    def run(res):
        q1 = Polynomial([-1, 0, 1])
        q2 = Polynomial([0, 1, 1])
        for factor, scale in ((1, 1.0), (4, 0.5)):
            samples = cfg.brolin_samples * factor
            tag = f"{samples} samples"
            _, seq = cache.brolin((-1, 0, 1), samples, 4)
            rep = op.verify_bgh(q1, seq, k_max=2)
            t2, t4 = scale * cfg.tol_bgh_p2, scale * cfg.tol_bgh_p4
            res.add("z^2-1: monic p_2 vs Q", rep.iterate_distance[1], t2, rep.iterate_distance[1] < t2, tag)
            res.add("z^2-1: monic p_4 vs Q^2", rep.iterate_distance[2], t4, rep.iterate_distance[2] < t4, tag)
            _, seq2 = cache.brolin((0, 1, 1), samples, 2)
            rep2 = op.verify_bgh(q2, seq2, k_max=1)
            t1 = scale * cfg.tol_bgh_p1
            res.add("z^2+z: monic p_1 vs z+1/2", rep2.p1_distance, t1, rep2.p1_distance < t1, tag)

    return _timed(res, run)


def _julia(p, grid):
    return dyn.extract_julia(dyn.classify(p, grid))


def criterion_4(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(4, "capacity formula", runtime_budget=60.0)

    def run(res):
        m, seq = cache.circle()
        grid = dyn.GridSpec.square(2.0, cfg.render_pixels)
        rep = pot.capacity_formula_check(seq, 10, _julia(seq[10], grid), cfg.leja_m)
        res.add("circle n=10", rep.relative_gap, cfg.tol_capacity_exact, rep.relative_gap < cfg.tol_capacity_exact)
        q = Polynomial([-2, 0, 1])
        # odd pixel count keeps the real axis, where J_Q = [-2, 2] lives, on the grid
        grid_q = dyn.GridSpec.square(2.5, cfg.render_pixels + 1)
        jq = _julia(q, grid_q)
        rep = pot.capacity_formula_check_poly(q, jq, cfg.leja_m)
        res.add("z^2-2 formula", rep.relative_gap, cfg.tol_capacity_exact, rep.relative_gap < cfg.tol_capacity_exact)
        gap = abs(rep.rhs - 1.0)
        res.add("Cpct(J_Q) = 1 for z^2-2", gap, cfg.tol_capacity_exact, gap < cfg.tol_capacity_exact)
        _, sq = cache.square()
        grid_s = dyn.GridSpec.square(4.0, cfg.render_pixels)
        for n in (10, 20):
            rep = pot.capacity_formula_check(sq, n, _julia(sq[n], grid_s), cfg.leja_m)
            res.add(f"square n={n}", rep.relative_gap, cfg.tol_capacity_square,
                    rep.relative_gap < cfg.tol_capacity_square)

    return _timed(res, run)


def criterion_5(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(5, "sup-norm bridge", runtime_budget=120.0)

    def run(res):
        px = cfg.bridge_pixels
        _, seq = cache.circle()
        rep = pot.supnorm_bound_report(seq, dyn.GridSpec.square(2.0, px), range(2, seq.max_degree + 1))
        worst = max(r[1] for r in rep.rows)
        res.add("circle max D_n", worst, cfg.tol_supnorm_circle, worst < cfg.tol_supnorm_circle)
        for name, (_, s), half in (("arcsine", cache.arcsine(), 3.0), ("square", cache.square(), 4.0)):
            rep = pot.supnorm_bound_report(s, dyn.GridSpec.square(half, px), (5, 10, 15, 20))
            scaled = [r[2] for r in rep.rows]
            res.add(f"{name} n*D_n bounded", max(scaled), 2 * float(np.median(scaled)), rep.bounded,
                    "n*D_n=" + ",".join(f"{v:.4g}" for v in scaled))

    return _timed(res, run)


def criterion_6(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(6, "Julia-set convergence trend", runtime_budget=120.0)

    def run(res):
        _, sq = cache.square()
        grid = dyn.GridSpec.square(4.0, cfg.render_pixels)
        boundary = polygon_sample(SQUARE, 4000)
        table = sm.convergence_table(boundary, [(n, _julia(sq[n], grid)) for n in (5, 20)])
        d5, d20 = table.directed
        res.add("square d(J, J_20) < d(J, J_5)", d20, d5, d20 < d5)

        q = Polynomial([-1, 0, 1])
        _, seq = cache.brolin((-1, 0, 1), cfg.brolin_samples, 16)
        # 400-pixel rows: the 2^16-sample coefficient noise (~1e-2) moves J(p_4) by ~0.016
        grid_b = dyn.GridSpec(-2.0, 2.0, -1.5, 1.5, 401, 301)
        jq = _julia(q, grid_b)
        table = sm.convergence_table(jq, [(n, _julia(seq[n], grid_b)) for n in (4, 8, 16)])
        d = table.directed
        res.add("Brolin z^2-1 d(J_Q, J_n) decreasing over n=4,8,16", d[-1], d[0], table.strictly_decreasing,
                "d=" + ",".join(f"{v:.4g}" for v in d))
        tol = cfg.tol_julia_exact_diagonals * grid_b.pixel_diagonal
        for k in (1, 2):
            dk = sm.distance(_julia(seq.monic(2**k), grid_b), jq).full
            res.add(f"J(monic p_{2 ** k}) = J_Q", dk, tol, dk <= tol)

    return _timed(res, run)


def criterion_7(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(7, "capacity decay on V_eps", runtime_budget=120.0)

    def run(res):
        _, sq = cache.square()
        grid = dyn.GridSpec.square(4.0, cfg.bridge_pixels)
        rep = pot.capacity_decay(sq, polygon_sample(SQUARE, 4000), cfg.decay_eps, (5, 10, 15, 20), grid,
                                 cfg.leja_m, cfg.decay_jitter)
        caps = rep.capacities
        detail = "caps=" + ",".join(f"{c:.4g}" for c in caps)
        res.add("square non-increasing within jitter", max(caps), caps[0], rep.non_increasing, detail)
        res.add("square final < first", caps[-1], caps[0], rep.decreasing, detail)
        _, circ = cache.circle()
        rep = pot.capacity_decay(circ, circle_sample(0, 1, 2048), cfg.decay_eps, (5, 10, 15, 20),
                                 dyn.GridSpec.square(2.0, cfg.bridge_pixels), cfg.leja_m)
        pixels = sum(r[1] for r in rep.rows)
        res.add("circle V_eps ∩ K_n empty", pixels, 0, rep.all_empty)

    return _timed(res, run)


def criterion_8(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(8, "parity and the fixed point 0")

    def run(res):
        m, seq = cache.disks()
        par = op.verify_parity(seq, m)
        worst = max(par.value_at_zero.values())
        res.add("max |P_{2n+1}(0)|, n<=5", worst, cfg.tol_parity, worst < cfg.tol_parity)
        grid = dyn.GridSpec.square(3.0, cfg.bridge_pixels)
        family = [(n, dyn.extract_filled(dyn.classify(seq[n], grid), include_fixed_points=True))
                  for n in (1, 3, 5, 7, 9, 11) if n >= 3]
        verdict = sm.membership_liminf(0.0, family)
        res.add("0 in liminf K_{2n+1} (verdict IN)", max(verdict.distances.values()), verdict.delta,
                verdict.inside, f"horizon n={verdict.horizon}")
        gap = float(np.min(np.abs(m.support)))
        res.add("0 not in K: dist(0, supp)", gap, verdict.delta, gap > verdict.delta)

    return _timed(res, run)


def _random_sets(rng, count, size):
    return [SetSample(rng.normal(size=size) + 1j * rng.normal(size=size), 1e-3) for _ in range(count)]


def criterion_9(cfg: VerifyConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(9, "property suites")

    def run(res):
        measures = {
            "circle": cache.circle(), "arcsine": cache.arcsine(), "square": cache.square(),
            "disks": cache.disks(), "brolin z^2-1": cache.brolin((-1, 0, 1), cfg.brolin_samples, 16),
        }
        worst_fejer = max(op.verify_fejer(s, m).worst for m, s in measures.values())
        res.add("Fejer max signed hull distance", worst_fejer, cfg.tol_fejer, worst_fejer <= cfg.tol_fejer)
        worst_gram = max(op.gram_defect(s, m) for m, s in measures.values())
        res.add("Gram identity defect", worst_gram, cfg.tol_gram, worst_gram < cfg.tol_gram)

        rng = np.random.default_rng(cfg.seed)
        violations = 0
        for _ in range(cfg.random_pairs):
            a, b, c = _random_sets(rng, 3, 100)
            ab, ba = sm.distance(a, b), sm.distance(b, a)
            ac, bc = sm.distance(a, c), sm.distance(b, c)
            violations += ab.full != ba.full
            violations += ac.full > ab.full + bc.full
            violations += sm.distance(a, a).full != 0.0
            violations += ab.full == 0.0
        res.add("Hausdorff axiom violations", violations, 0, violations == 0,
                f"{cfg.random_pairs} random triples")

        polys = {"z^2": Polynomial([0, 0, 1]), "z^2-2": Polynomial([-2, 0, 1]),
                 "square P_10": measures["square"][1][10], "arcsine P_10": measures["arcsine"][1][10],
                 "brolin P_5": measures["brolin z^2-1"][1][5]}
        worst = 0.0
        for p in polys.values():
            z = 5.0 * np.exp(2j * np.pi * rng.random(100))
            worst = max(worst, dyn.verify_functional_equation(p, z).max_residual)
        res.add("Green functional equation residual", worst, cfg.tol_functional, worst < cfg.tol_functional)

        worst = 0.0
        for sample in (circle_sample(0, 1, 2048), segment_sample(-2, 2, 2001), polygon_sample(SQUARE, 4000)):
            base = pot.leja_capacity(sample, cfg.leja_m).value
            for alpha in (0.5, 3.0):
                scaled = pot.leja_capacity(sample.scaled(alpha), cfg.leja_m).value
                worst = max(worst, abs(scaled / (alpha * base) - 1.0))
        res.add("capacity scaling law", worst, cfg.tol_scaling, worst < cfg.tol_scaling)

    return _timed(res, run)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_all(cfg: VerifyConfig | None = None, only=None) -> list:
    cfg = cfg or VerifyConfig()
    cache = _Cache(cfg)
    return [fn(cfg, cache) for i, fn in enumerate(CRITERIA, start=1) if only is None or i in only]
