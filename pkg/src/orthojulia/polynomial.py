"""Complex polynomials in the monomial basis (lowest degree first)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidPolynomialError, NumericError, PreconditionError

ROOT_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Polynomial:
    """``coeffs[k]`` multiplies ``z**k``; the leading coefficient is nonzero."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            raise InvalidPolynomialError("polynomial needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise InvalidPolynomialError("polynomial coefficients must be finite")
        if c[-1] == 0:
            raise InvalidPolynomialError("leading coefficient must be nonzero")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_highest_first(cls, coeffs) -> "Polynomial":
        return cls(np.asarray(coeffs, dtype=np.complex128)[::-1])

    @classmethod
    def trimmed(cls, coeffs, tol: float = 0.0) -> "Polynomial":
        """Build from coefficients, dropping leading entries with modulus <= tol."""
        c = np.asarray(coeffs, dtype=np.complex128).ravel()
        nz = np.nonzero(np.abs(c) > tol)[0]
        if nz.size == 0:
            raise InvalidPolynomialError("zero polynomial")
        return cls(c[: nz[-1] + 1])

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        return f"Polynomial(degree={self.degree}, coeffs={self.coeffs.tolist()})"

    def monic(self) -> "Polynomial":
        return Polynomial(self.coeffs / self.coeffs[-1])

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial(self.coeffs * factor)

    def __add__(self, other):
        if isinstance(other, Polynomial):
            other = other.coeffs
        other = np.atleast_1d(np.asarray(other, dtype=np.complex128))
        n = max(self.coeffs.size, other.size)
        out = np.zeros(n, dtype=np.complex128)
        out[: self.coeffs.size] += self.coeffs
        out[: other.size] += other
        return Polynomial.trimmed(out)

    def __sub__(self, other):
        if isinstance(other, Polynomial):
            other = other.coeffs
        return self + (-np.atleast_1d(np.asarray(other, dtype=np.complex128)))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * other)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """Return ``self(inner(z))`` by Horner's scheme on coefficient arrays."""
        out = np.array([self.coeffs[-1]])
        for c in self.coeffs[-2::-1]:
            out = np.convolve(out, inner.coeffs)
            out[0] += c
        return Polynomial(out)

    def iterate(self, k: int) -> "Polynomial":
        """The k-fold composition ``P∘...∘P`` (k >= 1)."""
        out = self
        for _ in range(k - 1):
            out = out.compose(self)
        return out

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            raise InvalidPolynomialError("derivative of a constant is the zero polynomial")
        return Polynomial(self.coeffs[1:] * np.arange(1, self.coeffs.size))


def evaluate(p: Polynomial, z):
    """Horner evaluation; accepts scalars or arrays."""
    c = p.coeffs
    if np.isscalar(z):
        acc = complex(c[-1])
        z = complex(z)
        for ck in c[-2::-1]:
            acc = acc * z + ck
        return acc
    z = np.asarray(z, dtype=np.complex128)
    acc = np.full(z.shape, c[-1], dtype=np.complex128)
    for ck in c[-2::-1]:
        acc *= z
        acc += ck
    return acc


def coefficient_distance(p: Polynomial, q: Polynomial) -> float:
    """Sup-norm distance between coefficient vectors (zero padded)."""
    n = max(p.coeffs.size, q.coeffs.size)
    a = np.zeros(n, dtype=np.complex128)
    b = np.zeros(n, dtype=np.complex128)
    a[: p.coeffs.size] = p.coeffs
    b[: q.coeffs.size] = q.coeffs
    return float(np.max(np.abs(a - b)))


def root_residual(p: Polynomial, roots) -> np.ndarray:
    roots = np.asarray(roots, dtype=np.complex128)
    scale = 1.0 + abs(p.leading) * np.abs(roots) ** p.degree
    return np.abs(evaluate(p, roots)) / scale


def zeros_of(p: Polynomial) -> np.ndarray:
    """All roots of ``p`` with multiplicity, from companion-matrix eigenvalues.

    LAPACK's ``geev`` balances the companion matrix before the QR iteration.
    Roots whose scaled residual exceeds 1e-8 get a few Newton steps.
    """
    if p.degree < 1:
        raise PreconditionError("zeros_of needs degree >= 1")
    c = p.coeffs / p.coeffs[-1]
    d = p.degree
    if d == 1:
        roots = np.array([-c[0]])
    else:
        comp = np.zeros((d, d), dtype=np.complex128)
        comp[1:, :-1] = np.eye(d - 1)
        comp[:, -1] = -c[:-1]
        try:
            roots = np.linalg.eigvals(comp)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"eigenvalue iteration failed: {exc}") from exc
    res = root_residual(p, roots)
    if np.any(res >= ROOT_RESIDUAL_TOL):
        dp = p.derivative()
        for _ in range(5):
            bad = res >= ROOT_RESIDUAL_TOL
            if not bad.any():
                break
            r = roots[bad]
            step = evaluate(p, r) / evaluate(dp, r)
            roots[bad] = np.where(np.isfinite(step), r - step, r)
            res = root_residual(p, roots)
        if np.any(res >= ROOT_RESIDUAL_TOL):
            raise NumericError(f"root residual {res.max():.3g} exceeds {ROOT_RESIDUAL_TOL}")
    return roots


def escape_radius(p: Polynomial) -> float:
    """Radius R with ``|p(z)| >= 2|z|`` whenever ``|z| > R``.

    From ``|p(z)| >= |c_d||z|^d - sum_{j<d}|c_j||z|^{d-1}`` for ``|z| >= 1``.
    """
    if p.degree < 2:
        raise PreconditionError("escape radius needs degree >= 2")
    c = np.abs(p.coeffs)
    d = p.degree
    lead = c[-1]
    return float(max(1.0, 2.0 * c[:-1].sum() / lead, (4.0 / lead) ** (1.0 / (d - 1))))
