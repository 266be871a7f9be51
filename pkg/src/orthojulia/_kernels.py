"""Numba kernels for per-pixel polynomial iteration.

Rows are processed in parallel; every pixel depends only on its own center,
so the output does not depend on thread scheduling.
"""
import math

import warnings

from numba import njit, prange

# numba probes TBB first and warns when it is too old; another layer is used anyway
warnings.filterwarnings("ignore", message="The TBB threading layer")


@njit(cache=True, inline="always")
def _horner(c, z):
    acc = c[0]
    for i in range(1, c.shape[0]):
        acc = acc * z + c[i]
    return acc


@njit(cache=True)
def _orbit(c, z, radius, max_iter):
    """Iterate until ``|z| > radius``; return (escape index or 0, last modulus, last z).

    An orbit that returns exactly to an earlier value (Brent's cycle check)
    is periodic in floating point and is reported as non-escaping at once.
    """
    saved = z
    power = 1
    lam = 0
    for k in range(1, max_iter + 1):
        z = _horner(c, z)
        m = abs(z)
        if not (m <= radius):
            return k, m, z
        if z == saved:
            return 0, m, z
        lam += 1
        if lam == power:
            saved = z
            power *= 2
            lam = 0
    return 0, abs(z), z


@njit(cache=True)
def _green_from(c, z, j, bail, log_lead_term, d, extra):
    """Continue an escaped orbit to the bailout radius and return the Green's estimate.

    ``z`` is the j-th iterate.  The estimate is
    ``(log|P^j(z)| + log|lead|/(d-1)) / d^j``; if the next step would
    overflow, the prior iterate is used.
    """
    for _ in range(extra):
        if abs(z) > bail:
            break
        w = _horner(c, z)
        if not (abs(w) < 1e300):
            break
        z = w
        j += 1
    g = (math.log(abs(z)) + log_lead_term) / (float(d) ** j)
    return g if g > 0.0 else 0.0


@njit(parallel=True, cache=True)
def classify_grid(c, xs, ys, radius, max_iter, out_iter, out_mod):
    for r in prange(ys.shape[0]):
        for q in range(xs.shape[0]):
            k, m, _ = _orbit(c, complex(xs[q], ys[r]), radius, max_iter)
            out_iter[r, q] = k
            out_mod[r, q] = m


@njit(parallel=True, cache=True)
def classify_green_grid(c, xs, ys, radius, max_iter, bail, log_lead_term, d,
                        out_iter, out_mod, out_green):
    for r in prange(ys.shape[0]):
        for q in range(xs.shape[0]):
            k, m, z = _orbit(c, complex(xs[q], ys[r]), radius, max_iter)
            out_iter[r, q] = k
            out_mod[r, q] = m
            if k == 0:
                out_green[r, q] = 0.0
            else:
                out_green[r, q] = _green_from(c, z, k, bail, log_lead_term, d, 4096)
