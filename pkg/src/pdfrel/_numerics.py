"""Small numerical kernels shared by every module.

Vectorised bisection is used instead of ``scipy.optimize.brentq`` because the
Monte Carlo checks invert monotone functions at 10**6 points at once.
"""

import warnings

import numpy as np
from scipy import integrate

from .errors import IntegralDiverged

# Enough halvings to walk the full float64 exponent range.
_MAX_BISECT = 2200


def as_float(x):
    """Return a Python float for 0-d input, otherwise the array unchanged."""
    arr = np.asarray(x, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def bisect_monotone(func, target, lo, hi, increasing=True):
    """Solve ``func(x) == target`` elementwise on finite brackets ``[lo, hi]``.

    ``func`` must be monotone on every bracket and accept arrays.  Iterates
    until the midpoint coincides with a bracket end in floating point, so the
    result is accurate to one ulp of ``x`` whenever ``func`` is.
    """
    target = np.asarray(target, dtype=float)
    lo, hi, target = np.broadcast_arrays(
        np.asarray(lo, dtype=float), np.asarray(hi, dtype=float), target
    )
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(_MAX_BISECT):
        mid = 0.5 * lo + 0.5 * hi
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        val = func(mid)
        go_right = val < target if increasing else val > target
        lo = np.where(active & go_right, mid, lo)
        hi = np.where(active & ~go_right, mid, hi)
    return 0.5 * lo + 0.5 * hi


def expand_until(func, anchor, step, direction, done):
    """Step away from ``anchor`` with doubling stride until ``done(func(x))``.

    Returns a finite point (or +-inf when the stride overflows, which is a
    valid bracket end for densities that vanish at infinity).
    """
    stride = float(step)
    x = anchor + direction * stride
    for _ in range(1100):
        if np.all(done(func(x))):
            return x
        stride *= 2.0
        x = anchor + direction * stride
        if not np.isfinite(x):
            return x
    return x


def quad(func, a, b, points=None, epsabs=1e-13, epsrel=1e-12, limit=400, tol=1e-7):
    """Adaptive Gauss-Kronrod quadrature returning ``(value, abserr)``.

    Raises :class:`IntegralDiverged` when the estimate is not finite or its
    error estimate exceeds ``tol``.
    """
    kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    if points is not None and np.isfinite(a) and np.isfinite(b):
        pts = [p for p in points if a < p < b]
        if pts:
            kwargs["points"] = pts
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with np.errstate(all="ignore"):
            out = integrate.quad(func, a, b, **kwargs)
    value, abserr = out[0], out[1]
    if not np.isfinite(value) or not np.isfinite(abserr) or abserr > tol:
        raise IntegralDiverged(
            f"quadrature on ({a}, {b}) failed: value={value}, abserr={abserr}"
        )
    return value, abserr


def quad_pieces(func, edges, **kwargs):
    """Integrate over consecutive intervals ``edges[i]..edges[i+1]`` and sum."""
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            v, e = quad(func, lo, hi, **kwargs)
            total += v
            err += e
    return total, err
