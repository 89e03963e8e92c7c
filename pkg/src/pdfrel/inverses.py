"""Range of positive density values and the lower/upper inverses of a density."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numerics import as_float
from .distributions import MonoKind
from .errors import NotUnimodal, YNotAttained


@dataclass(frozen=True)
class ImPlusRange:
    """The set of strictly positive values attained by a density.

    ``atom`` is set (and ``lo == hi == atom``) for flat densities, whose
    pdf-related law is a point mass.
    """

    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = False
    atom: float | None = None

    def contains(self, y, closure=False):
        y = np.asarray(y, dtype=float)
        if self.atom is not None:
            return np.isclose(y, self.atom, rtol=1e-12, atol=0.0)
        if closure:
            return (y >= self.lo) & (y <= self.hi)
        lo_ok = y > self.lo if self.lo_open else y >= self.lo
        hi_ok = y < self.hi if self.hi_open else y <= self.hi
        return lo_ok & hi_ok & (y > 0)

    def to_dict(self):
        return {
            "lo": self.lo,
            "hi": self.hi,
            "lo_open": self.lo_open,
            "hi_open": self.hi_open,
            "atom": self.atom,
        }


def _attained(d, x):
    return bool(d.support.contains(x)) and np.isfinite(x)


def im_plus(d):
    """Interval of density values ``y > 0`` attained on the support."""
    if d.mono.kind is MonoKind.CONSTANT:
        h = float(d._pdf(np.asarray(d.median)))
        return ImPlusRange(h, h, False, False, atom=h)
    lo, hi = np.inf, -np.inf
    lo_open, hi_open = True, True
    for i, pc in enumerate(d.pieces):
        ymin, ymax = d.piece_range(i)
        x_min, x_max = (pc.lo, pc.hi) if pc.increasing else (pc.hi, pc.lo)
        min_attained = ymin > 0 and _attained(d, x_min)
        max_attained = _attained(d, x_max)
        if ymin < lo or (ymin == lo and min_attained):
            lo, lo_open = ymin, not min_attained
        if ymax > hi or (ymax == hi and max_attained):
            hi, hi_open = ymax, not max_attained
    return ImPlusRange(float(lo), float(hi), lo_open, hi_open)


def _check_y(d, y):
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise YNotAttained("density values must be > 0")
    if d.mono.kind is MonoKind.CONSTANT:
        raise YNotAttained("a flat density has no inverse")
    return y


def lower_inverse(d, y):
    """``l_y``: the solution of ``f(x) = y`` on the increasing branch.

    For strictly monotone densities this is the ordinary inverse on the
    whole support; for the V-shaped (antimodal) case it is the left branch.
    """
    y = _check_y(d, y)
    return d.piece_inverse(y, 0)


def upper_inverse(d, y):
    """``u_y``: the solution of ``f(x) = y`` on the decreasing branch ``x >= m``."""
    if d.mono.kind is not MonoKind.UNIMODAL:
        raise NotUnimodal(f"{d!r} has no upper branch")
    y = _check_y(d, y)
    if d.mono.symmetric:
        return as_float(2.0 * d.mono.mode - d.piece_inverse(y, 0))
    return d.piece_inverse(y, 1)


def lower_inverse_clipped(d, y):
    """Lower inverse with out-of-range values pinned to the branch ends."""
    return d.piece_inverse(y, 0, clip=True)


def upper_inverse_clipped(d, y):
    if d.mono.symmetric and d.mono.kind is MonoKind.UNIMODAL:
        return as_float(2.0 * d.mono.mode - d.piece_inverse(y, 0, clip=True))
    return d.piece_inverse(y, len(d.pieces) - 1, clip=True)
