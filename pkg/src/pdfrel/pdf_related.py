"""Law of ``f(X)``: a random variable pushed through its own density.

The distribution function ``K(y) = P(f(X) <= y)`` is evaluated by the case
formulas keyed on the shape of ``f``:

* decreasing ``f``:  ``K(y) = 1 - F(l_y)``
* increasing ``f``:  ``K(y) = F(l_y)``
* unimodal ``f``:    ``K(y) = F(l_y) + 1 - F(u_y)`` (``2 F(l_y)`` if symmetric)
* V-shaped ``f``:    ``K(y) = F(u_y) - F(l_y)``
* flat ``f``:        a point mass at ``1 / (b - a)``.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from ._numerics import as_float, bisect_monotone
from .distributions import GridConfig, MonoKind, Support
from .errors import (
    DegenerateLaw,
    NotMonotone,
    NotSymmetricUnimodal,
    PreconditionViolated,
    YOutOfRange,
)
from .inverses import im_plus, lower_inverse_clipped, upper_inverse_clipped

DEFAULT_LAW_GRID = 2048


class LawKind(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    GRIDDED = "Gridded"
    ATOM = "Atom"


def k_clipped(d, y):
    """``K(y)`` for any real ``y``, using the limits 0 and 1 outside the range."""
    y = np.asarray(y, dtype=float)
    kind = d.mono.kind
    if kind is MonoKind.CONSTANT:
        h = 1.0 / d.support.length
        return as_float(np.where(y >= h, 1.0, 0.0))
    with np.errstate(all="ignore"):
        if kind is MonoKind.STRICTLY_DECREASING:
            out = d.sf(lower_inverse_clipped(d, y))
        elif kind is MonoKind.STRICTLY_INCREASING:
            out = d.cdf(lower_inverse_clipped(d, y))
        elif kind is MonoKind.UNIMODAL:
            lo = lower_inverse_clipped(d, y)
            if d.mono.symmetric:
                out = 2.0 * d.cdf(lo)
            else:
                out = d.cdf(lo) + d.sf(upper_inverse_clipped(d, y))
        else:
            left = d.piece_inverse(y, 0, clip=True)
            right = d.piece_inverse(y, 1, clip=True)
            out = d.mass(left, right)
    out = np.where(y <= 0, 0.0, out)
    return as_float(np.clip(out, 0.0, 1.0))


def pdf_related_cdf(d, y):
    """Distribution function of ``f(X)`` at ``y`` in the closure of Im+(f)."""
    if d.flat:
        raise DegenerateLaw(f"{d!r} has a flat density; f(X) is a point mass")
    rng = im_plus(d)
    if np.any(~rng.contains(y, closure=True)):
        raise YOutOfRange(f"y outside the closure of Im+(f) = [{rng.lo}, {rng.hi}]")
    return k_clipped(d, y)


def pdf_related_quantiles(d, u):
    """Lower and upper quantiles ``(f(F^-1(u/2)), f(F^-1(1 - u/2)))`` of ``f(X)``.

    Only for symmetric unimodal densities, where ``K(y) = 2 F(l_y)``.  By
    symmetry the two values coincide.
    """
    if not d.mono.is_symmetric_unimodal:
        raise NotSymmetricUnimodal(f"{d!r} is not symmetric unimodal")
    u = np.asarray(u, dtype=float)
    return d.pdf(d.quantile(u / 2.0)), d.pdf(d.isf(u / 2.0))


def monotone_pdf_related_inverse(d, p):
    """``y = f(F^-1(p))``, which solves ``K(y) = 1 - p`` (decreasing ``f``)
    or ``K(y) = p`` (increasing ``f``)."""
    if not d.mono.is_monotone:
        raise NotMonotone(f"{d!r} does not have a strictly monotone density")
    return d.pdf(d.quantile(p))


@dataclass(frozen=True)
class UniformityReport:
    is_uniform: bool
    max_deviation: float
    argmax_y: float
    n_points: int

    def to_dict(self):
        return {
            "is_uniform": self.is_uniform,
            "max_deviation": self.max_deviation,
            "argmax_y": self.argmax_y,
            "n_points": self.n_points,
        }


def check_uniform_characterization(d, grid=None):
    """Is ``f(X)`` uniform on (0, 1)?  Sup of ``|K(y) - y|`` over a y-grid."""
    grid = grid or GridConfig()
    y = grid.probabilities()
    dev = np.abs(k_clipped(d, y) - y)
    i = int(np.argmax(dev))
    return UniformityReport(bool(dev[i] <= grid.tol_eq), float(dev[i]), float(y[i]), int(y.size))


class PdfRelatedLaw:
    """The law of ``f(X)`` with a cached monotone grid for inversion.

    Grid nodes are ``f(F^-1(p))`` for ``p`` uniform in (0, 1), so they are
    spread according to the law itself.  Quantiles take their bracket from
    the grid and are refined by bisection on the exact ``K``.
    """

    def __init__(self, source, grid_size=DEFAULT_LAW_GRID):
        self.source = source
        self.y_range = im_plus(source)
        if source.flat:
            self.kind = LawKind.ATOM
            self.atom_location = self.y_range.atom
            self.cdf_grid = None
            return
        self.atom_location = None
        probe = source._piece_inverse(np.asarray([self.y_range.hi * 0.5]), 0)
        self.kind = LawKind.CLOSED_FORM if probe is not None else LawKind.GRIDDED
        p = (np.arange(grid_size) + 0.5) / grid_size
        ys = np.unique(source.pdf(source.quantile(p)))
        ys = ys[(ys > 0) & np.isfinite(ys)]
        ks = np.maximum.accumulate(k_clipped(source, ys))
        self._ys = ys
        self._ks = ks
        self.cdf_grid = np.column_stack([ys, ks])

    @property
    def support(self):
        hi = self.y_range.hi
        return Support(0.0, hi if hi > 0 else math.inf)

    def cdf(self, y):
        return k_clipped(self.source, y)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any(~((p > 0) & (p < 1))):
            raise YOutOfRange("probability must lie in (0, 1)")
        if self.kind is LawKind.ATOM:
            return as_float(np.full_like(p, self.atom_location))
        ys, ks = self._ys, self._ks
        j = np.searchsorted(ks, p, side="left")
        lo = np.where(j > 0, ys[np.maximum(j - 1, 0)], 0.0)
        hi = ys[np.minimum(j, ys.size - 1)]
        beyond = j >= ys.size
        if np.any(beyond):
            top = self.y_range.hi
            if not np.isfinite(top):
                top = ys[-1]
                pmax = float(np.max(p))
                while self.cdf(top) < pmax:
                    top *= 2.0
            hi = np.where(beyond, top, hi)
        return as_float(bisect_monotone(self.cdf, p, lo, hi, increasing=True))

    def density_at_quantile(self, p):
        raise PreconditionViolated(
            "the density of f(X) is not available", precondition="density"
        )

    def spec_string(self):
        return f"K[{self.source.spec_string()}]"

    def __repr__(self):
        return f"<PdfRelatedLaw of {self.source!r} ({self.kind.value})>"


def format_csv(header, columns):
    """CSV text with 17 significant digits, '.' decimals and LF line endings."""
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join(format(float(v), ".17g") for v in row) + "\n")
    return buf.getvalue()


def k_curve(d, n_points=None):
    """``(y, K(y))`` on a uniform grid over the closure of Im+(f)."""
    n = n_points or GridConfig().n_points
    rng = im_plus(d)
    if rng.atom is not None:
        raise DegenerateLaw("no continuous curve for a point mass")
    hi = rng.hi
    if not np.isfinite(hi):
        hi = float(PdfRelatedLaw(d).quantile(1 - 1e-6))
    y = np.linspace(rng.lo, hi, n)
    return y, k_clipped(d, y)
