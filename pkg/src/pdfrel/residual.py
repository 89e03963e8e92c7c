"""Residual lifetime ``X_t = [X - t | X > t]`` and the laws built on it.

* :class:`ResidualLife` is itself a :class:`~pdfrel.distributions.Distribution`,
  so every other module (entropy, orders, pdf-related laws) applies to it.
* ``K_t(y) = P(f_t(X_t) <= y)`` is evaluated by the case formulas for
  decreasing, increasing and symmetric unimodal bases, and by the generic
  pdf-related cdf of the residual otherwise.
* ``Gbar_t(y) = P(f(X) > y | X > t)`` and its density ``g_t`` follow the
  four-way case split on ``t`` versus the mode and on the endpoint densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import as_float, quad
from .distributions import Distribution, MonoKind, Piece, Support, mono_from_pieces
from .errors import (
    AtBranchBoundary,
    DegenerateLaw,
    IntegralDiverged,
    NotMonotone,
    NotUnimodal,
    TOutOfSupport,
    YOutOfRange,
)
from .inverses import im_plus, lower_inverse_clipped, upper_inverse_clipped
from .pdf_related import k_clipped


class ResidualLife(Distribution):
    """Law of ``X - t`` given ``X > t``; support ``(0, b - t)``."""

    family = "residual"

    def __init__(self, base, t):
        t = float(t)
        if not base.support.is_interior(t):
            raise TOutOfSupport(f"t={t} is not interior to the support {base.support}")
        surv = float(base.sf(t))
        if not surv > 0:
            raise TOutOfSupport(f"survival at t={t} is zero")
        self.base, self.t, self.survival_at_t = base, t, surv
        self.cdf_at_t = float(base.cdf(t))
        sub, self._piece_map = [], []
        for j, pc in enumerate(base.pieces):
            lo, hi = max(pc.lo, t), pc.hi
            if hi > lo:
                sub.append(Piece(lo - t, hi - t, pc.increasing))
                self._piece_map.append(j)
        mono = mono_from_pieces(sub) if base.pieces else base.mono
        super().__init__(Support(0.0, base.support.upper - t), mono, scale=base.scale)
        self.has_closed_quantile = base.has_closed_quantile

    def _pdf(self, x):
        return self.base._pdf(x + self.t) / self.survival_at_t

    def _dpdf(self, x):
        return self.base._dpdf(x + self.t) / self.survival_at_t

    def _cdf(self, x):
        return self.base.mass(self.t, x + self.t) / self.survival_at_t

    def _sf(self, x):
        return self.base.sf(x + self.t) / self.survival_at_t

    def _tail_point(self, q):
        """``F^-1(1 - q S(t))`` computed from whichever tail is accurate."""
        q = np.asarray(q, dtype=float)
        mass = q * self.survival_at_t
        left = np.clip(self.cdf_at_t + (1.0 - q) * self.survival_at_t, 1e-300, 1.0 - 1e-16)
        right = np.clip(mass, 1e-300, 1.0 - 1e-16)
        return np.where(mass > 0.5, self.base.quantile(left), self.base.isf(right))

    def _quantile(self, p):
        return self._tail_point(1.0 - p) - self.t

    def _isf(self, q):
        return self._tail_point(q) - self.t

    def _piece_inverse(self, y, index):
        j = self._piece_map[index]
        return self.base.piece_inverse(np.asarray(y) * self.survival_at_t, j, clip=True) - self.t

    def endpoint_density(self, which):
        if which == "lower":
            return float(self.base.pdf(self.t)) / self.survival_at_t
        return self.base.endpoint_density("upper") / self.survival_at_t

    def entropy_closed(self):
        if self.base.family in ("exponential", "shiftedexponential"):
            return self.base.entropy_closed()
        return None

    def varentropy_closed(self):
        if self.base.family in ("exponential", "shiftedexponential"):
            return 1.0
        return None

    def spec_string(self):
        return f"residual({self.base.spec_string()};t={self.t!r})"


def residual(d, t):
    return ResidualLife(d, t)


def residual_quantile(d, t, p):
    """``F_t^-1(p) = F^-1(1 - (1 - p) S(t)) - t``."""
    return ResidualLife(d, t).quantile(p)


def _interior_t(d, t):
    if not d.support.is_interior(t) or not d.sf(t) > 0:
        raise TOutOfSupport(f"t={t} is not interior to the support {d.support}")


def hazard_at(d, t):
    _interior_t(d, t)
    return float(d.pdf(t) / d.sf(t))


def cumulative_hazard_at(d, t):
    _interior_t(d, t)
    return float(-math.log(d.sf(t)))


def cumulative_hazard_by_quadrature(d, t):
    """``int_a^t hazard`` (independent check of ``-log S(t)``)."""
    _interior_t(d, t)
    lo = d.support.lower
    if math.isinf(lo):
        lo = float(d.quantile(1e-300)) if d.has_closed_quantile else float(d.quantile(1e-15))
    pts = [d.mono.mode] if d.mono.mode is not None else None
    val, _ = quad(lambda x: d.pdf(x) / d.sf(x), lo, t, points=pts, tol=1e-8)
    return val


def mean_residual_at(d, t):
    """``m(t) = int_t^b S(x) dx / S(t)``."""
    _interior_t(d, t)
    hi = d.support.upper
    try:
        val, _ = quad(d.sf, t, hi, tol=1e-8)
    except IntegralDiverged as exc:
        raise IntegralDiverged(f"mean residual life of {d!r} does not converge at t={t}") from exc
    if math.isinf(hi):
        # quad on a slowly decaying tail can "converge" to garbage; check the tail
        far = float(d.isf(1e-12))
        tail = d.sf(far) * far
        if tail > 1e-6:
            raise IntegralDiverged(f"mean residual life of {d!r} is infinite")
    return val / float(d.sf(t))


# ---------------------------------------------------------------------------
# K_t: law of f_t(X_t)
# ---------------------------------------------------------------------------


def kt_case(d, t):
    """Which closed form applies to ``K_t`` for base ``d`` at age ``t``.

    ``"a"``: density decreasing after ``t``; ``"b"``: increasing;
    ``"c"``: symmetric unimodal with ``t <= m``; ``"generic"`` otherwise.
    """
    kind = d.mono.kind
    if kind is MonoKind.CONSTANT:
        raise DegenerateLaw(f"{d!r} has a flat density")
    if kind is MonoKind.STRICTLY_DECREASING:
        return "a"
    if kind is MonoKind.STRICTLY_INCREASING:
        return "b"
    if kind is MonoKind.UNIMODAL:
        if t >= d.mono.mode:
            return "a"
        if d.mono.symmetric:
            return "c"
    return "generic"


def kt_clipped(d, t, y, case=None):
    """``K_t(y)`` with limits 0/1 outside Im+(f_t)."""
    _interior_t(d, t)
    case = case or kt_case(d, t)
    y = np.asarray(y, dtype=float)
    s = float(d.sf(t))
    ys = y * s
    with np.errstate(all="ignore"):
        if case == "a":
            inv = upper_inverse_clipped(d, ys) if d.mono.is_unimodal else lower_inverse_clipped(d, ys)
            out = d.sf(np.maximum(inv, t)) / s
        elif case == "b":
            out = 1.0 - d.sf(np.maximum(lower_inverse_clipped(d, ys), t)) / s
        elif case == "c":
            lo = lower_inverse_clipped(d, ys)
            ft = float(d.pdf(t))
            f_lo = d.cdf(lo)
            out = np.where(ys < ft, f_lo / s, (2.0 * f_lo - d.cdf(t)) / s)
        else:
            out = k_clipped(ResidualLife(d, t), y)
    out = np.where(y <= 0, 0.0, out)
    return as_float(np.clip(out, 0.0, 1.0))


def residual_pdf_related_cdf(d, t, y):
    """``K_t(y) = P(f_t(X_t) <= y)`` for ``y`` in the closure of Im+(f_t)."""
    r = ResidualLife(d, t)
    rng = im_plus(r)
    if np.any(~rng.contains(y, closure=True)):
        raise YOutOfRange(f"y outside the closure of Im+(f_t) = [{rng.lo}, {rng.hi}]")
    return kt_clipped(d, t, y)


def residual_pdf_related_inverse(d, t, p):
    """``y = f(F^-1(1 - (1 - p) S(t))) / S(t)``.

    Solves ``K_t(y) = 1 - p`` for decreasing densities and ``K_t(y) = p``
    for increasing ones.
    """
    if not d.mono.is_monotone:
        raise NotMonotone(f"{d!r} does not have a strictly monotone density")
    r = ResidualLife(d, t)
    x = r._tail_point(1.0 - np.asarray(p, dtype=float))
    return as_float(d.pdf(x) / r.survival_at_t)


def kt_curve(d, t, n_points=999):
    """``(y, K_t(y))`` over the closure of Im+(f_t), with ``y = hazard(t)`` as a node."""
    r = ResidualLife(d, t)
    rng = im_plus(r)
    hi = rng.hi
    if not np.isfinite(hi):
        from .pdf_related import PdfRelatedLaw

        hi = float(PdfRelatedLaw(r).quantile(1 - 1e-6))
    y = np.linspace(rng.lo, hi, n_points)
    lam = hazard_at(d, t)
    if rng.lo < lam < hi:
        y[np.argmin(np.abs(y - lam))] = lam
    return y, kt_clipped(d, t, y)


# ---------------------------------------------------------------------------
# G_t: law of f(t + X_t)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GtBranch:
    """On ``y_lo < y <= y_hi``, ``Gbar_t(y) = P(lower < X < upper) / S(t)``.

    ``lower`` is ``"t"`` or ``"l"`` (the lower inverse ``l_y``); ``upper`` is
    ``"u"`` (the upper inverse ``u_y``) or ``"b"`` (the support end).
    """

    y_lo: float
    y_hi: float
    lower: str
    upper: str


@dataclass(frozen=True)
class GtLayout:
    case_tag: str
    branches: tuple
    survival_at_t: float


@dataclass(frozen=True)
class ShiftedPdfLawPoint:
    y: float
    survival: float
    case_tag: str


def gt_layout(d, t, tol_eq=1e-8):
    """Case analysis for ``Gbar_t``: compare ``t`` with the mode and the
    endpoint densities ``f(a)``, ``f(b)`` with ``f(t)``."""
    if d.mono.kind is not MonoKind.UNIMODAL:
        raise NotUnimodal(f"{d!r} is not unimodal")
    _interior_t(d, t)
    m = d.mono.mode
    fa = d.endpoint_density("lower")
    fb = d.endpoint_density("upper")
    ft = float(d.pdf(t))
    fm = d.mode_density
    s = float(d.sf(t))
    tie = tol_eq * max(fm, 1.0)
    if t >= m:
        return GtLayout("d", (GtBranch(fb, ft, "t", "u"),), s)
    if fb <= fa + tie:
        return GtLayout("c", (GtBranch(fb, ft, "t", "u"), GtBranch(ft, fm, "l", "u")), s)
    if fb > ft + tie:
        return GtLayout(
            "b",
            (GtBranch(fa, ft, "t", "b"), GtBranch(ft, fb, "l", "b"), GtBranch(fb, fm, "l", "u")),
            s,
        )
    # f(a) < f(b) <= f(t); an exact tie f(b) = f(t) leaves the middle branch empty
    return GtLayout(
        "a",
        (GtBranch(fa, fb, "t", "b"), GtBranch(fb, ft, "t", "u"), GtBranch(ft, fm, "l", "u")),
        s,
    )


def _branch_index(layout, y):
    edges = np.array([br.y_hi for br in layout.branches])
    return np.searchsorted(edges, y, side="left")


def _ends(d, t, y, br):
    lower = np.full_like(y, t) if br.lower == "t" else lower_inverse_clipped(d, y)
    upper = np.full_like(y, d.support.upper) if br.upper == "b" else upper_inverse_clipped(d, y)
    return lower, upper


def gbar_clipped(d, t, y, layout=None):
    """Vectorised ``Gbar_t(y)`` with limits 1 below and 0 above the branches."""
    layout = layout or gt_layout(d, t)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    idx = _branch_index(layout, y)
    out = np.zeros_like(y)
    out[y <= layout.branches[0].y_lo] = 1.0
    for i, br in enumerate(layout.branches):
        sel = (idx == i) & (y > br.y_lo)
        if not np.any(sel):
            continue
        lower, upper = _ends(d, t, y[sel], br)
        out[sel] = d.mass(lower, upper) / layout.survival_at_t
    return as_float(np.clip(out, 0.0, 1.0).reshape(np.shape(y)) if y.size > 1 else np.clip(out, 0.0, 1.0)[0])


def shifted_pdf_related_point(d, t, y):
    layout = gt_layout(d, t)
    rng = im_plus(d)
    if not rng.contains(y, closure=True):
        raise YOutOfRange(f"y={y} outside the closure of Im+(f)")
    return ShiftedPdfLawPoint(float(y), float(gbar_clipped(d, t, y, layout)), layout.case_tag)


def shifted_pdf_related_survival(d, t, y):
    """``Gbar_t(y) = P(f(t + X_t) > y) = P(f(X) > y | X > t)``."""
    return shifted_pdf_related_point(d, t, y).survival


def shifted_pdf_related_pdf(d, t, y, strict=False):
    """``g_t(y) = -d Gbar_t / dy`` from ``d F(u_y)/dy = y / f'(u_y)``.

    At a boundary between branches the left branch is used, or
    :class:`AtBranchBoundary` is raised when ``strict``.
    """
    layout = gt_layout(d, t)
    y = float(y)
    rng = im_plus(d)
    if not rng.contains(y, closure=True):
        raise YOutOfRange(f"y={y} outside the closure of Im+(f)")
    inner = [br.y_hi for br in layout.branches[:-1]] + [layout.branches[0].y_lo]
    if strict and any(abs(y - e) <= 1e-12 * max(abs(e), 1.0) for e in inner):
        raise AtBranchBoundary(f"y={y} sits on a branch boundary")
    i = int(_branch_index(layout, np.asarray([y]))[0])
    if i >= len(layout.branches) or y <= layout.branches[0].y_lo:
        return 0.0
    br = layout.branches[i]
    s = layout.survival_at_t
    dens = 0.0
    if br.lower == "l" and br.upper == "u" and d.mono.symmetric:
        return float(2.0 * y / (s * d.dpdf(lower_inverse_clipped(d, y))))
    if br.upper == "u":
        dens -= y / (s * float(d.dpdf(upper_inverse_clipped(d, y))))
    if br.lower == "l":
        dens += y / (s * float(d.dpdf(lower_inverse_clipped(d, y))))
    return dens
