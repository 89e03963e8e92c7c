"""Decreasing rearrangement of a density.

``f*(x) = sup{c : m(c) > x}`` where ``m(c)`` is the Lebesgue measure of
``{f > c}``.  The rearranged variable ``X*`` with density ``f*`` lives on
``(0, L)``, ``L`` the length of the support, and satisfies
``P(X* <= t) = P(f(X) > f*(t))``.
"""

from __future__ import annotations

import math

import numpy as np

from ._numerics import as_float, bisect_monotone, quad
from .distributions import DECREASING, Distribution, MonoKind, Support
from .errors import FlatZone
from .pdf_related import k_clipped


def _sup_density(d):
    if d.mono.kind is MonoKind.UNIMODAL:
        return d.mode_density
    if d.flat:
        return float(d._pdf(np.asarray(d.median)))
    return max(d.piece_range(i)[1] for i in range(len(d.pieces)))


def _inf_density(d):
    if d.flat:
        return _sup_density(d)
    return min(d.piece_range(i)[0] for i in range(len(d.pieces)))


def level_measure(d, c):
    """Lebesgue measure of ``{x : f(x) > c}``."""
    c = np.asarray(c, dtype=float)
    length = d.support.length
    if d.flat:
        return as_float(np.where(c < _sup_density(d), length, 0.0))
    if d.mono.is_symmetric_unimodal:
        m = d.mono.mode
        half = m - d.piece_inverse(np.maximum(c, 0.0), 0, clip=True)
        out = 2.0 * half
    else:
        out = np.zeros_like(c)
        for i, pc in enumerate(d.pieces):
            with np.errstate(invalid="ignore"):
                x = d.piece_inverse(np.maximum(c, 0.0), i, clip=True)
                out = out + (pc.hi - x if pc.increasing else x - pc.lo)
    out = np.where(c <= 0, length, out)
    return as_float(np.clip(out, 0.0, length))


def _level_measure_slope(d, c):
    """``dm/dc``, negative wherever ``c`` is an interior density value."""
    c = np.asarray(c, dtype=float)
    slope = np.zeros_like(c)
    for i, pc in enumerate(d.pieces):
        x = d.piece_inverse(c, i, clip=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = d.dpdf(x)
            term = np.where(g != 0, (-1.0 if pc.increasing else 1.0) / g, 0.0)
        slope = slope + term
    return slope


def decreasing_rearrangement(d, x):
    """``f*(x)`` for ``x > 0`` (zero beyond the support length)."""
    return RearrangedLaw(d).fstar(x)


class RearrangedLaw(Distribution):
    """Law of ``X*``, with density ``f*`` on ``(0, L)``."""

    family = "rearranged"

    def __init__(self, source):
        self.source = source
        self.support_len = source.support.length
        kind = source.mono.kind
        if kind is MonoKind.STRICTLY_DECREASING:
            self.route = "decreasing"
        elif kind is MonoKind.STRICTLY_INCREASING:
            self.route = "increasing"
        elif source.mono.is_symmetric_unimodal:
            self.route = "symmetric"
        elif source.flat:
            self.route = "flat"
        else:
            self.route = "level-set"
        super().__init__(Support(0.0, self.support_len), DECREASING, scale=source.scale)
        self.has_closed_quantile = self.route in ("decreasing", "increasing", "symmetric")

    # ---- the rearranged density ----------------------------------------
    def fstar(self, x):
        x = np.asarray(x, dtype=float)
        s = self.source
        inside = x < self.support_len
        xc = np.clip(x, 0.0, self.support_len)
        with np.errstate(all="ignore"):
            if self.route == "decreasing":
                val = s._pdf(s.support.lower + xc)
            elif self.route == "increasing":
                val = s._pdf(s.support.upper - xc)
            elif self.route == "symmetric":
                val = s._pdf(s.mono.mode - 0.5 * xc)
            elif self.route == "flat":
                val = np.full_like(xc, _sup_density(s))
            else:
                top = _sup_density(s)
                val = bisect_monotone(
                    lambda c: level_measure(s, c), xc, np.zeros_like(xc), np.full_like(xc, top),
                    increasing=False,
                )
        return as_float(np.where(inside, val, 0.0))

    def _pdf(self, x):
        return self.fstar(x)

    def _dpdf(self, x):
        s = self.source
        if self.route == "decreasing":
            return s._dpdf(s.support.lower + x)
        if self.route == "increasing":
            return -s._dpdf(s.support.upper - x)
        if self.route == "symmetric":
            return -0.5 * s._dpdf(s.mono.mode - 0.5 * x)
        if self.route == "flat":
            return np.zeros_like(np.asarray(x, dtype=float))
        with np.errstate(divide="ignore"):
            return 1.0 / _level_measure_slope(s, self.fstar(x))

    # cdf through the pdf-related law: P(X* <= t) = 1 - K(f*(t))
    def _sf(self, x):
        return k_clipped(self.source, self.fstar(x))

    def _cdf(self, x):
        return 1.0 - self._sf(x)

    def _quantile(self, p):
        s = self.source
        if self.route == "decreasing":
            return s.quantile(p) - s.support.lower
        if self.route == "increasing":
            return s.support.upper - s.isf(p)
        if self.route == "symmetric":
            return 2.0 * (s.isf(0.5 * (1.0 - p)) - s.mono.mode)
        return self._bisect_quantile(p)

    def _isf(self, q):
        s = self.source
        if self.route == "decreasing":
            return s.isf(q) - s.support.lower
        if self.route == "increasing":
            return s.support.upper - s.quantile(q)
        if self.route == "symmetric":
            return 2.0 * (s.isf(0.5 * q) - s.mono.mode)
        return self._bisect_quantile(1.0 - q)

    def _piece_inverse(self, y, index):
        return level_measure(self.source, y)

    def endpoint_density(self, which):
        if which == "lower":
            return _sup_density(self.source)
        if math.isinf(self.support_len):
            return 0.0
        return _inf_density(self.source)

    def entropy_closed(self):
        return self.source.entropy_closed()

    def varentropy_closed(self):
        return self.source.varentropy_closed()

    def spec_string(self):
        return f"rearranged({self.source.spec_string()})"


def rearranged_cdf(d, t):
    """``F_{X*}(t) = 1 - K(f*(t))``."""
    return RearrangedLaw(d).cdf(t)


def rearranged_cdf_by_quadrature(d, t):
    """``F_{X*}(t) = int_0^t f*``, the independent route."""
    law = RearrangedLaw(d)
    t = min(float(t), law.support_len)
    if t <= 0:
        return 0.0
    val, _ = quad(law.fstar, 0.0, t, tol=1e-9)
    return min(val, 1.0)


def pdf_related_quantile_via_rearrangement(d, p):
    """Quantile of ``f(X)`` as ``f*(F_{X*}^{-1}(1 - p))``."""
    if d.flat:
        raise FlatZone(f"{d!r} has a flat density; f* has a plateau")
    law = RearrangedLaw(d)
    return law.fstar(law.isf(p))
