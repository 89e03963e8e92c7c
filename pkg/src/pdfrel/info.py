"""Differential entropy, varentropy and their residual versions (nats).

The information content is ``IC(X) = -log f(X)``; ``H`` is its mean and
``V`` its variance.  Both are integrated in probability space,
``H = int_0^1 -log f(F^-1(p)) dp``, which turns infinite supports and heavy
tails into a unit interval.  The upper half uses ``isf`` so that tail
quantiles keep full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import as_float, quad
from .distributions import MonoKind
from .errors import BadUVOrder, POutOfRange, ParamOutOfRange
from .pdf_related import k_clipped
from .residual import ResidualLife, _interior_t

ENTROPY_TOL = 1e-9
VARENTROPY_TOL = 1e-8
RESIDUAL_FORMS = ("direct", "lambda_form", "hazard_form")


@dataclass(frozen=True)
class InfoReport:
    entropy: float
    varentropy: float
    method: str
    est_abs_error: float

    def to_dict(self):
        return {
            "entropy": self.entropy,
            "varentropy": self.varentropy,
            "method": self.method,
            "est_abs_error": self.est_abs_error,
        }


def _log_density_at_quantile(d, p, upper):
    x = d.isf(p) if upper else d.quantile(p)
    with np.errstate(divide="ignore"):
        return float(np.log(d.pdf(x)))


def _prob_space_integral(d, g, tol):
    """``int_0^1 g(log f(F^-1(p))) dp`` split at the median."""
    left, e1 = quad(lambda p: g(_log_density_at_quantile(d, p, False)), 0.0, 0.5, tol=tol)
    right, e2 = quad(lambda q: g(_log_density_at_quantile(d, q, True)), 0.0, 0.5, tol=tol)
    return left + right, e1 + e2


def _quadrature_moments(d):
    if d.flat:
        h = -math.log(float(d.pdf(d.median)))
        return h, 0.0, 0.0
    h, eh = _prob_space_integral(d, lambda lf: -lf, ENTROPY_TOL)
    v, ev = _prob_space_integral(d, lambda lf: (lf + h) ** 2, VARENTROPY_TOL)
    return h, max(v, 0.0), eh + ev


def info_report(d, method="auto"):
    """Entropy and varentropy together.

    ``method="auto"`` uses closed forms when the family has them and falls
    back to quadrature; ``"quadrature"`` forces the numerical route.
    """
    if method not in ("auto", "quadrature", "closed_form"):
        raise ParamOutOfRange(f"unknown method {method!r}")
    if method != "quadrature":
        h, v = d.entropy_closed(), d.varentropy_closed()
        if h is not None and v is not None:
            return InfoReport(float(h), float(v), "closed_form", 0.0)
    h, v, err = _quadrature_moments(d)
    return InfoReport(h, v, "quadrature", err)


def entropy(d, method="auto"):
    return info_report(d, method).entropy


def varentropy(d, method="auto"):
    return info_report(d, method).varentropy


def _x_space(d, t, g):
    """``int_t^b g(x) dx`` split at the mode when it lies beyond ``t``."""
    pts = [d.mono.mode] if d.mono.mode is not None and d.mono.mode > t else []
    edges = [t] + pts + [d.support.upper]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += quad(g, lo, hi, tol=1e-10)[0]
    return total


def _f_log_f(d, power):
    def g(x):
        f = float(d.pdf(x))
        return 0.0 if f <= 0 else f * math.log(f) ** power

    return g


def residual_entropy(d, t, form="direct"):
    """``H(X_t)`` by one of three equivalent expressions.

    ``direct``: ``-int f_t log f_t``; ``lambda_form``:
    ``-Lambda(t) - (1/S(t)) int_t f log f``; ``hazard_form``:
    ``1 - (1/S(t)) int_t f log(hazard)``.
    """
    _interior_t(d, t)
    s = float(d.sf(t))
    if form == "direct":
        return entropy(ResidualLife(d, t), method="quadrature")
    if form == "lambda_form":
        return math.log(s) - _x_space(d, t, _f_log_f(d, 1)) / s
    if form == "hazard_form":
        r = ResidualLife(d, t)

        def log_hazard(q, upper):
            x = r._tail_point(q if upper else 1.0 - q)
            return math.log(float(d.pdf(x))) - math.log(float(d.sf(x)))

        a = quad(lambda q: log_hazard(q, True), 0.0, 0.5, tol=1e-10)[0]
        b = quad(lambda q: log_hazard(q, False), 0.0, 0.5, tol=1e-10)[0]
        return 1.0 - (a + b)
    raise ParamOutOfRange(f"form must be one of {RESIDUAL_FORMS}")


def residual_varentropy(d, t, form="direct"):
    """``V(X_t)``; ``form="second_moment"`` uses
    ``(1/S(t)) int_t f (log f)^2 - (Lambda(t) + H(X_t))^2``."""
    _interior_t(d, t)
    if form == "direct":
        return varentropy(ResidualLife(d, t), method="quadrature")
    if form == "second_moment":
        s = float(d.sf(t))
        h = residual_entropy(d, t, "lambda_form")
        second = _x_space(d, t, _f_log_f(d, 2)) / s
        return max(second - (-math.log(s) + h) ** 2, 0.0)
    raise ParamOutOfRange("form must be 'direct' or 'second_moment'")


def ic_cdf(d, x):
    """``L(x) = P(-log f(X) <= x) = 1 - K(exp(-x))``."""
    x = np.asarray(x, dtype=float)
    if d.flat:
        jump = -math.log(float(d.pdf(d.median)))
        out = np.where(x >= jump - 4 * np.finfo(float).eps * max(abs(jump), 1.0), 1.0, 0.0)
    else:
        with np.errstate(over="ignore"):
            out = 1.0 - k_clipped(d, np.exp(-x))
    return as_float(out)


def weibull_ratio(k, u, v, p):
    """``(u/v) (ln((1-p)u) / ln((1-p)v))^((k-1)/k)``.

    Closed form of ``f(F^-1(1-(1-p)u)) / f(F^-1(1-(1-p)v))`` for a Weibull
    law with shape ``k`` (any scale).
    """
    if not k > 0:
        raise ParamOutOfRange("k must be positive")
    if not 0.0 < v < u < 1.0:
        raise BadUVOrder(f"need 0 < v < u < 1, got u={u}, v={v}")
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0) & (p < 1))):
        raise POutOfRange("p must lie in (0, 1)")
    ratio = np.log1p(-p) + math.log(u), np.log1p(-p) + math.log(v)
    out = (u / v) * (ratio[0] / ratio[1]) ** ((k - 1.0) / k)
    return as_float(out)


def generic_density_ratio(d, u, v, p):
    """``f(F^-1(1-(1-p)u)) / f(F^-1(1-(1-p)v))`` for any family."""
    p = np.asarray(p, dtype=float)
    out = d.pdf(d.isf((1.0 - p) * u)) / d.pdf(d.isf((1.0 - p) * v))
    return as_float(out)


def hazard_is_increasing(d, t, n_points=512, tol_mono=1e-9):
    """Grid check of IFR on ``(t, b)`` via the residual quantile grid."""
    r = ResidualLife(d, t)
    p = (np.arange(n_points) + 0.5) / n_points
    x = r._tail_point(1.0 - p)
    lam = d.pdf(x) / d.sf(x)
    diffs = np.diff(lam)
    return bool(np.all(diffs >= -tol_mono * np.maximum(np.abs(lam[1:]), 1.0)))


def is_decreasing_density(d):
    return d.mono.kind is MonoKind.STRICTLY_DECREASING
