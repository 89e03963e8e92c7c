"""Grid deciders for five stochastic orders and a harness that checks
instances of the implications linking them to entropy and varentropy.

Every decider works on the trimmed probability grid of a
:class:`~pdfrel.distributions.GridConfig`; laws only need ``quantile``,
``support`` and (for the convex order) ``density_at_quantile``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .distributions import Affine, GridConfig, MonoKind, Support
from .errors import PreconditionViolated, UnknownTheorem, XOutOfSupport
from .info import entropy, hazard_is_increasing, residual_entropy, residual_varentropy, varentropy
from .pdf_related import PdfRelatedLaw, k_clipped
from .rearrange import RearrangedLaw
from .residual import ResidualLife

ORDERS = ("st", "disp", "convex", "star", "kurtosis")


@dataclass(frozen=True)
class Violation:
    p: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class OrderVerdict:
    order: str
    holds: bool
    first_violation: Violation | None
    margin: float
    grid: GridConfig = field(default_factory=GridConfig)

    def to_dict(self):
        return {
            "order": self.order,
            "holds": self.holds,
            "first_violation": asdict(self.first_violation) if self.first_violation else None,
            "margin": self.margin,
            "grid": asdict(self.grid),
        }


class QuantileLaw:
    """A law known through its quantile function (and optionally density)."""

    def __init__(self, quantile, support, density_at_quantile=None, name="law", flat=False):
        self._q = quantile
        self._dq = density_at_quantile
        self.support = support
        self.name = name
        self.flat = flat

    def quantile(self, p):
        return self._q(np.asarray(p, dtype=float))

    def density_at_quantile(self, p):
        if self._dq is None:
            raise PreconditionViolated(f"{self.name} has no density", precondition="density")
        return self._dq(np.asarray(p, dtype=float))

    def spec_string(self):
        return self.name

    def __repr__(self):
        return f"<QuantileLaw {self.name}>"


def log_law(law):
    """Law of ``log U`` for a positive variable ``U``, by quantile composition."""
    if law.support.lower < 0:
        raise PreconditionViolated("log of a law with negative values", precondition="nonnegative")
    lo = math.log(law.support.lower) if law.support.lower > 0 else -math.inf
    hi = math.log(law.support.upper) if np.isfinite(law.support.upper) else math.inf

    def dq(p):
        return law.density_at_quantile(p) * law.quantile(p)

    return QuantileLaw(lambda p: np.log(law.quantile(p)), Support(lo, hi), dq, f"log({law.spec_string()})")


def folded_law(d, center=None):
    """Law of ``|X - c|`` for ``X`` symmetric about ``c`` (the median by default)."""
    if not (d.mono.symmetric or d.flat):
        raise PreconditionViolated(f"{d!r} is not symmetric", precondition="symmetric")
    c = d.median if center is None else float(center)
    half = d.support.upper - c

    def q(p):
        return d.isf(0.5 * (1.0 - p)) - c

    def dq(p):
        return 2.0 * d.pdf(d.isf(0.5 * (1.0 - p)))

    return QuantileLaw(q, Support(0.0, half), dq, f"|{d.spec_string()}-Me|")


def as_pdf_related(d):
    return d if isinstance(d, PdfRelatedLaw) else PdfRelatedLaw(d)


# ---------------------------------------------------------------------------
# deciders
# ---------------------------------------------------------------------------


def _first_drop(values, tol, p):
    """Locate the first decrease beyond ``tol * max(|prev|, |next|, 1)``."""
    prev, nxt = values[:-1], values[1:]
    scale = np.maximum(np.maximum(np.abs(prev), np.abs(nxt)), 1.0)
    slack = nxt - prev
    bad = slack < -tol * scale
    margin = float(np.min(slack)) if slack.size else 0.0
    if np.any(bad):
        k = int(np.argmax(bad))
        return Violation(float(p[k + 1]), float(prev[k]), float(nxt[k])), margin
    return None, margin


def _require_nonnegative(law, order):
    if law.support.lower < 0:
        raise PreconditionViolated(
            f"{order} order needs nonnegative variables; {law!r} has support {law.support}",
            precondition="nonnegative",
        )
    if getattr(law, "flat", False):
        raise PreconditionViolated(f"{law!r} has a flat density", precondition="no_flat_zone")


def _require_symmetric(law):
    mono = getattr(law, "mono", None)
    if mono is None or not mono.is_symmetric_unimodal:
        raise PreconditionViolated(f"{law!r} is not symmetric unimodal", precondition="symmetric_unimodal")


def check_order(order, x, y, grid=None):
    """Decide ``x <=_order y`` on the probability grid."""
    grid = grid or GridConfig()
    if order not in ORDERS:
        raise PreconditionViolated(f"unknown order {order!r}", precondition="order")
    p = grid.probabilities()
    tol = grid.tol_mono

    if order == "st":
        lhs, rhs = np.asarray(x.quantile(p)), np.asarray(y.quantile(p))
        slack = rhs - lhs
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
        bad = slack < -tol * scale
        viol = None
        if np.any(bad):
            k = int(np.argmax(bad))
            viol = Violation(float(p[k]), float(lhs[k]), float(rhs[k]))
        return OrderVerdict(order, viol is None, viol, float(np.min(slack)), grid)

    if order == "disp":
        lhs = np.diff(np.asarray(x.quantile(p)))
        rhs = np.diff(np.asarray(y.quantile(p)))
        slack = rhs - lhs
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
        bad = slack < -tol * scale
        viol = None
        if np.any(bad):
            k = int(np.argmax(bad))
            viol = Violation(float(p[k + 1]), float(lhs[k]), float(rhs[k]))
        return OrderVerdict(order, viol is None, viol, float(np.min(slack)), grid)

    if order == "convex":
        _require_nonnegative(x, order)
        _require_nonnegative(y, order)
        ratio = np.asarray(x.density_at_quantile(p)) / np.asarray(y.density_at_quantile(p))
        viol, margin = _first_drop(ratio, tol, p)
        return OrderVerdict(order, viol is None, viol, margin, grid)

    if order == "star":
        _require_nonnegative(x, order)
        _require_nonnegative(y, order)
        ratio = np.asarray(y.quantile(p)) / np.asarray(x.quantile(p))
        viol, margin = _first_drop(ratio, tol, p)
        return OrderVerdict(order, viol is None, viol, margin, grid)

    # kurtosis: G^-1(F(x)) convex for x beyond the median, both laws centred
    _require_symmetric(x)
    _require_symmetric(y)
    upper = p[p > 0.5]
    xs = np.asarray(x.isf(1.0 - upper)) - x.median
    ys = np.asarray(y.isf(1.0 - upper)) - y.median
    slopes = np.diff(ys) / np.diff(xs)
    viol, margin = _first_drop(slopes, tol, upper[1:])
    return OrderVerdict(order, viol is None, viol, margin, grid)


def mapping_phi(x_dist, y_dist, x):
    """``phi(x) = G^-1(F(x))``, mapping quantiles of ``X`` to those of ``Y``."""
    x = np.asarray(x, dtype=float)
    if np.any(~((x > x_dist.support.lower) & (x < x_dist.support.upper))):
        raise XOutOfSupport("x must lie inside the support of the first law")
    u = x_dist.cdf(x)
    s = x_dist.sf(x)
    out = np.where(u <= 0.5, y_dist.quantile(np.clip(u, 1e-300, 0.5)), y_dist.isf(np.clip(s, 1e-300, 0.5)))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MappingReport:
    phi_geq_x: bool
    phi_slope_geq_1: bool

    def to_dict(self):
        return asdict(self)


def check_mapping_conditions(x_dist, y_dist, grid=None):
    """Pointwise ``phi(x) >= x`` and ``phi(x2) - phi(x1) >= x2 - x1`` on
    the grid ``x_k = F^-1(p_k)``."""
    grid = grid or GridConfig()
    xs = np.asarray(x_dist.quantile(grid.probabilities()))
    phi = np.asarray(mapping_phi(x_dist, y_dist, xs))
    tol = grid.tol_mono
    scale = np.maximum(np.maximum(np.abs(xs), np.abs(phi)), 1.0)
    geq = bool(np.all(phi - xs >= -tol * scale))
    dx, dphi = np.diff(xs), np.diff(phi)
    dscale = np.maximum(np.maximum(np.abs(dx), np.abs(dphi)), 1.0)
    slope = bool(np.all(dphi - dx >= -tol * dscale))
    return MappingReport(geq, slope)


# ---------------------------------------------------------------------------
# theorem harness
# ---------------------------------------------------------------------------


@dataclass
class TheoremReport:
    name: str
    kind: str  # "equivalence" or "implication"
    premise: dict
    conclusion: dict
    implication_respected: bool
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _verdict_dict(v):
    return v.to_dict() if isinstance(v, OrderVerdict) else v


def _equivalence(name, premise, conclusion, **details):
    return TheoremReport(
        name, "equivalence", _verdict_dict(premise), _verdict_dict(conclusion),
        bool(premise.holds == conclusion.holds), details,
    )


def _implication(name, premise_holds, premise, conclusion_holds, conclusion, **details):
    return TheoremReport(
        name, "implication", premise, conclusion,
        bool((not premise_holds) or conclusion_holds), details,
    )


def _no_flat(*laws):
    for d in laws:
        if d.flat:
            raise PreconditionViolated(f"{d!r} has a flat density", precondition="no_flat_zone")


def _strictly_decreasing(d):
    if d.mono.kind is not MonoKind.STRICTLY_DECREASING:
        raise PreconditionViolated(f"{d!r} does not have a strictly decreasing density",
                                   precondition="strictly_decreasing")


def _star_comparison(x, y, grid):
    kx, ky = as_pdf_related(x), as_pdf_related(y)
    premise = check_order("star", kx, ky, grid)
    p = grid.probabilities()
    pts = np.asarray(kx.quantile(p))
    # phi(s) = S^-1(K(s)) evaluated through the cdf of f(X), then the quantile of g(Y)
    phi = np.asarray(ky.quantile(np.clip(k_clipped(x, pts), 1e-16, 1 - 1e-16)))
    viol, margin = _first_drop(phi / pts, grid.tol_mono, p)
    conclusion = OrderVerdict("star", viol is None, viol, margin, grid)
    return _equivalence("star_comparison", premise, conclusion)


def _rearrangement_equivalence(x, y, grid):
    _no_flat(x, y)
    premise = check_order("convex", RearrangedLaw(x), RearrangedLaw(y), grid)
    conclusion = check_order("star", as_pdf_related(x), as_pdf_related(y), grid)
    return _equivalence("rearrangement_equivalence", premise, conclusion)


def _kurtosis_star(x, y, grid):
    premise = check_order("kurtosis", x, y, grid)
    conclusion = check_order("star", as_pdf_related(x), as_pdf_related(y), grid)
    return _equivalence("kurtosis_star", premise, conclusion)


def _oja(x, y, grid):
    premise = check_order("kurtosis", x, y, grid)
    conclusion = check_order("convex", folded_law(x), folded_law(y), grid)
    return _equivalence("oja", premise, conclusion)


def _entropy_order(x, y, grid, tol=1e-9):
    v = check_order("st", as_pdf_related(x), as_pdf_related(y), grid)
    hx, hy = entropy(x), entropy(y)
    ok = hx >= hy - tol
    return _implication("entropy_order", v.holds, v.to_dict(), ok,
                        {"H_x": hx, "H_y": hy, "holds": ok})


def _varentropy_conclusion(x, y, tol):
    vx, vy = varentropy(x), varentropy(y)
    ok = vx <= vy + tol
    return ok, {"V_x": vx, "V_y": vy, "holds": ok}


def _varentropy_order(x, y, grid, tol=1e-8):
    v = check_order("star", as_pdf_related(x), as_pdf_related(y), grid)
    ok, concl = _varentropy_conclusion(x, y, tol)
    return _implication("varentropy_order", v.holds, v.to_dict(), ok, concl)


def _kurtosis_varentropy(x, y, grid, tol=1e-8):
    v = check_order("kurtosis", x, y, grid)
    ok, concl = _varentropy_conclusion(x, y, tol)
    return _implication("kurtosis_varentropy", v.holds, v.to_dict(), ok, concl)


def _decreasing_convex_varentropy(x, y, grid, tol=1e-8):
    _strictly_decreasing(x)
    _strictly_decreasing(y)
    # shifting to a zero lower end leaves both the convex order and V unchanged
    v = check_order("convex", RearrangedLaw(x), RearrangedLaw(y), grid)
    ok, concl = _varentropy_conclusion(x, y, tol)
    return _implication("decreasing_convex_varentropy", v.holds, v.to_dict(), ok, concl)


def default_ages(d, n=12, lo=0.05, hi=0.9):
    return np.asarray(d.quantile(np.linspace(lo, hi, n)))


def _hazard_trend(d, n_points=512, tol_mono=1e-9):
    p = (np.arange(n_points) + 0.5) / n_points
    x = np.asarray(d.quantile(p))
    lam = d.pdf(x) / d.sf(x)
    diffs = np.diff(lam)
    scale = np.maximum(np.abs(lam[1:]), 1.0)
    if np.all(diffs >= -tol_mono * scale):
        return "increasing"
    if np.all(diffs <= tol_mono * scale):
        return "decreasing"
    return "neither"


def _trend(values, tol):
    diffs = np.diff(values)
    scale = np.maximum(np.abs(values[1:]), 1.0)
    up = bool(np.all(diffs >= -tol * scale))
    down = bool(np.all(diffs <= tol * scale))
    return up, down, diffs


def _ifr_entropy(d, grid, ages=None):
    trend = _hazard_trend(d, tol_mono=grid.tol_mono)
    if trend == "neither":
        raise PreconditionViolated(f"{d!r} is neither IFR nor DFR on the grid", precondition="ifr_or_dfr")
    ts = default_ages(d) if ages is None else np.asarray(ages, dtype=float)
    hs = np.array([residual_entropy(d, t) for t in ts])
    diffs = np.diff(hs)
    ok = bool(np.all(diffs < 0)) if trend == "increasing" else bool(np.all(diffs > 0))
    margin = float(np.min(np.abs(diffs)))
    return _implication(
        "ifr_entropy", True, {"hazard": trend, "holds": True}, ok,
        {"ages": ts.tolist(), "H": hs.tolist(), "holds": ok, "min_step": margin},
    )


def _residual_varentropy_monotonicity(d, grid, t0=None, ages=None, tol=1e-9):
    if t0 is None:
        t0 = d.mono.mode if d.mono.kind is MonoKind.UNIMODAL else float(d.quantile(0.05))
    if ResidualLife(d, t0).mono.kind is not MonoKind.STRICTLY_DECREASING:
        raise PreconditionViolated(f"residual density at t0={t0} is not strictly decreasing",
                                   precondition="strictly_decreasing_residual")
    if ages is None:
        ts = t0 + np.linspace(0.0, 1.0, 12) * (float(d.isf(0.05)) - t0)
    else:
        ts = np.asarray(ages, dtype=float)
    surv = np.asarray(d.sf(ts))
    p = grid.probabilities()
    ups, downs = [], []
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            u, v = surv[i], surv[j]
            if not v < u:
                continue
            r = d.pdf(d.isf((1.0 - p) * u)) / d.pdf(d.isf((1.0 - p) * v))
            up, down, _ = _trend(r, grid.tol_mono)
            ups.append(up)
            downs.append(down)
    ratio_up, ratio_down = all(ups), all(downs)
    vs = np.array([residual_varentropy(d, t) for t in ts])
    v_up, v_down, _ = _trend(vs, tol)
    premise = {"ratio_increasing": ratio_up, "ratio_decreasing": ratio_down,
               "holds": ratio_up or ratio_down}
    ok = (not ratio_up or v_up) and (not ratio_down or v_down)
    return _implication(
        "residual_varentropy_monotonicity", ratio_up or ratio_down, premise, ok,
        {"ages": ts.tolist(), "V": vs.tolist(), "increasing": v_up, "decreasing": v_down, "holds": ok},
    )


def _ifr_bound(d, grid, t=None, tol=1e-6):
    t = float(d.mono.mode if t is None else t)
    r = ResidualLife(d, t)
    if r.mono.kind is not MonoKind.STRICTLY_DECREASING:
        raise PreconditionViolated(f"residual density at t={t} is not strictly decreasing",
                                   precondition="strictly_decreasing_residual")
    ifr = hazard_is_increasing(d, t, tol_mono=grid.tol_mono)
    v = residual_varentropy(d, t)
    ok = v <= 1.0 + tol
    return _implication("ifr_bound", ifr, {"ifr": ifr, "holds": ifr}, ok,
                        {"t": t, "V": v, "holds": ok})


def _affine_star_equality(x, grid, a=2.0, b=3.0, tol=1e-8):
    if not a > 0:
        raise PreconditionViolated("scale a must be positive", precondition="a_positive")
    y = Affine(x, a, b)
    kx, ky = as_pdf_related(x), as_pdf_related(y)
    forward = check_order("star", kx, ky, grid)
    backward = check_order("star", ky, kx, grid)
    p = grid.probabilities()
    ratio = np.asarray(ky.quantile(p)) / np.asarray(kx.quantile(p))
    dev = float(np.max(np.abs(ratio - 1.0 / a)))
    ok = forward.holds and backward.holds and dev <= tol
    return TheoremReport(
        "affine_star_equality", "implication", {"a": a, "b": b, "holds": True},
        {"forward": forward.to_dict(), "backward": backward.to_dict(),
         "ratio_min": float(ratio.min()), "ratio_max": float(ratio.max()), "max_dev": dev,
         "holds": ok},
        ok,
    )


_TWO = {
    "star_comparison": _star_comparison,
    "rearrangement_equivalence": _rearrangement_equivalence,
    "kurtosis_star": _kurtosis_star,
    "oja": _oja,
    "entropy_order": _entropy_order,
    "varentropy_order": _varentropy_order,
    "kurtosis_varentropy": _kurtosis_varentropy,
    "decreasing_convex_varentropy": _decreasing_convex_varentropy,
}
_ONE = {
    "ifr_entropy": _ifr_entropy,
    "residual_varentropy_monotonicity": _residual_varentropy_monotonicity,
    "ifr_bound": _ifr_bound,
    "affine_star_equality": _affine_star_equality,
}
THEOREMS = tuple(_TWO) + tuple(_ONE)


def verify_theorem(name, inputs, grid=None, **params):
    """Evaluate premise and conclusion of a named result on one instance.

    ``inputs`` is a sequence of one or two distributions.  Extra keyword
    arguments (``t``, ``t0``, ``ages``, ``a``, ``b``) go to single-input
    results.
    """
    grid = grid or GridConfig()
    inputs = list(inputs)
    if name in _TWO:
        if len(inputs) != 2:
            raise PreconditionViolated(f"{name} needs two distributions", precondition="arity")
        return _TWO[name](inputs[0], inputs[1], grid)
    if name in _ONE:
        if len(inputs) != 1:
            raise PreconditionViolated(f"{name} needs one distribution", precondition="arity")
        return _ONE[name](inputs[0], grid, **params)
    raise UnknownTheorem(f"unknown theorem {name!r}; expected one of {THEOREMS}")
