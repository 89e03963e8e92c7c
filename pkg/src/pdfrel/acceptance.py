"""Executable acceptance criteria.

Each criterion is a function returning a :class:`CriterionResult`; the
numbered list is the acceptance checklist in the README.  They are shared
by ``tests/test_acceptance.py`` and the ``selftest`` CLI verb.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .distributions import GridConfig, Truncated, make_family
from .info import (
    RESIDUAL_FORMS,
    generic_density_ratio,
    info_report,
    residual_entropy,
    residual_varentropy,
    weibull_ratio,
)
from .oracle import mc_information, oracle_check
from .orders import check_order, verify_theorem
from .pdf_related import PdfRelatedLaw, check_uniform_characterization
from .rearrange import decreasing_rearrangement, pdf_related_quantile_via_rearrangement
from .residual import hazard_at, kt_clipped, kt_curve, residual_pdf_related_cdf

MC_N = 1_000_000


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} [{status}] {self.title} ({self.seconds:.2f} s)"

    def to_dict(self):
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "seconds": self.seconds, "details": self.details}


def _c1():
    uniform = ["shiftedexponential:a=0", "shiftedexponential:a=2", "reflectedexponential:b=0",
               "reflectedexponential:b=-1", "laplace2:m=0", "laplace2:m=5"]
    controls = ["normal", "paretotype"]
    dev = {s: check_uniform_characterization(make_family(s)).max_deviation for s in uniform + controls}
    ok = all(dev[s] <= 1e-8 for s in uniform) and all(dev[s] > 0.01 for s in controls)
    return ok, {"max_deviation": dev}, 1.0


def _c2():
    d = make_family("paretotype")
    worst = 0.0
    for t in (0.5, 1.0, 3.0):
        y = np.linspace(0.0, 1.0 / (1.0 + t), 201)[1:]
        worst = max(worst, float(np.max(np.abs(residual_pdf_related_cdf(d, t, y) - np.sqrt(y * (1.0 + t))))))
    return worst <= 1e-8, {"max_abs_error": worst}, None


def _c3():
    rows = {}
    ok = True
    for b in (0.25, 0.5, 0.75):
        d = make_family(f"parabolic:b={b}")
        for t in (0.25, 0.5):
            y, k = kt_curve(d, t, 999)
            lam = hazard_at(d, t)
            odds = float(d.cdf(t) / d.sf(t))
            at = float(kt_clipped(d, t, lam))
            left, right = kt_clipped(d, t, [lam * (1 - 1e-12), lam * (1 + 1e-12)])
            mc = oracle_check(d, "Kt", MC_N, seed=1000 + int(100 * b + 10 * t), t=t)
            good = (
                bool(np.all(np.diff(k) >= 0))
                and abs(k[0]) <= 1e-12 and abs(k[-1] - 1) <= 1e-12
                and abs(at - odds) <= 1e-8 and abs(left - right) <= 1e-8
                and mc["pass"]
            )
            rows[f"b={b},t={t}"] = {"K_at_hazard": at, "odds": odds, "ks": mc["ks"], "ok": good}
            ok &= good
    return ok, rows, 30.0


def _c4():
    vals = {}
    for rate in (0.5, 1.0, 2.0):
        vals[f"V(exp:{rate})"] = info_report(make_family(f"exponential:rate={rate}"), "quadrature").varentropy
    e = make_family("exponential:rate=1")
    for t in (0.5, 2.0):
        vals[f"H(X_{t})"] = residual_entropy(e, t)
        vals[f"V(X_{t})"] = residual_varentropy(e, t)
    return all(abs(v - 1.0) <= 1e-7 for v in vals.values()), vals, None


RESIDUAL_PAIRS = (
    [("weibull:k=2,lambda=1", t) for t in (0.2, 0.7, 1.5, 2.5)]
    + [("weibull:k=0.5,lambda=1", t) for t in (0.05, 1.0, 4.0)]
    + [("weibull:k=1.5,lambda=2", t) for t in (0.5, 3.0)]
    + [("paretotype", t) for t in (0.1, 1.0, 5.0, 30.0)]
    + [("normal", t) for t in (-2.5, -1.0, 0.0, 0.8, 1.6, 2.5, 3.5)]
)


def _c5():
    spread = {}
    for spec, t in RESIDUAL_PAIRS:
        d = make_family(spec)
        h = [residual_entropy(d, t, f) for f in RESIDUAL_FORMS]
        spread[f"{spec}@{t}"] = max(h) - min(h)
    return len(spread) >= 20 and max(spread.values()) <= 1e-8, {"max_spread": max(spread.values())}, None


def _c6():
    n, lo, c = make_family("normal"), make_family("logistic"), make_family("cauchy")
    k1, k2 = check_order("kurtosis", n, lo), check_order("kurtosis", lo, c)
    vq = [info_report(d, "quadrature").varentropy for d in (n, lo, c)]
    vm = [mc_information(d, MC_N, seed=11)["varentropy"] for d in (n, lo, c)]
    gaps_q = (vq[1] - vq[0], vq[2] - vq[1])
    gaps_m = (vm[1] - vm[0], vm[2] - vm[1])
    ok = k1.holds and k2.holds and min(gaps_q) > 0.05 and min(gaps_m) > 0.05
    return ok, {"kurtosis": [k1.holds, k2.holds], "V_quadrature": vq, "V_mc": vm}, None


def _c7():
    w2, w05, w1 = (make_family(f"weibull:k={k},lambda=1") for k in (2, 0.5, 1))
    mode = w2.mono.mode
    v2 = np.array([residual_varentropy(w2, t) for t in np.linspace(mode, float(w2.isf(0.01)), 12)])
    v05 = np.array([residual_varentropy(w05, t) for t in np.linspace(0.05, 5.0, 12)])
    v1 = np.array([residual_varentropy(w1, t) for t in np.linspace(0.1, 5.0, 12)])
    p = np.linspace(0.1, 0.9, 9)
    ratio_err, signs = 0.0, {}
    for k in (2.0, 0.5, 1.0):
        d = make_family(f"weibull:k={k},lambda=1.7")
        for u, v in ((0.8, 0.2), (0.6, 0.5), (0.95, 0.05)):
            closed = weibull_ratio(k, u, v, p)
            ratio_err = max(ratio_err, float(np.max(np.abs(closed - generic_density_ratio(d, u, v, p)))))
            step = np.diff(closed)
            signs[f"k={k},u={u},v={v}"] = (
                "increasing" if np.all(step > 0) else "decreasing" if np.all(step < 0)
                else "constant" if np.all(np.abs(step) <= 1e-12) else "mixed"
            )
    expected = {2.0: "increasing", 0.5: "decreasing", 1.0: "constant"}
    sign_ok = all(signs[key] == expected[float(key.split(",")[0][2:])] for key in signs)
    ok = (
        bool(np.all(np.diff(v2) >= 0)) and bool(np.all(v2 <= 1 + 1e-6))
        and bool(np.all(np.diff(v05) <= 0))
        and bool(np.all(np.abs(v1 - 1) <= 1e-7))
        and ratio_err <= 1e-10 and sign_ok
    )
    return ok, {"V_k2": v2.tolist(), "V_k05": v05.tolist(), "ratio_err": ratio_err, "signs": signs}, None


def _c8():
    f, g = make_family("triangularabs:sign=1"), make_family("triangularabs:sign=-1")
    x = np.linspace(0.0, 2.0, 401)[1:-1]
    fs_err = max(float(np.max(np.abs(decreasing_rearrangement(d, x) - (1 - x / 2)))) for d in (f, g))
    rf, rg = info_report(f, "quadrature"), info_report(g, "quadrature")
    dh, dv = abs(rf.entropy - rg.entropy), abs(rf.varentropy - rg.varentropy)
    p = np.linspace(0.01, 0.99, 99)
    ident = {}
    for spec in ("normal", "exponential", "triangularabs:sign=1"):
        d = make_family(spec)
        ident[spec] = float(np.max(np.abs(
            pdf_related_quantile_via_rearrangement(d, p) - PdfRelatedLaw(d).quantile(p))))
    ok = fs_err <= 1e-12 and dh <= 1e-7 and dv <= 1e-6 and max(ident.values()) <= 1e-7
    return ok, {"fstar_err": fs_err, "dH": dh, "dV": dv, "identity_err": ident}, None


REARRANGEMENT_PAIRS = (
    ("exponential", "paretotype"), ("paretotype", "exponential"),
    ("normal", "logistic"), ("logistic", "normal"), ("normal", "cauchy"),
    ("weibull:k=2,lambda=1", "exponential"), ("exponential", "weibull:k=0.5,lambda=1"),
    ("laplace2", "normal"), ("triangularabs:sign=1", "triangularabs:sign=-1"),
    ("parabolic:b=0.5", "normal"),
)
SYMMETRIC_PAIRS = (
    ("normal", "logistic"), ("logistic", "cauchy"), ("normal", "cauchy"), ("cauchy", "normal"),
    ("logistic", "normal"), ("laplace2", "normal"), ("normal", "laplace2"), ("parabolic:b=0.5", "normal"),
)


def _c9():
    grid = GridConfig()
    out = {"rearrangement": {}, "kurtosis_star": {}, "implications": {}}
    ok = True
    for a, b in REARRANGEMENT_PAIRS:
        x, y = make_family(a), make_family(b)
        r = verify_theorem("rearrangement_equivalence", (x, y), grid)
        out["rearrangement"][f"{a}|{b}"] = r.implication_respected
        ok &= r.implication_respected
        for name in ("entropy_order", "varentropy_order"):
            rr = verify_theorem(name, (x, y), grid)
            out["implications"][f"{name}:{a}|{b}"] = rr.implication_respected
            ok &= rr.implication_respected
    for a, b in SYMMETRIC_PAIRS:
        x, y = make_family(a), make_family(b)
        r = verify_theorem("kurtosis_star", (x, y), grid)
        out["kurtosis_star"][f"{a}|{b}"] = r.implication_respected
        ok &= r.implication_respected
        rr = verify_theorem("kurtosis_varentropy", (x, y), grid)
        out["implications"][f"kurtosis_varentropy:{a}|{b}"] = rr.implication_respected
        ok &= rr.implication_respected
    return ok, out, None


def _c10():
    res = {}
    ok = True
    for spec, want in (("weibull:k=2,lambda=1", "increasing"), ("paretotype", "decreasing")):
        r = verify_theorem("ifr_entropy", (make_family(spec),))
        good = (r.premise["hazard"] == want and r.implication_respected
                and r.conclusion["min_step"] > 1e-4)
        res[spec] = {"hazard": r.premise["hazard"], "min_step": r.conclusion["min_step"], "ok": good}
        ok &= good
    return ok, res, None


ORACLE_MATRIX = (
    [("K", s, None) for s in ("exponential", "normal", "paretotype", "parabolic:b=0.5",
                             "weibull:k=2,lambda=1", "cauchy")]
    + [("Kt", s, t) for s, t in (("paretotype", 1.0), ("parabolic:b=0.25", 0.25),
                                 ("weibull:k=2,lambda=1", 1.0), ("normal", -1.0))]
    + [("Gt", s, t) for s, t in (("normal", -1.0), ("parabolic:b=0.5", 1.3), ("truncated", 0.8))]
    + [("L", s, None) for s in ("exponential", "normal", "logistic")]
)


def _oracle_dist(spec):
    if spec == "truncated":
        return Truncated(make_family("parabolic:b=0.5"), 0.0, 1.5)
    return make_family(spec)


def _c11():
    res = {}
    for i, (law, spec, t) in enumerate(ORACLE_MATRIX):
        r = oracle_check(_oracle_dist(spec), law, MC_N, seed=20_000 + i, t=t)
        res[f"{law}:{spec}" + (f"@{t}" if t is not None else "")] = r["ks"] / r["band"]
    return all(v <= 1.0 for v in res.values()), {"ks_over_band": res}, None


CRITERIA = (
    (1, "uniform characterization of f(X)", _c1),
    (2, "Pareto-type K_t closed form", _c2),
    (3, "parabolic K_t curves: shape, continuity, oracle", _c3),
    (4, "exponential entropy and varentropy", _c4),
    (5, "three residual-entropy forms agree", _c5),
    (6, "kurtosis chain and varentropy ordering", _c6),
    (7, "Weibull residual varentropy monotonicity", _c7),
    (8, "rearrangement suite", _c8),
    (9, "theorem-harness equivalences and implications", _c9),
    (10, "IFR/DFR residual entropy monotonicity", _c10),
    (11, "Monte Carlo oracle gate", _c11),
)


def run_criterion(number):
    for num, title, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            ok, details, budget = fn()
            elapsed = time.perf_counter() - start
            if budget is not None:
                details = dict(details, runtime_budget_s=budget)
                ok = ok and elapsed < budget
            return CriterionResult(num, title, bool(ok), elapsed, details)
    raise KeyError(number)


def run_all(numbers=None):
    chosen = [n for n, _, _ in CRITERIA if numbers is None or n in numbers]
    return [run_criterion(n) for n in chosen]
