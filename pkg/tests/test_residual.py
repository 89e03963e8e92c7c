import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, optimize, stats

from pdfrel import (
    MonoKind,
    Truncated,
    cumulative_hazard_at,
    hazard_at,
    make_family,
    mean_residual_at,
    residual,
    residual_pdf_related_cdf,
    residual_pdf_related_inverse,
    residual_quantile,
    shifted_pdf_related_pdf,
    shifted_pdf_related_survival,
)
from pdfrel.errors import AtBranchBoundary, IntegralDiverged, NotMonotone, TOutOfSupport, YOutOfRange
from pdfrel.residual import (
    cumulative_hazard_by_quadrature,
    gbar_clipped,
    gt_layout,
    kt_case,
    kt_clipped,
    kt_curve,
)


def midpoint_mass(d, t, keep, hi, n=2_000_000):
    """Brute-force ``P(keep(X) | X > t)`` for a law supported on ``(., hi)``."""
    x = t + (np.arange(n) + 0.5) * (hi - t) / n
    f = d.pdf(x)
    return float(np.sum(f * keep(x, f)) * (hi - t) / n / d.sf(t))


class TestResidualLife:
    def test_memoryless(self):
        e = make_family("exponential")
        r = residual(e, 2.0)
        x = np.linspace(0.1, 5, 9)
        np.testing.assert_allclose(r.cdf(x), e.cdf(x), rtol=1e-13)
        p = np.linspace(0.05, 0.95, 7)
        np.testing.assert_allclose(residual_quantile(e, 5.0, p), e.quantile(p), rtol=1e-9)

    def test_shape(self):
        r = residual(make_family("parabolic:b=0.5"), 0.25)
        assert r.mono.kind is MonoKind.UNIMODAL and r.mono.mode == pytest.approx(0.75)
        assert residual(make_family("weibull:k=2,lambda=1"), 1.0).mono.kind is MonoKind.STRICTLY_DECREASING

    def test_quantile_pareto(self):
        # S(1) = 1/2 and F^-1(q) = q/(1-q): F^-1(0.75) - 1 = 2
        oracle = optimize.brentq(lambda x: (x / (1 + x) - 0.5) / 0.5 - 0.5, 1, 10, xtol=1e-14) - 1
        assert residual_quantile(make_family("paretotype"), 1.0, 0.5) == pytest.approx(oracle, rel=1e-12)
        assert oracle == pytest.approx(2.0)

    def test_quantile_weibull_bisection(self):
        w = make_family("weibull:k=2,lambda=1")
        r = residual(w, 0.5)
        s = math.exp(-0.25)
        x = optimize.brentq(lambda z: 1 - math.exp(-(z + 0.5) ** 2) / s - 0.9, 0, 10, xtol=1e-15)
        assert r.quantile(0.9) == pytest.approx(x, abs=1e-10)

    def test_t_outside(self):
        with pytest.raises(TOutOfSupport):
            residual(make_family("exponential"), -1.0)
        with pytest.raises(TOutOfSupport):
            hazard_at(make_family("uniform:a=0,b=2"), 2.0)


class TestHazard:
    @pytest.mark.parametrize("rate", [0.5, 1.0, 3.0])
    def test_exponential(self, rate):
        e = make_family(f"exponential:rate={rate}")
        assert hazard_at(e, 1.7) == pytest.approx(rate, rel=1e-13)

    def test_pareto(self):
        d = make_family("paretotype")
        assert hazard_at(d, 1.0) == pytest.approx(0.25 / 0.5)

    def test_cumulative_and_mean(self):
        e = make_family("exponential")
        assert cumulative_hazard_at(e, 2.0) == pytest.approx(2.0, rel=1e-14)
        assert mean_residual_at(e, 2.0) == pytest.approx(1.0, rel=1e-8)

    @pytest.mark.parametrize("spec,t", [("normal", 0.3), ("weibull:k=2,lambda=1", 1.2),
                                        ("parabolic:b=0.5", 1.5), ("logistic", -1.0)])
    def test_cumulative_by_quadrature(self, spec, t):
        d = make_family(spec)
        assert cumulative_hazard_by_quadrature(d, t) == pytest.approx(cumulative_hazard_at(d, t), abs=1e-7)

    def test_mean_residual_weibull(self):
        w = make_family("weibull:k=2,lambda=1")
        ref = stats.weibull_min(2)
        oracle = integrate.quad(ref.sf, 0.8, np.inf)[0] / ref.sf(0.8)
        assert mean_residual_at(w, 0.8) == pytest.approx(oracle, rel=1e-9)

    @pytest.mark.parametrize("spec", ["paretotype", "cauchy"])
    def test_mean_residual_diverges(self, spec):
        with pytest.raises(IntegralDiverged):
            mean_residual_at(make_family(spec), 1.0)


class TestKt:
    def test_pareto_examples(self):
        d = make_family("paretotype")
        assert residual_pdf_related_cdf(d, 3.0, 0.16) == pytest.approx(0.8, rel=1e-12)
        assert residual_pdf_related_cdf(d, 1.0, 0.25) == pytest.approx(math.sqrt(0.5), rel=1e-12)

    @given(st.floats(0.05, 20.0), st.floats(0.001, 0.999))
    def test_pareto_closed_form(self, t, frac):
        y = frac / (1 + t)
        assert kt_clipped(make_family("paretotype"), t, y) == pytest.approx(math.sqrt(y * (1 + t)), rel=1e-10)

    @pytest.mark.parametrize("b", [0.25, 0.5, 0.75])
    @pytest.mark.parametrize("t", [0.25, 0.5])
    def test_value_at_hazard_is_odds(self, b, t):
        d = make_family(f"parabolic:b={b}")
        lam = hazard_at(d, t)
        odds = float(d.cdf(t) / d.sf(t))
        assert kt_clipped(d, t, lam) == pytest.approx(odds, abs=1e-12)
        left, right = kt_clipped(d, t, [lam * (1 - 1e-10), lam * (1 + 1e-10)])
        assert abs(right - left) < 1e-8

    @pytest.mark.parametrize("spec,t", [("parabolic:b=0.25", 0.25), ("parabolic:b=0.75", 0.5),
                                        ("parabolic:b=0.5", 1.3)])
    def test_against_brute_force(self, spec, t):
        d = make_family(spec)
        s = float(d.sf(t))
        y_top = float(d.mode_density) / s
        for frac in (0.55, 0.8, 0.95):
            y = frac * y_top
            brute = midpoint_mass(d, t, lambda x, f: f / s <= y, 2.0)
            assert kt_clipped(d, t, y) == pytest.approx(brute, abs=2e-6)

    def test_cases(self):
        assert kt_case(make_family("exponential"), 1.0) == "a"
        assert kt_case(make_family("reflectedexponential:b=0"), -1.0) == "b"
        assert kt_case(make_family("normal"), -1.0) == "c"
        assert kt_case(make_family("normal"), 1.0) == "a"
        assert kt_case(make_family("weibull:k=2,lambda=1"), 0.2) == "generic"

    def test_generic_matches_residual_k(self):
        from pdfrel.pdf_related import k_clipped

        w = make_family("weibull:k=2,lambda=1")
        r = residual(w, 0.2)
        y = np.linspace(0.1, 0.9, 9) * float(r.mode_density)
        np.testing.assert_allclose(kt_clipped(w, 0.2, y), k_clipped(r, y), atol=1e-13)

    def test_curve_monotone(self):
        y, k = kt_curve(make_family("parabolic:b=0.75"), 0.5, 401)
        assert np.all(np.diff(k) >= 0) and k[0] == pytest.approx(0, abs=1e-12) and k[-1] == pytest.approx(1)
        assert hazard_at(make_family("parabolic:b=0.75"), 0.5) in y

    def test_out_of_range(self):
        with pytest.raises(YOutOfRange):
            residual_pdf_related_cdf(make_family("paretotype"), 1.0, 0.9)

    def test_inverse(self):
        d = make_family("paretotype")
        y = residual_pdf_related_inverse(d, 1.0, 0.5)
        assert y == pytest.approx(0.125, rel=1e-12)
        assert kt_clipped(d, 1.0, y) == pytest.approx(0.5, rel=1e-12)
        e = make_family("exponential")
        for t in (0.3, 2.0):
            for p in (0.1, 0.6):
                yy = residual_pdf_related_inverse(e, t, p)
                oracle = math.exp(-e.quantile(1 - (1 - p) * math.exp(-t)) + t)
                assert yy == pytest.approx(oracle, rel=1e-10)
                assert kt_clipped(e, t, yy) == pytest.approx(1 - p, abs=1e-12)
        r = make_family("reflectedexponential:b=0")
        for p in (0.2, 0.7):
            yy = residual_pdf_related_inverse(r, -2.0, p)
            assert kt_clipped(r, -2.0, yy) == pytest.approx(p, abs=1e-9)
        with pytest.raises(NotMonotone):
            residual_pdf_related_inverse(make_family("normal"), 0.0, 0.5)


class TestGt:
    def test_normal_examples(self):
        n = make_family("normal")
        oracle = (stats.norm.cdf(1) - stats.norm.cdf(-1)) / stats.norm.cdf(1)
        assert shifted_pdf_related_survival(n, -1.0, float(n.pdf(1.0))) == pytest.approx(oracle, rel=1e-12)
        oracle = (stats.norm.cdf(0.5) - 0.5) / 0.5
        assert shifted_pdf_related_survival(n, 0.0, float(n.pdf(0.5))) == pytest.approx(oracle, rel=1e-12)
        assert oracle == pytest.approx(0.3829, abs=1e-4)

    def test_plateau(self):
        d = make_family("parabolic:b=0.5")
        y = float(d.endpoint_density("lower")) * (1 + 1e-9)
        assert shifted_pdf_related_survival(d, 0.25, y) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("dist,t,tag", [
        (lambda: make_family("parabolic:b=0.5"), 1.3, "d"),
        (lambda: make_family("normal"), -1.0, "c"),
        (lambda: Truncated(make_family("parabolic:b=0.5"), 0.0, 1.5), 0.05, "b"),
        (lambda: Truncated(make_family("parabolic:b=0.5"), 0.0, 1.5), 0.8, "a"),
    ])
    def test_layout_cases_against_brute_force(self, dist, t, tag):
        d = dist()
        assert gt_layout(d, t).case_tag == tag
        hi = min(float(d.support.upper), 2.0) if np.isfinite(d.support.upper) else 12.0
        top = float(d.mode_density)
        for frac in (0.3, 0.6, 0.9, 0.99):
            y = frac * top
            brute = midpoint_mass(d, t, lambda x, f: f > y, hi)
            assert gbar_clipped(d, t, y) == pytest.approx(brute, abs=3e-6)

    @pytest.mark.parametrize("dist,t", [
        (lambda: make_family("normal"), -1.0),
        (lambda: make_family("parabolic:b=0.5"), 1.3),
        (lambda: Truncated(make_family("parabolic:b=0.5"), 0.0, 1.5), 0.05),
        (lambda: Truncated(make_family("parabolic:b=0.5"), 0.0, 1.5), 0.8),
    ])
    def test_density_is_derivative(self, dist, t):
        d = dist()
        top = float(d.mode_density)
        for frac in (0.35, 0.62, 0.93):
            y = frac * top
            h = 1e-6 * y
            fd = -(gbar_clipped(d, t, y + h) - gbar_clipped(d, t, y - h)) / (2 * h)
            g = shifted_pdf_related_pdf(d, t, y)
            assert g >= 0
            assert g == pytest.approx(fd, rel=1e-6)

    def test_density_integrates_to_one(self):
        n = make_family("normal")
        top = float(n.mode_density)
        kink = float(n.pdf(-1.0))
        total = sum(integrate.quad(lambda y: shifted_pdf_related_pdf(n, -1.0, y), lo, hi, limit=200)[0]
                    for lo, hi in ((0.0, kink), (kink, top)))
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_strict_boundary(self):
        n = make_family("normal")
        with pytest.raises(AtBranchBoundary):
            shifted_pdf_related_pdf(n, -1.0, float(n.pdf(-1.0)), strict=True)
        assert shifted_pdf_related_pdf(n, -1.0, float(n.pdf(-1.0))) > 0

    @given(st.floats(-3.0, 3.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_survival_monotone_in_y(self, t, a, b):
        n = make_family("normal")
        lo, hi = sorted((a, b))
        top = float(n.mode_density)
        s_lo, s_hi = gbar_clipped(n, t, lo * top), gbar_clipped(n, t, hi * top)
        assert 0.0 <= s_hi <= s_lo + 1e-15 <= 1.0 + 1e-15
