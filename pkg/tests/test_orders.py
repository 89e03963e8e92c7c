import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from pdfrel import GridConfig, check_mapping_conditions, check_order, make_family, mapping_phi, verify_theorem
from pdfrel.errors import PreconditionViolated, UnknownTheorem, XOutOfSupport
from pdfrel.orders import THEOREMS, as_pdf_related, folded_law, log_law

COARSE = GridConfig(n_points=199)


def independent_kurtosis(frozen_x, frozen_y, n=999):
    """Convexity of G^-1(F(x)) beyond the median by second differences."""
    p = np.linspace(1e-3, 1 - 1e-3, n)
    p = p[p > 0.5]
    xs, ys = frozen_x.ppf(p), frozen_y.ppf(p)
    slopes = np.diff(ys) / np.diff(xs)
    return bool(np.all(np.diff(slopes) >= -1e-9 * np.maximum(np.abs(slopes[1:]), 1.0)))


class TestDeciders:
    def test_st_scaling(self):
        fast, slow = make_family("exponential:rate=2"), make_family("exponential:rate=1")
        assert check_order("st", fast, slow).holds
        v = check_order("st", slow, fast)
        assert not v.holds and v.first_violation.p == pytest.approx(1e-3)

    def test_disp(self):
        assert check_order("disp", make_family("normal"), make_family("normal:mu=5,sigma=2")).holds
        assert not check_order("disp", make_family("normal:sigma=2"), make_family("normal")).holds
        assert check_order("disp", make_family("exponential"), make_family("exponential:rate=0.5")).holds

    def test_convex_ifr(self):
        w2, e = make_family("weibull:k=2,lambda=1"), make_family("exponential")
        assert check_order("convex", w2, e).holds
        assert not check_order("convex", e, w2).holds
        assert check_order("convex", e, make_family("weibull:k=0.5,lambda=1")).holds

    def test_star(self):
        e, par = make_family("exponential"), make_family("paretotype")
        assert check_order("star", e, par).holds
        assert not check_order("star", par, e).holds

    @pytest.mark.parametrize("a,b,fa,fb", [
        ("normal", "logistic", stats.norm(), stats.logistic()),
        ("logistic", "cauchy", stats.logistic(), stats.cauchy()),
        ("cauchy", "normal", stats.cauchy(), stats.norm()),
        ("logistic", "normal", stats.logistic(), stats.norm()),
        ("laplace2", "normal", stats.laplace(scale=0.5), stats.norm()),
    ])
    def test_kurtosis_against_independent(self, a, b, fa, fb):
        assert check_order("kurtosis", make_family(a), make_family(b)).holds == independent_kurtosis(fa, fb)

    def test_kurtosis_chain(self):
        n, lo, c = (make_family(s) for s in ("normal", "logistic", "cauchy"))
        assert check_order("kurtosis", n, lo).holds and check_order("kurtosis", lo, c).holds

    def test_kurtosis_location_free(self):
        assert check_order("kurtosis", make_family("normal:mu=-7"), make_family("logistic:mu=3")).holds

    def test_preconditions(self):
        with pytest.raises(PreconditionViolated):
            check_order("star", make_family("normal"), make_family("exponential"))
        with pytest.raises(PreconditionViolated):
            check_order("kurtosis", make_family("weibull:k=2,lambda=1"), make_family("normal"))
        with pytest.raises(PreconditionViolated):
            check_order("sideways", make_family("normal"), make_family("normal"))

    @given(st.floats(0.05, 20.0))
    def test_star_is_scale_free(self, a):
        x = make_family("weibull:k=2,lambda=1")
        y = make_family(f"weibull:k=2,lambda={a}")
        assert check_order("star", x, y, COARSE).holds and check_order("star", y, x, COARSE).holds

    @given(st.floats(-5, 5), st.floats(0.2, 5))
    def test_reflexive(self, mu, sigma):
        d = make_family(f"logistic:mu={mu},s={sigma}")
        for order in ("st", "disp", "kurtosis"):
            assert check_order(order, d, d, COARSE).holds

    def test_verdict_dict(self):
        out = check_order("st", make_family("exponential"), make_family("exponential:rate=2")).to_dict()
        assert set(out) == {"order", "holds", "first_violation", "margin", "grid"}
        assert set(out["first_violation"]) == {"p", "lhs", "rhs"}


class TestLaws:
    def test_log_law(self):
        e = make_family("exponential")
        ll = log_law(e)
        assert ll.quantile(0.5) == pytest.approx(math.log(math.log(2)), rel=1e-13)

    def test_folded(self):
        fl = folded_law(make_family("normal:mu=2"))
        assert fl.quantile(0.5) == pytest.approx(stats.halfnorm.ppf(0.5), rel=1e-12)

    def test_star_equals_disp_of_logs(self):
        for a, b in (("exponential", "paretotype"), ("weibull:k=2,lambda=1", "exponential"),
                     ("paretotype", "exponential")):
            x, y = make_family(a), make_family(b)
            assert check_order("star", x, y).holds == check_order("disp", log_law(x), log_law(y)).holds


class TestMapping:
    def test_phi_values(self):
        e1, e2 = make_family("exponential"), make_family("exponential:rate=2")
        assert mapping_phi(e1, e2, 1.0) == pytest.approx(0.5, rel=1e-14)
        assert mapping_phi(e1, e1, 0.37) == pytest.approx(0.37, rel=1e-14)
        assert mapping_phi(e1, make_family("paretotype"), math.log(2)) == pytest.approx(1.0, rel=1e-13)
        with pytest.raises(XOutOfSupport):
            mapping_phi(e1, e2, -1.0)

    def test_conditions(self):
        e1, half = make_family("exponential"), make_family("exponential:rate=0.5")
        r = check_mapping_conditions(e1, half)
        assert r.phi_geq_x and r.phi_slope_geq_1
        r = check_mapping_conditions(e1, e1)
        assert r.phi_geq_x and r.phi_slope_geq_1
        r = check_mapping_conditions(half, e1)
        assert not r.phi_geq_x and not r.phi_slope_geq_1


class TestTheorems:
    def test_rearrangement_equivalence(self):
        r = verify_theorem("rearrangement_equivalence", (make_family("exponential"), make_family("paretotype")))
        assert r.kind == "equivalence" and r.implication_respected
        assert r.premise["holds"] == r.conclusion["holds"]

    def test_kurtosis_varentropy(self):
        r = verify_theorem("kurtosis_varentropy", (make_family("normal"), make_family("logistic")))
        assert r.premise["holds"] and r.conclusion["holds"] and r.implication_respected

    def test_affine_star_equality(self):
        r = verify_theorem("affine_star_equality", (make_family("normal"),), a=2.0, b=3.0)
        assert r.implication_respected
        assert r.conclusion["ratio_min"] == pytest.approx(0.5, abs=1e-8)
        assert r.conclusion["ratio_max"] == pytest.approx(0.5, abs=1e-8)

    def test_star_comparison(self):
        for a, b in (("normal", "logistic"), ("exponential", "paretotype"), ("logistic", "normal")):
            assert verify_theorem("star_comparison", (make_family(a), make_family(b))).implication_respected

    @pytest.mark.parametrize("name,pair", [
        ("kurtosis_star", ("normal", "cauchy")),
        ("oja", ("normal", "logistic")),
        ("entropy_order", ("exponential", "exponential:rate=0.5")),
        ("varentropy_order", ("weibull:k=2,lambda=1", "exponential")),
        ("decreasing_convex_varentropy", ("exponential", "paretotype")),
    ])
    def test_pairs_respected(self, name, pair):
        assert verify_theorem(name, tuple(make_family(s) for s in pair)).implication_respected

    def test_entropy_order_instance(self):
        r = verify_theorem("entropy_order", (make_family("exponential:rate=0.5"), make_family("exponential")))
        assert r.premise["holds"] and r.conclusion["holds"]

    def test_single_input(self):
        w = make_family("weibull:k=2,lambda=1")
        assert verify_theorem("ifr_entropy", (w,)).implication_respected
        r = verify_theorem("ifr_bound", (w,), t=1.2)
        assert r.premise["holds"] and r.conclusion["holds"] and r.conclusion["V"] <= 1
        assert verify_theorem("residual_varentropy_monotonicity", (w,)).implication_respected

    def test_arity_and_names(self):
        with pytest.raises(PreconditionViolated):
            verify_theorem("oja", (make_family("normal"),))
        with pytest.raises(UnknownTheorem):
            verify_theorem("fermat", (make_family("normal"),))
        assert len(THEOREMS) == 12

    def test_pdf_related_wrapper(self):
        law = as_pdf_related(make_family("normal"))
        assert as_pdf_related(law) is law
