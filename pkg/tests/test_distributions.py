import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, optimize, stats

from pdfrel import GridConfig, MonoKind, Truncated, make_family
from pdfrel.distributions import Affine, parse_spec
from pdfrel.errors import (
    MalformedSpec,
    ParamOutOfRange,
    POutOfRange,
    PreconditionError,
    UnknownFamily,
)

SPECS = [
    "exponential:rate=1.5",
    "shiftedexponential:a=2",
    "reflectedexponential:b=-1",
    "laplace2:m=5",
    "uniform:a=0,b=2",
    "paretotype",
    "parabolic:b=0.25",
    "parabolic:b=0.75",
    "weibull:k=2,lambda=1",
    "weibull:k=0.5,lambda=1",
    "normal:mu=1,sigma=2",
    "logistic",
    "cauchy",
    "triangularabs:sign=1",
    "triangularabs:sign=-1",
    "symmetrictriangular:a=0,b=2",
]


@pytest.fixture(scope="module", params=SPECS)
def dist(request):
    return make_family(request.param)


class TestGrammar:
    def test_exponential(self):
        d = make_family("exponential:rate=1")
        assert (d.support.lower, d.support.upper) == (0.0, math.inf)
        assert d.mono.kind is MonoKind.STRICTLY_DECREASING

    def test_parabolic_range(self):
        with pytest.raises(ParamOutOfRange):
            make_family("parabolic:b=0.9")

    def test_paretotype_cdf(self):
        d = make_family("paretotype")
        x = np.array([0.1, 1.0, 7.0])
        np.testing.assert_allclose(d.cdf(x), x / (1 + x), rtol=1e-15)

    @pytest.mark.parametrize("bad", ["", ":", "normal:", "normal:mu", "normal:mu=abc",
                                     "normal:mu=1,mu=2", "9lives", "normal:zeta=1"])
    def test_malformed(self, bad):
        with pytest.raises(MalformedSpec):
            make_family(bad)

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            make_family("gompertz")

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            make_family("weibull:k=-1")

    def test_aliases_and_parse(self):
        assert parse_spec("Gaussian:mu=1e-3") == ("normal", {"mu": 1e-3})
        assert make_family("gaussian").spec_string() == make_family("normal").spec_string()

    def test_spec_round_trip(self, dist):
        again = make_family(dist.spec_string())
        x = dist.quantile(np.array([0.2, 0.5, 0.8]))
        np.testing.assert_array_equal(again.pdf(x), dist.pdf(x))


class TestPointValues:
    def test_pdf(self):
        assert make_family("paretotype").pdf(1.0) == pytest.approx(0.25, rel=1e-15)
        assert make_family("uniform:a=0,b=2").pdf(1.0) == 0.5
        assert make_family("exponential").pdf(-1.0) == 0.0

    def test_cdf(self):
        assert make_family("paretotype").cdf(1.0) == pytest.approx(0.5)
        assert make_family("normal").cdf(0.0) == 0.5
        # closed form 1 - exp(-1), cross-checked against quadrature of the pdf
        w = make_family("weibull:k=2,lambda=1")
        area = integrate.quad(lambda x: float(w.pdf(x)), 0, 1)[0]
        assert area == pytest.approx(1 - math.exp(-1), abs=1e-12)
        assert w.cdf(1.0) == pytest.approx(0.6321205588285577, abs=1e-15)

    def test_quantile(self):
        p_oracle = optimize.brentq(lambda x: x / (1 + x) - 0.5, 0, 10, xtol=1e-15)
        assert make_family("paretotype").quantile(0.5) == pytest.approx(p_oracle, rel=1e-12)
        assert make_family("exponential").quantile(1 - math.exp(-1)) == pytest.approx(1.0, rel=1e-14)
        assert make_family("uniform").quantile(0.3) == pytest.approx(0.3, rel=1e-15)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, float("nan")])
    def test_quantile_domain(self, bad):
        with pytest.raises(POutOfRange):
            make_family("normal").quantile(bad)

    def test_endpoint_density(self):
        assert make_family("paretotype").endpoint_density("lower") == pytest.approx(1.0)
        assert make_family("normal").endpoint_density("lower") == 0.0
        assert make_family("parabolic:b=0.75").endpoint_density("lower") == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("spec,frozen", [
        ("normal:mu=1,sigma=2", stats.norm(1, 2)),
        ("logistic", stats.logistic()),
        ("cauchy", stats.cauchy()),
        ("weibull:k=0.5,lambda=1", stats.weibull_min(0.5)),
        ("exponential:rate=1.5", stats.expon(scale=1 / 1.5)),
    ])
    def test_against_scipy(self, spec, frozen):
        d = make_family(spec)
        p = np.linspace(0.01, 0.99, 41)
        x = frozen.ppf(p)
        np.testing.assert_allclose(d.pdf(x), frozen.pdf(x), rtol=1e-12)
        np.testing.assert_allclose(d.cdf(x), p, rtol=1e-12)
        np.testing.assert_allclose(d.quantile(p), x, rtol=1e-11, atol=1e-14)


class TestParabolic:
    @pytest.mark.parametrize("b", [0.05, 0.25, 0.5, 0.75])
    def test_quantile_matches_root_finding(self, b):
        d = make_family(f"parabolic:b={b}")
        for p in (1e-9, 1e-4, 0.1, 0.37, 0.5, 0.8, 1 - 1e-7):
            x = optimize.brentq(lambda z: float(d.cdf(z)) - p, 0, 2, xtol=1e-15, rtol=1e-15)
            assert d.quantile(p) == pytest.approx(x, rel=1e-10, abs=1e-14)

    def test_normalised_and_symmetric(self):
        d = make_family("parabolic:b=0.5")
        assert integrate.quad(lambda x: float(d.pdf(x)), 0, 2)[0] == pytest.approx(1.0, abs=1e-13)
        x = np.linspace(0.01, 0.99, 17)
        np.testing.assert_allclose(d.pdf(x), d.pdf(2 - x), rtol=1e-14)
        assert d.mono.mode == 1.0 and d.mono.symmetric


class TestWrappers:
    def test_affine(self):
        base = make_family("normal")
        a = Affine(base, 2.0, 3.0)
        ref = stats.norm(3, 2)
        x = np.linspace(-2, 8, 11)
        np.testing.assert_allclose(a.pdf(x), ref.pdf(x), rtol=1e-13)
        np.testing.assert_allclose(a.quantile(0.3), ref.ppf(0.3), rtol=1e-13)

    def test_truncated(self):
        base = make_family("parabolic:b=0.5")
        tr = Truncated(base, 0.0, 1.5)
        mass = float(base.cdf(1.5))
        assert tr.pdf(0.7) == pytest.approx(float(base.pdf(0.7)) / mass, rel=1e-14)
        assert tr.cdf(1.5) == pytest.approx(1.0)
        assert tr.mono.mode == 1.0


def test_grid_config():
    g = GridConfig()
    p = g.probabilities()
    assert p.size == 999 and p[0] == pytest.approx(1e-3) and p[-1] == pytest.approx(1 - 1e-3)
    with pytest.raises(PreconditionError):
        GridConfig(n_points=1)


def test_grid_env_override(monkeypatch):
    monkeypatch.setenv("PDFREL_GRID_N", "31")
    assert GridConfig().n_points == 31


# -- properties -------------------------------------------------------------

probs = st.floats(1e-12, 1 - 1e-12)


@given(probs)
def test_quantile_inverts_cdf(p):
    for spec in ("normal", "paretotype", "parabolic:b=0.3", "weibull:k=2,lambda=1", "cauchy"):
        d = make_family(spec)
        x = d.quantile(p)
        assert float(d.cdf(x)) == pytest.approx(p, rel=1e-9, abs=1e-15)


@given(probs)
def test_isf_is_complement(q):
    for spec in ("normal", "logistic", "parabolic:b=0.75", "exponential"):
        d = make_family(spec)
        assert float(d.sf(d.isf(q))) == pytest.approx(q, rel=1e-9, abs=1e-15)


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_cdf_monotone_and_bounded(a, b):
    lo, hi = min(a, b), max(a, b)
    for spec in ("normal", "cauchy", "laplace2:m=1", "uniform:a=-1,b=1"):
        d = make_family(spec)
        fa, fb = float(d.cdf(lo)), float(d.cdf(hi))
        assert 0.0 <= fa <= fb <= 1.0
        assert float(d.cdf(lo)) + float(d.sf(lo)) == pytest.approx(1.0, abs=1e-15)


def test_pdf_nonnegative_and_normalised(dist):
    edges = [dist.support.lower] + ([dist.mono.mode] if dist.mono.mode is not None else [])
    edges += [dist.support.upper]
    total = sum(integrate.quad(lambda x: float(dist.pdf(x)), lo, hi, limit=200)[0]
                for lo, hi in zip(edges[:-1], edges[1:]))
    assert total == pytest.approx(1.0, abs=1e-8)
    assert np.all(dist.pdf(dist.quantile(np.linspace(0.001, 0.999, 101))) >= 0)


@pytest.mark.parametrize("k", [0.1, 0.22, 5.0])
def test_extreme_weibull_shapes_validate(k):
    d = make_family(f"weibull:k={k},lambda=2.5")
    assert float(d.cdf(d.quantile(0.3))) == pytest.approx(0.3, rel=1e-12)
