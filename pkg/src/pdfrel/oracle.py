"""Monte Carlo oracle: inverse-transform sampling and Kolmogorov-Smirnov checks.

Generator
    NumPy ``PCG64`` (128-bit state, period ``2**128``).  A root
    ``SeedSequence(seed)`` is spawned into one child stream per chunk of
    ``CHUNK`` draws, so a batch depends only on ``(seed, n)`` and never on
    how chunks are distributed across shards.
Uniforms
    ``(k + 0.5) / 2**53`` with ``k`` uniform on ``{0, ..., 2**53 - 1}``,
    which never hits 0 or 1.  Draws above 1/2 are mapped through ``isf`` of
    ``1 - u`` (exact in floating point) to keep the upper tail accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import PreconditionViolated
from .info import ic_cdf
from .pdf_related import k_clipped
from .residual import ResidualLife, gbar_clipped, kt_clipped

CHUNK = 1 << 18
KS_COEFF = 1.63  # 1% critical value of the Kolmogorov distribution
LAWS = ("X", "K", "Kt", "Gt", "L")


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    n: int
    seed: int
    source: str
    transform: str = "X"


def uniforms(n, seed, shards=1):
    """``n`` open-interval uniforms; identical for any ``shards >= 1``."""
    if n < 1:
        raise PreconditionViolated("n must be >= 1", precondition="n")
    n_chunks = -(-n // CHUNK)
    children = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    sizes = [min(CHUNK, n - i * CHUNK) for i in range(n_chunks)]
    bounds = np.linspace(0, n_chunks, max(1, min(shards, n_chunks)) + 1).astype(int)
    parts = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        for i in range(lo, hi):
            gen = np.random.Generator(np.random.PCG64(children[i]))
            k = gen.integers(0, 1 << 53, size=sizes[i], dtype=np.int64)
            parts.append((k + 0.5) / float(1 << 53))
    return np.concatenate(parts)


def _inverse_transform(law, u):
    upper = u > 0.5
    out = np.empty_like(u)
    out[~upper] = law.quantile(u[~upper])
    out[upper] = law.isf(1.0 - u[upper])
    return out


def sample(d, n, seed, shards=1):
    """Inverse-transform draws from ``d``."""
    u = uniforms(n, seed, shards)
    return SampleBatch(_inverse_transform(d, u), int(n), int(seed), d.spec_string())


def law_sample(d, law, n, seed, t=None):
    """Samples of one of the derived variables.

    ``K``: ``f(X)``; ``Kt``: ``f_t(X_t)``; ``Gt``: ``f(t + X_t)``;
    ``L``: ``-log f(X)``; ``X``: ``X`` itself.
    """
    if law not in LAWS:
        raise PreconditionViolated(f"unknown law {law!r}", precondition="law")
    if law in ("Kt", "Gt"):
        if t is None:
            raise PreconditionViolated(f"law {law} needs an age t", precondition="t")
        r = ResidualLife(d, t)
        xt = _inverse_transform(r, uniforms(n, seed))
        vals = r.pdf(xt) if law == "Kt" else d.pdf(t + xt)
        return SampleBatch(vals, int(n), int(seed), d.spec_string(), law)
    batch = sample(d, n, seed)
    if law == "X":
        return batch
    vals = d.pdf(batch.values)
    if law == "L":
        with np.errstate(divide="ignore"):
            vals = -np.log(vals)
    return SampleBatch(vals, int(n), int(seed), d.spec_string(), law)


def analytic_cdf(d, law, t=None):
    """The closed-form cdf matching :func:`law_sample`."""
    if law == "X":
        return d.cdf
    if law == "K":
        return lambda y: k_clipped(d, y)
    if law == "Kt":
        return lambda y: kt_clipped(d, t, y)
    if law == "Gt":
        return lambda y: 1.0 - gbar_clipped(d, t, y)
    if law == "L":
        return lambda x: ic_cdf(d, x)
    raise PreconditionViolated(f"unknown law {law!r}", precondition="law")


def ks_distance(batch, cdf):
    """Sup distance between the empirical cdf of ``batch`` and ``cdf``."""
    vals = np.asarray(batch.values if isinstance(batch, SampleBatch) else batch, dtype=float)
    return float(stats.kstest(vals, lambda v: np.asarray(cdf(v), dtype=float)).statistic)


def ks_band(n):
    return KS_COEFF / math.sqrt(n)


def oracle_check(d, law="K", n=1_000_000, seed=42, t=None):
    batch = law_sample(d, law, n, seed, t)
    ks = ks_distance(batch, analytic_cdf(d, law, t))
    band = ks_band(n)
    return {"law": law, "dist": d.spec_string(), "t": t, "n": int(n), "seed": int(seed),
            "ks": ks, "band": band, "pass": bool(ks <= band)}


def mc_information(d, n=1_000_000, seed=7):
    """Sample mean and variance of ``-log f(X)`` with their standard errors."""
    ic = law_sample(d, "L", n, seed).values
    mean = float(ic.mean())
    var = float(ic.var(ddof=1))
    centred = (ic - mean) ** 2
    return {
        "entropy": mean,
        "entropy_se": math.sqrt(var / n),
        "varentropy": var,
        "varentropy_se": float(centred.std(ddof=1) / math.sqrt(n)),
    }
