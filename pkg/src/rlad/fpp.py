"""Fractional Poisson counting process N_beta(t).

``P{N(t) = n} = x**n / n! * E_beta^(n)(-x)`` with ``x = (t/gamma)**beta``.
Expanding the derivative series gives, for every ``n`` at once,

    P{N(t) = n} = sum_k (-1)**(k-n) C(k, n) x**k / Gamma(1 + beta k),

a Taylor shift of the Mittag-Leffler series by -1. The shift is evaluated as
one polynomial product in ball arithmetic, so each probability comes with a
rigorous error radius and the tail mass follows from the partial sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from flint import arb_poly
from scipy import integrate, stats
from scipy.special import gammaln

from . import _hp, mlf
from .errors import AccuracyError, DomainError, ResourceError, TruncationError
from .mlf import MlParams

METHODS = ("series-derivative", "monte-carlo", "stable-integral")
DEFAULT_TAIL = 1e-8
DEFAULT_NMAX = 20_000
DEFAULT_EVENT_CAP = 10_000_000


@dataclass(frozen=True)
class CountingLaw:
    ml: MlParams
    n_max: int = DEFAULT_NMAX
    method: str = "series-derivative"
    tail_tol: float = DEFAULT_TAIL
    mc_paths: int = 100_000
    mc_seed: int = 0

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1", "n_max")
        if self.method not in METHODS:
            raise DomainError(f"unknown counting method {self.method!r}", "method")
        if not 0 < self.tail_tol < 1:
            raise DomainError("tail_tol must lie in (0, 1)", "tail_tol")

    @property
    def beta(self) -> float:
        return self.ml.beta

    def survival(self, t):
        return mlf.survival(self.ml, t)

    def count_pmf(self, t: float) -> "CountPmf":
        """Truncated law of N(t) meeting ``tail_tol``."""
        return count_pmf(self, t)


@dataclass(frozen=True)
class CountPmf:
    """P{N(t) = n} for n = 0..n_max with a certified bound on the dropped tail."""

    t: float
    probs: np.ndarray
    radius: np.ndarray = field(repr=False)
    tail_bound: float

    @property
    def n_max(self) -> int:
        return len(self.probs) - 1


# ---------------------------------------------------------------- series route


def _start_cap(beta: float, x: float) -> int:
    mean = x * math.exp(-gammaln(1.0 + beta))
    var = max(x * x * (2.0 * math.exp(-gammaln(1.0 + 2.0 * beta)) - math.exp(-2.0 * gammaln(1.0 + beta))), 0.0)
    return int(mean + 8.0 * math.sqrt(var + mean) + 30)


def _plan(beta: float, x: float, n_cap: int, eps_log: float) -> tuple[int, float, float]:
    """Series length K, largest log-term and log tail bound for n <= n_cap."""
    logx = math.log(x)
    kmax = None
    logmax = -math.inf
    k0 = 0
    block = 4096
    while True:
        k = np.arange(k0, k0 + block, dtype=float)
        loga = _hp.log_ml_terms(beta, logx, k)
        nn = np.minimum(n_cap, np.floor(k / 2.0))
        logb = gammaln(k + 1) - gammaln(nn + 1) - gammaln(k - nn + 1) + loga
        logmax = max(logmax, float(np.max(logb)))
        # terms for the largest n, valid once k >= 2 n_cap
        logt = gammaln(k + 1) - gammaln(n_cap + 1) - gammaln(np.maximum(k - n_cap, 0) + 1) + loga
        ratio = np.diff(logt)
        ok = np.nonzero((k[1:] >= 2 * n_cap) & (logt[1:] < eps_log) & (ratio < -math.log(2.0)))[0]
        if ok.size:
            idx = int(ok[0]) + 1
            kmax = k0 + idx
            return kmax, logmax, float(logt[idx]) + math.log(2.0)
        k0 += block - 1
        if k0 > 5_000_000:
            raise ResourceError("counting-series length exceeds 5e6 terms")


def _series_table(beta: float, tau: float, n_cap: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Probabilities, radii and certified lower bound on their sum, n = 0..n_cap."""
    x = tau**beta
    kmax, logmax, logtail = _plan(beta, x, n_cap, eps_log=-80.0)
    bits = _hp.bits_for(logmax, 30)
    for _ in range(3):
        with _hp.working_precision(bits):
            b = _hp.arb_order(beta)
            xa = _hp.arb(tau) ** b
            a = _hp.ml_coefficients(beta, xa, kmax + 1)
            big_a = []
            fac = _hp.arb(1)
            for k in range(kmax + 1):
                if k:
                    fac = fac * k
                big_a.append(a[k] * fac)
            alt = []
            inv = _hp.arb(1)
            for m in range(kmax + 1):
                if m:
                    inv = inv / m
                alt.append(-inv if m % 2 else inv)
            prod = arb_poly(big_a[::-1]) * arb_poly(alt)
            tail = _hp.arb(0, math.exp(logtail))
            probs = []
            inv_fac = _hp.arb(1)
            for n in range(n_cap + 1):
                if n:
                    inv_fac = inv_fac / n
                probs.append(prod[kmax - n] * inv_fac + tail)
            total = sum(probs[1:], probs[0])
            mids = np.array([_hp.to_float(p) for p in probs])
            rads = np.array([_hp.radius(p) for p in probs])
            lower = float(total.lower())
        if np.all(rads < 1e-14):
            return mids, rads, lower
        bits *= 2
    raise AccuracyError(f"counting probabilities not certified at beta={beta}, t={tau}")


@lru_cache(maxsize=256)
def _series_pmf(beta: float, tau: float, tail_tol: float, n_limit: int) -> CountPmf:
    if tau == 0.0:
        return CountPmf(0.0, np.array([1.0]), np.array([0.0]), 0.0)
    if beta == 1.0:
        return _poisson_pmf(tau, tail_tol, n_limit)
    x = tau**beta
    if x > mlf.DERIVATIVE_MAX_T**beta * (1 + 1e-12):
        raise AccuracyError(f"t/gamma={tau:g} outside the certified window t <= {mlf.DERIVATIVE_MAX_T:g}")
    n_cap = min(_start_cap(beta, x), n_limit)
    while True:
        mids, rads, _ = _series_table(beta, tau, n_cap)
        lower = np.cumsum(mids - rads)
        hit = np.nonzero(1.0 - lower <= tail_tol)[0]
        if hit.size:
            n = int(hit[0])
            probs = np.clip(mids[: n + 1], 0.0, 1.0)
            return CountPmf(tau, probs, rads[: n + 1], float(1.0 - lower[n]))
        if n_cap >= n_limit:
            raise TruncationError(f"tail mass above {tail_tol:g} at n_max={n_limit} (t/gamma={tau:g})")
        n_cap = min(2 * n_cap, n_limit)


def _poisson_pmf(tau: float, tail_tol: float, n_limit: int) -> CountPmf:
    n_hi = int(tau + 12.0 * math.sqrt(tau) + 40)
    ns = np.arange(n_hi + 1)
    sf = stats.poisson.sf(ns, tau)
    hit = np.nonzero(sf <= tail_tol * 0.5)[0]
    n = int(hit[0])
    if n > n_limit:
        raise TruncationError(f"tail mass above {tail_tol:g} at n_max={n_limit} (t={tau:g})")
    probs = stats.poisson.pmf(ns[: n + 1], tau)
    rad = 1e-14 * probs + 1e-300
    return CountPmf(tau, probs, rad, float(sf[n] + rad.sum()))


# ------------------------------------------------------------- public surface


def count_pmf(law: CountingLaw, t: float) -> CountPmf:
    if t < 0 or math.isnan(t):
        raise DomainError(f"t must be >= 0, got {t}", "t")
    tau = float(t) / law.ml.gamma
    if law.method == "series-derivative":
        out = _series_pmf(law.beta, tau, law.tail_tol, law.n_max)
        return CountPmf(float(t), out.probs, out.radius, out.tail_bound)
    if law.method == "monte-carlo":
        rng = np.random.default_rng(law.mc_seed)
        counts = count_samples(law, float(t), law.mc_paths, rng)
        probs = np.bincount(counts, minlength=1) / counts.size
        if probs.size - 1 > law.n_max:
            raise TruncationError("Monte Carlo count exceeded n_max")
        se = np.sqrt(probs * (1 - probs) / counts.size)
        return CountPmf(float(t), probs, se, 0.0)
    # stable-integral: series fixes the truncation point, integral gives values
    ref = _series_pmf(law.beta, tau, law.tail_tol, law.n_max)
    probs = np.array([pmf_stable_integral(law.beta, tau, n) if n else mlf.survival(MlParams(law.beta), tau)
                      for n in range(ref.n_max + 1)])
    return CountPmf(float(t), probs, np.full(probs.shape, 1e-6), ref.tail_bound)


def pmf(law: CountingLaw, t: float, n: int) -> float:
    """P{N(t) = n}."""
    n = int(n)
    if n < 0:
        raise DomainError("n must be non-negative", "n")
    if n > law.n_max:
        raise DomainError(f"n={n} exceeds n_max={law.n_max}", "n")
    if law.method == "stable-integral" and n > 0:
        return pmf_stable_integral(law.beta, float(t) / law.ml.gamma, n)
    table = count_pmf(law, t)
    if n <= table.n_max:
        return float(table.probs[n])
    if law.method != "series-derivative":
        return 0.0
    # beyond the tail cut: extend the table far enough to reach n
    tau = float(t) / law.ml.gamma
    if law.beta == 1.0:
        return float(stats.poisson.pmf(n, tau))
    mids, rads, _ = _series_table(law.beta, tau, n)
    if rads[n] > 1e-8:
        raise AccuracyError(f"P{{N={n}}} not certified to 1e-8")
    return float(np.clip(mids[n], 0.0, 1.0))


def tail_bound(law: CountingLaw, t: float) -> float:
    return count_pmf(law, t).tail_bound


def truncation(law: CountingLaw, t: float) -> int:
    return count_pmf(law, t).n_max


def pgf(law: CountingLaw, z: float, t: float) -> float:
    """E z**N(t) = E_beta((z - 1) (t/gamma)**beta)."""
    if not -1.0 <= z <= 1.0:
        raise DomainError(f"z must lie in [-1, 1], got {z}", "z")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}", "t")
    return float(mlf.eval_mlf(law.beta, (z - 1.0) * (t / law.ml.gamma) ** law.beta))


# ------------------------------------------------------------------ sampling


def sample_path(law: CountingLaw, horizon: float, rng: np.random.Generator, cap: int = DEFAULT_EVENT_CAP) -> np.ndarray:
    """Event times S_1 < S_2 < ... <= horizon of one renewal path."""
    if not horizon > 0:
        raise DomainError("horizon must be positive", "horizon")
    chunks = []
    clock = 0.0
    count = 0
    block = 64
    while True:
        gaps = mlf.sample(law.ml, rng, size=block)
        times = clock + np.cumsum(gaps)
        inside = times[times <= horizon]
        chunks.append(inside)
        count += inside.size
        if count > cap:
            raise ResourceError(f"event count exceeded cap {cap}")
        if inside.size < block:
            break
        clock = times[-1]
        block = min(block * 2, 1 << 16)
    return np.concatenate(chunks)


def count_samples(law: CountingLaw, t: float, paths: int, rng: np.random.Generator) -> np.ndarray:
    """N(t) for ``paths`` independent renewal paths (vectorised)."""
    clock = np.zeros(paths)
    counts = np.zeros(paths, dtype=np.int64)
    active = np.arange(paths)
    while active.size:
        clock[active] += mlf.sample(law.ml, rng, size=active.size)
        hit = clock[active] <= t
        counts[active[hit]] += 1
        active = active[hit]
    return counts


# ---------------------------------------------------- stable-integral route

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(256)


def stable_cdf(beta: float, x):
    """CDF of the positive stable law with Laplace transform exp(-s**beta).

    Uses the Zolotarev/Kanter representation
    P{S <= x} = (1/pi) int_0^pi exp(-A(phi) x**(-beta/(1-beta))) dphi.
    """
    mlf.check_order(beta, allow_one=False)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    phi = 0.5 * math.pi * (_GL_NODES + 1.0)
    w = 0.5 * math.pi * _GL_WEIGHTS
    c = 1.0 - beta
    loga = (beta * np.log(np.sin(beta * phi)) + c * np.log(np.sin(c * phi)) - np.log(np.sin(phi))) / c
    out = np.zeros_like(x)
    pos = x > 0
    with np.errstate(over="ignore", divide="ignore"):
        logy = -beta / c * np.log(x[pos])
        expo = np.exp(loga[None, :] + logy[:, None])
    out[pos] = (np.exp(-expo) @ w) / math.pi
    return out


def pmf_stable_integral(beta: float, t: float, n: int) -> float:
    """P{N(t) = n}, n >= 1, from the integral over the stable CDF (gamma = 1)."""
    mlf.check_order(beta)
    n = int(n)
    if n < 1:
        raise DomainError("stable-integral route needs n >= 1", "n")
    if beta < 0.05:
        raise AccuracyError("stable CDF evaluator validated for beta >= 0.05 only")

    def weight(u):
        return (1.0 - u / n) * np.exp((n - 1) * np.log(u) - u - gammaln(n))

    hi = n + 40.0 * math.sqrt(n) + 60.0
    if beta == 1.0:
        # degenerate stable variable: F(t; u) = 1{u <= t}
        val, err = integrate.quad(weight, 0.0, min(t, hi), epsabs=1e-13, limit=200)
    else:
        def integrand(u):
            return stable_cdf(beta, t * u ** (-1.0 / beta))[0] * weight(u)

        pts = [p for p in (float(n),) if p < hi]
        val, err = integrate.quad(integrand, 0.0, hi, points=pts, epsabs=1e-12, epsrel=1e-10, limit=400)
    if err > 1e-7:
        raise AccuracyError(f"stable-integral quadrature error {err:.1e}")
    return float(min(max(val, 0.0), 1.0))
