"""Mittag-Leffler function on the negative real axis and the Mittag-Leffler law.

The waiting-time law has survival ``E_beta(-(t/gamma)**beta)``. Three
double-precision regimes are used for ``E_beta(-x)``:

* the power series while ``x**(1/beta)`` is small (no cancellation),
* quadrature of the exponential-mixture representation otherwise,
* the algebraic asymptotic expansion for very large ``x``.

Derivatives of ``E_beta`` are evaluated from the term-wise differentiated
series in ball arithmetic, with a certified truncation bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln, rgamma

from . import _hp
from .errors import AccuracyError, DomainError

# crossover points, validated against a 60-digit series in tests/test_mlf.py
SERIES_MAX_T = 3.0
ASYMPTOTIC_MIN_X = 1.0e5
ASYMPTOTIC_TERMS = 5
QUAD_TOL = 1.0e-12

# certified window for derivatives
DERIVATIVE_MAX_ORDER = 2000
DERIVATIVE_MAX_T = 2000.0


@dataclass(frozen=True)
class MlParams:
    """Order ``beta`` in (0, 1] and time scale ``gamma`` > 0."""

    beta: float
    gamma: float = 1.0

    def __post_init__(self):
        check_order(self.beta)
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be positive and finite, got {self.gamma}", "gamma")


def check_order(beta: float, allow_one: bool = True) -> None:
    ok = 0.0 < beta <= 1.0 if allow_one else 0.0 < beta < 1.0
    if not ok or not math.isfinite(beta):
        interval = "(0, 1]" if allow_one else "(0, 1)"
        raise DomainError(f"beta must lie in {interval}, got {beta}", "beta")


def _series(beta: float, t: float) -> float:
    # E_beta(-t**beta) = sum_k (-1)**k t**(beta k) / Gamma(1 + beta k)
    x = t**beta
    total = 0.0
    k = 0
    term = 1.0
    while True:
        term = (-x) ** k * rgamma(1.0 + beta * k) if k else 1.0
        total += term
        if k > 2 and abs(term) < 1e-18 * max(abs(total), 1e-300):
            break
        k += 1
        if k > 400:
            raise AccuracyError(f"series did not converge at beta={beta}, t={t}")
    return total


def _density_series(beta: float, t: float) -> float:
    # t**(beta-1) E_{beta,beta}(-t**beta)
    x = t**beta
    total = 0.0
    k = 0
    while True:
        term = (-x) ** k * rgamma(beta * (k + 1))
        total += term
        if k > 2 and abs(term) < 1e-18 * max(abs(total), 1e-300):
            break
        k += 1
        if k > 400:
            raise AccuracyError(f"density series did not converge at beta={beta}, t={t}")
    return total * t ** (beta - 1.0)


def _asymptotic(beta: float, x: float) -> float:
    # E_beta(-x) ~ sum_{k>=1} (-1)**(k+1) x**(-k) / Gamma(1 - beta k)
    return sum((-1) ** (k + 1) * x ** (-k) * rgamma(1.0 - beta * k) for k in range(1, ASYMPTOTIC_TERMS + 1))


def _density_asymptotic(beta: float, t: float) -> float:
    return sum(
        (-1) ** (k + 1) * beta * k * t ** (-beta * k - 1.0) * rgamma(1.0 - beta * k)
        for k in range(1, ASYMPTOTIC_TERMS + 1)
    )


def _mixture_weight(beta: float, y: np.ndarray | float) -> np.ndarray | float:
    # r K_beta(r) at r = exp(y)
    s = np.exp(beta * y)
    return math.sin(beta * math.pi) / math.pi * s / (s * s + 2.0 * s * math.cos(beta * math.pi) + 1.0)


def _mixture_limits(beta: float, t: float) -> tuple[float, float]:
    # left tail bounded by sin(beta pi) s / (0.8 pi beta) for s <= 0.1
    lo = (math.log(1e-18 * 0.8 * math.pi * beta / math.sin(beta * math.pi))) / beta
    lo = min(lo, math.log(0.1) / beta)
    # right tail bounded through exp(-t r) <= exp(-45)
    hi = math.log(45.0 / t)
    return lo, hi


def _quad(fun, lo: float, hi: float, what: str) -> float:
    points = [p for p in (0.0,) if lo < p < hi]
    value, err = integrate.quad(fun, lo, hi, points=points or None, epsabs=1e-15, epsrel=1e-13, limit=500)
    if not err <= QUAD_TOL:
        raise AccuracyError(f"{what}: quadrature error estimate {err:.2e} exceeds {QUAD_TOL:.0e}")
    return value


def _mixture(beta: float, t: float) -> float:
    lo, hi = _mixture_limits(beta, t)
    return _quad(lambda y: _mixture_weight(beta, y) * math.exp(-t * math.exp(y)), lo, hi, "mixture")


def _density_mixture(beta: float, t: float) -> float:
    lo, hi = _mixture_limits(beta, t)
    return _quad(
        lambda y: math.exp(y) * _mixture_weight(beta, y) * math.exp(-t * math.exp(y)), lo, hi, "density mixture"
    )


def _ml_neg_time(beta: float, t: float) -> float:
    """``E_beta(-t**beta)`` for scalar ``t >= 0``."""
    if t == 0.0:
        return 1.0
    if beta == 1.0:
        return math.exp(-t)
    if math.isinf(t):
        return 0.0
    if t <= SERIES_MAX_T:
        return _series(beta, t)
    x = t**beta
    if x >= ASYMPTOTIC_MIN_X:
        return _asymptotic(beta, x)
    return _mixture(beta, t)


def _vectorize(fun, arg):
    arr = np.asarray(arg, dtype=float)
    if arr.ndim == 0:
        return fun(float(arr))
    return np.array([fun(float(v)) for v in arr.ravel()]).reshape(arr.shape)


def eval_mlf(beta: float, z):
    """Mittag-Leffler function ``E_beta(z)`` for real ``z <= 0``.

    Accepts scalars or arrays; absolute accuracy is 1e-10 or better.
    """
    check_order(beta)

    def one(v: float) -> float:
        if v > 0 or math.isnan(v):
            raise DomainError(f"z must be <= 0, got {v}", "z")
        return _ml_neg_time(beta, (-v) ** (1.0 / beta))

    return _vectorize(one, z)


def survival(p: MlParams, t):
    """P{T > t} = E_beta(-(t/gamma)**beta)."""

    def one(v: float) -> float:
        if v < 0 or math.isnan(v):
            raise DomainError(f"t must be >= 0, got {v}", "t")
        return _ml_neg_time(p.beta, v / p.gamma)

    return _vectorize(one, t)


def cdf(p: MlParams, t):
    return 1.0 - survival(p, t)


def density(p: MlParams, t):
    """Probability density -d/dt survival(p, t)."""
    beta, g = p.beta, p.gamma

    def one(v: float) -> float:
        if not v > 0:
            if beta == 1.0 and v == 0.0:
                return 1.0 / g
            raise DomainError(f"density requires t > 0, got {v}", "t")
        u = v / g
        if beta == 1.0:
            return math.exp(-u) / g
        if u <= SERIES_MAX_T:
            val = _density_series(beta, u)
        elif u**beta >= ASYMPTOTIC_MIN_X:
            val = _density_asymptotic(beta, u)
        else:
            val = _density_mixture(beta, u)
        return val / g

    return _vectorize(one, t)


def mixture_kernel(beta: float, r):
    """Spectral density K_beta(r) of the exponential-mixture representation."""
    check_order(beta, allow_one=False)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("mixture kernel requires r > 0", "r")
    rb = r**beta
    out = (
        r ** (beta - 1.0) * math.sin(beta * math.pi) / math.pi / (rb * rb + 2.0 * rb * math.cos(beta * math.pi) + 1.0)
    )
    return float(out) if out.ndim == 0 else out


def sample(p: MlParams, rng: np.random.Generator, size=None):
    """Mittag-Leffler variates by the Kozubowski transformation.

    T = -gamma ln U (sin(beta pi) / tan(beta pi V) - cos(beta pi))**(1/beta)
    """
    n = 1 if size is None else int(np.prod(size))
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = n - filled
        u = 1.0 - rng.random(m)
        e = -np.log(u)
        if p.beta == 1.0:
            t = p.gamma * e
        else:
            bp = p.beta * math.pi
            v = 1.0 - rng.random(m)
            w = math.sin(bp) / np.tan(bp * v) - math.cos(bp)
            with np.errstate(invalid="ignore", divide="ignore"):
                t = p.gamma * e * w ** (1.0 / p.beta)
        good = t[(t > 0) & np.isfinite(t)]
        out[filled : filled + good.size] = good
        filled += good.size
    if size is None:
        return float(out[0])
    return out.reshape(size)


def derivative_terms(beta: float, n: int, x: float, digits: float) -> tuple[int, float, float]:
    """Truncation index, log of the largest term and log of the tail bound.

    Terms of the n-th derivative series at z = -x are
    (m+n)!/m! x**m / Gamma(1 + beta (m+n)).
    """
    logx = math.log(x) if x > 0 else -math.inf
    logmax = -math.inf
    m = 0
    block = 256
    while True:
        ms = np.arange(m, m + block, dtype=float)
        logt = gammaln(ms + n + 1) - gammaln(ms + 1) - gammaln(1.0 + beta * (ms + n))
        if x > 0:
            logt = logt + ms * logx
        else:
            logt = np.where(ms == 0, logt, -np.inf)
        logmax = max(logmax, float(np.max(logt)))
        ratio = np.diff(logt)
        cut = logmax - digits * math.log(10.0) - 40.0
        ok = np.nonzero((logt[1:] < cut) & (ratio < -math.log(2.0)))[0]
        if ok.size:
            idx = int(ok[0]) + 1
            # geometric tail with ratio <= 1/2 after idx
            return m + idx, logmax, float(logt[idx]) + math.log(2.0)
        m += block
        if m > 10_000_000:
            raise AccuracyError("derivative series truncation not found")


def mlf_derivative(beta: float, n: int, z: float, prec: int = 200) -> float:
    """n-th derivative of ``E_beta`` at real ``z <= 0``, relative error <= 1e-8."""
    check_order(beta)
    n = int(n)
    if n < 0:
        raise DomainError("derivative order must be non-negative", "n")
    if z > 0:
        raise DomainError(f"z must be <= 0, got {z}", "z")
    if beta == 1.0:
        return math.exp(z)
    x = -float(z)
    if n > DERIVATIVE_MAX_ORDER or x > DERIVATIVE_MAX_T**beta:
        raise AccuracyError(
            f"(n={n}, |z|={x:g}) outside the certified window n <= {DERIVATIVE_MAX_ORDER}, "
            f"|z| <= {DERIVATIVE_MAX_T:g}**beta"
        )
    if x == 0.0:
        # E^(n)(0) = n! / Gamma(1 + beta n)
        with _hp.working_precision(max(prec, 64)):
            return _hp.to_float(_hp.arb(n).fac() / (1 + _hp.arb_order(beta) * n).gamma())
    digits = 12.0
    mmax, logmax, logtail = derivative_terms(beta, n, x, digits)
    bits = max(prec, _hp.bits_for(logmax, digits + 8))
    for _ in range(4):
        with _hp.working_precision(bits):
            xa = _hp.arb(x)
            coef = _hp.ml_coefficients(beta, xa, n + mmax + 1)
            # T_m = (-1)**m (m+n)!/m! a_{m+n} / x**n
            total = _hp.arb(0)
            falling = _hp.arb(n).fac()
            for m in range(mmax + 1):
                if m:
                    falling = falling * (m + n) / m
                term = falling * coef[m + n]
                total = total - term if m % 2 else total + term
            value = total / xa**n
            value = value + _hp.arb(0, math.exp(logtail))
            mid, rad = _hp.to_float(value), _hp.radius(value)
        if mid > 0 and rad <= 1e-9 * mid:
            return mid
        bits *= 2
    raise AccuracyError(f"could not certify E_beta^({n})({z}) to 1e-8 relative")
