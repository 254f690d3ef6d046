"""Transient law of the subordinated chain X(t) = X_{N(t)}.

The solver conditions on the number of renewal events:

    p_ij(t) = sum_{n >= 0} P{N(t) = n} (Q**n)_ij,

which is exact for any finite stochastic matrix and any renewal counting
process independent of the chain. The fractional forward equations are
only used to check the result (``caputo_residual``).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np
from scipy.special import gamma as gamma_fn

from . import chain as chainmod
from . import fpp, mlf
from .errors import AccuracyError, DomainError
from .fpp import CountPmf, CountingLaw
from .mlf import MlParams


class RenewalLaw(Protocol):
    """Anything exposing a waiting-time survival function and the law of N(t)."""

    tail_tol: float

    def survival(self, t): ...

    def count_pmf(self, t: float) -> CountPmf: ...


@dataclass(frozen=True)
class ExponentialCounting:
    """Poisson counting process: exponential waiting times with the given mean."""

    mean: float = 1.0
    tail_tol: float = fpp.DEFAULT_TAIL
    n_max: int = 1_000_000

    def __post_init__(self):
        if not self.mean > 0:
            raise DomainError("mean waiting time must be positive", "mean")

    def survival(self, t):
        return np.exp(-np.asarray(t, dtype=float) / self.mean)

    def count_pmf(self, t: float) -> CountPmf:
        out = fpp._poisson_pmf(float(t) / self.mean, self.tail_tol, self.n_max)
        return CountPmf(float(t), out.probs, out.radius, out.tail_bound)


@dataclass(frozen=True)
class SemiMarkovSpec:
    chain: np.ndarray
    counting: RenewalLaw

    def __post_init__(self):
        q = np.asarray(self.chain, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise DomainError("chain must be a square matrix", "chain")
        if np.any(q < 0) or np.max(np.abs(q.sum(axis=1) - 1.0)) > 1e-12:
            raise DomainError("chain must be row-stochastic", "chain")
        object.__setattr__(self, "chain", q)

    @property
    def size(self) -> int:
        return self.chain.shape[0]

    @classmethod
    def rlad(cls, p: chainmod.ChainParams, ml: MlParams, **law_kw) -> "SemiMarkovSpec":
        return cls(chainmod.build_q(p), CountingLaw(ml, **law_kw))

    def with_tail(self, tail_tol: float) -> "SemiMarkovSpec":
        return SemiMarkovSpec(self.chain, dataclasses.replace(self.counting, tail_tol=tail_tol))


@dataclass(frozen=True)
class TransientSolution:
    i: int
    times: np.ndarray
    probs: np.ndarray
    truncation_error: np.ndarray

    def at(self, t: float) -> np.ndarray:
        idx = np.nonzero(self.times == t)[0]
        if not idx.size:
            raise KeyError(t)
        return self.probs[idx[0]]


def transient_pmf(spec: SemiMarkovSpec, i: int, times: Sequence[float]) -> TransientSolution:
    """p_{i, .}(t) for each requested time."""
    if not 0 <= i < spec.size:
        raise DomainError(f"initial state {i} outside 0..{spec.size - 1}", "i")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise DomainError("times must be one-dimensional", "times")
    if np.any(times < 0):
        raise DomainError("times must be non-negative", "times")
    laws = [spec.counting.count_pmf(float(t)) for t in times]
    n_top = max((c.n_max for c in laws), default=0)
    rows = chainmod.row_powers(spec.chain, i, n_top)
    probs = np.empty((times.size, spec.size))
    err = np.empty(times.size)
    for k, c in enumerate(laws):
        probs[k] = c.probs @ rows[: c.n_max + 1]
        err[k] = c.tail_bound
    return TransientSolution(int(i), times, probs, err)


def expected_links(spec: SemiMarkovSpec, i: int, times: Sequence[float]) -> np.ndarray:
    """E[X(t) | X(0) = i] from the series, with the tail tightened so the
    dropped mass moves the mean by less than 1e-8."""
    M = spec.size - 1
    tight = min(spec.counting.tail_tol, 1e-8 / max(M, 1))
    sol = transient_pmf(spec.with_tail(tight), i, times)
    return sol.probs @ np.arange(spec.size)


def expected_links_closed_form(p: chainmod.ChainParams, ml: MlParams, i: int, times: Sequence[float]) -> np.ndarray:
    """M/2 + (i - M/2) E_beta(-(2(1-alpha)/M) (t/gamma)**beta).

    The mean deviation from M/2 shrinks by 1 - 2(1-alpha)/M per event, so the
    mean is one value of the probability generating function of N(t).
    """
    M = p.M
    lam = 1.0 - 2.0 * (1.0 - p.alpha) / M
    law = CountingLaw(ml)
    return np.array([M / 2 + (i - M / 2) * fpp.pgf(law, lam, float(t)) for t in times])


def expected_links_spectral(spec: SemiMarkovSpec, i: int, times: Sequence[float], pi: np.ndarray | None = None) -> np.ndarray:
    """e_i V diag(G(lambda_k; t)) V^-1 v: a combination of PGF values."""
    if not isinstance(spec.counting, CountingLaw):
        raise DomainError("spectral route needs a Mittag-Leffler counting law", "counting")
    lam, v, vinv = chainmod.spectral(spec.chain, pi)
    lam = np.clip(lam, -1.0, 1.0)
    states = np.arange(spec.size, dtype=float)
    left = v[i]
    right = vinv @ states
    out = []
    for t in times:
        g = np.array([fpp.pgf(spec.counting, float(z), float(t)) for z in lam])
        out.append(float(left @ (g * right)))
    return np.array(out)


def tv_distance(pvec, qvec) -> float:
    """sup_k |p_k - q_k|."""
    p = np.asarray(pvec, dtype=float)
    q = np.asarray(qvec, dtype=float)
    if p.shape != q.shape:
        raise DomainError(f"dimension mismatch {p.shape} vs {q.shape}", "qvec")
    return float(np.max(np.abs(p - q))) if p.size else 0.0


def equilibration_time(sol: TransientSolution, target: np.ndarray, eps: float) -> float | None:
    """First grid time at which the distance to ``target`` drops below eps."""
    for t, row in zip(sol.times, sol.probs):
        if tv_distance(row, target) < eps:
            return float(t)
    return None


def relaxation_survival(law: RenewalLaw, times: Sequence[float]) -> np.ndarray:
    """p_AA(t) for the two-state chain A -> B with B absorbing."""
    q = np.array([[0.0, 1.0], [0.0, 1.0]])
    sol = transient_pmf(SemiMarkovSpec(q, law), 0, times)
    return sol.probs[:, 0]


# ------------------------------------------------------- Caputo verification


def l1_weights(beta: float, count: int) -> np.ndarray:
    """b_l = (l+1)**(1-beta) - l**(1-beta)."""
    l = np.arange(count, dtype=float)
    b = (l + 1.0) ** (1.0 - beta) - l ** (1.0 - beta)
    if count:
        b[0] = 1.0  # 0**0 would cancel it at beta = 1
    return b


def caputo_l1(values: np.ndarray, h: float, beta: float) -> np.ndarray:
    """L1 approximation of the Caputo derivative on a uniform grid t_k = k h.

    ``values`` has the time axis first; the row for t_0 = 0 is set to NaN.
    """
    values = np.asarray(values, dtype=float)
    incr = np.diff(values, axis=0)
    b = l1_weights(beta, incr.shape[0])
    scale = h ** (-beta) / gamma_fn(2.0 - beta)
    out = np.full(values.shape, np.nan)
    if values.ndim == 1:
        out[1:] = scale * np.convolve(b, incr)[: incr.shape[0]]
    else:
        for col in range(values.shape[1]):
            out[1:, col] = scale * np.convolve(b, incr[:, col])[: incr.shape[0]]
    return out


def forward_rhs(probs: np.ndarray, q: np.ndarray, ml: MlParams) -> np.ndarray:
    """gamma**(-beta) (p Q - p): right-hand side of the fractional forward equations."""
    return ml.gamma ** (-ml.beta) * (probs @ q - probs)


def caputo_residual(
    sol: TransientSolution,
    p: chainmod.ChainParams | np.ndarray,
    ml: MlParams,
    j: int | None = None,
    t_min: float | None = None,
    tol: float | None = None,
) -> float:
    """max |D^beta p_ij - RHS_j| over the grid points with t >= t_min.

    ``sol.times`` must be the uniform grid 0, h, 2h, ...; by default the
    check starts at the first positive grid point.
    """
    times = sol.times
    if times.size < 3 or times[0] != 0.0:
        raise DomainError("residual needs a uniform grid starting at t = 0", "times")
    h = times[1] - times[0]
    if np.max(np.abs(np.diff(times) - h)) > 1e-9 * max(h, 1.0):
        raise DomainError("residual needs a uniform grid", "times")
    q = chainmod.build_q(p) if isinstance(p, chainmod.ChainParams) else np.asarray(p)
    lhs = caputo_l1(sol.probs, h, ml.beta)
    rhs = forward_rhs(sol.probs, q, ml)
    res = np.abs(lhs - rhs)[1:]
    mask = times[1:] >= (t_min if t_min is not None else times[1])
    res = res[mask]
    if j is not None:
        res = res[:, j]
    value = float(np.max(res))
    if tol is not None and value > tol:
        raise AccuracyError(f"grid too coarse: Caputo residual {value:.3e} exceeds {tol:.1e} at h={h:g}")
    return value


def residual_study(
    p: chainmod.ChainParams | np.ndarray,
    ml: MlParams,
    i: int,
    horizon: float,
    steps: Sequence[int],
    j: int | None = None,
    t_min: float | None = None,
    tail_tol: float = 1e-13,
) -> dict:
    """Residuals on successively refined grids plus the fitted convergence order."""
    q = chainmod.build_q(p) if isinstance(p, chainmod.ChainParams) else np.asarray(p)
    spec = SemiMarkovSpec(q, CountingLaw(ml, tail_tol=tail_tol))
    hs, res = [], []
    for k in steps:
        grid = np.linspace(0.0, horizon, int(k) + 1)
        sol = transient_pmf(spec, i, grid)
        hs.append(horizon / k)
        res.append(caputo_residual(sol, q, ml, j=j, t_min=t_min))
    hs, res = np.array(hs), np.array(res)
    slope = np.polyfit(np.log(hs), np.log(res), 1)[0]
    pairwise = np.log(res[:-1] / res[1:]) / np.log(hs[:-1] / hs[1:])
    return {"h": hs, "residual": res, "order": float(slope), "pairwise_order": pairwise}


def kolmogorov_generator(q: np.ndarray, mean_wait: float = 1.0) -> np.ndarray:
    """Generator (Q - I)/mean of the Markovian (beta = 1) chain."""
    return (q - np.eye(q.shape[0])) / mean_wait
