"""Generalised Pareto waiting times and their matching to a scaled Mittag-Leffler law."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from . import mlf
from .errors import DomainError
from .mlf import MlParams

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ParetoParams:
    """Density (delta - 1) / (1 + t)**delta on t > 0."""

    delta: float

    def __post_init__(self):
        if not 1.0 < self.delta < 2.0:
            raise DomainError(f"delta must lie in (1, 2), got {self.delta}", "delta")

    @property
    def beta(self) -> float:
        return self.delta - 1.0


@dataclass(frozen=True)
class MatchSpec:
    ml: MlParams
    pareto: ParetoParams
    horizon: float
    grid: np.ndarray = field(repr=False)
    discrepancy: float
    log_discrepancy: float

    def summary(self) -> dict:
        return {
            "beta": self.ml.beta,
            "gamma": self.ml.gamma,
            "delta": self.pareto.delta,
            "horizon": self.horizon,
            "grid_min": float(self.grid[0]),
            "grid_max": float(self.grid[-1]),
            "grid_size": int(self.grid.size),
            "discrepancy": self.discrepancy,
            "log_discrepancy": self.log_discrepancy,
        }


def pareto_survival(p: ParetoParams, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0", "t")
    out = (1.0 + t) ** (1.0 - p.delta)
    return float(out) if out.ndim == 0 else out


def pareto_density(p: ParetoParams, t):
    t = np.asarray(t, dtype=float)
    out = (p.delta - 1.0) / (1.0 + t) ** p.delta
    return float(out) if out.ndim == 0 else out


def pareto_sample(p: ParetoParams, rng: np.random.Generator, size=None):
    """Inverse-CDF draws T = U**(-1/(delta-1)) - 1, resampling exact zeros."""
    n = 1 if size is None else int(np.prod(size))
    out = np.empty(n)
    filled = 0
    while filled < n:
        u = 1.0 - rng.random(n - filled)
        t = u ** (-1.0 / (p.delta - 1.0)) - 1.0
        good = t[t > 0]
        out[filled : filled + good.size] = good
        filled += good.size
    return float(out[0]) if size is None else out.reshape(size)


def initial_gamma(beta: float) -> float:
    """Scale that equates the power-law tails: (pi / (sin(beta pi) Gamma(beta)))**(1/beta)."""
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta}", "beta")
    return (math.pi / (math.sin(beta * math.pi) * gamma_fn(beta))) ** (1.0 / beta)


def match_grid(horizon: float, gridsize: int) -> np.ndarray:
    return np.logspace(math.log10(horizon / 1e3), math.log10(horizon), int(gridsize))


def match_quality(ml: MlParams, p: ParetoParams, horizon: float, gridsize: int = 200) -> MatchSpec:
    if abs(ml.beta - p.beta) > 1e-12:
        raise DomainError(f"beta={ml.beta} does not equal delta - 1 = {p.beta}", "beta")
    if not horizon > 0:
        raise DomainError("horizon must be positive", "horizon")
    grid = match_grid(horizon, gridsize)
    s_ml = mlf.survival(ml, grid)
    s_par = pareto_survival(p, grid)
    disc = float(np.max(np.abs(s_ml - s_par)))
    with np.errstate(divide="ignore"):
        log_disc = float(np.max(np.abs(np.log(s_ml) - np.log(s_par))))
    return MatchSpec(ml, p, float(horizon), grid, disc, log_disc)


@dataclass(frozen=True)
class Refinement:
    ml: MlParams
    start: MatchSpec
    result: MatchSpec
    improved: bool
    evaluations: int


def refine_gamma(ml0: MlParams, p: ParetoParams, horizon: float, gridsize: int = 200, rtol: float = 1e-3) -> Refinement:
    """Golden-section search for the scale on [gamma0/4, 4 gamma0].

    Works in log(gamma); the returned scale never has a larger discrepancy
    than the starting one (``improved`` reports whether the search helped).
    """
    start = match_quality(ml0, p, horizon, gridsize)
    beta = ml0.beta

    def objective(log_g: float) -> float:
        return match_quality(MlParams(beta, math.exp(log_g)), p, horizon, gridsize).discrepancy

    a = math.log(ml0.gamma / 4.0)
    b = math.log(ml0.gamma * 4.0)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = objective(c), objective(d)
    evals = 2
    # rtol on gamma is an absolute tolerance on log(gamma)
    while b - a > rtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = objective(d)
        evals += 1
    best = MlParams(beta, math.exp(0.5 * (a + b)))
    result = match_quality(best, p, horizon, gridsize)
    if result.discrepancy > start.discrepancy:
        return Refinement(ml0, start, start, False, evals)
    return Refinement(best, start, result, result.discrepancy < start.discrepancy, evals)


def tail_ratio(beta: float, t: float, gamma: float | None = None) -> float:
    """Mittag-Leffler over Pareto survival at time t."""
    g = initial_gamma(beta) if gamma is None else gamma
    return float(mlf.survival(MlParams(beta, g), t)) / pareto_survival(ParetoParams(1.0 + beta), t)
