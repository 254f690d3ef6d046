"""Embedded link-count chain: the alpha-delayed Ehrenfest chain on {0..M}."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ConditioningError, DomainError


@dataclass(frozen=True)
class ChainParams:
    N: int
    alpha: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"N must be an integer >= 2, got {self.N}", "N")
        if not 0.0 <= self.alpha < 1.0:
            raise DomainError(f"alpha must lie in [0, 1), got {self.alpha}", "alpha")

    @property
    def M(self) -> int:
        return self.N * (self.N - 1) // 2

    @classmethod
    def from_links(cls, M: int, alpha: float = 0.0) -> "ChainParams":
        """Parameters for a given link capacity M (must be triangular)."""
        N = int(round((1 + math.sqrt(1 + 8 * M)) / 2))
        if N * (N - 1) // 2 != M:
            raise DomainError(f"M={M} is not N(N-1)/2 for an integer N", "M")
        return cls(N, alpha)


def ehrenfest_matrix(M: int, alpha: float = 0.0) -> np.ndarray:
    """Transition matrix of the delayed Ehrenfest chain for any capacity M >= 1."""
    if M < 1:
        raise DomainError("M must be >= 1", "M")
    k = np.arange(M + 1)
    q = np.zeros((M + 1, M + 1))
    down = (1.0 - alpha) * k[1:] / M
    up = (1.0 - alpha) * (1.0 - k[:-1] / M)
    q[k[1:], k[:-1]] = down
    q[k[:-1], k[1:]] = up
    q[k, k] = alpha
    return q


def build_q(p: ChainParams) -> np.ndarray:
    return ehrenfest_matrix(p.M, p.alpha)


def n_step(q: np.ndarray, n: int) -> np.ndarray:
    """Q**n by repeated squaring."""
    if n < 0:
        raise DomainError("n must be non-negative", "n")
    return np.linalg.matrix_power(q, int(n))


def row_powers(q: np.ndarray, i: int, n_max: int) -> np.ndarray:
    """Rows e_i Q**n for n = 0..n_max, shape (n_max + 1, size)."""
    size = q.shape[0]
    out = np.empty((n_max + 1, size))
    v = np.zeros(size)
    v[i] = 1.0
    out[0] = v
    for n in range(1, n_max + 1):
        v = v @ q
        out[n] = v
    return out


def stationary(p: ChainParams | int) -> np.ndarray:
    """Binomial(M, 1/2) invariant law (independent of alpha)."""
    M = p.M if isinstance(p, ChainParams) else int(p)
    return stats.binom.pmf(np.arange(M + 1), M, 0.5)


def degree_distribution(p: ChainParams) -> np.ndarray:
    """Binomial(N - 1, 1/2) law of a single node's degree at equilibrium."""
    return stats.binom.pmf(np.arange(p.N), p.N - 1, 0.5)


def spectral(q: np.ndarray, pi: np.ndarray | None = None, tol: float = 1e-10):
    """Eigenvalues and right/left eigenvectors of a reversible birth-death matrix.

    Symmetrises with D**(1/2) Q D**(-1/2), D = diag(pi), and returns
    ``(lam, V, Vinv)`` with Q = V diag(lam) Vinv.
    """
    size = q.shape[0]
    if pi is None:
        pi = stationary(size - 1)
    sq = np.sqrt(pi)
    sym = (sq[:, None] * q) / sq[None, :]
    sym = 0.5 * (sym + sym.T)
    lam, u = np.linalg.eigh(sym)
    v = u / sq[:, None]
    vinv = u.T * sq[None, :]
    err = np.max(np.abs((v * lam) @ vinv - q))
    if err > tol:
        raise ConditioningError(f"spectral reconstruction error {err:.2e} exceeds {tol:.0e}")
    return lam, v, vinv
