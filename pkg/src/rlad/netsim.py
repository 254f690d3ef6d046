"""Event-driven simulation of the RLAD network, alone or with a Markovian SIS epidemic.

A single renewal clock drives the network: at each event one of the M node
pairs is drawn uniformly and toggled, unless the event is a no-op (probability
alpha). The epidemic runs on the current graph with exponential clocks that are
redrawn after every event, which is exact by memorylessness.

Replicate ``r`` of a run with master seed ``s`` uses the stream
``PCG64(SeedSequence(s, spawn_key=(r,)))``, and ensemble estimates are built
from integer sums, so results do not depend on how replicates are split
across worker processes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _backend, _purepy
from .chain import ChainParams
from .errors import DomainError, ResourceError
from .mlf import MlParams

DEFAULT_EVENT_CAP = 10_000_000
WORKERS_ENV = "RLAD_WORKERS"
LAW_KINDS = ("mittag-leffler", "pareto", "exponential")


@dataclass(frozen=True)
class EpidemicParams:
    """Mean transmission time per S-I link and mean recovery time."""

    tau_I: float
    tau_H: float
    initial_infected: int = 5

    def __post_init__(self):
        for name in ("tau_I", "tau_H"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite, got {v}", name)
        if self.initial_infected < 0:
            raise DomainError("initial_infected must be >= 0", "initial_infected")


@dataclass(frozen=True)
class WaitingLaw:
    kind: str = "mittag-leffler"
    beta: float = 1.0
    gamma: float = 1.0
    delta: float | None = None
    mean: float = 1.0

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise DomainError(f"unknown waiting law {self.kind!r}", "kind")
        if self.kind == "mittag-leffler":
            MlParams(self.beta, self.gamma)
        elif self.kind == "pareto":
            if self.delta is None or not 1.0 < self.delta < 2.0:
                raise DomainError(f"delta must lie in (1, 2), got {self.delta}", "delta")
        elif not self.mean > 0:
            raise DomainError("mean must be positive", "mean")

    @classmethod
    def mittag_leffler(cls, ml: MlParams) -> "WaitingLaw":
        return cls("mittag-leffler", beta=ml.beta, gamma=ml.gamma)

    @classmethod
    def pareto(cls, delta: float) -> "WaitingLaw":
        return cls("pareto", delta=delta)

    @classmethod
    def exponential(cls, mean: float = 1.0) -> "WaitingLaw":
        return cls("exponential", mean=mean)

    def code(self) -> tuple:
        """The (kind, scale, beta, delta) tuple the event loops take."""
        if self.kind == "mittag-leffler":
            return (_purepy.MITTAG_LEFFLER, float(self.gamma), float(self.beta), 0.0)
        if self.kind == "pareto":
            return (_purepy.PARETO, 1.0, float(self.delta) - 1.0, float(self.delta))
        return (_purepy.EXPONENTIAL, float(self.mean), 1.0, 0.0)

    def to_dict(self) -> dict:
        if self.kind == "mittag-leffler":
            return {"kind": self.kind, "beta": self.beta, "gamma": self.gamma}
        if self.kind == "pareto":
            return {"kind": self.kind, "delta": self.delta}
        return {"kind": self.kind, "mean": self.mean}


@dataclass(frozen=True)
class SimConfig:
    """Everything needed to rerun a simulation.

    ``initial_links`` is "full", a link count (placed uniformly at random per
    replicate) or an explicit tuple of node pairs.
    """

    chain: ChainParams
    waiting: WaitingLaw
    horizon: float
    initial_links: str | int | tuple = "full"
    epidemic: EpidemicParams | None = None
    replicates: int = 1
    seed: int = 0
    event_cap: int = DEFAULT_EVENT_CAP

    def __post_init__(self):
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise DomainError("horizon must be positive and finite", "horizon")
        if self.replicates < 1:
            raise DomainError("replicates must be >= 1", "replicates")
        if self.seed < 0:
            raise DomainError("seed must be non-negative", "seed")
        il = self.initial_links
        if isinstance(il, str):
            if il != "full":
                raise DomainError(f"initial_links must be 'full', a count or a pair list, got {il!r}", "initial_links")
        elif isinstance(il, (int, np.integer)):
            if not 0 <= il <= self.chain.M:
                raise DomainError(f"initial link count {il} outside 0..{self.chain.M}", "initial_links")
        else:
            pairs = tuple(tuple(int(x) for x in p) for p in il)
            for u, v in pairs:
                if u == v or not (0 <= u < self.chain.N and 0 <= v < self.chain.N):
                    raise DomainError(f"invalid node pair ({u}, {v})", "initial_links")
            object.__setattr__(self, "initial_links", pairs)
        if self.epidemic is not None and self.epidemic.initial_infected > self.chain.N:
            raise DomainError("more initial infected than nodes", "initial_infected")

    def to_dict(self) -> dict:
        il = self.initial_links
        return {
            "N": self.chain.N,
            "alpha": self.chain.alpha,
            "waiting": self.waiting.to_dict(),
            "horizon": self.horizon,
            "initial_links": [list(p) for p in il] if isinstance(il, tuple) else il,
            "epidemic": None if self.epidemic is None else asdict(self.epidemic),
            "replicates": self.replicates,
            "seed": self.seed,
            "event_cap": self.event_cap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        il = d.get("initial_links", "full")
        if isinstance(il, list):
            il = tuple(tuple(p) for p in il)
        epi = d.get("epidemic")
        return cls(
            chain=ChainParams(int(d["N"]), float(d.get("alpha", 0.0))),
            waiting=WaitingLaw(**d["waiting"]),
            horizon=float(d["horizon"]),
            initial_links=il,
            epidemic=None if epi is None else EpidemicParams(**epi),
            replicates=int(d.get("replicates", 1)),
            seed=int(d.get("seed", 0)),
            event_cap=int(d.get("event_cap", DEFAULT_EVENT_CAP)),
        )


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-constant path; row k holds the state from ``times[k]`` on."""

    replicate: int
    times: np.ndarray
    links: np.ndarray
    infected: np.ndarray | None = None

    @property
    def events(self) -> int:
        return self.times.size - 1


def pair_arrays(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints of pair k in the row-major order (0,1), (0,2), ..., (N-2,N-1)."""
    u, v = np.triu_indices(N, 1)
    return u.astype(np.int32), v.astype(np.int32)


def pair_index(N: int, u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return u * N - u * (u + 1) // 2 + (v - u - 1)


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replicate,))))


def _choose(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """k of range(n) uniformly without replacement (partial Fisher-Yates)."""
    idx = list(range(n))
    for j in range(k):
        r = j + int(rng.random() * (n - j))
        idx[j], idx[r] = idx[r], idx[j]
    return np.array(idx[:k], dtype=np.int64)


def initial_state(cfg: SimConfig, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray | None]:
    """Link indicator vector and infected indicator vector for one replicate.

    Draws from ``rng`` (random links first, then infected nodes), so the choice
    is a function of the replicate's seed.
    """
    M, N = cfg.chain.M, cfg.chain.N
    state = np.zeros(M, dtype=np.uint8)
    il = cfg.initial_links
    if isinstance(il, str):
        state[:] = 1
    elif isinstance(il, (int, np.integer)):
        state[_choose(rng, M, int(il))] = 1
    else:
        for u, v in il:
            state[pair_index(N, u, v)] = 1
    infected = None
    if cfg.epidemic is not None:
        infected = np.zeros(N, dtype=np.uint8)
        infected[_choose(rng, N, cfg.epidemic.initial_infected)] = 1
    return state, infected


def _cap_error(replicate: int, cap: int) -> ResourceError:
    err = ResourceError(f"replicate {replicate}: more than {cap} events before the horizon")
    err.replicate = replicate
    return err


def run_rlad(cfg: SimConfig, replicate: int, backend: str | None = None) -> Trajectory:
    """Every network event up to the horizon."""
    if cfg.epidemic is not None:
        raise DomainError("config has an epidemic; use run_rlad_sis", "epidemic")
    loops = _backend.get(backend)
    rng = replicate_rng(cfg.seed, replicate)
    state, _ = initial_state(cfg, rng)
    times, counts, n = loops.rlad_trace(rng, state, cfg.chain.alpha, cfg.waiting.code(), float(cfg.horizon), cfg.event_cap)
    if n == _purepy.CAP_EXCEEDED:
        raise _cap_error(replicate, cfg.event_cap)
    return Trajectory(replicate, times, counts)


def run_rlad_sis(cfg: SimConfig, replicate: int, backend: str | None = None) -> Trajectory:
    """Every network and epidemic event up to the horizon."""
    if cfg.epidemic is None:
        raise DomainError("config has no epidemic parameters", "epidemic")
    loops = _backend.get(backend)
    rng = replicate_rng(cfg.seed, replicate)
    state, infected = initial_state(cfg, rng)
    pu, pv = pair_arrays(cfg.chain.N)
    epi = cfg.epidemic
    record = np.array([float(cfg.horizon)])
    _, _, n, rows = loops.sis_run(
        rng, state, pu, pv, cfg.chain.N, infected, cfg.chain.alpha, cfg.waiting.code(),
        1.0 / epi.tau_I, 1.0 / epi.tau_H, record, cfg.event_cap, True,
    )
    if n == _purepy.CAP_EXCEEDED:
        raise _cap_error(replicate, cfg.event_cap)
    arr = np.array(rows, dtype=float)
    return Trajectory(replicate, arr[:, 0], arr[:, 1].astype(np.int64), arr[:, 2].astype(np.int64))


def record_replicate(cfg: SimConfig, replicate: int, record_times: np.ndarray, backend: str | None = None):
    """(links, infected or None, events) at the record times for one replicate."""
    loops = _backend.get(backend)
    rng = replicate_rng(cfg.seed, replicate)
    state, infected = initial_state(cfg, rng)
    if cfg.epidemic is None:
        links, n = loops.rlad_record(rng, state, cfg.chain.alpha, cfg.waiting.code(), record_times, cfg.event_cap)
        inf = None
    else:
        pu, pv = pair_arrays(cfg.chain.N)
        epi = cfg.epidemic
        links, inf, n, _ = loops.sis_run(
            rng, state, pu, pv, cfg.chain.N, infected, cfg.chain.alpha, cfg.waiting.code(),
            1.0 / epi.tau_I, 1.0 / epi.tau_H, record_times, cfg.event_cap, False,
        )
    if n == _purepy.CAP_EXCEEDED:
        raise _cap_error(replicate, cfg.event_cap)
    return links, inf, n


@dataclass
class _Sums:
    counts: np.ndarray
    link_sum: np.ndarray
    link_sq: np.ndarray
    inf_sum: np.ndarray
    inf_sq: np.ndarray
    events: int = 0

    @classmethod
    def zeros(cls, n_times: int, M: int) -> "_Sums":
        z = lambda: np.zeros(n_times, dtype=np.int64)  # noqa: E731
        return cls(np.zeros((n_times, M + 1), dtype=np.int64), z(), z(), z(), z())

    def add(self, other: "_Sums") -> None:
        for name in ("counts", "link_sum", "link_sq", "inf_sum", "inf_sq"):
            getattr(self, name).__iadd__(getattr(other, name))
        self.events += other.events


def _run_block(cfg: SimConfig, record_times: np.ndarray, start: int, stop: int, backend: str | None) -> _Sums:
    sums = _Sums.zeros(record_times.size, cfg.chain.M)
    rows = np.arange(record_times.size)
    for r in range(start, stop):
        links, inf, n = record_replicate(cfg, r, record_times, backend)
        sums.counts[rows, links] += 1
        sums.link_sum += links
        sums.link_sq += links * links
        if inf is not None:
            sums.inf_sum += inf
            sums.inf_sq += inf * inf
        sums.events += n
    return sums


@dataclass(frozen=True)
class SimEnsemble:
    config: SimConfig
    times: np.ndarray
    counts: np.ndarray = field(repr=False)
    link_sum: np.ndarray = field(repr=False)
    link_sq: np.ndarray = field(repr=False)
    inf_sum: np.ndarray = field(repr=False)
    inf_sq: np.ndarray = field(repr=False)
    events: int

    @property
    def replicates(self) -> int:
        return self.config.replicates

    @property
    def seeds(self) -> list[tuple[int, int]]:
        """(master seed, spawn key) of every replicate stream."""
        return [(self.config.seed, r) for r in range(self.replicates)]

    @property
    def pmf(self) -> np.ndarray:
        return self.counts / self.replicates

    @property
    def pmf_se(self) -> np.ndarray:
        p = self.pmf
        return np.sqrt(p * (1.0 - p) / self.replicates)

    def _mean_se(self, s: np.ndarray, sq: np.ndarray, scale: float = 1.0):
        R = self.replicates
        mean = s / R
        if R < 2:
            return mean / scale, np.zeros_like(mean, dtype=float)
        var = np.maximum(sq - s.astype(float) * s / R, 0.0) / (R - 1)
        return mean / scale, np.sqrt(var / R) / scale

    @property
    def mean_links(self) -> np.ndarray:
        return self._mean_se(self.link_sum, self.link_sq)[0]

    @property
    def mean_links_se(self) -> np.ndarray:
        return self._mean_se(self.link_sum, self.link_sq)[1]

    @property
    def mean_infected(self) -> np.ndarray:
        return self._mean_se(self.inf_sum, self.inf_sq)[0]

    @property
    def prevalence(self) -> np.ndarray:
        """Mean infected fraction."""
        return self._mean_se(self.inf_sum, self.inf_sq, self.config.chain.N)[0]

    @property
    def prevalence_se(self) -> np.ndarray:
        return self._mean_se(self.inf_sum, self.inf_sq, self.config.chain.N)[1]


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    return max(1, int(value)) if value else 1


def ensemble(cfg: SimConfig, record_times, workers: int | None = None, backend: str | None = None) -> SimEnsemble:
    """Aggregate ``cfg.replicates`` runs sampled at ``record_times``."""
    times = np.ascontiguousarray(record_times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("record_times must be a non-empty list", "record_times")
    if np.any(np.diff(times) < 0):
        raise DomainError("record_times must be sorted", "record_times")
    if times[0] < 0 or times[-1] > cfg.horizon:
        raise DomainError("record_times must lie in [0, horizon]", "record_times")
    workers = default_workers() if workers is None else max(1, int(workers))
    R = cfg.replicates
    workers = min(workers, R)
    if workers == 1:
        total = _run_block(cfg, times, 0, R, backend)
    else:
        edges = np.linspace(0, R, workers + 1).astype(int)
        total = _Sums.zeros(times.size, cfg.chain.M)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_block, cfg, times, int(a), int(b), backend)
                for a, b in zip(edges[:-1], edges[1:]) if b > a
            ]
            for f in futures:
                total.add(f.result())
    return SimEnsemble(cfg, times, total.counts, total.link_sum, total.link_sq, total.inf_sum, total.inf_sq, total.events)
