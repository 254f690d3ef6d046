"""Pure-Python event loops; the reference the compiled core must reproduce exactly.

Both backends draw every variate as ``rng.random()`` (one ``next_double`` of
the bit generator) and apply the same transformations in the same order, so
a given generator state yields identical trajectories from either one.

Waiting-law codes: 0 exponential(mean=p1), 1 Mittag-Leffler(beta, gamma) with
precomputed constants, 2 Pareto(delta).
"""

from __future__ import annotations

import math

import numpy as np

EXPONENTIAL, MITTAG_LEFFLER, PARETO = 0, 1, 2
CAP_EXCEEDED = -1


class _Law:
    __slots__ = ("kind", "scale", "inv_beta", "sin_bp", "cos_bp", "bp", "pareto_exp")

    def __init__(self, law: tuple):
        kind, scale, beta, delta = law
        self.kind = int(kind)
        self.scale = float(scale)
        self.inv_beta = 1.0 / beta if beta else 1.0
        self.bp = beta * math.pi
        self.sin_bp = math.sin(self.bp)
        self.cos_bp = math.cos(self.bp)
        self.pareto_exp = -1.0 / (delta - 1.0) if delta else 0.0


def _gap(rng, law: _Law) -> float:
    while True:
        if law.kind == PARETO:
            u = 1.0 - rng.random()
            t = u**law.pareto_exp - 1.0
        else:
            e = -math.log(1.0 - rng.random())
            if law.kind == EXPONENTIAL or law.inv_beta == 1.0:
                t = law.scale * e
            else:
                v = 1.0 - rng.random()
                w = law.sin_bp / math.tan(law.bp * v) - law.cos_bp
                t = law.scale * e * w**law.inv_beta if w > 0 else 0.0
        if 0.0 < t < math.inf:
            return t


def _toggle(rng, state, alpha: float, links: int, m: int) -> int:
    if alpha > 0.0 and rng.random() < alpha:
        return links
    k = int(rng.random() * m)
    if state[k]:
        state[k] = 0
        return links - 1
    state[k] = 1
    return links + 1


def rlad_record(rng, state, alpha, law, record_times, cap):
    """Link counts at ``record_times`` (sorted) and the number of events."""
    law = _Law(law)
    m = len(state)
    links = int(np.sum(state))
    out = np.empty(len(record_times), dtype=np.int64)
    events = 0
    nxt = _gap(rng, law)
    for idx, r in enumerate(record_times):
        while nxt <= r:
            links = _toggle(rng, state, alpha, links, m)
            events += 1
            if events > cap:
                return out, CAP_EXCEEDED
            nxt += _gap(rng, law)
        out[idx] = links
    return out, events


def rlad_trace(rng, state, alpha, law, horizon, cap):
    law = _Law(law)
    m = len(state)
    links = int(np.sum(state))
    times = [0.0]
    counts = [links]
    nxt = _gap(rng, law)
    while nxt <= horizon:
        links = _toggle(rng, state, alpha, links, m)
        times.append(nxt)
        counts.append(links)
        if len(times) - 1 > cap:
            return np.array(times), np.array(counts, dtype=np.int64), CAP_EXCEEDED
        nxt += _gap(rng, law)
    return np.array(times), np.array(counts, dtype=np.int64), len(times) - 1


class _Sis:
    """Network plus SIS state with incrementally maintained S-I link count."""

    def __init__(self, state, pair_u, pair_v, n, infected):
        self.n = n
        self.state = state
        self.pu = pair_u
        self.pv = pair_v
        self.adj = np.zeros((n, n), dtype=np.uint8)
        self.inf = np.array(infected, dtype=np.uint8)
        self.links = 0
        for k in range(len(state)):
            if state[k]:
                self.adj[pair_u[k], pair_v[k]] = 1
                self.adj[pair_v[k], pair_u[k]] = 1
                self.links += 1
        self.c = [int(np.sum(self.adj[v] & self.inf)) for v in range(n)]
        self.n_inf = int(np.sum(self.inf))
        self.si = sum(self.c[v] for v in range(n) if not self.inf[v])

    def toggle(self, rng, alpha):
        if alpha > 0.0 and rng.random() < alpha:
            return
        k = int(rng.random() * len(self.state))
        u, v = int(self.pu[k]), int(self.pv[k])
        add = not self.state[k]
        self.state[k] = 1 if add else 0
        self.adj[u, v] = self.adj[v, u] = 1 if add else 0
        d = 1 if add else -1
        self.links += d
        iu, iv = self.inf[u], self.inf[v]
        if iu:
            self.c[v] += d
        if iv:
            self.c[u] += d
        if iu != iv:
            self.si += d

    def infect(self, rng):
        target = int(rng.random() * self.si)
        acc = 0
        s = self.n - 1
        for v in range(self.n):
            if not self.inf[v]:
                acc += self.c[v]
                if acc > target:
                    s = v
                    break
        self.si -= self.c[s]
        self.inf[s] = 1
        self.n_inf += 1
        row = self.adj[s]
        for w in range(self.n):
            if row[w]:
                self.c[w] += 1
                if not self.inf[w]:
                    self.si += 1

    def recover(self, rng):
        target = int(rng.random() * self.n_inf)
        seen = 0
        r = self.n - 1
        for v in range(self.n):
            if self.inf[v]:
                if seen == target:
                    r = v
                    break
                seen += 1
        row = self.adj[r]
        for w in range(self.n):
            if row[w]:
                self.c[w] -= 1
                if not self.inf[w]:
                    self.si -= 1
        self.inf[r] = 0
        self.n_inf -= 1
        self.si += self.c[r]


def sis_run(rng, state, pair_u, pair_v, n, infected, alpha, law, rate_inf, rate_rec, record_times, cap, trace):
    """Coupled RLAD + SIS run.

    Returns (links_at, infected_at, events, trace_or_None); the trace holds
    (time, links, infected) after every event when requested.
    """
    law = _Law(law)
    sim = _Sis(state, pair_u, pair_v, n, infected)
    n_rec = len(record_times)
    links_at = np.empty(n_rec, dtype=np.int64)
    inf_at = np.empty(n_rec, dtype=np.int64)
    horizon = record_times[-1] if n_rec else 0.0
    rows = [(0.0, sim.links, sim.n_inf)] if trace else None
    t = 0.0
    idx = 0
    events = 0
    nxt = _gap(rng, law)
    while True:
        rate = sim.si * rate_inf + sim.n_inf * rate_rec
        if rate > 0.0:
            t_epi = t - math.log(1.0 - rng.random()) / rate
        else:
            t_epi = math.inf
        t_next = t_epi if t_epi < nxt else nxt
        while idx < n_rec and record_times[idx] < t_next:
            links_at[idx] = sim.links
            inf_at[idx] = sim.n_inf
            idx += 1
        if t_next > horizon:
            break
        if t_epi < nxt:
            t = t_epi
            if rng.random() * rate < sim.si * rate_inf:
                sim.infect(rng)
            else:
                sim.recover(rng)
        else:
            t = nxt
            sim.toggle(rng, alpha)
            nxt += _gap(rng, law)
        events += 1
        if trace:
            rows.append((t, sim.links, sim.n_inf))
        if events > cap:
            return links_at, inf_at, CAP_EXCEEDED, rows
    return links_at, inf_at, events, rows
