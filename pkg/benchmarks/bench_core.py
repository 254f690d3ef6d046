"""Compiled vs pure-Python event loops on the Fig. 1 workload.

    python benchmarks/bench_core.py [--replicates 20] [--horizon 2000]

Both backends are run on the same replicate streams; the script checks that
their outputs agree exactly and reports events per second for each.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rlad import _backend, netsim
from rlad.chain import ChainParams
from rlad.mlf import MlParams
from rlad.netsim import EpidemicParams, SimConfig, WaitingLaw


def timed(cfg: SimConfig, backend: str, times: np.ndarray):
    start = time.perf_counter()
    events, outputs = 0, []
    for r in range(cfg.replicates):
        links, inf, n = netsim.record_replicate(cfg, r, times, backend)
        events += n
        outputs.append((links, inf))
    return time.perf_counter() - start, events, outputs


def same(a, b) -> bool:
    return all(
        np.array_equal(x[0], y[0]) and (x[1] is None or np.array_equal(x[1], y[1])) for x, y in zip(a, b)
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--replicates", type=int, default=20)
    ap.add_argument("--horizon", type=float, default=2000.0)
    args = ap.parse_args(argv)
    if _backend.COMPILED is None:
        print("compiled core not available; build with `pip install -e . --no-build-isolation`")
        return 1

    times = np.linspace(0.0, args.horizon, 101)
    chain = ChainParams(20)
    cases = {
        "rlad exponential": SimConfig(chain, WaitingLaw.exponential(), args.horizon, replicates=args.replicates),
        "rlad ML beta=0.7": SimConfig(chain, WaitingLaw.mittag_leffler(MlParams(0.7, 2.9)), args.horizon,
                                      replicates=args.replicates),
        "sis ML beta=0.7": SimConfig(chain, WaitingLaw.mittag_leffler(MlParams(0.7, 2.9)), args.horizon,
                                     epidemic=EpidemicParams(0.25, 1.0, 5), replicates=args.replicates),
        "sis Pareto 1.5": SimConfig(chain, WaitingLaw.pareto(1.5), args.horizon,
                                    epidemic=EpidemicParams(0.25, 1.0, 5), replicates=args.replicates),
    }
    print(f"{'case':<18} {'events':>10} {'compiled ev/s':>14} {'python ev/s':>12} {'speedup':>8}  identical")
    for name, cfg in cases.items():
        tc, ec, oc = timed(cfg, "compiled", times)
        tp, ep, op = timed(cfg, "python", times)
        print(f"{name:<18} {ec:>10d} {ec / tc:>14.3g} {ep / tp:>12.3g} {tp / tc:>8.1f}  {same(oc, op) and ec == ep}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
