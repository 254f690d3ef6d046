import math

import numpy as np
import pytest
from scipy import integrate

from rlad import mlf, paretomatch
from rlad.errors import DomainError
from rlad.mlf import MlParams
from rlad.paretomatch import ParetoParams


def test_pareto_survival_values():
    assert paretomatch.pareto_survival(ParetoParams(1.3), 0.0) == 1.0
    p = ParetoParams(1.5)
    assert paretomatch.pareto_survival(p, 3.0) == pytest.approx(0.5, abs=1e-15)
    tail, _ = integrate.quad(lambda t: paretomatch.pareto_density(p, t), 3.0, np.inf)
    assert tail == pytest.approx(0.5, abs=1e-8)


def test_pareto_log_slope():
    p = ParetoParams(1.7)
    t = np.array([1e4, 1e6])
    s = paretomatch.pareto_survival(p, t)
    slope = np.diff(np.log(s)) / np.diff(np.log(t))
    assert slope[0] == pytest.approx(-0.7, rel=0.01)


def test_pareto_sample():
    rng = np.random.default_rng(3)
    p = ParetoParams(1.5)
    n = 100_000
    x = paretomatch.pareto_sample(p, rng, size=n)
    assert np.all(x > 0)
    for t in (1.0, 10.0, 100.0):
        s = paretomatch.pareto_survival(p, t)
        assert abs(np.mean(x > t) - s) < 3 * math.sqrt(s * (1 - s) / n)
    # median 3; density at the median is 0.5 * 4**-1.5 = 1/16
    assert abs(np.median(x) - 3.0) < 3 / (2 * (1 / 16) * math.sqrt(n))


def test_initial_gamma():
    assert paretomatch.initial_gamma(0.5) == pytest.approx(math.pi, rel=1e-14)
    assert paretomatch.initial_gamma(0.7) == pytest.approx(4.79, abs=0.01)
    for b in np.linspace(0.05, 0.95, 19):
        assert paretomatch.initial_gamma(b) > 0
    for bad in (0.0, 1.0):
        with pytest.raises(DomainError):
            paretomatch.initial_gamma(bad)


def test_match_quality_reports():
    spec = paretomatch.match_quality(MlParams(0.5, math.pi), ParetoParams(1.5), 2000.0)
    assert spec.grid[0] == pytest.approx(2.0) and spec.grid[-1] == pytest.approx(2000.0)
    assert math.isfinite(spec.discrepancy) and math.isfinite(spec.log_discrepancy)
    s = spec.summary()
    assert s["gamma"] == pytest.approx(math.pi) and s["grid_size"] == 200


def test_match_quality_precondition():
    with pytest.raises(DomainError):
        paretomatch.match_quality(MlParams(0.5), ParetoParams(1.6), 100.0)


def test_match_quality_degenerate_scale():
    p = ParetoParams(1.5)
    spec = paretomatch.match_quality(MlParams(0.5, 1e-12), p, 2000.0)
    assert spec.discrepancy == pytest.approx(np.max(paretomatch.pareto_survival(p, spec.grid)), abs=1e-3)


def test_scale_consistency():
    p = ParetoParams(1.6)
    a = paretomatch.match_quality(MlParams(0.6, 4.0), p, 500.0)
    s_ml = mlf.survival(MlParams(0.6, 1.0), a.grid / 4.0)
    assert a.discrepancy == pytest.approx(np.max(np.abs(s_ml - paretomatch.pareto_survival(p, a.grid))), abs=1e-15)


def brute_force(beta, horizon, g0, count=1000):
    p = ParetoParams(1 + beta)
    gs = np.exp(np.linspace(math.log(g0 / 4), math.log(4 * g0), count))
    d = [paretomatch.match_quality(MlParams(beta, g), p, horizon, 60).discrepancy for g in gs]
    k = int(np.argmin(d))
    return gs[k], d[k]


def test_refine_half_order():
    g0 = paretomatch.initial_gamma(0.5)
    ref = paretomatch.refine_gamma(MlParams(0.5, g0), ParetoParams(1.5), 2000.0, gridsize=60)
    assert 1.0 <= ref.ml.gamma <= 12.0
    assert ref.result.discrepancy <= ref.start.discrepancy
    g_bf, d_bf = brute_force(0.5, 2000.0, g0)
    assert ref.result.discrepancy <= d_bf + 1e-4
    assert ref.ml.gamma == pytest.approx(g_bf, rel=0.02)


def test_refine_seven_tenths_finite():
    g0 = paretomatch.initial_gamma(0.7)
    ref = paretomatch.refine_gamma(MlParams(0.7, g0), ParetoParams(1.7), 2000.0, gridsize=60)
    assert math.isfinite(ref.ml.gamma)
    g_bf, d_bf = brute_force(0.7, 2000.0, g0)
    assert ref.result.discrepancy <= d_bf + 1e-4


def test_refine_never_worse():
    # start at the optimum already: search must not return anything worse
    first = paretomatch.refine_gamma(MlParams(0.6, 3.0), ParetoParams(1.6), 500.0, gridsize=50)
    again = paretomatch.refine_gamma(first.ml, ParetoParams(1.6), 500.0, gridsize=50)
    assert again.result.discrepancy <= again.start.discrepancy


def test_degradation_near_one():
    def best(beta):
        g0 = paretomatch.initial_gamma(beta)
        return paretomatch.refine_gamma(MlParams(beta, g0), ParetoParams(1 + beta), 2000.0, gridsize=60).result.discrepancy

    assert best(0.9) > best(0.5)


@pytest.mark.parametrize("beta", [0.5, 0.7])
def test_tail_ratio(beta):
    assert paretomatch.tail_ratio(beta, 1e5) == pytest.approx(1.0, rel=0.05)


def test_published_pairings_are_recorded():
    # Fig. 1 caption pairs (0.7, 3.14), (0.5, 4); Appendix C caption pairs (0.7, 4), (0.5, 3.14).
    for beta, gamma in ((0.7, 3.14), (0.5, 4.0), (0.7, 4.0), (0.5, 3.14)):
        spec = paretomatch.match_quality(MlParams(beta, gamma), ParetoParams(1 + beta), 2000.0)
        assert 0 < spec.discrepancy < 0.2
