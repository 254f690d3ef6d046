import numpy as np
import pytest

from rlad import chain
from rlad.chain import ChainParams
from rlad.errors import DomainError


def test_two_node_flip():
    q = chain.build_q(ChainParams(2))
    assert np.array_equal(q, [[0.0, 1.0], [1.0, 0.0]])


def test_three_link_row():
    q = chain.ehrenfest_matrix(3)
    assert np.allclose(q[1], [1 / 3, 0, 2 / 3, 0], atol=1e-15)


@pytest.mark.parametrize("N,alpha", [(2, 0.0), (5, 0.3), (20, 0.0), (20, 0.9)])
def test_rows_stochastic_tridiagonal(N, alpha):
    p = ChainParams(N, alpha)
    q = chain.build_q(p)
    assert q.shape == (p.M + 1, p.M + 1)
    assert np.max(np.abs(q.sum(axis=1) - 1)) < 1e-14
    assert np.all(np.diag(q) == alpha)
    assert np.all(np.triu(q, 2) == 0) and np.all(np.tril(q, -2) == 0)
    assert q[0, 1] == pytest.approx(1 - alpha) and q[-1, -2] == pytest.approx(1 - alpha)


def test_n_step():
    q = chain.ehrenfest_matrix(1)
    assert np.array_equal(chain.n_step(q, 0), np.eye(2))
    assert np.array_equal(chain.n_step(q, 2), np.eye(2))
    q2 = chain.ehrenfest_matrix(2)
    assert np.allclose(chain.n_step(q2, 2)[0], [0.5, 0, 0.5], atol=1e-15)
    big = chain.n_step(chain.build_q(ChainParams(20, 0.2)), 333)
    assert np.max(np.abs(big.sum(axis=1) - 1)) < 1e-12
    with pytest.raises(DomainError):
        chain.n_step(q, -1)


def test_row_powers_agree_with_matrix_powers():
    q = chain.build_q(ChainParams(6, 0.1))
    rows = chain.row_powers(q, 4, 12)
    for n in (0, 1, 5, 12):
        assert np.allclose(rows[n], chain.n_step(q, n)[4], atol=1e-14)


def test_stationary():
    assert np.allclose(chain.stationary(2), [0.25, 0.5, 0.25])
    pi = chain.stationary(ChainParams(20))
    assert np.sum(np.arange(191) * pi) == pytest.approx(95.0, abs=1e-10)
    for alpha in (0.0, 0.3):
        p = ChainParams(20, alpha)
        pi = chain.stationary(p)
        assert abs(pi.sum() - 1) < 1e-12
        assert np.max(np.abs(pi @ chain.build_q(p) - pi)) < 1e-12


def test_degree_distribution():
    assert np.allclose(chain.degree_distribution(ChainParams(3)), [0.25, 0.5, 0.25])
    d = chain.degree_distribution(ChainParams(20))
    assert abs(d.sum() - 1) < 1e-14
    assert np.sum(np.arange(20) * d) == pytest.approx(9.5, abs=1e-12)


def test_spectral_reconstruction():
    q = chain.build_q(ChainParams(8, 0.25))
    lam, v, vinv = chain.spectral(q)
    assert np.allclose((v * lam) @ vinv, q, atol=1e-10)
    assert lam.max() == pytest.approx(1.0, abs=1e-12)


def test_params_validation():
    with pytest.raises(DomainError):
        ChainParams(1)
    with pytest.raises(DomainError):
        ChainParams(5, 1.0)
    assert ChainParams.from_links(190) == ChainParams(20)
    with pytest.raises(DomainError):
        ChainParams.from_links(7)
