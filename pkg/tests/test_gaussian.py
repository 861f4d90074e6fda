"""Gaussian comparison tests.

Independent oracles: E max|Z_i| for iid normals comes from mpmath quadrature
of 1 - erf(x/sqrt(2))^n on [0, inf); the triple-determinant ratio is checked
against numpy.linalg.det over explicit index combinations.
"""

import itertools
import math

import mpmath as mp
import numpy as np
import pytest

from badscience import (
    NotPSD,
    SquareMatrix,
    covariance,
    covariance_diagnostics,
    cholesky_psd,
    gaussian_max_expansion,
    gaussian_max_mc,
    identity,
    known_optimal,
    orthonormal_almost_hadamard,
    random_sign,
    tree_matrix,
)
from badscience.numerics import RngStream


def quadrature_expected_max(n: int) -> float:
    """E max_i |Z_i| for n iid standard normals, by high-precision quadrature."""
    mp.mp.dps = 30
    val = mp.quad(lambda x: 1 - mp.erf(x / mp.sqrt(2)) ** n, [0, mp.inf])
    return float(val)


# ---------------------------------------------------------------------------
# covariance


def test_covariance_identity():
    sigma = covariance(identity(6))
    assert isinstance(sigma, SquareMatrix)
    assert np.array_equal(sigma.entries, np.eye(6))


def test_covariance_oah_is_identity():
    sigma = covariance(orthonormal_almost_hadamard(12))
    assert np.abs(sigma.entries - np.eye(12)).max() <= 1e-12


def test_covariance_symmetric_unit_diagonal():
    sigma = covariance(random_sign(20, seed=4)).entries
    assert np.array_equal(sigma, sigma.T)
    assert np.abs(np.diagonal(sigma) - 1.0).max() <= 1e-12


# ---------------------------------------------------------------------------
# diagnostics


def test_diagnostics_identity():
    d = covariance_diagnostics(np.eye(8))
    assert d.n == 8
    assert d.max_offdiag == 0.0
    assert d.min_det2 == 1.0
    assert d.min_ratio3 == 1.0
    assert not d.ratio3_sampled
    assert d.chatterjee_gamma == 0.0
    assert d.chatterjee_bound == 0.0


def test_diagnostics_two_by_two():
    d = covariance_diagnostics(np.array([[1.0, 0.5], [0.5, 1.0]]))
    assert abs(d.min_det2 - 0.75) <= 1e-15
    assert d.max_offdiag == 0.5
    assert d.min_ratio3 == 1.0  # no triples below n=3
    assert d.chatterjee_gamma == 1.0


def test_diagnostics_one_by_one_vacuous():
    d = covariance_diagnostics(np.eye(1))
    assert d.max_offdiag == 0.0
    assert d.min_det2 == 1.0
    assert d.min_ratio3 == 1.0


def test_diagnostics_validation():
    with pytest.raises(ValueError):
        covariance_diagnostics(np.array([[1.0, 0.2], [0.3, 1.0]]))
    with pytest.raises(ValueError):
        covariance_diagnostics(np.array([[2.0, 0.0], [0.0, 1.0]]))


def _ratio3_oracle(sigma: np.ndarray, triples) -> float:
    """min over triples of det3 / max pair det2, via numpy.linalg.det."""
    trip = np.array(list(triples), dtype=np.int64)
    subs = sigma[trip[:, :, None], trip[:, None, :]]
    det3 = np.linalg.det(subs)
    best = np.inf
    for t, d3 in zip(trip, det3):
        pair_max = max(
            np.linalg.det(sigma[np.ix_([a, b], [a, b])])
            for a, b in itertools.combinations(t, 2)
        )
        best = min(best, d3 / pair_max if pair_max > 0 else 0.0)
    return float(best)


def test_min_ratio3_matches_det_oracle_exact():
    sigma = covariance(random_sign(6, seed=9)).entries
    d = covariance_diagnostics(sigma)
    assert not d.ratio3_sampled
    oracle = _ratio3_oracle(sigma, itertools.combinations(range(6), 3))
    assert abs(d.min_ratio3 - oracle) <= 1e-12


def test_min_ratio3_sampled_large_n():
    sigma = covariance(random_sign(70, seed=2)).entries
    d = covariance_diagnostics(sigma, triple_budget=20000, seed=0)
    assert d.ratio3_sampled
    # a sampled minimum can only miss triples, never undercut the true one
    oracle = _ratio3_oracle(sigma, itertools.combinations(range(70), 3))
    assert d.min_ratio3 >= oracle - 1e-12
    again = covariance_diagnostics(sigma, triple_budget=20000, seed=0)
    assert again.min_ratio3 == d.min_ratio3
    assert covariance_diagnostics(sigma).min_ratio3 == d.min_ratio3


def test_random_sign_covariance_diagnostics():
    d64 = covariance_diagnostics(covariance(random_sign(64, seed=7)))
    assert d64.max_offdiag <= 0.806
    n = 32
    d32 = covariance_diagnostics(covariance(random_sign(n, seed=3)))
    assert d32.min_det2 >= 1.0 - 10.0 * math.log(n) / n


# ---------------------------------------------------------------------------
# sampling distribution


def _sample_cloud(sigma: np.ndarray, samples: int, seed: int) -> np.ndarray:
    n = sigma.shape[0]
    g = RngStream(seed, 0).normals(samples * n).reshape(samples, n)
    if np.allclose(sigma, np.eye(n), atol=1e-12):
        return g
    factor = cholesky_psd(sigma, 1e-12).entries
    return g @ factor.T


def test_sample_covariance_matches_target():
    for sigma in (np.eye(8), covariance(random_sign(16, seed=3)).entries):
        z = _sample_cloud(sigma, samples=100_000, seed=5)
        emp = z.T @ z / len(z)
        assert np.abs(emp - sigma).max() <= 0.05


def test_sample_covariance_known_optimal():
    sigma = covariance(known_optimal(5)).entries
    z = _sample_cloud(sigma, samples=100_000, seed=6)
    emp = z.T @ z / len(z)
    assert np.abs(emp - sigma).max() <= 0.05


# ---------------------------------------------------------------------------
# gaussian_max_mc


def test_gaussian_max_one_dim():
    est = gaussian_max_mc(np.eye(1), samples=1_000_000, seed=0)
    assert est.method == "monte_carlo"
    assert est.seed == 0
    assert abs(est.value - math.sqrt(2.0 / math.pi)) <= 4.0 * est.stderr


@pytest.mark.parametrize("n", [2, 8])
def test_gaussian_max_matches_quadrature(n):
    est = gaussian_max_mc(np.eye(n), samples=1_000_000, seed=13)
    assert abs(est.value - quadrature_expected_max(n)) <= 5.0 * est.stderr


def test_gaussian_max_accepts_square_matrix_input():
    est1 = gaussian_max_mc(covariance(known_optimal(4)), samples=50_000, seed=2)
    est2 = gaussian_max_mc(covariance(known_optimal(4)).entries, samples=50_000, seed=2)
    assert est1.value == est2.value


def test_gaussian_max_deterministic():
    sigma = covariance(random_sign(16, seed=1))
    a = gaussian_max_mc(sigma, samples=20_000, seed=8)
    b = gaussian_max_mc(sigma, samples=20_000, seed=8)
    assert (a.value, a.stderr) == (b.value, b.stderr)
    c = gaussian_max_mc(sigma, samples=20_000, seed=9)
    assert c.value != a.value


def test_gaussian_max_rejects_tiny_budget():
    with pytest.raises(ValueError):
        gaussian_max_mc(np.eye(3), samples=1, seed=0)


def test_gaussian_max_rejects_indefinite():
    sigma = np.array([[1.0, 0.9, -0.9], [0.9, 1.0, 0.9], [-0.9, 0.9, 1.0]])
    with pytest.raises(NotPSD):
        gaussian_max_mc(sigma, samples=100, seed=0)


def test_gaussian_max_jitter_rescues_rank_one():
    # all-ones covariance: Z has three copies of one normal, so E max|Z| = E|g|
    sigma = np.ones((3, 3))
    est = gaussian_max_mc(sigma, samples=200_000, seed=4)
    assert abs(est.value - math.sqrt(2.0 / math.pi)) <= 4.0 * est.stderr


# ---------------------------------------------------------------------------
# comparison bounds


def test_chatterjee_comparison_on_fixtures():
    """|E max|Z_sigma| - E max|Z_I|| <= sqrt(gamma log 2n) + 5 combined errors."""
    fixtures = [
        covariance(random_sign(32, seed=5)),
        covariance(random_sign(64, seed=7)),
        covariance(tree_matrix(16).matrix),
        covariance(known_optimal(5)),
    ]
    for sigma in fixtures:
        n = sigma.n
        d = covariance_diagnostics(sigma)
        est = gaussian_max_mc(sigma, samples=200_000, seed=3)
        ref = gaussian_max_mc(np.eye(n), samples=200_000, seed=3)
        combined = est.stderr + ref.stderr
        assert abs(est.value - ref.value) <= d.chatterjee_bound + 5.0 * combined


def test_independent_max_dominates_row_correlated():
    """E max|Z_I| >= E max|Z_sigma| for sign-matrix covariances (10 seeds)."""
    n = 128
    ref = gaussian_max_mc(np.eye(n), samples=100_000, seed=0)
    for seed in range(10):
        sigma = covariance(random_sign(n, seed=seed))
        est = gaussian_max_mc(sigma, samples=100_000, seed=seed + 100)
        combined = est.stderr + ref.stderr
        assert ref.value >= est.value - 4.0 * combined


# ---------------------------------------------------------------------------
# expansion


def test_expansion_n2_formula():
    big_l = math.log(4.0)
    root = math.sqrt(2.0 * big_l)
    expected = (
        root
        - (math.log(big_l) + math.log(4.0 * math.pi)) / (2.0 * root)
        + 0.5772156649015329 / root
    )
    assert gaussian_max_expansion(2) == expected


def test_expansion_requires_two():
    with pytest.raises(ValueError):
        gaussian_max_expansion(1)


def test_expansion_monotone_in_doubling():
    ns = np.arange(8, 2**20 + 1, dtype=np.float64)
    big_l = np.log(2.0 * ns)
    root = np.sqrt(2.0 * big_l)
    vals = root - (np.log(big_l) + math.log(4.0 * math.pi)) / (2.0 * root)
    vals = vals + 0.5772156649015329 / root
    # vectorized recomputation agrees with the scalar function...
    rng = np.random.default_rng(0)
    for idx in rng.integers(0, len(ns), size=200):
        assert vals[idx] == gaussian_max_expansion(int(ns[idx]))
    # ...and doubling n always increases the expansion on 8..2^20
    n_small = np.arange(8, 2**19 + 1)
    v_small = vals[n_small - 8]
    v_double = vals[2 * n_small - 8]
    assert (v_double > v_small).all()


@pytest.mark.parametrize("n,tol", [(100, 0.05), (1000, 0.05)])
def test_expansion_tracks_monte_carlo_loosely(n, tol):
    est = gaussian_max_mc(np.eye(n), samples=100_000, seed=1)
    assert abs(est.value - gaussian_max_expansion(n)) <= tol
