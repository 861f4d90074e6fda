"""Gaussian comparison oracle: the covariance A Aᵀ, near-independence
diagnostics on it, Monte Carlo estimation of E max_i |Z_i| for Z ~ N(0, Σ),
and the three-term expansion of that expectation for the identity.

The max of |Z_i| over correlated coordinates is compared against the
independent case through two routes: the independence-maximizes direction
(the identity maximizes the expectation at fixed unit variances) and a
perturbation bound |E max(Σ) - E max(I)| <= sqrt(γ log 2n) with
γ = 2 max|σ_jk|, which is the max-only comparison applied to the
symmetrized 2n-vector (Z, -Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

import numpy as np

from .beta import BetaEstimate
from .errors import NotPSD
from .matrix import RowNormalizedMatrix, SquareMatrix
from .numerics import STREAM_TRIPLE_SAMPLER, RngStream, cholesky_psd, compensated_sum

_BLOCK = 1 << 14
_CHUNKS = 256
_JITTER_LADDER = (0.0, 1e-12, 1e-10, 1e-8)
# Above this dimension the triple scan is sampled instead of exhaustive.
_EXACT_TRIPLE_LIMIT = 64

SigmaLike = Union[SquareMatrix, np.ndarray]


def covariance(a: RowNormalizedMatrix) -> SquareMatrix:
    """Σ = A Aᵀ, symmetrized; unit diagonal up to 1e-12 by row normalization."""
    sigma = a.entries @ a.entries.T
    sigma = (sigma + sigma.T) / 2.0
    if np.abs(np.diagonal(sigma) - 1.0).max() > 1e-12:
        raise ValueError("covariance diagonal deviates from 1 beyond 1e-12")
    return SquareMatrix(sigma)


def _as_array(sigma: SigmaLike) -> np.ndarray:
    if isinstance(sigma, SquareMatrix):
        return sigma.entries
    arr = np.asarray(sigma, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("sigma must be square")
    return arr


@dataclass(frozen=True)
class CovarianceDiagnostics:
    """How far Σ is from the identity, in the quantities the bounds consume.

    min_ratio3 is the minimum over index triples of det3 / max(pair det2
    within the triple); it is 1.0 when no triples exist, and is estimated
    from sampled triples (ratio3_sampled=True) when n > 64.
    """

    n: int
    max_offdiag: float
    min_det2: float
    min_ratio3: float
    ratio3_sampled: bool
    chatterjee_gamma: float
    chatterjee_bound: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "max_offdiag": self.max_offdiag,
            "min_det2": self.min_det2,
            "min_ratio3": self.min_ratio3,
            "ratio3_sampled": self.ratio3_sampled,
            "chatterjee_gamma": self.chatterjee_gamma,
            "chatterjee_bound": self.chatterjee_bound,
        }


def _det2(sigma: np.ndarray, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    return sigma[i, i] * sigma[j, j] - sigma[i, j] ** 2


def _det3(sigma: np.ndarray, i: np.ndarray, j: np.ndarray, k: np.ndarray) -> np.ndarray:
    a, b, c = sigma[i, i], sigma[i, j], sigma[i, k]
    d, e, f = sigma[j, i], sigma[j, j], sigma[j, k]
    g, h, m = sigma[k, i], sigma[k, j], sigma[k, k]
    return a * (e * m - f * h) - b * (d * m - f * g) + c * (d * h - e * g)


def _sample_triples(n: int, budget: int, seed: int) -> np.ndarray:
    """(budget, 3) distinct index triples drawn uniformly with redraws."""
    stream = RngStream(seed, STREAM_TRIPLE_SAMPLER)
    rows = []
    have = 0
    while have < budget:
        draw = np.minimum((stream.uniform(3 * (budget - have)) * n).astype(np.int64), n - 1)
        draw = draw.reshape(-1, 3)
        ok = (draw[:, 0] != draw[:, 1]) & (draw[:, 0] != draw[:, 2]) & (draw[:, 1] != draw[:, 2])
        draw = draw[ok]
        rows.append(draw)
        have += len(draw)
    return np.concatenate(rows)[:budget]


def covariance_diagnostics(
    sigma: SigmaLike, triple_budget: int = 20000, seed: int = 0
) -> CovarianceDiagnostics:
    """Pairwise and triple-wise non-degeneracy plus the comparison-bound γ.

    Requires a symmetric matrix with unit diagonal (within 1e-10).  Pair
    determinants are scanned exhaustively; triple ratios are exhaustive for
    n <= 64 and sampled (triple_budget draws, deterministic in seed) above
    that.  Vacuous scans (n < 2 resp. n < 3) report 1.0.  Since Σ = A Aᵀ is
    positive semidefinite, every principal minor is >= 0, so the minimum
    ratio for a triple is det3 over the largest of its three pair minors;
    a triple whose pair minors all vanish contributes ratio 0.
    """
    sigma = _as_array(sigma)
    n = sigma.shape[0]
    if np.abs(sigma - sigma.T).max() > 1e-10:
        raise ValueError("sigma must be symmetric")
    if np.abs(np.diagonal(sigma) - 1.0).max() > 1e-10:
        raise ValueError("sigma must have unit diagonal within 1e-10")
    if n >= 2:
        off = np.abs(sigma - np.diag(np.diagonal(sigma)))
        max_offdiag = float(off.max())
        iu, ju = np.triu_indices(n, k=1)
        min_det2 = float(_det2(sigma, iu, ju).min())
    else:
        max_offdiag = 0.0
        min_det2 = 1.0
    sampled = False
    if n < 3:
        min_ratio3 = 1.0
    else:
        if n <= _EXACT_TRIPLE_LIMIT:
            trip = np.array(list(combinations(range(n), 3)), dtype=np.int64)
        else:
            trip = _sample_triples(n, triple_budget, seed)
            sampled = True
        i, j, k = trip[:, 0], trip[:, 1], trip[:, 2]
        det3 = _det3(sigma, i, j, k)
        pair_max = np.maximum(
            _det2(sigma, i, j), np.maximum(_det2(sigma, i, k), _det2(sigma, j, k))
        )
        safe = np.where(pair_max > 0, pair_max, 1.0)
        ratios = np.where(pair_max > 0, det3 / safe, 0.0)
        min_ratio3 = float(ratios.min())
    gamma = 2.0 * max_offdiag
    bound = math.sqrt(gamma * math.log(2 * n))
    return CovarianceDiagnostics(
        n=n,
        max_offdiag=max_offdiag,
        min_det2=min_det2,
        min_ratio3=min_ratio3,
        ratio3_sampled=sampled,
        chatterjee_gamma=gamma,
        chatterjee_bound=bound,
    )


def _factor_for_sampling(sigma: np.ndarray) -> Optional[np.ndarray]:
    """Cholesky factor of Σ, or None when Σ is the identity (sampling is
    direct).  Walks a small jitter ladder before giving up."""
    n = sigma.shape[0]
    if np.allclose(sigma, np.eye(n), atol=1e-12):
        return None
    last: Optional[NotPSD] = None
    for jitter in _JITTER_LADDER:
        try:
            return cholesky_psd(sigma, jitter).entries
        except NotPSD as exc:
            last = exc
    raise NotPSD("covariance is not positive semidefinite even with jitter 1e-8") from last


def gaussian_max_mc(sigma: SigmaLike, samples: int, seed: int) -> BetaEstimate:
    """Monte Carlo estimate of E max_i |Z_i|, Z ~ N(0, Σ).

    Mirrors the beta estimator's accumulation: 256 RNG streams (stream id =
    chunk index), compensated block sums, ascending merge, ddof=1 stderr.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    sigma = _as_array(sigma)
    n = sigma.shape[0]
    factor_t = None
    factor = _factor_for_sampling(sigma)
    if factor is not None:
        factor_t = np.ascontiguousarray(factor.T)
    base, rem = divmod(samples, _CHUNKS)
    sums = []
    sums_sq = []
    for c in range(_CHUNKS):
        count = base + (1 if c < rem else 0)
        if count == 0:
            continue
        stream = RngStream(seed, c)
        block_sums = []
        block_sums_sq = []
        done = 0
        while done < count:
            take = min(_BLOCK, count - done)
            g = stream.normals(take * n).reshape(take, n)
            z = g if factor_t is None else g @ factor_t
            vals = np.abs(z).max(axis=1)
            block_sums.append(float(np.sum(vals)))
            block_sums_sq.append(float(np.sum(vals * vals)))
            done += take
        sums.append(compensated_sum(block_sums))
        sums_sq.append(compensated_sum(block_sums_sq))
    s1 = compensated_sum(sorted(sums))
    s2 = compensated_sum(sorted(sums_sq))
    mean = s1 / samples
    var = max(0.0, (s2 - samples * mean * mean) / (samples - 1))
    stderr = math.sqrt(var / samples)
    return BetaEstimate(
        value=mean, method="monte_carlo", samples=samples, stderr=stderr, seed=seed
    )


def gaussian_max_expansion(n: int) -> float:
    """Three-term expansion of E max |Z_i| for independent standard normals:

        sqrt(2L) - (log L + log 4π) / (2 sqrt(2L)) + γ / sqrt(2L),  L = log 2n,

    with γ the Euler-Mascheroni constant.  Defined for n >= 2."""
    if n < 2:
        raise ValueError("gaussian_max_expansion requires n >= 2")
    big_l = math.log(2 * n)
    root = math.sqrt(2.0 * big_l)
    gamma_em = 0.5772156649015329
    return root - (math.log(big_l) + math.log(4.0 * math.pi)) / (2.0 * root) + gamma_em / root
