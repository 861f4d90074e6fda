"""Evaluation of beta(A) = 2^-n sum over sign vectors of the max absolute
row response, exactly for n <= 26 and by chunked Monte Carlo above that.

Both evaluators share the same accumulation discipline: work is split into a
fixed number of chunks, each chunk accumulates block totals with compensated
(Neumaier) summation, and chunk totals are merged in ascending order so the
result is independent of execution order and reproducible bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import TooLarge
from .matrix import RowNormalizedMatrix, SignVector
from .numerics import RngStream, compensated_sum

# Largest number of sign vectors evaluated in one matrix product.
_BLOCK = 1 << 16
# Fixed chunk count: keeps the merge tree identical for a given n / sample
# budget regardless of how blocks are scheduled.
_CHUNKS = 256


@dataclass(frozen=True)
class BetaEstimate:
    """Result of a beta evaluation.

    stderr is 0.0 for the exact method; seed is None unless sampling was used.
    """

    value: float
    method: str
    samples: int
    stderr: float
    seed: Optional[int] = None


def _max_responses(entries_t: np.ndarray, x_block: np.ndarray) -> np.ndarray:
    """max_i |<a_i, x>| for each row x of x_block; entries_t is A.T."""
    return np.abs(x_block @ entries_t).max(axis=1)


def _gray_block(lo: int, hi: int, n: int) -> np.ndarray:
    """Sign vectors for Gray-code ranks lo..hi-1 of the half cube x_{n-1}=+1."""
    s = np.arange(lo, hi, dtype=np.uint64)
    bits = s ^ (s >> np.uint64(1))
    shifts = np.arange(n, dtype=np.uint64)
    b = (bits[:, np.newaxis] >> shifts[np.newaxis, :]) & np.uint64(1)
    return (1.0 - 2.0 * b).astype(np.float64)


def beta_exact(a: RowNormalizedMatrix) -> BetaEstimate:
    """Exact beta by full enumeration of the half cube x_{n-1} = +1.

    Each x and -x contribute equally, so the half-cube total is doubled.
    Raises TooLarge for n > 26 (2^25 vertices is the largest budget).
    """
    n = a.n
    if n > 26:
        raise TooLarge(f"exact evaluation supports n <= 26, got {n}")
    entries_t = np.ascontiguousarray(a.entries.T)
    half = 1 << (n - 1)
    chunks = min(half, _CHUNKS)
    per_chunk = half // chunks
    chunk_totals = []
    for c in range(chunks):
        lo = c * per_chunk
        block_sums = []
        for blo in range(lo, lo + per_chunk, _BLOCK):
            bhi = min(blo + _BLOCK, lo + per_chunk)
            vals = _max_responses(entries_t, _gray_block(blo, bhi, n))
            block_sums.append(float(np.sum(vals)))
        chunk_totals.append(compensated_sum(block_sums))
    total = compensated_sum(sorted(chunk_totals))
    value = total / float(half)  # == 2^-n * (2 * half-cube sum)
    return BetaEstimate(value=value, method="exact", samples=2**n, stderr=0.0)


def beta_monte_carlo(a: RowNormalizedMatrix, samples: int, seed: int) -> BetaEstimate:
    """Monte Carlo beta estimate from uniform sign vectors.

    The sample budget is spread over 256 independent RNG streams (stream id =
    chunk index), so the estimate for a given (samples, seed) pair does not
    depend on scheduling.  stderr is the usual ddof=1 standard error; it is
    exactly 0.0 when every draw gives the same value (e.g. the identity).
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    n = a.n
    entries_t = np.ascontiguousarray(a.entries.T)
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
            x = stream.rademacher((take, n)).astype(np.float64)
            vals = _max_responses(entries_t, x)
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


def max_abs_image(
    a: RowNormalizedMatrix, x: Union[SignVector, np.ndarray]
) -> Tuple[float, int, int, bool]:
    """(value, row, sign, tie) for the max absolute row response at x.

    row is the smallest index attaining the max; sign is the sign of the
    attaining inner product (+1 when it is zero); tie reports whether a
    second row comes within 1e-12 of the max.
    """
    if isinstance(x, SignVector):
        xv = x.to_array()
    else:
        xv = np.asarray(x, dtype=np.float64)
    if xv.shape != (a.n,):
        raise ValueError(f"expected a length-{a.n} vector, got shape {xv.shape}")
    y = a.entries @ xv
    absy = np.abs(y)
    row = int(np.argmax(absy))
    value = float(absy[row])
    sign = -1 if y[row] < 0 else 1
    tie = int(np.count_nonzero(absy >= value - 1e-12)) >= 2
    return value, row, sign, tie
