"""Deterministic numerics: seeded streams, compensated summation, QR, Cholesky.

Randomness contract
-------------------
All randomness in the package flows through :class:`RngStream`, a thin wrapper
around the Philox4x64-10 counter-based bit generator keyed by the pair
``(seed, stream_id)``.  The same pair yields the same sequence on every
platform and for every thread count, and spawning a stream is O(1).  Derived
variates are pinned here rather than delegated to platform samplers:

* uniforms: 53-bit doubles in [0, 1) (``next_uint64 >> 11`` scaled by 2^-53);
* Rademacher signs: +1 when the uniform is < 1/2, else -1 — exactly fair,
  since exactly half of the 2^53 representable uniforms are below 1/2;
* standard normals: the Marsaglia polar method.  Consecutive uniforms u, v are
  mapped to the square via (2u-1, 2v-1); a pair is accepted when its squared
  radius s lies in (0, 1) and then emits the two normals (2u-1)*g and
  (2v-1)*g with g = sqrt(-2 log s / s).  Rejected pairs are skipped in draw
  order, so the normal sequence is a fixed function of the uniform sequence.
  Surplus normals from a batched draw are buffered, which makes the normal
  sequence independent of how a consumer splits its requests.

Stream ids below 2^32 are used for Monte Carlo chunks.  Ids at 2^32 and above
are reserved for other consumers (matrix construction, triple sampling) so a
construction seeded with s never shares a Philox key with the chunk streams of
an estimate run at the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import NotPSD, RankDeficient

if TYPE_CHECKING:  # pragma: no cover
    from .matrix import SquareMatrix

# Reserved stream ids (see module docstring).
STREAM_CONSTRUCTION = 2**32
STREAM_TRIPLE_SAMPLER = 2**32 + 1

_POLAR_ACCEPT = np.pi / 4.0  # acceptance rate of the polar method


class RngStream:
    """A deterministic (seed, stream_id)-keyed random stream.

    Single-owner: one consumer draws from one stream; distinct streams may be
    used concurrently.  Identical (seed, stream_id) pairs replay identical
    sequences for an identical sequence of calls.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0 <= stream_id < 2**64:
            raise ValueError("stream_id must be a 64-bit unsigned integer")
        self.seed = seed
        self.stream_id = stream_id
        key = np.array([seed, stream_id], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))
        self._normal_buffer = np.empty(0, dtype=np.float64)

    def uniform(self, count: int) -> np.ndarray:
        """`count` doubles uniform on [0, 1)."""
        return self._gen.random(count)

    def rademacher(self, shape) -> np.ndarray:
        """Fair ±1 signs (int8) with the given shape."""
        shape = (shape,) if np.isscalar(shape) else tuple(shape)
        count = int(np.prod(shape)) if shape else 1
        u = self.uniform(count)
        return np.where(u < 0.5, 1, -1).astype(np.int8).reshape(shape)

    def normals(self, count: int) -> np.ndarray:
        """`count` standard normals via the polar method (see module docs)."""
        out = np.empty(count, dtype=np.float64)
        filled = 0
        if self._normal_buffer.size:
            take = min(count, self._normal_buffer.size)
            out[:take] = self._normal_buffer[:take]
            self._normal_buffer = self._normal_buffer[take:]
            filled = take
        while filled < count:
            need = count - filled
            # enough candidate pairs that one round usually suffices
            pairs = max(32, int(need / (2.0 * _POLAR_ACCEPT)) + 16)
            u = self.uniform(2 * pairs)
            x = 2.0 * u[0::2] - 1.0
            y = 2.0 * u[1::2] - 1.0
            s = x * x + y * y
            ok = (s > 0.0) & (s < 1.0)
            xs, ys, ss = x[ok], y[ok], s[ok]
            g = np.sqrt(-2.0 * np.log(ss) / ss)
            z = np.empty(2 * xs.size, dtype=np.float64)
            z[0::2] = xs * g
            z[1::2] = ys * g
            take = min(need, z.size)
            out[filled:filled + take] = z[:take]
            filled += take
            if take < z.size:
                self._normal_buffer = z[take:]
        return out


def standard_normal(stream: RngStream) -> float:
    """One standard normal variate from the stream."""
    return float(stream.normals(1)[0])


def rademacher(stream: RngStream) -> int:
    """One fair ±1 sign from the stream."""
    return int(stream.rademacher(1)[0])


def compensated_sum(values: Iterable[float]) -> float:
    """Neumaier compensated sum; error ≤ 2·eps·Σ|values|.

    Handles the classic Kahan failure case where the running total is smaller
    than the incoming term ([1e16, 1.0, -1e16] sums to exactly 1.0).
    """
    total = 0.0
    comp = 0.0
    for v in values:
        v = float(v)
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


@dataclass(frozen=True, eq=False)
class QrResult:
    """QR factorization with the positive-diagonal sign convention."""

    q: "SquareMatrix"
    r: "SquareMatrix"


def qr_positive_diag(u) -> QrResult:
    """QR of a full-rank square matrix with strictly positive R diagonal.

    Accepts a SquareMatrix or a plain square array.  Householder
    factorization with a post-hoc sign flip of the columns of Q (and rows of
    R), which for full-rank input yields the unique Q, R with R_kk > 0.
    Raises RankDeficient(k) when pivot k is numerically zero.
    """
    from .matrix import SquareMatrix

    a = u.entries if isinstance(u, SquareMatrix) else np.asarray(u, dtype=np.float64)
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r)
    tol = a.shape[0] * np.finfo(np.float64).eps * max(np.abs(diag).max(), 1e-300)
    small = np.abs(diag) <= tol
    if small.any():
        raise RankDeficient(int(np.argmax(small)))
    signs = np.where(diag < 0.0, -1.0, 1.0)
    q = q * signs[np.newaxis, :]
    r = r * signs[:, np.newaxis]
    return QrResult(q=SquareMatrix(q), r=SquareMatrix(r))


def cholesky_psd(sigma, jitter: float) -> "SquareMatrix":
    """Lower-triangular L with ‖LLᵀ − (sigma + jitter·I)‖_max ≤ 1e-9.

    Accepts a SquareMatrix or a plain square array.  `jitter` is added to
    the diagonal before factorizing; callers may retry with jitter up to
    1e-8 for semidefinite input.  Raises NotPSD when the factorization
    fails or misses the residual contract.
    """
    from .matrix import SquareMatrix

    a = sigma.entries if isinstance(sigma, SquareMatrix) else np.asarray(sigma, dtype=np.float64)
    if np.abs(a - a.T).max() > 1e-10:
        raise ValueError("sigma must be symmetric within 1e-10")
    shifted = a + jitter * np.eye(a.shape[0])
    try:
        low = np.linalg.cholesky(shifted)
    except np.linalg.LinAlgError as exc:
        raise NotPSD(f"Cholesky failed at jitter {jitter:g}: {exc}") from exc
    residual = np.abs(low @ low.T - shifted).max()
    if residual > 1e-9:
        raise NotPSD(f"Cholesky residual {residual:g} exceeds 1e-9")
    return SquareMatrix(low)
