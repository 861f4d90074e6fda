"""Cell decomposition of the sign cube induced by a row-normalized matrix.

Cell i collects the sign vectors whose largest absolute row response is row
i (smallest index on exact ties); its positive half S_i keeps the member of
each antipodal pair {x, -x} with a nonnegative response.  Everything here is
integer-exact: sizes and centroid sums are accumulated in int64 over the
half cube x_{n-1} = +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from .asymptotics import f_level1
from .beta import _gray_block, beta_exact
from .errors import TooLarge
from .matrix import RowNormalizedMatrix

_BLOCK = 1 << 16
_TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CellPartition:
    """Sizes and centroid sums of the positive cell halves S_1..S_n.

    sizes[i] = |S_i| and centroid_sums[i] = sum of the vectors in S_i (an
    integer vector).  ties and degenerate count full-cube vertices whose max
    response is attained twice within 1e-12, resp. is below 1e-12.
    """

    n: int
    sizes: np.ndarray
    centroid_sums: np.ndarray
    ties: int
    degenerate: int


def compute_cells(a: RowNormalizedMatrix) -> CellPartition:
    """Enumerate the half cube and tally cell sizes and centroid sums.

    Requires n <= 26.  Every vertex is assigned to exactly one cell (first
    max rule), so sizes always sum to 2^(n-1); ties are reported, not
    excluded.
    """
    n = a.n
    if n > 26:
        raise TooLarge(f"cell enumeration supports n <= 26, got {n}")
    entries_t = np.ascontiguousarray(a.entries.T)
    half = 1 << (n - 1)
    sizes = np.zeros(n, dtype=np.int64)
    csums = np.zeros((n, n), dtype=np.int64)
    ties = 0
    degenerate = 0
    for lo in range(0, half, _BLOCK):
        x = _gray_block(lo, min(lo + _BLOCK, half), n)
        y = x @ entries_t
        absy = np.abs(y)
        row = np.argmax(absy, axis=1)
        top = absy[np.arange(len(row)), row]
        ties += 2 * int(np.count_nonzero((absy >= (top - _TIE_TOL)[:, np.newaxis]).sum(axis=1) >= 2))
        degenerate += 2 * int(np.count_nonzero(top < _TIE_TOL))
        sign = np.where(y[np.arange(len(row)), row] < 0, -1.0, 1.0)
        contrib = (sign[:, np.newaxis] * x).astype(np.int64)
        sizes += np.bincount(row, minlength=n).astype(np.int64)
        np.add.at(csums, row, contrib)
    sizes.setflags(write=False)
    csums.setflags(write=False)
    return CellPartition(n=n, sizes=sizes, centroid_sums=csums, ties=ties, degenerate=degenerate)


def level1_weights(
    partition: Union[CellPartition, np.ndarray], n: Optional[int] = None
) -> np.ndarray:
    """Level-1 Fourier weight per cell: W1[i] = sum_j (centroid_sums[i][j] / 2^n)^2.

    Accepts a CellPartition, or a raw (k, n) integer array of centroid sums
    together with the ambient dimension n (e.g. to weight an explicit vertex
    set such as a subcube).
    """
    if isinstance(partition, CellPartition):
        csums = partition.centroid_sums
        n = partition.n
    else:
        if n is None:
            raise ValueError("n is required when passing raw centroid sums")
        csums = np.asarray(partition)
    scaled = csums.astype(np.float64) / float(2**n)
    return np.einsum("ij,ij->i", scaled, scaled)


def subcube_w1_reference(n: int) -> float:
    """sqrt(W1) of the positive half of a codim-k subcube at k = floor(log2 n) + 1.

    This is the cell profile of a highly balanced tree matrix: k fixed
    coordinates leave 2^(n-k) vertices whose centroid sum is 2^(n-k) on each
    fixed coordinate, hence sqrt(W1) = sqrt(k) * 2^-k.
    """
    if n < 1:
        raise ValueError("n must be positive")
    k = int(math.log2(n)) + 1
    return math.sqrt(k) * 2.0**-k


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    """Exact beta together with the level-1 bound chain and cell shape stats.

    centroid_alignment[i] is cos of the angle between row i and its cell's
    centroid sum (0.0 for an empty cell), clipped to [-1, 1].
    """

    beta: float
    w1: np.ndarray
    alphas: np.ndarray
    bound_cs: float
    bound_level1: float
    bound_jensen: float
    centroid_alignment: np.ndarray
    volume_deviation: float
    identity_residual: float

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "w1": [float(v) for v in self.w1],
            "alphas": [float(v) for v in self.alphas],
            "bound_cs": self.bound_cs,
            "bound_level1": self.bound_level1,
            "bound_jensen": self.bound_jensen,
            "centroid_alignment": [float(v) for v in self.centroid_alignment],
            "volume_deviation": self.volume_deviation,
            "identity_residual": self.identity_residual,
        }


def analyze(
    a: RowNormalizedMatrix, *, partition: Optional[CellPartition] = None
) -> AnalysisReport:
    """Exact beta, the bound chain beta <= bound_cs <= bound_level1 <=
    bound_jensen, and cell geometry summaries.

    beta comes from independent enumeration (beta_exact), not from the
    centroid identity, so identity_residual is a genuine cross-check:
    |beta - 2^(1-n) * sum_i <a_i, centroid_sums[i]>|.
    """
    n = a.n
    if partition is None:
        partition = compute_cells(a)
    elif partition.n != n:
        raise ValueError("partition dimension does not match matrix")
    w1 = level1_weights(partition)
    alphas = partition.sizes.astype(np.float64) / float(2**n)
    beta = beta_exact(a).value
    bound_cs = 2.0 * float(np.sum(np.sqrt(w1)))
    bound_level1 = 2.0 * sum(f_level1(float(al)) for al in alphas)
    bound_jensen = math.sqrt(2.0 * math.log(2 * n))

    csums = partition.centroid_sums.astype(np.float64)
    norms = np.linalg.norm(csums, axis=1)
    inner = np.einsum("ij,ij->i", a.entries, csums)
    denom = np.where(norms > 0, norms, 1.0)
    alignment = np.clip(np.where(norms > 0, inner / denom, 0.0), -1.0, 1.0)
    volume_deviation = float(np.sum((alphas - 1.0 / (2 * n)) ** 2))
    identity_residual = abs(beta - 2.0 ** (1 - n) * float(np.sum(inner)))
    alphas.setflags(write=False)
    w1.setflags(write=False)
    alignment.setflags(write=False)
    return AnalysisReport(
        beta=beta,
        w1=w1,
        alphas=alphas,
        bound_cs=bound_cs,
        bound_level1=bound_level1,
        bound_jensen=bound_jensen,
        centroid_alignment=alignment,
        volume_deviation=volume_deviation,
        identity_residual=identity_residual,
    )
