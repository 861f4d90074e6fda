"""Core data model: square matrices, row normalization, matrix I/O, symmetry.

The objective β(A) is invariant under row permutations, row sign flips, and
column (coordinate) sign flips and permutations; `equivalent_up_to_symmetry`
decides membership in one orbit of that group for small n, which is how the
closed-form fixtures are compared against constructed matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import DimensionMismatch, ParseError, TooLarge, ZeroRow

ArrayLike = Union[np.ndarray, Sequence[Sequence[float]]]


@dataclass(frozen=True, eq=False)
class SquareMatrix:
    """Dense n×n float64 matrix with cached row norms; immutable."""

    entries: np.ndarray
    row_norms: np.ndarray = field(init=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square 2-d array, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("matrix must have dimension >= 1")
        if not np.isfinite(arr).all():
            raise ValueError("matrix entries must be finite")
        norms = np.sqrt(np.einsum("ij,ij->i", arr, arr))
        arr.setflags(write=False)
        norms.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "row_norms", norms)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class RowNormalizedMatrix:
    """A SquareMatrix whose rows are unit ℓ2 vectors (within 1e-12)."""

    inner: SquareMatrix

    def __post_init__(self):
        inner = self.inner
        if not isinstance(inner, SquareMatrix):
            inner = SquareMatrix(np.asarray(inner))
            object.__setattr__(self, "inner", inner)
        dev = np.abs(inner.row_norms - 1.0).max()
        if dev > 1e-12:
            raise ValueError(
                f"rows are not unit norm (max deviation {dev:.3e}); "
                "use normalize_rows"
            )

    @property
    def entries(self) -> np.ndarray:
        return self.inner.entries

    @property
    def row_norms(self) -> np.ndarray:
        return self.inner.row_norms

    @property
    def n(self) -> int:
        return self.inner.n


@dataclass(frozen=True)
class ConstructionSpec:
    """Which matrix family to build: kind, dimension, and (for random) seed."""

    kind: str
    n: int
    seed: int = 0

    KINDS = (
        "identity",
        "random_sign",
        "orthonormal_almost_hadamard",
        "tree",
        "known_optimal",
        "hadamard",
    )

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {self.KINDS}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.kind == "known_optimal" and self.n not in (1, 2, 3, 4, 5):
            raise ValueError("known_optimal: supported n: 1..5")


@dataclass(frozen=True)
class SignVector:
    """A hypercube vertex packed into an integer: bit j set means x_j = -1."""

    bits: int
    n: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError("bits must fit in n bits")

    def to_array(self) -> np.ndarray:
        j = np.arange(self.n, dtype=np.uint64)
        b = (np.uint64(self.bits) >> j) & np.uint64(1)
        return 1.0 - 2.0 * b.astype(np.float64)

    @classmethod
    def from_array(cls, x: np.ndarray) -> "SignVector":
        x = np.asarray(x)
        bits = 0
        for j in range(x.size):
            if x[j] < 0:
                bits |= 1 << j
        return cls(bits=bits, n=x.size)


def normalize_rows(m: Union[SquareMatrix, ArrayLike]) -> RowNormalizedMatrix:
    """Divide each row by its ℓ2 norm. Raises ZeroRow for a vanishing row."""
    sq = m if isinstance(m, SquareMatrix) else SquareMatrix(np.asarray(m, dtype=np.float64))
    norms = sq.row_norms
    tiny = norms < 1e-300
    if tiny.any():
        raise ZeroRow(int(np.argmax(tiny)))
    return RowNormalizedMatrix(SquareMatrix(sq.entries / norms[:, np.newaxis]))


def save_matrix(m: Union[SquareMatrix, RowNormalizedMatrix], path) -> None:
    """Write the matrix file: first line n, then n comma-separated rows.

    Entries are printed with 17 significant digits, so save → load round-trips
    every float64 bit-exactly.
    """
    entries = m.entries
    n = entries.shape[0]
    lines = [str(n)]
    for row in entries:
        lines.append(",".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_matrix(path) -> SquareMatrix:
    """Read a matrix file written by `save_matrix`."""
    text = Path(path).read_text()
    lines = [line.strip() for line in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise ParseError(1, 0, "empty file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(1, 0, f"expected integer dimension, got {lines[0]!r}") from None
    if n < 1:
        raise ParseError(1, 0, f"dimension must be positive, got {n}")
    if len(lines) - 1 != n:
        raise DimensionMismatch(f"header says {n} rows, file has {len(lines) - 1}")
    out = np.empty((n, n), dtype=np.float64)
    for i, line in enumerate(lines[1:]):
        fields = line.split(",")
        if len(fields) != n:
            raise DimensionMismatch(
                f"row {i} has {len(fields)} entries, expected {n}"
            )
        for j, token in enumerate(fields):
            try:
                out[i, j] = float(token)
            except ValueError:
                raise ParseError(i + 2, j, f"bad float {token.strip()!r}") from None
    if not np.isfinite(out).all():
        raise ParseError(1, 0, "non-finite entry in matrix")
    return SquareMatrix(out)


def _match_rows(c: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """Can some signed row permutation of c, with consistent column sign
    flips, reproduce b entrywise within tol?  Backtracking over target rows;
    column signs are forced by each matched entry pair as we go."""
    n = b.shape[0]
    used = [False] * n
    col_sign = [0] * n  # 0 = undetermined

    def extend(k: int) -> bool:
        if k == n:
            return True
        target = b[k]
        for c_idx in range(n):
            if used[c_idx]:
                continue
            source = c[c_idx]
            for rho in (1.0, -1.0):
                trial = col_sign.copy()
                ok = True
                for j in range(n):
                    cv = rho * source[j]
                    tv = target[j]
                    if abs(cv) <= tol and abs(tv) <= tol:
                        continue  # both ~zero: no sign information
                    if abs(cv - tv) <= tol:
                        need = 1
                    elif abs(cv + tv) <= tol:
                        need = -1
                    else:
                        ok = False
                        break
                    if trial[j] == 0:
                        trial[j] = need
                    elif trial[j] != need:
                        ok = False
                        break
                if not ok:
                    continue
                used[c_idx] = True
                saved = col_sign[:]
                col_sign[:] = trial
                if extend(k + 1):
                    return True
                col_sign[:] = saved
                used[c_idx] = False
        return False

    return extend(0)


def equivalent_up_to_symmetry(
    a: RowNormalizedMatrix, b: RowNormalizedMatrix, tol: float = 1e-12
) -> bool:
    """True iff b = (row signed permutation) · a · (column signed permutation).

    Exhaustive over column permutations (n! for n ≤ 8) with a backtracking row
    matcher that forces column signs from matched entries, so the comparison
    is exact within tol with no rounding-grid canonicalization.
    """
    ae, be = a.entries, b.entries
    if ae.shape[0] != be.shape[0]:
        return False
    n = ae.shape[0]
    if n > 8:
        raise TooLarge(f"symmetry search supports n <= 8, got {n}")
    # cheap necessary condition: absolute entries form the same multiset
    if np.abs(np.sort(np.abs(ae), axis=None) - np.sort(np.abs(be), axis=None)).max() > tol:
        return False
    for perm in itertools.permutations(range(n)):
        if _match_rows(ae[:, perm], be, tol):
            return True
    return False


def absolute_entry_fingerprint(a: Union[SquareMatrix, RowNormalizedMatrix], decimals: int = 9) -> tuple:
    """Sorted rounded |entries| — invariant under the symmetry group.

    A necessary but NOT sufficient condition for equivalence; this is the only
    comparison offered beyond n = 8, where the exhaustive search is off the
    table.
    """
    flat = np.sort(np.round(np.abs(a.entries), decimals), axis=None)
    return tuple(flat.tolist())
