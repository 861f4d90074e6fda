"""Matrix families: Hadamard generators, orthonormal almost-Hadamard matrices,
normalized random sign matrices, balanced-tree (subcube) matrices, and the
known optimal matrices for n ≤ 5.

Hadamard recipes
----------------
Orders are produced by Sylvester doubling, the two Paley constructions
(prime modulus only — no prime-power fields), and Kronecker products of
anything already constructible.  A recipe is a nested tuple such as
``("kronecker", ("sylvester", 1), ("paley_i", 11))`` and `build_hadamard`
materializes it.  `smallest_constructible_order` returns the smallest order
m ≥ n this generator set reaches, which can exceed the smallest true Hadamard
order when only prime-power Paley moduli would cover it (e.g. 52); the next
power of two bounds the search.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .errors import BadResidue, NotPrime, Unsupported
from .matrix import ConstructionSpec, RowNormalizedMatrix, SquareMatrix, normalize_rows
from .numerics import STREAM_CONSTRUCTION, RngStream, qr_positive_diag

Recipe = tuple

# Orders up to this size are integer-verified at construction time; larger
# ones can be checked explicitly with HadamardMatrix.verify().
_AUTO_VERIFY_LIMIT = 600


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    """±1 matrix of order m with HHᵀ = mI (verified in integer arithmetic)."""

    m: int
    entries: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.entries, dtype=np.int8)
        if arr.shape != (self.m, self.m):
            raise ValueError(f"entries shape {arr.shape} does not match order {self.m}")
        if not np.isin(arr, (-1, 1)).all():
            raise ValueError("entries must be ±1")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        if self.m <= _AUTO_VERIFY_LIMIT:
            self.verify()

    def verify(self) -> None:
        """Exact integer check HHᵀ = mI; raises ValueError on failure."""
        h = self.entries.astype(np.int64)
        gram = h @ h.T
        if not np.array_equal(gram, self.m * np.eye(self.m, dtype=np.int64)):
            raise ValueError(f"HHᵀ != {self.m}·I: not a Hadamard matrix")


@dataclass(frozen=True, eq=False)
class TreeMatrix:
    """Row-normalized tree matrix together with its root-to-leaf paths.

    paths[i] lists (coordinate, ±1 label) pairs for leaf i in planar
    left-to-right order; coordinate 0 always carries the root edge's +1.
    """

    matrix: RowNormalizedMatrix
    paths: Tuple[Tuple[Tuple[int, int], ...], ...]


def sylvester(k: int) -> HadamardMatrix:
    """Order-2^k Hadamard matrix by Sylvester doubling."""
    if not 0 <= k <= 24:
        raise ValueError("sylvester supports 0 <= k <= 24")
    h = np.array([[1]], dtype=np.int8)
    for _ in range(k):
        h = np.block([[h, h], [h, -h]]).astype(np.int8)
    return HadamardMatrix(m=1 << k, entries=h)


def _check_prime(q: int) -> None:
    if q < 2:
        raise NotPrime(f"{q} is not prime")
    if q in (2, 3):
        return
    if q % 2 == 0 or q % 3 == 0:
        raise NotPrime(f"{q} is not prime")
    f = 5
    while f * f <= q:
        if q % f == 0 or q % (f + 2) == 0:
            raise NotPrime(f"{q} is not prime")
        f += 6


def _jacobsthal(q: int) -> np.ndarray:
    """Q_ij = chi(j - i) with chi the quadratic character mod q (chi(0)=0)."""
    chi = -np.ones(q, dtype=np.int8)
    chi[0] = 0
    for x in range(1, q):
        chi[(x * x) % q] = 1
    idx = np.arange(q)
    diff = (idx[np.newaxis, :] - idx[:, np.newaxis]) % q
    return chi[diff]


def paley_i(q: int) -> HadamardMatrix:
    """Order q+1 Hadamard matrix from a prime q ≡ 3 (mod 4)."""
    _check_prime(q)
    if q % 4 != 3:
        raise BadResidue(f"paley_i requires q ≡ 3 (mod 4), got {q}")
    jac = _jacobsthal(q)
    m = q + 1
    h = np.empty((m, m), dtype=np.int8)
    h[0, 0] = 1
    h[0, 1:] = 1
    h[1:, 0] = -1
    h[1:, 1:] = jac
    np.fill_diagonal(h, 1)  # S + I puts +1 where chi(0) sat
    return HadamardMatrix(m=m, entries=h)


def paley_ii(q: int) -> HadamardMatrix:
    """Order 2(q+1) Hadamard matrix from a prime q ≡ 1 (mod 4)."""
    _check_prime(q)
    if q % 4 != 1:
        raise BadResidue(f"paley_ii requires q ≡ 1 (mod 4), got {q}")
    jac = _jacobsthal(q)
    m1 = q + 1
    s = np.empty((m1, m1), dtype=np.int8)
    s[0, 0] = 0
    s[0, 1:] = 1
    s[1:, 0] = 1
    s[1:, 1:] = jac
    block_s = np.array([[1, 1], [1, -1]], dtype=np.int8)
    block_d = np.array([[1, -1], [-1, -1]], dtype=np.int8)
    h = np.kron(s, block_s) + np.kron(np.eye(m1, dtype=np.int8), block_d)
    return HadamardMatrix(m=2 * m1, entries=h)


def kronecker(a: HadamardMatrix, b: HadamardMatrix) -> HadamardMatrix:
    """Kronecker product; order a.m · b.m."""
    return HadamardMatrix(m=a.m * b.m, entries=np.kron(a.entries, b.entries))


def build_hadamard(recipe: Recipe) -> HadamardMatrix:
    """Materialize a recipe tuple produced by `smallest_constructible_order`."""
    kind = recipe[0]
    if kind == "sylvester":
        return sylvester(recipe[1])
    if kind == "paley_i":
        return paley_i(recipe[1])
    if kind == "paley_ii":
        return paley_ii(recipe[1])
    if kind == "kronecker":
        return kronecker(build_hadamard(recipe[1]), build_hadamard(recipe[2]))
    raise ValueError(f"unknown recipe {recipe!r}")


def format_recipe(recipe: Recipe) -> str:
    kind = recipe[0]
    if kind == "kronecker":
        return f"kronecker({format_recipe(recipe[1])}, {format_recipe(recipe[2])})"
    return f"{kind}({recipe[1]})"


def _primes_up_to(limit: int) -> List[int]:
    if limit < 2:
        return []
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


_ORDER_TABLE_CACHE: Dict[int, Dict[int, Recipe]] = {}


def constructible_orders(limit: int) -> Dict[int, Recipe]:
    """All orders ≤ limit our generators reach, with one recipe per order.

    Base constructions are inserted first (sylvester, then paley_i and
    paley_ii by ascending modulus), then the table is closed under Kronecker
    products; the first recipe found for an order is kept, so powers of two
    always resolve to plain Sylvester doubling.
    """
    if limit in _ORDER_TABLE_CACHE:
        return _ORDER_TABLE_CACHE[limit]
    table: Dict[int, Recipe] = {}

    def add(m: int, recipe: Recipe) -> bool:
        if m <= limit and m not in table:
            table[m] = recipe
            return True
        return False

    k = 0
    while (1 << k) <= limit and k <= 24:
        add(1 << k, ("sylvester", k))
        k += 1
    for q in _primes_up_to(limit - 1):
        if q % 4 == 3:
            add(q + 1, ("paley_i", q))
    for q in _primes_up_to(limit // 2 - 1 if limit >= 2 else 0):
        if q % 4 == 1:
            add(2 * (q + 1), ("paley_ii", q))
    changed = True
    while changed:
        changed = False
        orders = sorted(table)
        for i, a in enumerate(orders):
            if a * a > limit:
                break
            for b in orders[i:]:
                p = a * b
                if p > limit:
                    break
                if add(p, ("kronecker", table[a], table[b])):
                    changed = True
    _ORDER_TABLE_CACHE[limit] = table
    return table


def smallest_constructible_order(n: int) -> Tuple[int, Recipe]:
    """Smallest constructible Hadamard order m ≥ n and a recipe for it."""
    if not 1 <= n <= 2**20:
        raise ValueError("n must be in 1..2^20")
    limit = 1
    while limit < n:
        limit <<= 1
    table = constructible_orders(limit)
    m = min(o for o in table if o >= n)
    return m, table[m]


def orthonormal_almost_hadamard(n: int) -> RowNormalizedMatrix:
    """QR-orthogonalized top-left n×n block of the smallest Hadamard ≥ n.

    Emits a RuntimeWarning when the order gap m − n reaches 4, where the
    flatness guarantee for the truncated block no longer applies.
    """
    if n < 1:
        raise ValueError("n must be positive")
    m, recipe = smallest_constructible_order(n)
    if m - n >= 4:
        warnings.warn(
            f"smallest constructible order {m} exceeds n={n} by {m - n} >= 4; "
            "flatness of the orthogonalized block is not guaranteed",
            RuntimeWarning,
            stacklevel=2,
        )
    h = build_hadamard(recipe)
    block = h.entries[:n, :n].astype(np.float64) / math.sqrt(m)
    result = qr_positive_diag(SquareMatrix(block))
    return RowNormalizedMatrix(result.q)


def random_sign(n: int, seed: int) -> RowNormalizedMatrix:
    """i.i.d. ±1/√n entries, deterministic for a fixed seed."""
    if n < 1:
        raise ValueError("n must be positive")
    stream = RngStream(seed, STREAM_CONSTRUCTION)
    signs = stream.rademacher((n, n)).astype(np.float64)
    return normalize_rows(signs)


def _heap_leaf_order(n: int) -> List[int]:
    """Leaves of the complete binary tree on 2n-1 heap nodes, planar order."""
    order: List[int] = []
    stack = [1]
    while stack:
        v = stack.pop()
        if v >= n:
            order.append(v)
        else:
            stack.append(2 * v + 1)  # right child pushed first, popped second
            stack.append(2 * v)
    return order


def tree_matrix(n: int) -> TreeMatrix:
    """Highly balanced binary tree matrix on n leaves.

    The tree is the complete (breadth-first filled) binary tree with 2n-1
    vertices; leaves are taken in planar left-to-right order.  A row is the
    root-to-leaf label path — root edge +1 at coordinate 0, then -1 for every
    left edge and +1 for every right edge — zero-padded and normalized.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        matrix = RowNormalizedMatrix(SquareMatrix(np.array([[1.0]])))
        return TreeMatrix(matrix=matrix, paths=(((0, 1),),))
    rows = np.zeros((n, n), dtype=np.float64)
    paths: List[Tuple[Tuple[int, int], ...]] = []
    for i, leaf in enumerate(_heap_leaf_order(n)):
        labels = []
        v = leaf
        while v > 1:
            labels.append(-1 if v % 2 == 0 else 1)
            v //= 2
        labels.reverse()
        path = [(0, 1)] + [(t + 1, lab) for t, lab in enumerate(labels)]
        paths.append(tuple(path))
        for coord, lab in path:
            rows[i, coord] = lab
    return TreeMatrix(matrix=normalize_rows(rows), paths=tuple(paths))


_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)


def known_optimal(n: int) -> RowNormalizedMatrix:
    """The proven-optimal matrices for n ≤ 5 (hard-coded closed forms)."""
    if n == 1:
        rows = [[1.0]]
    elif n == 2:
        rows = [[1, 1], [1, -1]]
        rows = np.array(rows) / _SQRT2
    elif n == 3:
        rows = [
            [1 / _SQRT3, 1 / _SQRT3, 1 / _SQRT3],
            [1 / _SQRT3, -1 / _SQRT3, 1 / _SQRT3],
            [-1 / _SQRT2, 0.0, 1 / _SQRT2],
        ]
    elif n == 4:
        rows = np.array([
            [1, 1, 1, 0],
            [1, 1, -1, 0],
            [1, -1, 1, 0],
            [1, -1, -1, 0],
        ]) / _SQRT3
    elif n == 5:
        s = _SQRT3
        rows = np.array([
            [2, 2, 0, 0, 2],
            [-2, 2, 0, 2, 0],
            [-2, 0, 0, -2, 2],
            [0, -s, s, s, s],
            [0, s, s, -s, -s],
        ]) / (2 * s)
    else:
        raise Unsupported(f"known_optimal: supported n: 1..5, got {n}")
    return normalize_rows(np.asarray(rows, dtype=np.float64))


def identity(n: int) -> RowNormalizedMatrix:
    """The identity matrix (each row already has unit norm)."""
    if n < 1:
        raise ValueError("n must be positive")
    return RowNormalizedMatrix(SquareMatrix(np.eye(n)))


def hadamard_normalized(n: int) -> RowNormalizedMatrix:
    """H/√n for a constructible Hadamard order n; Unsupported otherwise."""
    m, recipe = smallest_constructible_order(n)
    if m != n:
        raise Unsupported(
            f"no Hadamard construction of order {n}; nearest constructible order is {m}"
        )
    h = build_hadamard(recipe)
    return RowNormalizedMatrix(h.entries.astype(np.float64) / math.sqrt(n))


def construct(spec: ConstructionSpec) -> RowNormalizedMatrix:
    """Build the matrix a ConstructionSpec describes (seed only affects
    random_sign)."""
    if spec.kind == "identity":
        return identity(spec.n)
    if spec.kind == "random_sign":
        return random_sign(spec.n, spec.seed)
    if spec.kind == "orthonormal_almost_hadamard":
        return orthonormal_almost_hadamard(spec.n)
    if spec.kind == "tree":
        return tree_matrix(spec.n).matrix
    if spec.kind == "known_optimal":
        return known_optimal(spec.n)
    if spec.kind == "hadamard":
        return hadamard_normalized(spec.n)
    raise Unsupported(f"unknown construction kind {spec.kind!r}")
