"""Closed-form growth curves: the level-1 envelope f, the two-term expansion
of the optimal growth rate, the Jensen ceiling, the subcube (tree) rate, and
the abstract lower envelope, plus a sweep that tabulates them per n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List

from .gaussian import gaussian_max_expansion

EULER_MASCHERONI = 0.5772156649015329


def f_level1(x: float) -> float:
    """Envelope f(x) = x * sqrt(2 log(1/x)) on (0, 1], extended by f(0) = 0.

    This is the largest sqrt(W1) a density-x vertex set can carry; note
    f(1/(2n)) * 2n = sqrt(2 log 2n), which is how the Jensen ceiling arises.
    """
    if x == 0.0:
        return 0.0
    if not 0.0 < x <= 1.0:
        raise ValueError(f"f_level1 requires 0 <= x <= 1, got {x}")
    return x * math.sqrt(2.0 * math.log(1.0 / x))


def jensen_upper(n: int) -> float:
    """sqrt(2 log 2n): the concavity ceiling for the level-1 bound chain."""
    if n < 1:
        raise ValueError("n must be positive")
    return math.sqrt(2.0 * math.log(2 * n))


def beta_expansion(n: int) -> float:
    """Two-term expansion of the optimal rate: sqrt(2L) - log L / (2 sqrt(2L)),
    L = log 2n.  Defined for n >= 3."""
    if n < 3:
        raise ValueError("beta_expansion requires n >= 3")
    big_l = math.log(2 * n)
    root = math.sqrt(2.0 * big_l)
    return root - math.log(big_l) / (2.0 * root)


def abstract_lower(n: int) -> float:
    """Lower envelope (1 - log log(2n) / (4 log 2n)) * sqrt(2 log 2n).

    Algebraically identical to beta_expansion; kept as a separately coded
    curve so the equality acts as a cross-check, not an assumption.
    """
    if n < 3:
        raise ValueError("abstract_lower requires n >= 3")
    big_l = math.log(2 * n)
    return (1.0 - math.log(big_l) / (4.0 * big_l)) * math.sqrt(2.0 * big_l)


def subcube_rate(n: int) -> float:
    """sqrt(log2 n + 1): the rate achieved by balanced-tree (subcube) cells."""
    if n < 1:
        raise ValueError("n must be positive")
    return math.sqrt(math.log2(n) + 1.0)


@dataclass(frozen=True)
class AsymptoticCurvePoint:
    n: int
    beta_expansion: float
    jensen_upper: float
    subcube_rate: float
    gaussian_max: float
    abstract_lower: float


def curve_sweep(ns: Iterable[int]) -> List[AsymptoticCurvePoint]:
    """Tabulate every curve at each n (all n must be >= 3); [] maps to []."""
    points = []
    for n in ns:
        n = int(n)
        if n < 3:
            raise ValueError(f"curve_sweep requires n >= 3, got {n}")
        points.append(
            AsymptoticCurvePoint(
                n=n,
                beta_expansion=beta_expansion(n),
                jensen_upper=jensen_upper(n),
                subcube_rate=subcube_rate(n),
                gaussian_max=gaussian_max_expansion(n),
                abstract_lower=abstract_lower(n),
            )
        )
    return points


def curve_to_csv(points: Iterable[AsymptoticCurvePoint]) -> str:
    """Render curve points as CSV text (header always present)."""
    lines = ["n,beta_expansion,jensen_upper,subcube_rate,gaussian_max,abstract_lower"]
    for p in points:
        lines.append(
            f"{p.n},{p.beta_expansion:.17g},{p.jensen_upper:.17g},"
            f"{p.subcube_rate:.17g},{p.gaussian_max:.17g},{p.abstract_lower:.17g}"
        )
    return "\n".join(lines) + "\n"
