"""
Threshold arithmetic for Large Euler Subgraph.

f(k, l) counts the internally disjoint short paths that force an induced Euler
subgraph on k vertices; delta_k(k) is the degree bound for 2-connected graphs and
tw_threshold(k) the treewidth bound derived from it. All values are exact ints.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, List


def ramsey_upper(r: int, s: int) -> int:
    """Binomial upper bound on the Ramsey number R(r, s)."""
    if r < 1 or s < 1:
        raise ValueError(f"Ramsey parameters must be positive, got ({r}, {s})")
    return comb(r + s - 2, r - 1)


def _check_k_ell(k: int, ell: int) -> None:
    if k < 3:
        raise ValueError(f"f is defined for k >= 3, got k={k}")
    if ell < 2:
        raise ValueError(f"f is defined for path length >= 2, got {ell}")


@lru_cache(maxsize=None)
def _f(k: int, ell: int) -> int:
    if ell == 2:
        return ramsey_upper(k, k - 1) + 1
    return (k - 1) * (2 * (ell - 1) * (_f(k, ell // 2 + 1) - 1) + 1) + 1


def f_value(k: int, ell: int) -> int:
    _check_k_ell(k, ell)
    return _f(k, ell)


def f_table(k: int, max_ell: int) -> Dict[int, int]:
    """f(k, 2..max_ell) computed bottom-up, independent of the memoized recursion."""
    _check_k_ell(k, max_ell)
    table = {2: comb(2 * k - 3, k - 1) + 1}
    for ell in range(3, max_ell + 1):
        table[ell] = (k - 1) * (2 * (ell - 1) * (table[ell // 2 + 1] - 1) + 1) + 1
    return table


def _check_k(k: int) -> None:
    if k < 4:
        raise ValueError(f"the degree and treewidth thresholds need k >= 4, got k={k}")


def delta_k(k: int) -> int:
    _check_k(k)
    F = f_value(k, 3 * k - 8)
    q, r = divmod((F - 2) ** (3 * (k - 3)) - 1, F - 3)
    if r:
        raise ArithmeticError(f"geometric series for k={k} does not divide exactly (remainder {r})")
    return 1 + (F - 1) * q


def geometric_delta_k(k: int) -> int:
    """delta_k as 1 + (F-1) * sum of (F-2)^i; agrees with the closed form."""
    _check_k(k)
    F = f_value(k, 3 * k - 8)
    return 1 + (F - 1) * sum((F - 2) ** i for i in range(3 * (k - 3)))


def tw_threshold(k: int) -> int:
    return k * (delta_k(k) - 1) + 2


@dataclass(frozen=True)
class ThresholdParams:
    k: int
    f_table: Dict[int, int]
    delta_k: int
    tw_threshold: int


def threshold_params(k: int) -> ThresholdParams:
    _check_k(k)
    d = delta_k(k)
    return ThresholdParams(k, f_table(k, 3 * k - 8), d, k * (d - 1) + 2)


def threshold_report(k: int) -> List[str]:
    """Bare decimals, one per line: f(2..3k-8), then delta_k, then the treewidth threshold."""
    p = threshold_params(k)
    values = [v for _, v in sorted(p.f_table.items())] + [p.delta_k, p.tw_threshold]
    return [str(v) for v in values]
