"""Greedy r-nets: maximal subsets with pairwise distances above r."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .metric import FiniteMetric, leq


@dataclass(frozen=True)
class NetResult:
    chosen: tuple[int, ...]
    radius: float


def greedy_net(m: FiniteMetric, points: Sequence[int], r: float, tol: float = 0.0) -> NetResult:
    """Scan points in input order, keeping each that is > r from all kept so far.

    The result is pairwise separated (d > r) and maximal: every input point
    is within r of some chosen point or is itself chosen.  Fixing input
    order makes the net reproducible; any maximal net works downstream.
    """
    if not points:
        raise ValueError("points must be non-empty")
    chosen: list[int] = []
    for p in points:
        if all(not leq(m.distance(p, c), r, tol) for c in chosen):
            chosen.append(p)
    return NetResult(chosen=tuple(chosen), radius=r)
