"""Layered successor graph linking delta-close points of consecutive levels."""

from __future__ import annotations

from dataclasses import dataclass

from .instance import TemporalSampling, Trajectory, displacement
from .metric import leq


@dataclass(frozen=True)
class LevelGraph:
    """Forward adjacency between consecutive levels.

    succ[i][a] lists the local indices (into levels[i+1]) of points within
    delta of levels[i][a], sorted by input order.  reach[i][a] is True when
    a full path to the last level exists from that vertex.
    """

    sampling: TemporalSampling
    delta: float
    succ: tuple[tuple[tuple[int, ...], ...], ...]
    reach: tuple[tuple[bool, ...], ...]

    @property
    def t(self) -> int:
        return self.sampling.t


def build_level_graph(p: TemporalSampling, delta: float, tol: float = 0.0) -> LevelGraph:
    """All edges (i,a) -> (i+1,b) with d(a,b) <= delta, O(n^2) construction."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    m = p.metric
    succ: list[tuple[tuple[int, ...], ...]] = []
    for i in range(p.t - 1):
        cur, nxt = p.levels[i], p.levels[i + 1]
        succ.append(tuple(
            tuple(b for b, q in enumerate(nxt) if leq(m.distance(x, q), delta, tol))
            for x in cur))
    succ.append(tuple(() for _ in p.levels[-1]))

    reach: list[tuple[bool, ...]] = [tuple(True for _ in p.levels[-1])]
    for i in range(p.t - 2, -1, -1):
        below = reach[0]
        reach.insert(0, tuple(any(below[b] for b in succ[i][a])
                              for a in range(len(p.levels[i]))))
    return LevelGraph(sampling=p, delta=delta, succ=tuple(succ), reach=tuple(reach))


def trajectory_is_path(g: LevelGraph, tau: Trajectory, tol: float = 0.0) -> bool:
    """True iff every consecutive pair of tau is an edge, i.e. displacement <= delta."""
    p = g.sampling
    if len(tau) != p.t:
        return False
    return leq(displacement(p.metric, tau), g.delta, tol)


def lexicographically_smallest_path(g: LevelGraph) -> Trajectory | None:
    """Smallest complete source-to-last-level path by (level, input order)."""
    p = g.sampling
    start = next((a for a in range(len(p.levels[0])) if g.reach[0][a]), None)
    if start is None:
        return None
    path = [start]
    for i in range(p.t - 1):
        nxt = next(b for b in g.succ[i][path[-1]] if g.reach[i + 1][b])
        path.append(nxt)
    return tuple(p.levels[i][a] for i, a in enumerate(path))
