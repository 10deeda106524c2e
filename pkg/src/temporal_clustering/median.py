"""Greedy submodular solver for the median and means objectives.

The potential of a partial solution is the summed amount by which each
level's cost exceeds the target r.  Each round adds the trajectory that
minimizes the resulting potential; the potential separates over levels, so
the minimizing trajectory comes from an exact backward DP over the level
graph.  The r = 0 case degenerates to the exact-count flow solver with
every point a mandatory center.
"""

from __future__ import annotations

import math

from .instance import Clustering, TemporalSampling, Trajectory, make_clustering
from .kcenter import (NO_PATH, POTENTIAL, InfeasibilityCertificate, SolveOutcome,
                      solve_exact_k)
from .level_graph import (LevelGraph, build_level_graph,
                          lexicographically_smallest_path)
from .metric import leq


class PotentialState:
    """Cached per-(level, point) minimum powered distances for a trajectory set."""

    def __init__(self, p: TemporalSampling, r: float, exponent: int):
        if exponent not in (1, 2):
            raise ValueError("exponent must be 1 (median) or 2 (means)")
        if r < 0:
            raise ValueError("r must be nonnegative")
        self.sampling = p
        self.r = r
        self.exponent = exponent
        self.trajectories: list[Trajectory] = []
        self.min_pow = [[math.inf] * len(level) for level in p.levels]

    def add(self, tau: Trajectory) -> None:
        m = self.sampling.metric
        e = self.exponent
        self.trajectories.append(tuple(tau))
        for i, level in enumerate(self.sampling.levels):
            row = self.min_pow[i]
            for a, q in enumerate(level):
                d = m.distance(q, tau[i]) ** e
                if d < row[a]:
                    row[a] = d

    def cost(self, i: int) -> float:
        return sum(self.min_pow[i])

    def w(self) -> float:
        return sum(max(0.0, self.cost(i) - self.r)
                   for i in range(self.sampling.t))


def potential_w(p: TemporalSampling, c: Clustering, r: float, exponent: int) -> float:
    """Sum over levels of the excess of that level's cost above r."""
    state = PotentialState(p, r, exponent)
    for tau in c.trajectories:
        state.add(tau)
    return state.w()


def _best_from_state(state: PotentialState, graph: LevelGraph,
                     tol: float = 0.0) -> Trajectory | None:
    """Trajectory minimizing the potential after addition, or None without a path.

    The potential of an augmented set splits into per-level terms that only
    depend on that level's new center, so a backward min-sum DP is exact.
    Ties prefer the lexicographically smallest path.
    """
    p = state.sampling
    m = p.metric
    e = state.exponent
    term = [
        [max(0.0, sum(min(cur, m.distance(q, x) ** e)
                      for cur, q in zip(state.min_pow[i], level)) - state.r)
         for x in level]
        for i, level in enumerate(p.levels)
    ]

    t = p.t
    val: list[list[float | None]] = [[None] * len(level) for level in p.levels]
    nxt: list[list[int | None]] = [[None] * len(level) for level in p.levels]
    for a in range(len(p.levels[-1])):
        val[t - 1][a] = term[t - 1][a]
    for i in range(t - 2, -1, -1):
        for a in range(len(p.levels[i])):
            best, arg = None, None
            for b in graph.succ[i][a]:
                v = val[i + 1][b]
                if v is not None and (best is None or v < best):
                    best, arg = v, b
            if best is not None:
                val[i][a] = term[i][a] + best
                nxt[i][a] = arg
    root, root_val = None, None
    for a in range(len(p.levels[0])):
        v = val[0][a]
        if v is not None and (root_val is None or v < root_val):
            root, root_val = a, v
    if root is None:
        return None
    path = [root]
    for i in range(t - 1):
        path.append(nxt[i][path[-1]])
    return tuple(p.levels[i][a] for i, a in enumerate(path))


def best_w_trajectory(p: TemporalSampling, delta: float, c: Clustering, r: float,
                      exponent: int, tol: float = 0.0) -> Trajectory | None:
    """Trajectory of displacement <= delta minimizing the augmented potential."""
    state = PotentialState(p, r, exponent)
    for tau in c.trajectories:
        state.add(tau)
    return _best_from_state(state, build_level_graph(p, delta, tol), tol)


def iteration_budget(p: TemporalSampling, k: int, epsilon: float) -> int:
    """Number of greedy rounds needed to push the potential below epsilon * r."""
    support = p.support()
    if len(support) < 2:
        return 1
    spread = p.metric.spread(support)
    return max(1, math.ceil(k * math.log(p.size * spread / epsilon)))


def solve_median_greedy(p: TemporalSampling, k: int, r: float, delta: float,
                        epsilon: float, exponent: int = 1,
                        tol: float = 0.0) -> SolveOutcome:
    """Greedy potential descent for the median (exponent 1) or means (2) objective.

    Returns at most 1 + ceil(k ln(n * spread / epsilon)) trajectories with
    cost at most (1 + epsilon) r and displacement exactly within delta, or
    certifies that no (k, r, delta) solution exists for this objective.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if k < 1:
        raise ValueError("k must be at least 1")
    if r == 0:
        return solve_median_r0(p, k, delta, tol)

    graph = build_level_graph(p, delta, tol)
    first = lexicographically_smallest_path(graph)
    if first is None:
        return SolveOutcome(certificate=InfeasibilityCertificate(
            kind=NO_PATH,
            message=f"no trajectory of displacement <= {delta} exists"))

    state = PotentialState(p, r, exponent)
    state.add(first)
    w_history = [state.w()]
    rounds = iteration_budget(p, k, epsilon)
    for _ in range(rounds):
        if w_history[-1] == 0.0:
            break
        tau = _best_from_state(state, graph, tol)
        state.add(tau)
        w_history.append(state.w())

    diagnostics = {"w_history": w_history, "rounds": rounds}
    if leq(w_history[-1], epsilon * r, tol):
        return SolveOutcome(clustering=make_clustering(state.trajectories),
                            diagnostics=diagnostics)
    return SolveOutcome(certificate=InfeasibilityCertificate(
        kind=POTENTIAL,
        message=f"potential {w_history[-1]} still above epsilon * r = {epsilon * r} "
                f"after {rounds} rounds"),
        diagnostics=diagnostics)


def solve_median_r0(p: TemporalSampling, k: int, delta: float,
                    tol: float = 0.0) -> SolveOutcome:
    """Zero-cost case: every point must be a center, which is the exact-count
    flow problem at radius 0 with every point carrying a lower bound."""
    outcome = solve_exact_k(p, k, 0.0, delta, tol)
    diagnostics = dict(outcome.diagnostics)
    diagnostics["route"] = "r0-flow"
    if outcome.clustering is not None:
        return SolveOutcome(clustering=outcome.clustering, diagnostics=diagnostics)
    return SolveOutcome(certificate=outcome.certificate, diagnostics=diagnostics)
