"""Brute-force ground truth for small instances.

Enumerates every bounded-displacement trajectory and searches trajectory
subsets in increasing size, so answers are exact.  All searches are capped
by an explicit budget; exceeding it raises instead of silently truncating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .instance import (Clustering, TemporalSampling, Trajectory, make_clustering)
from .level_graph import build_level_graph
from .metric import leq


class OracleBudgetError(RuntimeError):
    """The configured enumeration budget was exceeded."""


@dataclass(frozen=True)
class OracleBudget:
    max_trajectories: int = 5000
    max_subset_tests: int = 200000

    def __post_init__(self) -> None:
        if self.max_trajectories <= 0 or self.max_subset_tests <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = OracleBudget()


def enumerate_trajectories(p: TemporalSampling, delta: float,
                           budget: OracleBudget = DEFAULT_BUDGET,
                           tol: float = 0.0) -> list[Trajectory]:
    """All full-length paths of the delta level graph, in lexicographic order."""
    g = build_level_graph(p, delta, tol)
    out: list[Trajectory] = []
    last = p.t - 1
    roots = [a for a in range(len(p.levels[0])) if g.reach[0][a]]
    options: list[list[int]] = [roots]
    cursor = [0]
    path: list[int] = []
    while options:
        opts, at = options[-1], cursor[-1]
        if at >= len(opts):
            options.pop()
            cursor.pop()
            if path:
                path.pop()
            continue
        cursor[-1] += 1
        a = opts[at]
        path.append(a)
        i = len(path) - 1
        if i == last:
            if len(out) >= budget.max_trajectories:
                raise OracleBudgetError(
                    f"more than {budget.max_trajectories} trajectories at delta = {delta}")
            out.append(tuple(p.levels[j][b] for j, b in enumerate(path)))
            path.pop()
        else:
            options.append([b for b in g.succ[i][a] if g.reach[i + 1][b]])
            cursor.append(0)
    return out


class _SubsetSearch:
    """Increasing-size search over trajectory subsets with coverage pruning."""

    def __init__(self, p: TemporalSampling, trajectories: list[Trajectory], r: float,
                 objective: str, budget: OracleBudget, tol: float):
        self.p = p
        self.trajectories = trajectories
        self.r = r
        self.objective = objective
        self.budget = budget
        self.tol = tol
        self.tests = 0
        if objective == "center":
            self._prepare_masks()
        else:
            self._prepare_costs()

    def _bump(self) -> None:
        self.tests += 1
        if self.tests > self.budget.max_subset_tests:
            raise OracleBudgetError(
                f"more than {self.budget.max_subset_tests} subset tests")

    def _prepare_masks(self) -> None:
        p, m = self.p, self.p.metric
        offsets = []
        total = 0
        for level in p.levels:
            offsets.append(total)
            total += len(level)
        self.full = (1 << total) - 1
        mask_of: dict[int, int] = {}
        for ti, tau in enumerate(self.trajectories):
            mask = 0
            for i, level in enumerate(p.levels):
                base = offsets[i]
                for a, q in enumerate(level):
                    if leq(m.distance(q, tau[i]), self.r, self.tol):
                        mask |= 1 << (base + a)
            if mask not in mask_of:
                mask_of[mask] = ti
        pairs = sorted(mask_of.items(), key=lambda kv: (-bin(kv[0]).count("1"), kv[1]))
        self.masks = [mask for mask, _ in pairs]
        self.owners = [ti for _, ti in pairs]

    def _prepare_costs(self) -> None:
        p, m = self.p, self.p.metric
        e = 1 if self.objective == "median" else 2
        self.costs = []
        for tau in self.trajectories:
            per_level = tuple(
                tuple(m.distance(q, tau[i]) ** e for q in level)
                for i, level in enumerate(p.levels))
            self.costs.append(per_level)
        self.floor = tuple(
            tuple(min(c[i][a] for c in self.costs) if self.costs else 0.0
                  for a in range(len(level)))
            for i, level in enumerate(p.levels))

    def search(self, kmax: int) -> tuple[int, Clustering] | None:
        """Smallest subset of size <= kmax meeting the cost target, or None."""
        if not self.trajectories or kmax < 1:
            return None
        kmax = min(kmax, len(self.trajectories))
        if self.objective == "center":
            reachable = 0
            for mask in self.masks:
                reachable |= mask
            if reachable != self.full:
                return None
            for size in range(1, kmax + 1):
                got = self._dfs_center(0, size, 0, [])
                if got is not None:
                    return got.k, got
            return None
        floor_bad = any(
            not leq(sum(row), self.r, self.tol) for row in self.floor)
        if floor_bad:
            return None
        for size in range(1, kmax + 1):
            got = self._dfs_cost(0, size, None, [])
            if got is not None:
                return got.k, got
        return None

    def _dfs_center(self, start: int, slots: int, cover: int, chosen: list[int]):
        self._bump()
        if cover == self.full:
            return make_clustering([self.trajectories[self.owners[i]] for i in chosen])
        if slots == 0 or start >= len(self.masks):
            return None
        missing = self.full & ~cover
        for i in range(start, len(self.masks)):
            if self.masks[i] & missing:
                got = self._dfs_center(i + 1, slots - 1, cover | self.masks[i],
                                       chosen + [i])
                if got is not None:
                    return got
        return None

    def _dfs_cost(self, start: int, slots: int, mins, chosen: list[int]):
        self._bump()
        if chosen:
            worst = max(sum(row) for row in mins)
            if leq(worst, self.r, self.tol):
                return make_clustering([self.trajectories[i] for i in chosen])
        if slots == 0 or start >= len(self.trajectories):
            return None
        for i in range(start, len(self.trajectories)):
            cost = self.costs[i]
            if mins is None:
                new_mins = [list(row) for row in cost]
            else:
                new_mins = [[min(x, y) for x, y in zip(row, crow)]
                            for row, crow in zip(mins, cost)]
            bound_bad = any(
                not leq(sum(min(x, f) for x, f in zip(row, frow)), self.r, self.tol)
                for row, frow in zip(new_mins, self.floor))
            if bound_bad:
                continue
            got = self._dfs_cost(i + 1, slots - 1, new_mins, chosen + [i])
            if got is not None:
                return got
        return None


def oracle_feasible(p: TemporalSampling, k: int, r: float, delta: float, objective: str,
                    budget: OracleBudget = DEFAULT_BUDGET,
                    tol: float = 0.0) -> tuple[bool, Clustering | None]:
    """Exact feasibility of a (k, r, delta)-clustering, with a witness when true."""
    if k < 1:
        return False, None
    trajectories = enumerate_trajectories(p, delta, budget, tol)
    search = _SubsetSearch(p, trajectories, r, objective, budget, tol)
    got = search.search(k)
    if got is None:
        return False, None
    return True, got[1]


def oracle_opt_k(p: TemporalSampling, r: float, delta: float, objective: str,
                 budget: OracleBudget = DEFAULT_BUDGET,
                 tol: float = 0.0) -> tuple[int, Clustering] | None:
    """Minimum feasible cluster count at fixed (r, delta), or None if infeasible."""
    trajectories = enumerate_trajectories(p, delta, budget, tol)
    search = _SubsetSearch(p, trajectories, r, objective, budget, tol)
    return search.search(len(trajectories))


def _candidate_radii(p: TemporalSampling, objective: str, budget: OracleBudget) -> list[float]:
    m = p.metric
    values = {0.0}
    if objective == "center":
        support = p.support()
        for a, b in itertools.combinations(support, 2):
            values.add(m.distance(a, b))
        return sorted(values)
    e = 1 if objective == "median" else 2
    work = sum(2 ** len(level) for level in p.levels)
    if work > budget.max_subset_tests:
        raise OracleBudgetError(
            f"candidate radius enumeration needs {work} level subsets")
    for level in p.levels:
        dists = [[m.distance(q, x) ** e for x in level] for q in level]
        for size in range(1, len(level) + 1):
            for combo in itertools.combinations(range(len(level)), size):
                values.add(sum(min(row[x] for x in combo) for row in dists))
    return sorted(values)


def oracle_opt_r(p: TemporalSampling, k: int, delta: float, objective: str,
                 budget: OracleBudget = DEFAULT_BUDGET,
                 tol: float = 0.0) -> tuple[float, Clustering] | None:
    """Minimum feasible spatial cost at fixed (k, delta), or None if infeasible.

    Every achievable cost is a per-level cost of some nonempty center subset,
    so the exact optimum is found by binary search over that finite set.
    """
    if k < 1:
        return None
    trajectories = enumerate_trajectories(p, delta, budget, tol)
    if not trajectories:
        return None
    candidates = _candidate_radii(p, objective, budget)
    feasible_at: dict[int, Clustering] = {}

    def check(idx: int) -> bool:
        search = _SubsetSearch(p, trajectories, candidates[idx], objective, budget, tol)
        got = search.search(k)
        if got is not None:
            feasible_at[idx] = got[1]
            return True
        return False

    lo, hi = 0, len(candidates) - 1
    if not check(hi):
        return None
    if check(lo):
        return candidates[lo], feasible_at[lo]
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if check(mid):
            hi = mid
        else:
            lo = mid
    return candidates[hi], feasible_at[hi]
