"""Temporal samplings, trajectories, clusterings, and their costs.

A temporal sampling is a sequence of non-empty levels, each an ordered set
of point ids into one shared metric.  A trajectory picks one point per
level; a clustering is a multiset of trajectories.  Spatial cost comes in
three flavours per level: max distance (center), sum of distances (median),
and sum of squared distances (means), each maximized over levels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .metric import (FiniteMetric, MetricValidationError, euclidean_metric, leq,
                     matrix_metric)

Trajectory = tuple[int, ...]

OBJECTIVES = ("center", "median", "means")


class InstanceFormatError(ValueError):
    """Malformed instance or clustering document."""


class StructuralError(ValueError):
    """Trajectory or clustering inconsistent with its sampling."""


class EmptyClusteringError(ValueError):
    """Operation requires at least one trajectory."""


@dataclass(frozen=True)
class TemporalSampling:
    """A sequence of levels over a shared finite metric."""

    metric: FiniteMetric
    levels: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise InstanceFormatError("no levels")
        for i, level in enumerate(self.levels):
            if not level:
                raise InstanceFormatError(f"level {i} is empty")
            if len(set(level)) != len(level):
                raise InstanceFormatError(f"level {i} repeats a point id")
            for p in level:
                if not 0 <= p < self.metric.n:
                    raise InstanceFormatError(
                        f"level {i} references point {p} outside universe of size {self.metric.n}")

    @property
    def t(self) -> int:
        return len(self.levels)

    @property
    def size(self) -> int:
        return sum(len(level) for level in self.levels)

    def support(self) -> tuple[int, ...]:
        seen: list[int] = []
        have: set[int] = set()
        for level in self.levels:
            for p in level:
                if p not in have:
                    have.add(p)
                    seen.append(p)
        return tuple(seen)


def make_sampling(metric: FiniteMetric, levels: Sequence[Sequence[int]]) -> TemporalSampling:
    return TemporalSampling(metric=metric, levels=tuple(tuple(l) for l in levels))


@dataclass(frozen=True)
class Clustering:
    """A non-empty multiset of trajectories of equal length."""

    trajectories: tuple[Trajectory, ...]

    def __post_init__(self) -> None:
        if not self.trajectories:
            raise EmptyClusteringError("clustering must contain at least one trajectory")
        t = len(self.trajectories[0])
        for tau in self.trajectories:
            if len(tau) != t:
                raise StructuralError("trajectories have differing lengths")

    @property
    def k(self) -> int:
        return len(self.trajectories)

    @property
    def t(self) -> int:
        return len(self.trajectories[0])


def make_clustering(trajectories: Iterable[Sequence[int]]) -> Clustering:
    return Clustering(tuple(tuple(tau) for tau in trajectories))


@dataclass(frozen=True)
class ClusteringStats:
    k: int
    rad_inf: float
    rad_1: float
    rad_2: float
    delta: float

    def to_dict(self) -> dict:
        return {"k": self.k, "rad_inf": self.rad_inf, "rad_1": self.rad_1,
                "rad_2": self.rad_2, "delta": self.delta}


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    violations: tuple[str, ...]
    stats: ClusteringStats


def validate_clustering(p: TemporalSampling, c: Clustering) -> None:
    for j, tau in enumerate(c.trajectories):
        if len(tau) != p.t:
            raise StructuralError(
                f"trajectory {j} has length {len(tau)}, sampling has {p.t} levels")
        for i, x in enumerate(tau):
            if x not in p.levels[i]:
                raise StructuralError(f"trajectory {j} point {x} not in level {i}")


def displacement(m: FiniteMetric, tau: Trajectory) -> float:
    """Maximum distance between consecutive trajectory points; 0 when t = 1."""
    return max((m.distance(tau[i], tau[i + 1]) for i in range(len(tau) - 1)), default=0.0)


def clustering_displacement(m: FiniteMetric, c: Clustering) -> float:
    return max(displacement(m, tau) for tau in c.trajectories)


def spatial_cost(p: TemporalSampling, c: Clustering, objective: str) -> float:
    """Worst-level spatial cost of the clustering under the given objective."""
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    validate_clustering(p, c)
    m = p.metric
    worst = 0.0
    for i, level in enumerate(p.levels):
        centers = [tau[i] for tau in c.trajectories]
        if objective == "center":
            cost = max(min(m.distance(q, x) for x in centers) for q in level)
        elif objective == "median":
            cost = sum(min(m.distance(q, x) for x in centers) for q in level)
        else:
            cost = sum(min(m.distance(q, x) for x in centers) ** 2 for q in level)
        worst = max(worst, cost)
    return worst


def clustering_stats(p: TemporalSampling, c: Clustering) -> ClusteringStats:
    return ClusteringStats(
        k=c.k,
        rad_inf=spatial_cost(p, c, "center"),
        rad_1=spatial_cost(p, c, "median"),
        rad_2=spatial_cost(p, c, "means"),
        delta=clustering_displacement(p.metric, c),
    )


def check_solution(p: TemporalSampling, c: Clustering, k: int, r: float, delta: float,
                   objective: str, tol: float = 0.0) -> CheckReport:
    """Check |c| <= k, spatial cost <= r, displacement <= delta (all closed)."""
    validate_clustering(p, c)
    stats = clustering_stats(p, c)
    cost = {"center": stats.rad_inf, "median": stats.rad_1, "means": stats.rad_2}[objective]
    violations = []
    if c.k > k:
        violations.append(f"cluster count {c.k} > k = {k}")
    if not leq(cost, r, tol):
        violations.append(f"{objective} cost {cost} > r = {r}")
    if not leq(stats.delta, delta, tol):
        violations.append(f"displacement {stats.delta} > delta = {delta}")
    return CheckReport(passed=not violations, violations=tuple(violations), stats=stats)


# ---------------------------------------------------------------------------
# File formats (JSON, UTF-8)
# ---------------------------------------------------------------------------

def instance_to_dict(p: TemporalSampling) -> dict:
    m = p.metric
    if m.kind == "euclidean":
        doc = {"metric": {"kind": "euclidean", "dim": m.dim},
               "points": [list(row) for row in m.coords],
               "levels": [list(level) for level in p.levels]}
    else:
        doc = {"metric": {"kind": "matrix", "n": m.n, "dist": [list(row) for row in m.dist]},
               "levels": [list(level) for level in p.levels]}
    return doc


def save_instance(p: TemporalSampling) -> bytes:
    return (json.dumps(instance_to_dict(p), sort_keys=True) + "\n").encode("utf-8")


def load_instance(data: bytes | str, validate_triangle: bool = True) -> TemporalSampling:
    """Parse an instance document; save then load is structural identity."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise InstanceFormatError("top-level document must be an object")
    try:
        mdoc = doc["metric"]
        kind = mdoc["kind"]
    except (KeyError, TypeError) as e:
        raise InstanceFormatError(f"missing metric description: {e}") from e
    try:
        if kind == "euclidean":
            metric = euclidean_metric(doc["points"], dim=mdoc.get("dim"))
        elif kind == "matrix":
            if mdoc.get("n") != len(mdoc["dist"]):
                raise InstanceFormatError(
                    f"metric.n = {mdoc.get('n')} does not match matrix size {len(mdoc['dist'])}")
            metric = matrix_metric(mdoc["dist"], validate_triangle=validate_triangle)
        else:
            raise InstanceFormatError(f"unknown metric kind {kind!r}")
    except KeyError as e:
        raise InstanceFormatError(f"missing field {e} in metric description") from e
    except MetricValidationError as e:
        raise InstanceFormatError(f"invalid metric: {e}") from e
    if "levels" not in doc:
        raise InstanceFormatError("missing levels")
    return make_sampling(metric, doc["levels"])


def save_clustering(c: Clustering) -> bytes:
    doc = {"trajectories": [list(tau) for tau in c.trajectories]}
    return (json.dumps(doc, sort_keys=True) + "\n").encode("utf-8")


def load_clustering(data: bytes | str) -> Clustering:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "trajectories" not in doc:
        raise InstanceFormatError("clustering document must contain trajectories")
    return make_clustering(doc["trajectories"])
