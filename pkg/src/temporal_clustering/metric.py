"""Finite metric spaces over an integer-indexed point universe.

Two concrete representations are supported: an explicit symmetric distance
matrix, and points with Euclidean coordinates.  Point identities are plain
integer indices into the universe.  All radius comparisons elsewhere in the
package are closed (<=) with an optional absolute tolerance, default 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class InvalidPointError(ValueError):
    """A point id is outside the metric's universe."""


class MetricValidationError(ValueError):
    """An explicit matrix fails one of the metric axioms."""


class DegenerateSpreadError(ValueError):
    """Spread requested for a support that has no positive distance."""


def leq(a: float, b: float, tol: float = 0.0) -> bool:
    """Closed comparison a <= b with absolute tolerance."""
    return a <= b + tol


@dataclass(frozen=True)
class FiniteMetric:
    """A finite metric space.

    kind is either "matrix" (explicit symmetric distances) or "euclidean"
    (coordinates, distances computed on demand).  Instances are immutable
    and safe to share across threads.
    """

    kind: str
    dist: tuple[tuple[float, ...], ...] | None = None
    coords: tuple[tuple[float, ...], ...] | None = None
    dim: int | None = None
    _n: int = field(default=0, repr=False)

    @property
    def n(self) -> int:
        return self._n

    def check_point(self, p: int) -> None:
        if not 0 <= p < self._n:
            raise InvalidPointError(f"point id {p} outside universe of size {self._n}")

    def distance(self, a: int, b: int) -> float:
        self.check_point(a)
        self.check_point(b)
        if self.kind == "matrix":
            return self.dist[a][b]
        return math.dist(self.coords[a], self.coords[b])

    def ball_members(self, candidates: Iterable[int], center: int, radius: float,
                     tol: float = 0.0) -> set[int]:
        """Members of the closed ball around center, restricted to candidates."""
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        self.check_point(center)
        return {p for p in candidates if leq(self.distance(center, p), radius, tol)}

    def spread(self, support: Iterable[int]) -> float:
        """Diameter divided by the minimum positive distance over support."""
        pts = sorted(set(support))
        for p in pts:
            self.check_point(p)
        diam = 0.0
        min_pos = math.inf
        for i, a in enumerate(pts):
            for b in pts[i + 1:]:
                d = self.distance(a, b)
                diam = max(diam, d)
                if d > 0:
                    min_pos = min(min_pos, d)
        if not math.isfinite(min_pos):
            raise DegenerateSpreadError(
                "spread needs at least two points at positive distance")
        return diam / min_pos

    def diameter(self, support: Iterable[int]) -> float:
        pts = sorted(set(support))
        best = 0.0
        for i, a in enumerate(pts):
            for b in pts[i + 1:]:
                best = max(best, self.distance(a, b))
        return best


def euclidean_metric(coords: Sequence[Sequence[float]], dim: int | None = None) -> FiniteMetric:
    """Build a Euclidean metric from coordinate rows.

    Coordinates must be pairwise distinct so that distinct ids always have
    positive distance.
    """
    rows = tuple(tuple(float(x) for x in row) for row in coords)
    if not rows:
        raise MetricValidationError("euclidean metric needs at least one point")
    if dim is None:
        dim = len(rows[0])
    if dim < 1:
        raise MetricValidationError("dim must be a positive integer")
    seen: dict[tuple[float, ...], int] = {}
    for i, row in enumerate(rows):
        if len(row) != dim:
            raise MetricValidationError(f"point {i} has {len(row)} coordinates, expected {dim}")
        if row in seen:
            raise MetricValidationError(f"points {seen[row]} and {i} share coordinates {row}")
        seen[row] = i
    return FiniteMetric(kind="euclidean", coords=rows, dim=dim, _n=len(rows))


def matrix_metric(dist: Sequence[Sequence[float]], validate_triangle: bool = True) -> FiniteMetric:
    """Build an explicit-matrix metric, validating the metric axioms.

    Symmetry, zero diagonal, and positive off-diagonal entries are always
    checked.  The O(n^3) triangle-inequality check can be skipped for large
    inputs via validate_triangle=False.
    """
    rows = tuple(tuple(float(x) for x in row) for row in dist)
    n = len(rows)
    if n == 0:
        raise MetricValidationError("matrix metric needs at least one point")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise MetricValidationError(f"row {i} has length {len(row)}, expected {n}")
        if row[i] != 0.0:
            raise MetricValidationError(f"nonzero diagonal d({i},{i}) = {row[i]}")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise MetricValidationError(
                    f"asymmetry: d({i},{j}) = {rows[i][j]} but d({j},{i}) = {rows[j][i]}")
            if rows[i][j] <= 0.0:
                raise MetricValidationError(
                    f"nonpositive distance d({i},{j}) = {rows[i][j]} for distinct points")
    if validate_triangle:
        for i in range(n):
            di = rows[i]
            for j in range(n):
                dij = di[j]
                dj = rows[j]
                for k in range(n):
                    if dij > di[k] + dj[k]:
                        raise MetricValidationError(
                            f"triangle violation on ({i},{j},{k}): "
                            f"d({i},{j}) = {dij} > {di[k]} + {dj[k]}")
    return FiniteMetric(kind="matrix", dist=rows, _n=n)
