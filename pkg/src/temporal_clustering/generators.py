"""Instance generators: planar CNF motion gadgets, set-cover metrics, walkers.

The CNF generator emits a two-dimensional temporal sampling in which one
pair of literal points per variable undergoes rigid motion.  For every
clause the three referenced pairs are flown one at a time to a staging
point above the variable row; their clause literals meet at a single
location while the unused literals rest on a radius r0/2 circle as an
equilateral triangle.  A probe point then travels straight up (directly
away from the bottom slot) for a distance of rho * r0 and back.  Cheap
clusterings must keep one consistent literal per pair selected throughout,
so they exist exactly when the formula is satisfiable.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .instance import (Clustering, TemporalSampling, make_clustering,
                       make_sampling)
from .metric import euclidean_metric, matrix_metric

Point = tuple[float, float]

# Slot angles for the three clause literals; the probe departs straight up,
# directly away from the 270-degree slot.
SLOT_ANGLES = (270.0, 30.0, 150.0)


class CnfError(ValueError):
    """Malformed CNF input."""


class GadgetParamError(ValueError):
    """Gadget parameters outside their valid ranges."""


@dataclass(frozen=True)
class Cnf3:
    """Clauses of exactly three signed literals over 1-based variables."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise CnfError("formula needs at least one variable")
        for ci, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise CnfError(f"clause {ci} has {len(clause)} literals, expected 3")
            seen = set()
            for lit in clause:
                v = abs(lit)
                if lit == 0 or v > self.num_vars:
                    raise CnfError(f"clause {ci} literal {lit} out of range")
                if v in seen:
                    raise CnfError(f"clause {ci} repeats variable {v}")
                seen.add(v)


def parse_dimacs(text: str) -> Cnf3:
    """Parse the DIMACS subset: a p-cnf header and 3-literal clause lines."""
    num_vars = None
    declared = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: bad header {line!r}")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise CnfError(f"line {lineno}: clause before p cnf header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    if num_vars is None:
        raise CnfError("missing p cnf header")
    if declared is not None and declared != len(clauses):
        raise CnfError(f"header declares {declared} clauses, found {len(clauses)}")
    return Cnf3(num_vars=num_vars, clauses=tuple(clauses))


def format_dimacs(cnf: Cnf3) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines += [" ".join(str(l) for l in clause) + " 0" for clause in cnf.clauses]
    return "\n".join(lines) + "\n"


def all_sign_patterns_cnf(num_vars: int = 3) -> Cnf3:
    """The canonical unsatisfiable formula: every sign pattern over the variables."""
    clauses = []
    for bits in range(2 ** num_vars):
        clauses.append(tuple((v + 1) * (1 if bits >> v & 1 else -1)
                             for v in range(num_vars)))
    return Cnf3(num_vars=num_vars, clauses=tuple(clauses))


@dataclass(frozen=True)
class GadgetParams:
    r0: float
    delta0: float
    rho: float

    def __post_init__(self) -> None:
        if self.r0 <= 0:
            raise GadgetParamError("r0 must be positive")
        if not 0 < self.delta0 < self.r0 * math.sqrt(3) / 4:
            raise GadgetParamError(
                f"delta0 must lie in (0, r0 * sqrt(3)/4 = {self.r0 * math.sqrt(3) / 4})")
        if self.rho < 1:
            raise GadgetParamError("rho must be at least 1")


@dataclass(frozen=True)
class SetCoverInstance:
    universe: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.universe < 1:
            raise ValueError("universe must have at least one element")
        for si, s in enumerate(self.sets):
            for e in s:
                if not 0 <= e < self.universe:
                    raise ValueError(f"set {si} references element {e} out of range")


def parse_setcover_json(text: str | bytes) -> SetCoverInstance:
    doc = json.loads(text)
    return SetCoverInstance(universe=doc["universe"],
                            sets=tuple(tuple(s) for s in doc["sets"]))


def _unit(angle_deg: float) -> Point:
    rad = math.radians(angle_deg)
    return (math.cos(rad), math.sin(rad))


class _GadgetBuilder:
    """Emits one level per motion step; a level is pair positions plus probe."""

    def __init__(self, cnf: Cnf3, params: GadgetParams):
        self.cnf = cnf
        self.r0 = params.r0
        self.rho = params.rho
        # Steps shorter than both delta0 and r0/2 - delta0 keep every closed
        # comparison against delta0 strict for unintended point pairs, even
        # when a pair slides along its own axis.
        self.cap = min(params.delta0, self.r0 / 2 - params.delta0) * (1 - 1e-9)
        self.spacing = self.rho * self.r0 / 2
        self.cruise_y = self.rho * self.r0 / 2
        self.origin: Point = (self.spacing * (cnf.num_vars + 1) / 2,
                              self.cruise_y + self.r0)
        self.standoff = 1.5 * self.r0
        self.pos: dict[int, tuple[Point, Point]] = {}
        for v in range(1, cnf.num_vars + 1):
            mid = v * self.spacing
            self.pos[v] = ((mid - self.r0 / 4, 0.0), (mid + self.r0 / 4, 0.0))
        self.probe: Point | None = None
        self.probe_label: str | None = None
        self.levels: list[list[Point]] = []
        self.rows: list[dict[str, Point]] = []
        self._push()

    def _push(self) -> None:
        row: dict[str, Point] = {}
        level: list[Point] = []
        for v in range(1, self.cnf.num_vars + 1):
            x_pt, n_pt = self.pos[v]
            row[f"x{v}"] = x_pt
            row[f"!x{v}"] = n_pt
            level.extend((x_pt, n_pt))
        if self.probe is not None:
            row[self.probe_label] = self.probe
            level.append(self.probe)
        self.levels.append(level)
        self.rows.append(row)

    def _translate(self, v: int, anchor_sign: int, target: Point) -> None:
        x_pt, n_pt = self.pos[v]
        anchor, other = (x_pt, n_pt) if anchor_sign > 0 else (n_pt, x_pt)
        offset = (other[0] - anchor[0], other[1] - anchor[1])
        length = math.dist(anchor, target)
        if length == 0:
            return
        steps = math.ceil(length / self.cap)
        for j in range(1, steps + 1):
            if j == steps:
                a = target
            else:
                f = j * self.cap / length
                a = (anchor[0] + f * (target[0] - anchor[0]),
                     anchor[1] + f * (target[1] - anchor[1]))
            partner = (a[0] + offset[0], a[1] + offset[1])
            self.pos[v] = (a, partner) if anchor_sign > 0 else (partner, a)
            self._push()

    def _rotate(self, v: int, anchor_sign: int, angle_to: float) -> None:
        x_pt, n_pt = self.pos[v]
        anchor, other = (x_pt, n_pt) if anchor_sign > 0 else (n_pt, x_pt)
        current = math.degrees(math.atan2(other[1] - anchor[1], other[0] - anchor[0]))
        delta = (angle_to - current) % 360.0
        if delta > 180.0:
            delta -= 360.0
        if delta == 0.0:
            return
        max_step = math.degrees(2 * math.asin(self.cap / self.r0))
        steps = math.ceil(abs(delta) / max_step)
        for j in range(1, steps + 1):
            ang = angle_to if j == steps else current + delta * j / steps
            u = _unit(ang)
            partner = (anchor[0] + self.r0 / 2 * u[0], anchor[1] + self.r0 / 2 * u[1])
            self.pos[v] = (anchor, partner) if anchor_sign > 0 else (partner, anchor)
            self._push()

    def _fly_in(self, lit: int, slot: float) -> None:
        v, sign = abs(lit), (1 if lit > 0 else -1)
        anchor = self.pos[v][0] if sign > 0 else self.pos[v][1]
        u = _unit(slot)
        ring = (self.origin[0] + self.standoff * u[0],
                self.origin[1] + self.standoff * u[1])
        self._translate(v, sign, (anchor[0], self.cruise_y))
        self._translate(v, sign, (ring[0], self.cruise_y))
        self._translate(v, sign, ring)
        self._rotate(v, sign, slot)
        self._translate(v, sign, self.origin)

    def _probe_ride(self, clause_index: int) -> None:
        apex = self.rho * self.r0
        steps = math.ceil(apex / self.cap)
        self.probe_label = f"probe{clause_index}"
        # The probe is introduced at the meeting point itself (the level
        # already present), rides up to the apex, and retraces its way back.
        self.rows[-1][self.probe_label] = self.origin
        heights = [j * self.cap for j in range(1, steps)] + [apex]
        for h in heights + heights[-2::-1]:
            self.probe = (self.origin[0], self.origin[1] + h)
            self._push()
        self.probe = None
        self.probe_label = None

    def build_clause(self, ci: int, clause: tuple[int, int, int]) -> None:
        start = len(self.levels) - 1
        for lit, slot in zip(clause, SLOT_ANGLES):
            self._fly_in(lit, slot)
        assembled = len(self.levels) - 1
        self._probe_ride(ci)
        for idx in range(assembled - 1, start - 1, -1):
            self.levels.append(list(self.levels[idx]))
            self.rows.append(dict(self.rows[idx]))
        for v in range(1, self.cnf.num_vars + 1):
            self.pos[v] = (self.rows[-1][f"x{v}"], self.rows[-1][f"!x{v}"])

    def tracks(self) -> dict[str, list[Point | None]]:
        labels: list[str] = []
        for row in self.rows:
            for label in row:
                if label not in labels:
                    labels.append(label)
        return {label: [row.get(label) for row in self.rows] for label in labels}


def gen_sat3(cnf: Cnf3, params: GadgetParams) -> tuple[TemporalSampling, dict]:
    """Planar temporal sampling whose cheap clusterings encode satisfying
    assignments of cnf; metadata carries k = number of variables."""
    min_rho = 2 + 2 * params.delta0 / params.r0
    if params.rho < max(3.0, min_rho):
        raise GadgetParamError(
            f"rho = {params.rho} too small for a collision-free layout; "
            f"need at least {max(3.0, min_rho)}")
    builder = _GadgetBuilder(cnf, params)
    for ci, clause in enumerate(cnf.clauses):
        builder.build_clause(ci, clause)

    coord_ids: dict[Point, int] = {}
    coords: list[Point] = []
    levels: list[list[int]] = []
    for level in builder.levels:
        ids: list[int] = []
        for pt in level:
            if pt not in coord_ids:
                coord_ids[pt] = len(coords)
                coords.append(pt)
            pid = coord_ids[pt]
            if pid not in ids:
                ids.append(pid)
        levels.append(ids)
    sampling = make_sampling(euclidean_metric(coords, dim=2), levels)
    meta = {
        "k": cnf.num_vars,
        "levels": sampling.t,
        "size": sampling.size,
        "staging_point": builder.origin,
        "tracks": builder.tracks(),
    }
    return sampling, meta


def gen_setcover_metric(sc: SetCoverInstance) -> TemporalSampling:
    """Single-level instance over the covering metric: set points first, then
    element points; sets are mutually at distance 1, cover their elements at
    distance 1, and everything else is at distance 2."""
    ns = len(sc.sets)
    n = ns + sc.universe
    dist = [[2.0] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0.0
    for i in range(ns):
        for j in range(ns):
            if i != j:
                dist[i][j] = 1.0
        for e in sc.sets[i]:
            dist[i][ns + e] = 1.0
            dist[ns + e][i] = 1.0
    metric = matrix_metric(dist, validate_triangle=False)
    return make_sampling(metric, [list(range(n))])


def gen_random_walkers(seed: int, k: int, t: int, extras_per_level: int,
                       step: float, radius: float, dim: int = 2
                       ) -> tuple[TemporalSampling, Clustering]:
    """k random walks plus noise points near them; the walks form a planted
    clustering that meets (k, radius, step) under the center objective."""
    if min(k, t, dim) < 1 or extras_per_level < 0 or step < 0 or radius < 0:
        raise ValueError("walker parameters out of range")
    rng = random.Random(seed)
    shrink = 1 - 1e-12

    def direction() -> tuple[float, ...]:
        while True:
            v = tuple(rng.gauss(0.0, 1.0) for _ in range(dim))
            norm = math.sqrt(sum(x * x for x in v))
            if norm > 1e-9:
                return tuple(x / norm for x in v)

    walkers = [tuple(rng.uniform(0.0, 50.0 + 10.0 * k) for _ in range(dim))
               for _ in range(k)]
    coord_ids: dict[tuple[float, ...], int] = {}
    coords: list[tuple[float, ...]] = []
    levels: list[list[int]] = []
    planted: list[list[int]] = [[] for _ in range(k)]

    def intern(pt: tuple[float, ...]) -> int:
        if pt not in coord_ids:
            coord_ids[pt] = len(coords)
            coords.append(pt)
        return coord_ids[pt]

    for _ in range(t):
        level: list[int] = []
        for w, pos in enumerate(walkers):
            pid = intern(pos)
            planted[w].append(pid)
            if pid not in level:
                level.append(pid)
        for _ in range(extras_per_level):
            w = rng.randrange(k)
            u = direction()
            d = rng.uniform(0.0, radius) * shrink
            pt = tuple(x + d * ux for x, ux in zip(walkers[w], u))
            pid = intern(pt)
            if pid not in level:
                level.append(pid)
        levels.append(level)
        moved = []
        for pos in walkers:
            u = direction()
            d = rng.uniform(0.0, step) * shrink
            moved.append(tuple(x + d * ux for x, ux in zip(pos, u)))
        walkers = moved

    sampling = make_sampling(euclidean_metric(coords, dim=dim), levels)
    return sampling, make_clustering(planted)
