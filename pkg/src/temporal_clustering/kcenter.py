"""Center-objective solvers: exact cluster count, greedy covering, bicriteria.

All three either return a clustering within their relaxed guarantees or an
explicit infeasibility certificate that is sound for the original (k, r,
delta) question.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .flow import build_network, decompose_paths, min_feasible_flow
from .instance import Clustering, TemporalSampling, Trajectory, make_clustering
from .level_graph import LevelGraph, build_level_graph
from .metric import leq
from .nets import greedy_net

NET_SIZE = "net-size"
FLOW_INFEASIBLE = "flow-infeasible"
FLOW_VALUE = "flow-value"
GREEDY_STALLED = "greedy-stalled"
NO_PATH = "no-path"
POTENTIAL = "potential"


@dataclass(frozen=True)
class InfeasibilityCertificate:
    kind: str
    message: str
    level: int | None = None

    def to_dict(self) -> dict:
        doc = {"kind": self.kind, "message": self.message}
        if self.level is not None:
            doc["level"] = self.level
        return doc


@dataclass(frozen=True)
class SolveOutcome:
    """Either a clustering or a certificate, never both."""

    clustering: Clustering | None = None
    certificate: InfeasibilityCertificate | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if (self.clustering is None) == (self.certificate is None):
            raise ValueError("outcome must carry exactly one of clustering/certificate")

    @property
    def feasible(self) -> bool:
        return self.clustering is not None


class CoverageState:
    """Per-(level, point) covered flags plus a running uncovered count."""

    def __init__(self, p: TemporalSampling):
        self.sampling = p
        self.covered = [[False] * len(level) for level in p.levels]
        self.uncovered = p.size

    def cover_tube(self, tau: Trajectory, r: float, tol: float = 0.0) -> int:
        """Mark everything within r of the trajectory; returns newly covered count."""
        m = self.sampling.metric
        newly = 0
        for i, level in enumerate(self.sampling.levels):
            row = self.covered[i]
            for a, q in enumerate(level):
                if not row[a] and leq(m.distance(q, tau[i]), r, tol):
                    row[a] = True
                    newly += 1
        self.uncovered -= newly
        return newly


def best_new_tube(p: TemporalSampling, r: float, delta: float, state: CoverageState,
                  tol: float = 0.0, graph: LevelGraph | None = None
                  ) -> tuple[Trajectory | None, int]:
    """Trajectory of displacement <= delta whose radius-r tube covers the most
    uncovered points, by a backward DP over the level graph.

    Ties prefer the lexicographically smallest path in (level, input order).
    Returns (None, 0) when no full-length path exists.
    """
    g = graph if graph is not None else build_level_graph(p, delta, tol)
    m = p.metric
    gain = [
        [sum(1 for a, q in enumerate(level)
             if not state.covered[i][a] and leq(m.distance(q, x), r, tol))
         for x in level]
        for i, level in enumerate(p.levels)
    ]

    t = p.t
    val: list[list[int | None]] = [[None] * len(level) for level in p.levels]
    nxt: list[list[int | None]] = [[None] * len(level) for level in p.levels]
    for a in range(len(p.levels[-1])):
        val[t - 1][a] = gain[t - 1][a]
    for i in range(t - 2, -1, -1):
        for a in range(len(p.levels[i])):
            best, arg = None, None
            for b in g.succ[i][a]:
                v = val[i + 1][b]
                if v is not None and (best is None or v > best):
                    best, arg = v, b
            if best is not None:
                val[i][a] = gain[i][a] + best
                nxt[i][a] = arg

    root, root_val = None, None
    for a in range(len(p.levels[0])):
        v = val[0][a]
        if v is not None and (root_val is None or v > root_val):
            root, root_val = a, v
    if root is None:
        return None, 0
    path = [root]
    for i in range(t - 1):
        path.append(nxt[i][path[-1]])
    return tuple(p.levels[i][a] for i, a in enumerate(path)), root_val


def solve_exact_k(p: TemporalSampling, k: int, r: float, delta: float,
                  tol: float = 0.0) -> SolveOutcome:
    """Exact-count solver: at most k trajectories with rad <= 2r, step <= 2r + delta,
    or a certificate that no (k, r, delta)-clustering exists."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if r < 0 or delta < 0:
        raise ValueError("r and delta must be nonnegative")
    return _net_flow_solve(p, nets_radius=2 * r, gamma=2 * r + delta,
                           count_bound=k, count_label="k", tol=tol)


def solve_bicriteria(p: TemporalSampling, k: int, r: float, delta: float,
                     tol: float = 0.0) -> SolveOutcome:
    """Relax everything: at most 2k trajectories with rad <= 2r, step <= r + delta,
    or a certificate that no (k, r, delta)-clustering exists.

    No net-size comparison happens here; a level net larger than 2k forces
    the flow value above 2k anyway.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if r < 0 or delta < 0:
        raise ValueError("r and delta must be nonnegative")
    return _net_flow_solve(p, nets_radius=2 * r, gamma=r + delta,
                           count_bound=2 * k, count_label="2k", tol=tol,
                           check_net_size=False)


def _net_flow_solve(p: TemporalSampling, nets_radius: float, gamma: float,
                    count_bound: int, count_label: str, tol: float,
                    check_net_size: bool = True) -> SolveOutcome:
    nets = [greedy_net(p.metric, level, nets_radius, tol).chosen for level in p.levels]
    net_sizes = [len(c) for c in nets]
    if check_net_size:
        for i, size in enumerate(net_sizes):
            if size > count_bound:
                return SolveOutcome(certificate=InfeasibilityCertificate(
                    kind=NET_SIZE, level=i,
                    message=f"net-size {size} > {count_label} at level {i}"),
                    diagnostics={"net_sizes": net_sizes})
    net = build_network(p, nets, gamma, tol)
    flow = min_feasible_flow(net)
    if flow is None:
        return SolveOutcome(certificate=InfeasibilityCertificate(
            kind=FLOW_INFEASIBLE,
            message=f"no feasible flow covers every net point at gamma = {gamma}"),
            diagnostics={"net_sizes": net_sizes})
    if flow.value > count_bound:
        return SolveOutcome(certificate=InfeasibilityCertificate(
            kind=FLOW_VALUE,
            message=f"min flow value {flow.value} > {count_label} = {count_bound}"),
            diagnostics={"net_sizes": net_sizes, "flow_value": flow.value})
    paths = decompose_paths(net, flow)
    return SolveOutcome(clustering=make_clustering(paths),
                        diagnostics={"net_sizes": net_sizes, "flow_value": flow.value})


def solve_rds_greedy(p: TemporalSampling, r: float, delta: float,
                     tol: float = 0.0) -> SolveOutcome:
    """Greedy covering at exact radius r and displacement delta.

    Repeatedly adds the trajectory covering the most uncovered points; on
    coverable instances the count is within a ln(n) factor of the optimum.
    """
    if r < 0 or delta < 0:
        raise ValueError("r and delta must be nonnegative")
    graph = build_level_graph(p, delta, tol)
    state = CoverageState(p)
    chosen: list[Trajectory] = []
    gains: list[int] = []
    while state.uncovered > 0:
        tau, count = best_new_tube(p, r, delta, state, tol, graph)
        if tau is None or count == 0:
            return SolveOutcome(certificate=InfeasibilityCertificate(
                kind=GREEDY_STALLED,
                message=f"{state.uncovered} points cannot be covered at (r, delta) = "
                        f"({r}, {delta})"),
                diagnostics={"gains": gains, "chosen": len(chosen)})
        newly = state.cover_tube(tau, r, tol)
        assert newly == count
        chosen.append(tau)
        gains.append(count)
    return SolveOutcome(clustering=make_clustering(chosen),
                        diagnostics={"gains": gains})
