"""Minimum feasible flow with edge lower bounds on layered center networks.

The network splits every designated center vertex into a tail->head edge
with lower bound 1; covering all such edges with the fewest unit s->s'
paths is the minimum feasible flow problem.  It is solved by the standard
two-phase reduction: first find any feasible circulation via an auxiliary
max-flow with excess/deficit super-nodes, then minimize the value by
cancelling along a max-flow from sink back to source in the residual.

The max-flow kernel is a deterministic blocking-flow (shortest augmenting
paths layered by BFS); adjacency is scanned in insertion order so repeated
runs produce identical flows.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .instance import TemporalSampling, Trajectory
from .level_graph import build_level_graph


class CenterError(ValueError):
    """A declared center does not belong to its level."""


class FlowConsistencyError(RuntimeError):
    """A flow violates conservation or its edge bounds."""


@dataclass(frozen=True)
class FlowEdge:
    u: int
    v: int
    lower: int
    cap: int


@dataclass(frozen=True)
class FlowNetwork:
    num_nodes: int
    source: int
    sink: int
    edges: tuple[FlowEdge, ...]
    adj: tuple[tuple[int, ...], ...]              # outgoing edge ids per node
    node_point: tuple[tuple[int, int] | None, ...]  # node -> (level, point id)
    center_edges: dict[int, tuple[int, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "num_nodes": self.num_nodes,
            "source": self.source,
            "sink": self.sink,
            "edges": [[e.u, e.v, e.lower, e.cap] for e in self.edges],
        }


@dataclass(frozen=True)
class IntegralFlow:
    flows: tuple[int, ...]
    value: int


class _Dinic:
    """Blocking-flow max-flow over an explicit arc list."""

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.graph: list[list[int]] = [[] for _ in range(n)]

    def add_arc(self, u: int, v: int, cap_fwd: int, cap_bwd: int = 0) -> int:
        a = len(self.to)
        self.to.append(v)
        self.cap.append(cap_fwd)
        self.graph[u].append(a)
        self.to.append(u)
        self.cap.append(cap_bwd)
        self.graph[v].append(a + 1)
        return a

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for a in self.graph[u]:
                    v = self.to[a]
                    if self.cap[a] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        q.append(v)
            if level[t] < 0:
                return total
            it = [0] * self.n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.graph[u]):
                    a = self.graph[u][it[u]]
                    v = self.to[a]
                    if self.cap[a] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[a]))
                        if got > 0:
                            self.cap[a] -= got
                            self.cap[a ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 60)
                if pushed == 0:
                    break
                total += pushed


def build_network(p: TemporalSampling, centers: Sequence[Sequence[int]], gamma: float,
                  tol: float = 0.0) -> FlowNetwork:
    """Construct the layered flow network over G_gamma with split center nodes."""
    if len(centers) != p.t:
        raise CenterError(f"got {len(centers)} center lists for {p.t} levels")
    center_sets: list[set[int]] = []
    for i, cs in enumerate(centers):
        cset = set(cs)
        extra = cset - set(p.levels[i])
        if extra:
            raise CenterError(f"centers {sorted(extra)} not in level {i}")
        center_sets.append(cset)

    g = build_level_graph(p, gamma, tol)
    inf_cap = p.size

    tail: list[list[int]] = []
    head: list[list[int]] = []
    node_point: list[tuple[int, int] | None] = [None, None]
    nid = 2
    for i, level in enumerate(p.levels):
        trow, hrow = [], []
        for x in level:
            if x in center_sets[i]:
                trow.append(nid)
                hrow.append(nid + 1)
                node_point.extend([(i, x), (i, x)])
                nid += 2
            else:
                trow.append(nid)
                hrow.append(nid)
                node_point.append((i, x))
                nid += 1
        tail.append(trow)
        head.append(hrow)

    edges: list[FlowEdge] = []
    center_edges: dict[int, tuple[int, int]] = {}
    for a in range(len(p.levels[0])):
        edges.append(FlowEdge(0, tail[0][a], 0, inf_cap))
    for i, level in enumerate(p.levels):
        for a, x in enumerate(level):
            if x in center_sets[i]:
                center_edges[len(edges)] = (i, x)
                edges.append(FlowEdge(tail[i][a], head[i][a], 1, inf_cap))
            if i < p.t - 1:
                for b in g.succ[i][a]:
                    edges.append(FlowEdge(head[i][a], tail[i + 1][b], 0, inf_cap))
    for a in range(len(p.levels[-1])):
        edges.append(FlowEdge(head[-1][a], 1, 0, inf_cap))

    adj: list[list[int]] = [[] for _ in range(nid)]
    for idx, e in enumerate(edges):
        adj[e.u].append(idx)
    return FlowNetwork(num_nodes=nid, source=0, sink=1, edges=tuple(edges),
                       adj=tuple(tuple(a) for a in adj),
                       node_point=tuple(node_point), center_edges=center_edges)


def verify_flow(net: FlowNetwork, f: IntegralFlow) -> None:
    """Assert conservation at internal nodes and per-edge bounds."""
    if len(f.flows) != len(net.edges):
        raise FlowConsistencyError("flow vector length mismatch")
    balance = [0] * net.num_nodes
    for e, x in zip(net.edges, f.flows):
        if not e.lower <= x <= e.cap:
            raise FlowConsistencyError(f"flow {x} outside [{e.lower}, {e.cap}] on {e}")
        balance[e.u] -= x
        balance[e.v] += x
    for v, b in enumerate(balance):
        if v not in (net.source, net.sink) and b != 0:
            raise FlowConsistencyError(f"conservation violated at node {v} (net {b})")
    if balance[net.sink] != f.value or balance[net.source] != -f.value:
        raise FlowConsistencyError("stated value disagrees with source/sink balance")


def min_feasible_flow(net: FlowNetwork) -> IntegralFlow | None:
    """Minimum-value integral flow meeting all lower bounds, or None if infeasible."""
    n_aux = net.num_nodes + 2
    s_star, t_star = net.num_nodes, net.num_nodes + 1
    din = _Dinic(n_aux)
    arc_of_edge = []
    balance = [0] * net.num_nodes
    for e in net.edges:
        arc_of_edge.append(din.add_arc(e.u, e.v, e.cap - e.lower))
        balance[e.v] += e.lower
        balance[e.u] -= e.lower
    big = sum(e.cap for e in net.edges) + 1
    artificial = din.add_arc(net.sink, net.source, big)
    need = 0
    for v, b in enumerate(balance):
        if b > 0:
            din.add_arc(s_star, v, b)
            need += b
        elif b < 0:
            din.add_arc(v, t_star, -b)
    if din.max_flow(s_star, t_star) < need:
        return None

    f0 = [e.lower + (din.cap[a ^ 1]) for e, a in zip(net.edges, arc_of_edge)]

    din2 = _Dinic(net.num_nodes)
    arcs2 = []
    for e, x in zip(net.edges, f0):
        arcs2.append(din2.add_arc(e.u, e.v, e.cap - x, x - e.lower))
    din2.max_flow(net.sink, net.source)
    flows = tuple(x + ((net.edges[i].cap - x) - din2.cap[arcs2[i]])
                  for i, x in enumerate(f0))
    value = sum(flows[i] for i in net.adj[net.source])
    result = IntegralFlow(flows=flows, value=value)
    verify_flow(net, result)
    return result


def decompose_paths(net: FlowNetwork, f: IntegralFlow) -> list[Trajectory]:
    """Split an integral flow into unit source-sink paths, one trajectory each.

    The walk always follows the lowest-indexed outgoing edge with remaining
    flow, so decompositions are deterministic.  Edges only run forward
    through the levels, hence every walk terminates at the sink.
    """
    verify_flow(net, f)
    residual = list(f.flows)
    out: list[Trajectory] = []
    for _ in range(f.value):
        node = net.source
        points: list[int] = []
        while node != net.sink:
            for idx in net.adj[node]:
                if residual[idx] > 0:
                    residual[idx] -= 1
                    node = net.edges[idx].v
                    break
            else:
                raise FlowConsistencyError(f"walk stuck at node {node}")
            label = net.node_point[node]
            if label is not None:
                level, pid = label
                if level == len(points):
                    points.append(pid)
        out.append(tuple(points))
    if any(residual):
        raise FlowConsistencyError("flow not fully decomposed into source-sink paths")
    return out
