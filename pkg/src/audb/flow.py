"""Integral feasible-flow with lower bounds, via the standard circulation
reduction to max-flow (super source/sink plus an uncapacitated return arc).
Instances here are tiny (a few hundred nodes), so BFS augmentation suffices.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple


class _MaxFlow:
    def __init__(self, n: int):
        self.n = n
        self.adj: List[List[int]] = [[] for _ in range(n)]
        self.to: List[int] = []
        self.cap: List[int] = []

    def add_edge(self, u: int, v: int, cap: int) -> None:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            parent_edge = [-1] * self.n
            parent_edge[s] = -2
            queue = [s]
            while queue and parent_edge[t] == -1:
                nxt = []
                for u in queue:
                    for eid in self.adj[u]:
                        v = self.to[eid]
                        if parent_edge[v] == -1 and self.cap[eid] > 0:
                            parent_edge[v] = eid
                            nxt.append(v)
                queue = nxt
            if parent_edge[t] == -1:
                return flow
            bottleneck = None
            v = t
            while v != s:
                eid = parent_edge[v]
                bottleneck = self.cap[eid] if bottleneck is None else min(bottleneck, self.cap[eid])
                v = self.to[eid ^ 1]
            v = t
            while v != s:
                eid = parent_edge[v]
                self.cap[eid] -= bottleneck
                self.cap[eid ^ 1] += bottleneck
                v = self.to[eid ^ 1]
            flow += bottleneck


def feasible_assignment(
    demands: Sequence[int],
    intervals: Sequence[Tuple[int, int]],
    edges: Iterable[Tuple[int, int]],
) -> bool:
    """Does an integral matrix M >= 0 exist with row sums exactly ``demands``,
    column sums within ``intervals``, and support restricted to ``edges``?

    Rows are demand nodes (world tuples), columns are interval nodes (AU rows).
    """
    by_row: Dict[int, List[int]] = {}
    for d, a in edges:
        by_row.setdefault(d, []).append(a)
    for j, demand in enumerate(demands):
        if demand > 0 and j not in by_row:
            return False
    total = sum(demands)
    if sum(lo for lo, _ in intervals) > total:
        return False

    # Node ids: 0 = source, 1 = sink, demands, intervals, then super nodes.
    nd = len(demands)
    na = len(intervals)
    src, snk = 0, 1
    ss, tt = 2 + nd + na, 3 + nd + na
    g = _MaxFlow(4 + nd + na)
    excess = [0] * (2 + nd + na)

    def arc(u: int, v: int, lo: int, hi: int) -> None:
        if hi > lo:
            g.add_edge(u, v, hi - lo)
        if lo:
            excess[v] += lo
            excess[u] -= lo

    big = total + sum(hi for _, hi in intervals) + 1
    for j, demand in enumerate(demands):
        arc(src, 2 + j, demand, demand)
    for d, a in edges:
        arc(2 + d, 2 + nd + a, 0, big)
    for i, (lo, hi) in enumerate(intervals):
        arc(2 + nd + i, snk, lo, hi)
    arc(snk, src, 0, big)

    need = 0
    for node, ex in enumerate(excess):
        if ex > 0:
            g.add_edge(ss, node, ex)
            need += ex
        elif ex < 0:
            g.add_edge(node, tt, -ex)
    return g.max_flow(ss, tt) == need
