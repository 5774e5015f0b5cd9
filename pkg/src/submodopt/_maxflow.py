"""Max-flow by shortest augmenting paths (breadth-first Edmonds-Karp).

Deterministic: arcs are explored in insertion order, so the residual
reachability sets (hence the min-cut sides) are reproducible.  Residual
capacities below 1e-12 count as saturated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

_RESIDUAL_EPS = 1e-12


@dataclass
class MaxFlowResult:
    value: float
    source_side: np.ndarray   # bool per node: reachable from source in residual
    sink_side: np.ndarray     # bool per node: can reach sink in residual


def max_flow(n: int, arcs, source: int, sink: int) -> MaxFlowResult:
    """Maximum s-t flow on a directed graph given as (tail, head, capacity).

    Returns the flow value together with both canonical min-cut sides: the
    residual-reachable set from the source (the inclusion-minimal source
    side) and the set of nodes that can still reach the sink (whose
    complement is the inclusion-maximal source side).
    """
    to: list[int] = []
    cap: list[float] = []
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v, c in arcs:
        if c < 0.0:
            raise ValueError(f"negative capacity on arc ({u}, {v})")
        if u == v:
            continue
        adj[u].append(len(to))
        to.append(v)
        cap.append(float(c))
        adj[v].append(len(to))
        to.append(u)
        cap.append(0.0)

    total = 0.0
    parent_arc = np.empty(n, dtype=np.int64)
    while True:
        parent_arc.fill(-1)
        parent_arc[source] = -2
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if u == sink:
                break
            for a in adj[u]:
                v = to[a]
                if parent_arc[v] == -1 and cap[a] > _RESIDUAL_EPS:
                    parent_arc[v] = a
                    queue.append(v)
        if parent_arc[sink] == -1:
            break
        # bottleneck along the path, then push
        push = np.inf
        v = sink
        while v != source:
            a = int(parent_arc[v])
            push = min(push, cap[a])
            v = to[a ^ 1]
        v = sink
        while v != source:
            a = int(parent_arc[v])
            cap[a] -= push
            cap[a ^ 1] += push
            v = to[a ^ 1]
        total += push

    source_side = np.zeros(n, dtype=bool)
    source_side[source] = True
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for a in adj[u]:
            v = to[a]
            if not source_side[v] and cap[a] > _RESIDUAL_EPS:
                source_side[v] = True
                queue.append(v)

    sink_side = np.zeros(n, dtype=bool)
    sink_side[sink] = True
    queue = deque([sink])
    while queue:
        u = queue.popleft()
        for a in adj[u]:
            # arc a leads u -> v; we need residual v -> u, i.e. the partner
            v = to[a]
            if not sink_side[v] and cap[a ^ 1] > _RESIDUAL_EPS:
                sink_side[v] = True
                queue.append(v)
    return MaxFlowResult(value=total, source_side=source_side, sink_side=sink_side)
