"""Concrete submodular functions: cuts, covers, flows, concave-of-modular,
log-determinants, and matroid ranks, plus fast Lovász-extension paths where
the structure gives one and a max-flow route for cut minimization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _maxflow
from .core import SetFunction, elements_of, subset_of, validate_ground_size
from .errors import NotConcave, NotPositiveDefinite, NotZeroAtZero
from .lovasz import descending_order
from .sfm import SfmResult


# ---------------------------------------------------------------------------
# directed cuts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Digraph:
    """Weighted directed graph on nodes 0..p-1; self-loops are ignored."""

    p: int
    arcs: tuple = ()

    def __post_init__(self):
        validate_ground_size(self.p)
        clean = []
        for u, v, w in self.arcs:
            if w < 0.0:
                raise ValueError(f"negative arc weight on ({u}, {v})")
            if not (0 <= u < self.p and 0 <= v < self.p):
                raise ValueError(f"arc ({u}, {v}) out of range")
            if u != v:
                clean.append((int(u), int(v), float(w)))
        object.__setattr__(self, "arcs", tuple(clean))


def _arc_arrays(g: Digraph):
    tails = np.array([a[0] for a in g.arcs], dtype=np.int64)
    heads = np.array([a[1] for a in g.arcs], dtype=np.int64)
    wts = np.array([a[2] for a in g.arcs], dtype=np.float64)
    return tails, heads, wts


def cut_function(g: Digraph) -> SetFunction:
    """F(A) = total weight of arcs leaving A."""
    tails, heads, wts = _arc_arrays(g)

    def fn(mask: int) -> float:
        if len(wts) == 0:
            return 0.0
        out = ((mask >> tails) & 1).astype(bool) & ~((mask >> heads) & 1).astype(bool)
        return float(np.sum(wts[out]))

    return SetFunction(g.p, fn, memoize=True)


def cut_lovasz(g: Digraph, w) -> float:
    """Extension of the cut in O(arcs): sum of d(k, j) * (w_k - w_j)_+."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (g.p,):
        raise ValueError(f"vector has shape {w.shape}, expected ({g.p},)")
    tails, heads, wts = _arc_arrays(g)
    if len(wts) == 0:
        return 0.0
    return float(np.sum(wts * np.maximum(w[tails] - w[heads], 0.0)))


def cut_minimize(g: Digraph, z) -> SfmResult:
    """Minimize cut(A) - z(A) through one max-flow computation.

    Source arcs carry the positive parts of z, sink arcs the negative
    parts; min cuts of the augmented network correspond to minimizers, and
    the residual reachability sets give the lattice extremes.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (g.p,):
        raise ValueError(f"vector has shape {z.shape}, expected ({g.p},)")
    src, snk = g.p, g.p + 1
    arcs = list(g.arcs)
    for k in range(g.p):
        if z[k] > 0.0:
            arcs.append((src, k, float(z[k])))
        elif z[k] < 0.0:
            arcs.append((k, snk, float(-z[k])))
    res = _maxflow.max_flow(g.p + 2, arcs, src, snk)

    minimal = subset_of(k for k in range(g.p) if res.source_side[k])
    maximal = subset_of(k for k in range(g.p) if not res.sink_side[k])
    F = cut_function(g)
    value = F(maximal) - float(sum(z[k] for k in elements_of(maximal)))
    return SfmResult(min_value=value, minimal_minimizer=minimal,
                     maximal_minimizer=maximal, certificate=None, gap=0.0)


# ---------------------------------------------------------------------------
# weighted set covers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverSystem:
    """Groups with nonnegative weights; F(A) sums the groups meeting A."""

    p: int
    groups: tuple = ()  # (member bitmask, weight) pairs

    def __post_init__(self):
        validate_ground_size(self.p)
        clean = []
        for mask, wt in self.groups:
            if wt < 0.0:
                raise ValueError("cover weights must be nonnegative")
            if not 0 < mask < (1 << self.p):
                raise ValueError(f"group mask {mask} out of range")
            clean.append((int(mask), float(wt)))
        object.__setattr__(self, "groups", tuple(clean))


def cover_function(c: CoverSystem) -> SetFunction:
    masks = np.array([g[0] for g in c.groups], dtype=np.int64)
    wts = np.array([g[1] for g in c.groups], dtype=np.float64)

    def fn(mask: int) -> float:
        if len(wts) == 0:
            return 0.0
        return float(np.sum(wts[(masks & mask) != 0]))

    return SetFunction(c.p, fn, memoize=True)


def cover_lovasz(c: CoverSystem, w) -> float:
    """Extension in O(groups): sum of weight * max of w over the group."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (c.p,):
        raise ValueError(f"vector has shape {w.shape}, expected ({c.p},)")
    total = 0.0
    for mask, wt in c.groups:
        total += wt * max(w[k] for k in elements_of(mask))
    return float(total)


# ---------------------------------------------------------------------------
# flow functions (polymatroids from multi-source networks)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlowNetwork:
    """Capacitated network with source nodes and a sink ground set.

    ``sinks[k]`` is the node playing ground element k; sources and sinks
    must be disjoint.
    """

    n_nodes: int
    sources: tuple
    sinks: tuple
    arcs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(int(s) for s in self.sources))
        object.__setattr__(self, "sinks", tuple(int(t) for t in self.sinks))
        object.__setattr__(self, "arcs",
                           tuple((int(u), int(v), float(c)) for u, v, c in self.arcs))
        if set(self.sources) & set(self.sinks):
            raise ValueError("sources and sinks must be disjoint")
        validate_ground_size(len(self.sinks))
        for u, v, c in self.arcs:
            if c < 0.0:
                raise ValueError("capacities must be nonnegative")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ValueError(f"arc ({u}, {v}) out of range")


def flow_function(net: FlowNetwork) -> SetFunction:
    """F(A) = max flow from the sources into the sink nodes of A.

    Equivalently the minimum capacity of a cut separating the sources from
    A; non-decreasing and submodular.  Attachment arcs get a safe big-M
    capacity (1 + total finite capacity) so all arithmetic stays finite.
    """
    p = len(net.sinks)
    big = 1.0 + sum(c for _, _, c in net.arcs)
    src, snk = net.n_nodes, net.n_nodes + 1

    def fn(mask: int) -> float:
        if mask == 0:
            return 0.0
        arcs = list(net.arcs)
        for s in net.sources:
            arcs.append((src, s, big))
        for k in elements_of(mask):
            arcs.append((net.sinks[k], snk, big))
        return _maxflow.max_flow(net.n_nodes + 2, arcs, src, snk).value

    return SetFunction(p, fn, memoize=True)


# ---------------------------------------------------------------------------
# concave functions of cardinality or of a nonnegative modular sum
# ---------------------------------------------------------------------------

def _check_concave_table(g_table: np.ndarray) -> None:
    if g_table[0] != 0.0:
        raise NotZeroAtZero(f"g(0) = {g_table[0]}, must be 0")
    inc = np.diff(g_table)
    if np.any(np.diff(inc) > 1e-12):
        raise NotConcave("increments of g must be non-increasing")


def concave_cardinality(g_table) -> SetFunction:
    """F(A) = g(|A|) for a concave profile g given at 0..p."""
    g_table = np.asarray(g_table, dtype=np.float64)
    _check_concave_table(g_table)
    p = len(g_table) - 1

    return SetFunction(p, lambda mask: float(g_table[int(mask).bit_count()]),
                       memoize=False)


def concave_cardinality_lovasz(g_table, w) -> float:
    """Order-statistic form: sum of sorted w times the increments of g."""
    g_table = np.asarray(g_table, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    order = descending_order(w)
    total = 0.0
    for rank, j in enumerate(order, start=1):
        total += w[j] * (g_table[rank] - g_table[rank - 1])
    return float(total)


_ANALYTIC = {
    "sqrt": np.sqrt,
    "log1p": np.log1p,
}


def _profile(kind: str, cap_value: Optional[float]):
    if kind == "cap":
        if cap_value is None or cap_value < 0.0:
            raise ValueError("the 'cap' profile needs a nonnegative cap value")
        return lambda x: np.minimum(x, cap_value)
    try:
        return _ANALYTIC[kind]
    except KeyError:
        raise ValueError(f"unknown profile {kind!r}; pick sqrt, log1p, or cap")


def weighted_concave(s, kind: str, cap_value: Optional[float] = None) -> SetFunction:
    """F(A) = g(s(A)) for nonnegative weights s and a concave analytic g.

    Profiles: ``sqrt``, ``log1p``, or ``cap`` (min with a constant); all
    satisfy g(0) = 0.
    """
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0.0):
        raise ValueError("weights must be nonnegative")
    g = _profile(kind, cap_value)

    def fn(mask: int) -> float:
        total = 0.0
        for k in elements_of(mask):
            total += s[k]
        return float(g(total))

    return SetFunction(len(s), fn, memoize=True)


def weighted_concave_lovasz(s, kind: str, w, cap_value: Optional[float] = None) -> float:
    """Fast extension path via the increments of g along sorted partial sums."""
    s = np.asarray(s, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    g = _profile(kind, cap_value)
    order = descending_order(w)
    total = 0.0
    acc = 0.0
    prev = 0.0
    for j in order:
        acc += s[j]
        cur = float(g(acc))
        total += w[j] * (cur - prev)
        prev = cur
    return float(total)


# ---------------------------------------------------------------------------
# Gaussian log-determinant
# ---------------------------------------------------------------------------

def logdet_function(Q) -> SetFunction:
    """F(A) = log det of the principal submatrix of a positive definite Q."""
    Q = np.asarray(Q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError("Q must be square")
    if np.max(np.abs(Q - Q.T)) > 1e-12:
        raise NotPositiveDefinite("Q must be symmetric (within 1e-12)")
    try:
        np.linalg.cholesky(Q)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("Q is not positive definite")
    p = Q.shape[0]

    def fn(mask: int) -> float:
        if mask == 0:
            return 0.0
        idx = elements_of(mask)
        chol = np.linalg.cholesky(Q[np.ix_(idx, idx)])
        return float(2.0 * np.sum(np.log(np.diag(chol))))

    return SetFunction(p, fn, memoize=True)


# ---------------------------------------------------------------------------
# matroid ranks
# ---------------------------------------------------------------------------

def graphic_matroid_rank(n_vertices: int, edges: Sequence[tuple]) -> SetFunction:
    """Rank of an edge subset: touched vertices minus connected components.

    Union-find over the selected edges; equals the size of a spanning
    forest of the selected subgraph.
    """
    edges = [(int(u), int(v)) for u, v in edges]
    for u, v in edges:
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            raise ValueError(f"edge ({u}, {v}) out of range")

    def fn(mask: int) -> float:
        parent: dict[int, int] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        rank = 0
        for k in elements_of(mask):
            u, v = edges[k]
            for w in (u, v):
                if w not in parent:
                    parent[w] = w
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return float(rank)

    return SetFunction(len(edges), fn, memoize=True)


def linear_matroid_rank(matrix, tol: Optional[float] = None) -> SetFunction:
    """Rank of selected columns by elimination with a pivot threshold.

    The threshold defaults to 1e-9 relative to the largest column norm; it
    is the sole source of rank ambiguity for nearly dependent columns.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError("matrix must be 2-d")
    p = matrix.shape[1]
    norms = np.linalg.norm(matrix, axis=0)
    pivot_tol = (1e-9 if tol is None else tol) * max(1.0, float(np.max(norms, initial=0.0)))

    def fn(mask: int) -> float:
        idx = elements_of(mask)
        if not idx:
            return 0.0
        cols = matrix[:, idx].copy()
        rank = 0
        for j in range(cols.shape[1]):
            col = cols[:, j]
            if np.linalg.norm(col) > pivot_tol:
                rank += 1
                col = col / np.linalg.norm(col)
                cols -= np.outer(col, col @ cols)
        return float(rank)

    return SetFunction(p, fn, memoize=True)
