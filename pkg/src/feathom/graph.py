"""Transition graphs of featured series and their feature count matrices.

The skeleton records distinct values as vertices and unordered consecutive
pairs as edges, both in first-appearance order.  Count matrices tally, per
vertex and per edge occurrence, how often each feature (or the empty state)
was present; influence vectors then turn counts into weighted frequencies.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InputError, StructureError
from .series import FeaturedSeries, InfluenceVector


@dataclass(frozen=True, eq=False)
class GraphSkeleton:
    """Vertices, edges and raw transition frequencies of a series graph."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]  # first-traversal orientation
    edge_freq: np.ndarray  # int64, aligned with edges

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        """Unordered edge lookup keyed by sorted vertex-index pairs."""
        vi = self.vertex_index
        out = {}
        for k, (a, b) in enumerate(self.edges):
            i, j = sorted((vi[a], vi[b]))
            out[(i, j)] = k
        return out

    @cached_property
    def edge_vertex_indices(self) -> np.ndarray:
        """(|E|, 2) int array of endpoint vertex indices."""
        vi = self.vertex_index
        if not self.edges:
            return np.empty((0, 2), dtype=np.int64)
        return np.array([(vi[a], vi[b]) for a, b in self.edges], dtype=np.int64)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True, eq=False)
class CountMatrices:
    """Feature occurrence counts per vertex (c0) and per edge (c1).

    Column 0 counts occurrences with no feature present; columns 1.. follow
    the schema order.  A timestamp carrying several features counts once in
    each of their columns, so row sums can exceed raw frequencies.
    """

    schema: "object"
    c0: np.ndarray  # (|V|, 1 + #zeroth) int64
    c1: np.ndarray  # (|E|, 1 + #first) int64
    uniform_first: bool  # True when no counted transition had >1 first feature


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Skeleton plus influence-weighted vertex and edge frequencies."""

    skeleton: GraphSkeleton
    vertex_weight: np.ndarray  # float64, c0 @ g0
    edge_weight: np.ndarray  # float64, c1 @ (g1 + 1); >= raw frequency


def build_skeleton(series: FeaturedSeries) -> GraphSkeleton:
    """Distinct values and consecutive-pair edges, in first-appearance order.

    Consecutive equal values contribute no edge.  Graphs built this way are
    always connected (each transition links its endpoints); the check is kept
    as a guard.
    """
    if len(series) < 2:
        raise InputError(f"need at least 2 timestamps to build a graph, got {len(series)}")
    vals = series.values
    vertices: list[str] = []
    vidx: dict[str, int] = {}
    for v in vals:
        if v not in vidx:
            vidx[v] = len(vertices)
            vertices.append(v)
    edges: list[tuple[str, str]] = []
    eidx: dict[tuple[int, int], int] = {}
    freq: list[int] = []
    for a, b in zip(vals, vals[1:]):
        if a == b:
            continue
        key = (vidx[a], vidx[b]) if vidx[a] < vidx[b] else (vidx[b], vidx[a])
        k = eidx.get(key)
        if k is None:
            eidx[key] = len(edges)
            edges.append((a, b))
            freq.append(1)
        else:
            freq[k] += 1
    skel = GraphSkeleton(tuple(vertices), tuple(edges), np.array(freq, dtype=np.int64))
    _check_connected(skel)
    return skel


def _check_connected(skel: GraphSkeleton) -> None:
    n = skel.n_vertices
    if n <= 1:
        return
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in skel.edge_vertex_indices:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != n:
        raise StructureError("graph is not connected")


def count_matrices(series: FeaturedSeries, skeleton: GraphSkeleton) -> CountMatrices:
    """Tally zeroth features per vertex and first features per edge occurrence.

    The first features of a transition are read at its earlier timestamp.
    Raises InputError when the skeleton does not match the series.
    """
    schema = series.schema
    vi = skeleton.vertex_index
    ei = skeleton.edge_index
    c0 = np.zeros((skeleton.n_vertices, 1 + len(schema.zeroth)), dtype=np.int64)
    c1 = np.zeros((skeleton.n_edges, 1 + len(schema.first)), dtype=np.int64)
    z_col = {name: 1 + j for j, name in enumerate(schema.zeroth)}
    f_col = {name: 1 + j for j, name in enumerate(schema.first)}
    vals = series.values
    freq_check = np.zeros(skeleton.n_edges, dtype=np.int64)
    multi_first = False

    for k, v in enumerate(vals):
        row = vi.get(v)
        if row is None:
            raise InputError(f"series value {v!r} missing from skeleton")
        present = series.feat0[k]
        if present:
            for name in present:
                c0[row, z_col[name]] += 1
        else:
            c0[row, 0] += 1

    for k in range(len(vals) - 1):
        a, b = vals[k], vals[k + 1]
        if a == b:
            continue
        key = (vi[a], vi[b]) if vi[a] < vi[b] else (vi[b], vi[a])
        row = ei.get(key)
        if row is None:
            raise InputError(f"series transition {a!r}->{b!r} missing from skeleton")
        freq_check[row] += 1
        present = series.feat1[k]
        if len(present) > 1:
            multi_first = True
        if present:
            for name in present:
                c1[row, f_col[name]] += 1
        else:
            c1[row, 0] += 1

    if not np.array_equal(freq_check, skeleton.edge_freq):
        raise InputError("skeleton frequencies do not match the series")
    if multi_first:
        warnings.warn(
            "some transitions carry more than one first feature; "
            "edge count rows exceed raw frequencies",
            stacklevel=2,
        )
    elif skeleton.n_edges and not np.array_equal(c1.sum(axis=1), skeleton.edge_freq):
        raise StructureError("edge count rows disagree with frequencies")
    return CountMatrices(schema, c0, c1, not multi_first)


def weighted_graph(
    skeleton: GraphSkeleton, counts: CountMatrices, g: InfluenceVector
) -> WeightedGraph:
    """Weighted vertex/edge frequencies: c0 @ g0 and c1 @ (g1 + 1).

    With the zero influence vector the edge weights equal the raw transition
    frequencies and all vertex weights vanish.
    """
    g0 = np.asarray(g.zeroth, dtype=np.float64)
    g1 = np.asarray(g.first, dtype=np.float64)
    if counts.c0.shape != (skeleton.n_vertices, g0.size):
        raise InputError("vertex counts do not match the skeleton and schema")
    if counts.c1.shape != (skeleton.n_edges, g1.size):
        raise InputError("edge counts do not match the skeleton and schema")
    vw = counts.c0 @ g0
    ew = counts.c1 @ (g1 + 1.0)
    if skeleton.n_edges and ew.min() <= 0:
        raise StructureError("non-positive weighted edge frequency")
    return WeightedGraph(skeleton, vw, ew)


def debug_dump(
    skeleton: GraphSkeleton,
    counts: CountMatrices | None = None,
    graph: WeightedGraph | None = None,
) -> dict:
    """JSON-friendly dump of the skeleton and any derived matrices."""
    out: dict = {
        "vertices": list(skeleton.vertices),
        "edges": [list(e) for e in skeleton.edges],
        "edge_freq": skeleton.edge_freq.tolist(),
    }
    if counts is not None:
        out["c0_columns"] = list(counts.schema.zeroth_columns)
        out["c1_columns"] = list(counts.schema.first_columns)
        out["c0"] = counts.c0.tolist()
        out["c1"] = counts.c1.tolist()
        out["uniform_first"] = counts.uniform_first
    if graph is not None:
        out["vertex_weight"] = graph.vertex_weight.tolist()
        out["edge_weight"] = graph.edge_weight.tolist()
    return out
