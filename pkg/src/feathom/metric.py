"""Activation functions, discounted edge lengths, and the graph metric.

An activation maps combined vertex weights into [0, 1) so that heavy
endpoint pairs shorten an edge without ever making it non-positive.  The
metric is the shortest-path distance over those lengths.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import DomainError, InputError, StructureError
from .graph import GraphSkeleton, WeightedGraph

# sup |d/dz (1 - exp(-z^2))| = sqrt(2) * exp(-1/2), attained at z = 1/sqrt(2)
GAUSS_LIPSCHITZ = math.sqrt(2.0) * math.exp(-0.5)

# keeps activation outputs strictly below 1 even when exp(-z^2) underflows,
# so every edge length stays positive
_MAX_ACTIVATION = 1.0 - 1e-12


def _gauss_bump(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.where(z >= 0, -np.expm1(-np.square(z)), 0.0)
    return np.minimum(out, _MAX_ACTIVATION)


@dataclass(frozen=True, eq=False)
class ActivationFn:
    """A bounded discount curve with a known Lipschitz constant.

    kinds: ``gaussian-raw`` is z >= 0 -> 1 - exp(-z^2) (else 0);
    ``gaussian-auto`` rescales its argument by 2/(M + 1) where M is the
    largest combined weight of two distinct vertices, which doubles the
    Lipschitz constant; ``custom-table`` interpolates a user-supplied
    non-decreasing breakpoint list.
    """

    kind: str
    scale: float = 0.0  # M, used by gaussian-auto
    lipschitz_k: float = GAUSS_LIPSCHITZ
    table: tuple[tuple[float, float], ...] = ()

    def __call__(self, z):
        scalar = np.isscalar(z)
        arr = np.asarray(z, dtype=np.float64)
        if self.kind == "gaussian-raw":
            out = _gauss_bump(arr)
        elif self.kind == "gaussian-auto":
            out = _gauss_bump(arr * (2.0 / (self.scale + 1.0)))
        elif self.kind == "custom-table":
            xs = np.array([p[0] for p in self.table])
            ys = np.array([p[1] for p in self.table])
            out = np.interp(arr, xs, ys)
        else:
            raise InputError(f"unknown activation kind {self.kind!r}")
        return float(out) if scalar else out


def raw_activation() -> ActivationFn:
    return ActivationFn(kind="gaussian-raw")


def auto_activation(graph: WeightedGraph) -> ActivationFn:
    """Gaussian bump rescaled to the graph's vertex weights.

    The scale M is the maximum of vw(a) + vw(b) over distinct vertex pairs
    (0 when fewer than two vertices), so arguments fed to the bump never
    exceed 2M/(M+1) < 2.  The reported Lipschitz constant is the worst case
    2 * sup|derivative| of the raw bump, independent of the weights.
    """
    vw = graph.vertex_weight
    if vw.size < 2:
        m = 0.0
    else:
        top = np.partition(vw, vw.size - 2)[-2:]
        m = float(top.sum())
    return ActivationFn(kind="gaussian-auto", scale=m, lipschitz_k=2.0 * GAUSS_LIPSCHITZ)


def table_activation(points: Sequence[tuple[float, float]]) -> ActivationFn:
    """Piecewise-linear activation through the given (z, rho) breakpoints.

    Breakpoints must have strictly increasing z, non-decreasing rho inside
    (-1, 1), and interpolate rho(0) = 0.
    """
    pts = tuple((float(x), float(y)) for x, y in points)
    if len(pts) < 2:
        raise InputError("need at least two activation breakpoints")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if np.any(np.diff(xs) <= 0):
        raise InputError("activation breakpoints must have increasing z")
    if np.any(np.diff(ys) < 0):
        raise DomainError("activation values must be non-decreasing")
    if ys.min() <= -1 or ys.max() >= 1:
        raise DomainError("activation values must stay inside (-1, 1)")
    if abs(float(np.interp(0.0, xs, ys))) > 1e-12:
        raise DomainError("activation must vanish at z = 0")
    slopes = np.abs(np.diff(ys) / np.diff(xs))
    return ActivationFn(kind="custom-table", lipschitz_k=float(slopes.max()), table=pts)


def edge_lengths(graph: WeightedGraph, rho: ActivationFn) -> np.ndarray:
    """Length of every edge: 1/ew(e) - alpha * rho(vw(a) + vw(b)).

    alpha is the smallest reciprocal weighted frequency, so the discount can
    never cancel a whole length; all outputs are strictly positive.
    """
    if graph.skeleton.n_edges == 0:
        return np.empty(0, dtype=np.float64)
    recip = 1.0 / graph.edge_weight
    alpha = float(recip.min())
    ends = graph.skeleton.edge_vertex_indices
    pair_weight = graph.vertex_weight[ends[:, 0]] + graph.vertex_weight[ends[:, 1]]
    lengths = recip - alpha * rho(pair_weight)
    if lengths.min() <= 0:
        raise StructureError("activation produced a non-positive edge length")
    return lengths


def edge_length(graph: WeightedGraph, rho: ActivationFn, a: str, b: str) -> float:
    """Length of the single edge {a, b}."""
    vi = graph.skeleton.vertex_index
    if a not in vi or b not in vi:
        raise InputError(f"no vertex {a if a not in vi else b!r} in graph")
    key = tuple(sorted((vi[a], vi[b])))
    k = graph.skeleton.edge_index.get(key)
    if k is None:
        raise InputError(f"no edge between {a!r} and {b!r}")
    return float(edge_lengths(graph, rho)[k])


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric shortest-path distances with the vertex label order."""

    labels: tuple[str, ...]
    d: np.ndarray  # (n, n) float64, zero diagonal

    def between(self, a: str, b: str) -> float:
        i = self.labels.index(a)
        j = self.labels.index(b)
        return float(self.d[i, j])


def distance_matrix(graph: WeightedGraph, rho: ActivationFn) -> DistanceMatrix:
    """All-pairs shortest-path distances over the discounted edge lengths.

    Raises StructureError when any pair is unreachable.  A single-vertex
    graph yields the 1x1 zero matrix.
    """
    skel = graph.skeleton
    n = skel.n_vertices
    if n == 1:
        return DistanceMatrix(skel.vertices, np.zeros((1, 1)))
    lengths = edge_lengths(graph, rho)
    ends = skel.edge_vertex_indices
    mat = csr_matrix((lengths, (ends[:, 0], ends[:, 1])), shape=(n, n))
    d = dijkstra(mat, directed=False)
    if not np.all(np.isfinite(d)):
        raise StructureError("graph is not connected")
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(skel.vertices, d)


def distance_matrix_csv(dm: DistanceMatrix) -> str:
    """Matrix as CSV: header row of labels, then one full row per vertex."""
    out = io.StringIO()
    out.write(",".join(["label", *dm.labels]) + "\n")
    for i, lab in enumerate(dm.labels):
        cells = (format(x, ".12g") for x in dm.d[i])
        out.write(",".join([lab, *cells]) + "\n")
    return out.getvalue()
