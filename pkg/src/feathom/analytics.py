"""Diagram analytics: bottleneck distance, landscapes, stats, overlap.

Everything here is a pure function of diagram points (one dimension at a
time); normalization and windowing live in the pipelines module.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import InputError
from .series import FeaturedSeries


def _split(points: Iterable[Sequence[float]]) -> tuple[list, list]:
    finite, infinite = [], []
    for b, d in points:
        if d < b:
            raise InputError(f"diagram point ({b}, {d}) dies before it is born")
        (finite if math.isfinite(d) else infinite).append((float(b), float(d)))
    return finite, infinite


def _linf(p, q) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _half_life(p) -> float:
    return (p[1] - p[0]) / 2.0


def _matchable(a: list, b: list, r: float) -> bool:
    """Perfect matching test: points of a vs points of b, diagonal allowed.

    Rows are a's points followed by b's diagonal slots, columns are b's
    points followed by a's diagonal slots; diagonal slots match each other
    freely, so a perfect matching has size len(a) + len(b).
    """
    n, m = len(a), len(b)
    rows, cols = [], []
    for i, p in enumerate(a):
        for j, q in enumerate(b):
            if _linf(p, q) <= r:
                rows.append(i)
                cols.append(j)
        if _half_life(p) <= r:
            rows.append(i)
            cols.append(m + i)
    for j, q in enumerate(b):
        if _half_life(q) <= r:
            rows.append(n + j)
            cols.append(j)
    for j in range(m):
        for i in range(n):
            rows.append(n + j)
            cols.append(m + i)
    size = n + m
    graph = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size)
    )
    match = maximum_bipartite_matching(graph, perm_type="column")
    return int((match != -1).sum()) == size


def bottleneck_distance(
    a: Iterable[Sequence[float]], b: Iterable[Sequence[float]]
) -> float:
    """Exact bottleneck distance between two single-dimension diagrams.

    Points may be matched to each other (L-inf cost) or to the diagonal
    (half their persistence).  Infinite-death points must pair with
    infinite-death points by sorted birth; a count mismatch costs inf.
    The finite part is solved by bisecting the candidate cost set, which
    contains every value at which the matching graph can change.
    """
    fin_a, inf_a = _split(a)
    fin_b, inf_b = _split(b)
    if len(inf_a) != len(inf_b):
        return math.inf
    inf_cost = 0.0
    for (b1, _), (b2, _) in zip(sorted(inf_a), sorted(inf_b)):
        inf_cost = max(inf_cost, abs(b1 - b2))
    if not fin_a and not fin_b:
        return inf_cost
    candidates = {0.0}
    candidates.update(_half_life(p) for p in fin_a)
    candidates.update(_half_life(q) for q in fin_b)
    candidates.update(_linf(p, q) for p in fin_a for q in fin_b)
    ordered = sorted(candidates)
    lo, hi = 0, len(ordered) - 1
    if not _matchable(fin_a, fin_b, ordered[hi]):
        raise AssertionError("largest candidate cost must be feasible")
    while lo < hi:
        mid = (lo + hi) // 2
        if _matchable(fin_a, fin_b, ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(ordered[lo], inf_cost)


@dataclass(frozen=True, eq=False)
class Landscape:
    """Piecewise-linear levels; level k is the (k+1)-th largest tent value.

    Each level is an (m, 2) array of (x, y) breakpoints sharing one x grid;
    levels are 0 outside their span.  Level 0 here is the mathematical
    lambda_1.
    """

    levels: tuple[np.ndarray, ...]

    def value(self, k: int, x) -> np.ndarray:
        """Evaluate level k (0-based) at x, zero outside the breakpoint span."""
        if k < 0 or k >= len(self.levels):
            return np.zeros_like(np.asarray(x, dtype=np.float64))
        xs, ys = self.levels[k][:, 0], self.levels[k][:, 1]
        return np.interp(np.asarray(x, dtype=np.float64), xs, ys, left=0.0, right=0.0)


def persistence_landscape(points: Iterable[Sequence[float]]) -> Landscape:
    """Exact landscape of a finite-death diagram.

    Tent m is x -> max(0, min(x - b_m, d_m - x)).  Slope changes and tent
    crossings all happen at births, deaths, or midpoints (b_i + d_j) / 2,
    so sampling every tent on that grid and sorting columnwise gives exact
    piecewise-linear levels.  Raises InputError on infinite deaths.
    """
    pts = []
    for b, d in points:
        if not (math.isfinite(b) and math.isfinite(d)):
            raise InputError("landscape input must have finite births and deaths")
        if d < b:
            raise InputError(f"diagram point ({b}, {d}) dies before it is born")
        if d > b:
            pts.append((float(b), float(d)))
    if not pts:
        return Landscape(levels=())
    births = np.array([p[0] for p in pts])
    deaths = np.array([p[1] for p in pts])
    grid = set(births) | set(deaths)
    grid.update((b + d) / 2.0 for b in births for d in deaths)
    xs = np.array(sorted(grid))
    tents = np.minimum(xs[None, :] - births[:, None], deaths[:, None] - xs[None, :])
    tents = np.maximum(tents, 0.0)
    tents[::-1].sort(axis=0)  # descending: row k is the (k+1)-th largest
    levels = []
    for k in range(tents.shape[0]):
        if not np.any(tents[k] > 0):
            break
        levels.append(np.column_stack([xs, tents[k]]))
    return Landscape(levels=tuple(levels))


def landscape_norm(landscape: Landscape, which: str = "sup-sum") -> float:
    """Sum over levels of either the sup (``sup-sum``) or the integral
    (``l1-sum``, exact trapezoids on the breakpoints)."""
    if which == "sup-sum":
        return float(sum(level[:, 1].max() for level in landscape.levels))
    if which == "l1-sum":
        return float(
            sum(np.trapezoid(level[:, 1], level[:, 0]) for level in landscape.levels)
        )
    raise InputError(f"unknown landscape norm {which!r}")


def landscape_csv(landscape: Landscape) -> str:
    """Breakpoints as CSV rows ``k,x,y`` with 1-based level numbers."""
    out = io.StringIO()
    out.write("k,x,y\n")
    for k, level in enumerate(landscape.levels, start=1):
        for x, y in level:
            out.write(f"{k},{format(x, '.12g')},{format(y, '.12g')}\n")
    return out.getvalue()


@dataclass(frozen=True)
class DiagramStats:
    """Count and persistence extremes of one dimension's finite points."""

    count: int
    longest: float | None = None
    shortest: float | None = None


def diagram_stats(points: Iterable[Sequence[float]]) -> DiagramStats:
    lives = [d - b for b, d in points if math.isfinite(d)]
    if not lives:
        return DiagramStats(count=0)
    return DiagramStats(count=len(lives), longest=max(lives), shortest=min(lives))


def stats_json(stats: DiagramStats) -> dict:
    out: dict = {"count": stats.count}
    if stats.count:
        out["longest"] = stats.longest
        out["shortest"] = stats.shortest
    return out


def overlapping_percentage(
    series: FeaturedSeries, reps: Iterable[Iterable[str]]
) -> float:
    """How much of the cycle-covered series lies on several cycles at once.

    N_c counts timestamps whose observation is in the union of the cycles'
    vertex sets; N_s counts those lying in at least one pairwise
    intersection.  Returns 100 * N_s / N_c, or 0 when nothing is covered.
    """
    sets = [frozenset(r) for r in reps]
    union: set[str] = set().union(*sets) if sets else set()
    shared: set[str] = set()
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            shared |= sets[i] & sets[j]
    n_c = sum(1 for v in series.values if v in union)
    n_s = sum(1 for v in series.values if v in shared)
    return 100.0 * n_s / n_c if n_c else 0.0
