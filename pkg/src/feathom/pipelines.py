"""Application workflows: stock preprocessing, anomaly curves, music grids,
and the empirical stability checker.

These compose the lower modules end to end; all heavy lifting happens
there.  Windows and grid cells are independent work items, so both sliding
workflows accept a thread count and keep output order fixed.
"""

from __future__ import annotations

import csv
import datetime
import io
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .analytics import (
    DiagramStats,
    bottleneck_distance,
    diagram_stats,
    landscape_norm,
    overlapping_percentage,
    persistence_landscape,
)
from .errors import DomainError, FormatError, InputError, SchemaError, StructureError
from .graph import CountMatrices, GraphSkeleton, WeightedGraph, build_skeleton, count_matrices, weighted_graph
from .metric import ActivationFn, DistanceMatrix, auto_activation, distance_matrix
from .persistence import (
    DEFAULT_VERTEX_CAP,
    Filtration,
    PersistenceDiagram,
    persistence_diagrams,
    rips_filtration,
)
from .series import FeatureSet, FeaturedSeries, InfluenceVector, TimeSeries, slice_window

WEEKDAYS = ("Mon", "Tue", "Wed", "Thu", "Fri")


def read_price_csv(text: str) -> list[tuple[str, float]]:
    """Parse the price CSV ``date,close`` into (date, price) pairs."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(c.strip() for c in rows[0]) != ("date", "close"):
        raise FormatError("expected header 'date,close'")
    out = []
    for r, row in enumerate(rows[1:], start=1):
        if not row:
            continue
        if len(row) != 2:
            raise FormatError(f"row {r} has {len(row)} cells, expected 2")
        date, close = (c.strip() for c in row)
        try:
            price = float(close)
        except ValueError as exc:
            raise FormatError(f"bad price {close!r} at row {r}") from exc
        out.append((date, price))
    return out


def _bin_index(x: float, lo: float, width: float, n: int) -> int:
    """Equal-width bin of x over [lo, lo + n*width), 0-based.

    A value on an interior right edge belongs to the right bin; the global
    max is clamped into the last bin; a zero-width range (all inputs equal)
    collapses to the middle bin.
    """
    if width == 0.0:
        return (n - 1) // 2
    k = int(math.floor((x - lo) / width))
    return min(max(k, 0), n - 1)


def stock_preprocess(
    prices: Sequence[tuple[str, float]], n_bins: int = 30, n_delta_bins: int = 4
) -> FeaturedSeries:
    """Turn dated prices into a featured series of log-return bins.

    Observations are labels I1..In for equal-width bins over the log
    returns X(t) = log P(t+1) - log P(t); the timestamp of X(t) is the date
    of P(t).  Zeroth features tag the weekday (Mon..Fri; other days carry
    no tag); first features tag the bin J1..Jm of the return difference
    X(t+1) - X(t) at the earlier timestamp, with the last return untagged.
    """
    if len(prices) < 3:
        raise InputError(f"need at least 3 prices, got {len(prices)}")
    if n_bins < 1 or n_delta_bins < 1:
        raise InputError("bin counts must be positive")
    dates = []
    for d, p in prices:
        if not (isinstance(p, (int, float)) and math.isfinite(p)) or p <= 0:
            raise DomainError(f"price {p!r} at {d} is not positive")
        try:
            dates.append(datetime.date.fromisoformat(d))
        except ValueError as exc:
            raise FormatError(f"bad date {d!r}") from exc
    x = np.diff(np.log([p for _, p in prices]))
    lo, hi = float(x.min()), float(x.max())
    width = (hi - lo) / n_bins
    values = tuple(f"I{1 + _bin_index(v, lo, width, n_bins)}" for v in x)
    deltas = np.diff(x)
    feat1: list[frozenset[str]]
    if deltas.size:
        dlo, dhi = float(deltas.min()), float(deltas.max())
        dwidth = (dhi - dlo) / n_delta_bins
        feat1 = [
            frozenset({f"J{1 + _bin_index(v, dlo, dwidth, n_delta_bins)}"})
            for v in deltas
        ]
    else:
        feat1 = []
    feat1.append(frozenset())
    feat0 = []
    for d in dates[:-1]:
        wd = d.weekday()
        feat0.append(frozenset({WEEKDAYS[wd]}) if wd < 5 else frozenset())
    schema = FeatureSet(
        zeroth=WEEKDAYS, first=tuple(f"J{i}" for i in range(1, n_delta_bins + 1))
    )
    ts = tuple(d for d, _ in prices[:-1])
    return FeaturedSeries(TimeSeries(ts, values), schema, tuple(feat0), tuple(feat1))


@dataclass(frozen=True, eq=False)
class AnalysisResult:
    """Everything one end-to-end run produces, for reuse by callers."""

    skeleton: GraphSkeleton
    counts: CountMatrices
    graph: WeightedGraph
    activation: ActivationFn
    distances: DistanceMatrix
    filtration: Filtration
    diagram: PersistenceDiagram


def featured_diagram(
    series: FeaturedSeries,
    g: InfluenceVector,
    max_dim: int = 2,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    activation: ActivationFn | None = None,
    with_reps: bool = False,
) -> AnalysisResult:
    """Series -> graph -> metric -> Rips -> diagram, with the auto
    activation derived from this graph unless one is supplied."""
    skeleton = build_skeleton(series)
    counts = count_matrices(series, skeleton)
    graph = weighted_graph(skeleton, counts, g)
    rho = activation if activation is not None else auto_activation(graph)
    dm = distance_matrix(graph, rho)
    filtration = rips_filtration(dm, max_dim=max_dim, vertex_cap=vertex_cap)
    diagram = persistence_diagrams(filtration, with_reps=with_reps)
    return AnalysisResult(skeleton, counts, graph, rho, dm, filtration, diagram)


@dataclass(frozen=True, eq=False)
class AnomalyCurve:
    """Normalized window scores; max is 1 whenever any raw score is positive.

    ``normalization`` is the raw-score maximum that was divided out (0 when
    every window scored 0; 0 also marks curves re-read from CSV, where the
    raw scale is unknown).
    """

    window_starts: tuple[int, ...]
    start_labels: tuple[str, ...]
    scores: np.ndarray  # float64 in [0, 1]
    window: int
    normalization: float

    def __len__(self) -> int:
        return len(self.window_starts)


def _window_raw_score(
    series: FeaturedSeries,
    g: InfluenceVector,
    start: int,
    w: int,
    vertex_cap: int,
    activation: ActivationFn | None,
) -> float:
    piece = slice_window(series, start, w)
    try:
        result = featured_diagram(
            piece, g, max_dim=2, vertex_cap=vertex_cap, activation=activation
        )
    except StructureError as exc:
        warnings.warn(f"window at {start}: {exc}; scored 0", stacklevel=3)
        return 0.0
    landscape = persistence_landscape(result.diagram.finite_in_dim(1))
    return landscape_norm(landscape, "sup-sum")


def asc_curve(
    series: FeaturedSeries,
    g: InfluenceVector,
    w: int,
    step: int = 1,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    activation: ActivationFn | None = None,
    jobs: int = 1,
) -> AnomalyCurve:
    """Sliding-window anomaly score curve.

    Each window's raw score is the sup-sum landscape norm of its finite
    dim-1 diagram; the curve is the raw scores divided by their maximum.
    Windows whose graph construction fails structurally score 0 with a
    warning.  The auto activation is derived per window unless one is
    supplied.
    """
    if w > len(series):
        raise InputError(f"window {w} exceeds series length {len(series)}")
    if step < 1:
        raise InputError(f"step must be at least 1, got {step}")
    starts = tuple(range(0, len(series) - w + 1, step))

    def work(start: int) -> float:
        return _window_raw_score(series, g, start, w, vertex_cap, activation)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            raws = list(pool.map(work, starts))
    else:
        raws = [work(s) for s in starts]
    raw_arr = np.array(raws, dtype=np.float64)
    m = float(raw_arr.max()) if raw_arr.size else 0.0
    scores = raw_arr / m if m > 0 else np.zeros_like(raw_arr)
    return AnomalyCurve(
        window_starts=starts,
        start_labels=tuple(series.timestamps[s] for s in starts),
        scores=scores,
        window=w,
        normalization=m,
    )


def tasc_curve(curves: Sequence[AnomalyCurve]) -> AnomalyCurve:
    """Pointwise product of aligned curves, renormalized to max 1."""
    if not curves:
        raise InputError("need at least one curve")
    first = curves[0]
    for c in curves[1:]:
        if c.window_starts != first.window_starts:
            raise InputError("curves are not aligned on the same window starts")
    product = np.ones(len(first), dtype=np.float64)
    for c in curves:
        product *= c.scores
    m = float(product.max()) if product.size else 0.0
    scores = product / m if m > 0 else np.zeros_like(product)
    return AnomalyCurve(
        window_starts=first.window_starts,
        start_labels=first.start_labels,
        scores=scores,
        window=first.window,
        normalization=m,
    )


def curve_csv(curve: AnomalyCurve) -> str:
    out = io.StringIO()
    out.write("start_index,start_date,score\n")
    for i, lab, s in zip(curve.window_starts, curve.start_labels, curve.scores):
        out.write(f"{i},{lab},{format(s, '.12g')}\n")
    return out.getvalue()


def parse_curve_csv(text: str) -> AnomalyCurve:
    """Read a curve back from its CSV; window and normalization are unknown
    there and come back as 0."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(c.strip() for c in rows[0]) != ("start_index", "start_date", "score"):
        raise FormatError("expected header 'start_index,start_date,score'")
    starts, labels, scores = [], [], []
    for r, row in enumerate(rows[1:], start=1):
        if not row:
            continue
        if len(row) != 3:
            raise FormatError(f"row {r} has {len(row)} cells, expected 3")
        try:
            starts.append(int(row[0]))
            scores.append(float(row[2]))
        except ValueError as exc:
            raise FormatError(f"bad curve row {r}") from exc
        labels.append(row[1].strip())
    return AnomalyCurve(
        window_starts=tuple(starts),
        start_labels=tuple(labels),
        scores=np.array(scores, dtype=np.float64),
        window=0,
        normalization=0.0,
    )


@dataclass(frozen=True)
class GridCell:
    """One music-grid cell; empty stats fields mean the cell failed."""

    x: float
    y: float
    stats: DiagramStats | None
    sup_sum: float | None
    l1_sum: float | None
    overlap_pct: float | None
    error: str | None = None


def _grid_cell(
    series: FeaturedSeries,
    feature0: str,
    feature1: str,
    x: float,
    y: float,
    vertex_cap: int,
) -> GridCell:
    g = (
        InfluenceVector.zeros(series.schema)
        .with_zeroth(feature0, x)
        .with_first(feature1, y)
    )
    try:
        result = featured_diagram(series, g, vertex_cap=vertex_cap, with_reps=True)
    except StructureError as exc:
        return GridCell(x, y, None, None, None, None, error=str(exc))
    finite = result.diagram.finite_in_dim(1)
    landscape = persistence_landscape(finite)
    return GridCell(
        x=x,
        y=y,
        stats=diagram_stats(result.diagram.in_dim(1)),
        sup_sum=landscape_norm(landscape, "sup-sum"),
        l1_sum=landscape_norm(landscape, "l1-sum"),
        overlap_pct=overlapping_percentage(series, result.diagram.reps.values()),
    )


def music_stats_grid(
    series: FeaturedSeries,
    feature0: str,
    x_values: Sequence[float],
    feature1: str,
    y_values: Sequence[float],
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    jobs: int = 1,
) -> tuple[GridCell, ...]:
    """Diagram statistics over a grid of influences for one zeroth and one
    first feature (all other influences zero).

    Cells are ordered x-major, matching the x_values/y_values order.
    Structure errors are recorded per cell rather than aborting the grid.
    """
    if feature0 not in series.schema.zeroth:
        raise SchemaError(f"{feature0!r} is not a zeroth feature of the series")
    if feature1 not in series.schema.first:
        raise SchemaError(f"{feature1!r} is not a first feature of the series")
    cells = [(float(x), float(y)) for x in x_values for y in y_values]

    def work(xy: tuple[float, float]) -> GridCell:
        return _grid_cell(series, feature0, feature1, xy[0], xy[1], vertex_cap)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(work, cells))
    else:
        out = [work(xy) for xy in cells]
    return tuple(out)


def grid_csv(cells: Iterable[GridCell]) -> str:
    """Grid cells as CSV; failed cells keep only their coordinates."""
    out = io.StringIO()
    out.write("x,y,longest,shortest,count,sup_sum,l1_sum,overlap_pct\n")

    def fmt(v) -> str:
        return "" if v is None else format(v, ".12g")

    for c in cells:
        if c.stats is None:
            row = [fmt(c.x), fmt(c.y), "", "", "", "", "", ""]
        else:
            row = [
                fmt(c.x),
                fmt(c.y),
                fmt(c.stats.longest),
                fmt(c.stats.shortest),
                str(c.stats.count),
                fmt(c.sup_sum),
                fmt(c.l1_sum),
                fmt(c.overlap_pct),
            ]
        out.write(",".join(row) + "\n")
    return out.getvalue()


def stability_constant(
    counts: CountMatrices, lipschitz_k: float, n_vertices: int
) -> float:
    """Constant bounding diagram movement per unit of influence change:
    (2k*C0max + 1) * (|V| - 1) / C1min over row sums of the count matrices."""
    c0max, c1min = _count_extremes(counts)
    return (2.0 * lipschitz_k * c0max + 1.0) * (n_vertices - 1) / c1min


def _statement_constant(
    counts: CountMatrices, lipschitz_k: float, n_vertices: int
) -> float:
    """A looser variant of the bound constant, reported alongside it:
    (k*C0max + 1) * 2 * (|V| - 1) / C1min."""
    c0max, c1min = _count_extremes(counts)
    return (lipschitz_k * c0max + 1.0) * 2.0 * (n_vertices - 1) / c1min


def _count_extremes(counts: CountMatrices) -> tuple[float, float]:
    if counts.c1.shape[0] == 0:
        raise DomainError("graph has no edges")
    c1min = float(counts.c1.sum(axis=1).min())
    if c1min <= 0:
        raise DomainError("an edge count row sums to zero")
    c0max = float(counts.c0.sum(axis=1).max()) if counts.c0.size else 0.0
    return c0max, c1min


@dataclass(frozen=True)
class StabilityReport:
    """Empirical check of the diagram-stability bound for one vector pair."""

    bound_constant: float
    statement_constant: float
    lipschitz_k: float
    activation_kind: str
    g_delta: float
    bound: float
    bottleneck: dict[int, float]
    satisfied: dict[int, bool]
    tolerance: float

    @property
    def all_satisfied(self) -> bool:
        return all(self.satisfied.values())


def stability_check(
    series: FeaturedSeries,
    g: InfluenceVector,
    g2: InfluenceVector,
    rho: ActivationFn | None = None,
    dims: Sequence[int] = (0, 1),
    tolerance: float = 1e-9,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
) -> StabilityReport:
    """Compare both influence vectors' diagrams against the proved bound.

    One fixed activation is used for both vectors (the bound requires it);
    by default it is auto-derived from the first vector's weighted graph,
    whose Lipschitz constant is weight-independent, so the bound applies.
    """
    if g.schema != g2.schema or g.schema != series.schema:
        raise InputError("series and influence vectors must share one schema")
    dims = tuple(sorted(set(int(d) for d in dims)))
    if not dims or dims[0] < 0:
        raise InputError("dims must be non-negative and non-empty")
    max_dim = dims[-1] + 1
    if max_dim > 3:
        raise InputError("dimensions above 2 are not supported")
    skeleton = build_skeleton(series)
    counts = count_matrices(series, skeleton)
    graph1 = weighted_graph(skeleton, counts, g)
    if rho is None:
        rho = auto_activation(graph1)
    graph2 = weighted_graph(skeleton, counts, g2)

    def diagram_of(graph: WeightedGraph) -> PersistenceDiagram:
        dm = distance_matrix(graph, rho)
        filtration = rips_filtration(dm, max_dim=max_dim, vertex_cap=vertex_cap)
        return persistence_diagrams(filtration)

    d1, d2 = diagram_of(graph1), diagram_of(graph2)
    constant = stability_constant(counts, rho.lipschitz_k, skeleton.n_vertices)
    delta = g.max_difference(g2)
    bound = constant * delta
    bottleneck = {}
    satisfied = {}
    for p in dims:
        db = bottleneck_distance(d1.in_dim(p), d2.in_dim(p))
        bottleneck[p] = db
        satisfied[p] = db <= bound + tolerance
    return StabilityReport(
        bound_constant=constant,
        statement_constant=_statement_constant(counts, rho.lipschitz_k, skeleton.n_vertices),
        lipschitz_k=rho.lipschitz_k,
        activation_kind=rho.kind,
        g_delta=delta,
        bound=bound,
        bottleneck=bottleneck,
        satisfied=satisfied,
        tolerance=tolerance,
    )


def report_json(report: StabilityReport) -> dict:
    return {
        "bound_constant": report.bound_constant,
        "statement_constant": report.statement_constant,
        "lipschitz_k": report.lipschitz_k,
        "activation_kind": report.activation_kind,
        "g_delta": report.g_delta,
        "bound": report.bound,
        "bottleneck": {str(k): v for k, v in report.bottleneck.items()},
        "satisfied": {str(k): v for k, v in report.satisfied.items()},
        "all_satisfied": report.all_satisfied,
        "tolerance": report.tolerance,
    }
