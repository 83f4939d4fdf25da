"""Vietoris-Rips filtrations, persistence diagrams, and representative cycles.

Boundary-matrix reduction over Z/2 with the clearing optimization: columns
are processed from the top dimension down, and every pivot row found in
dimension d+1 lets the corresponding d-column be skipped entirely.  Columns
are sparse sets of row positions; adding two columns is a symmetric
difference and the pivot is the largest remaining position.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import FormatError, InputError, ResourceError
from .metric import DistanceMatrix

DEFAULT_MAX_DIM = 2
DEFAULT_VERTEX_CAP = 64


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices in filtration order with their entry values.

    Simplices are tuples of vertex indices (strictly increasing), sorted by
    (value, dimension, vertex tuple) so that faces always precede cofaces
    and ties break deterministically.  ``labels`` names the vertices.
    """

    labels: tuple[str, ...]
    simplices: tuple[tuple[int, ...], ...]
    values: np.ndarray  # float64, aligned with simplices
    max_dim: int


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Multiset of (birth, death, dim) points; death may be math.inf.

    Zero-persistence pairs (death equal to birth) are dropped.  When
    representatives were requested, ``reps`` maps the index of each dim-1
    point in ``points`` to an ordered walk of vertex labels around a cycle
    alive at that point's birth.
    """

    points: tuple[tuple[float, float, int], ...]
    reps: Mapping[int, tuple[str, ...]] = field(default_factory=dict)

    def in_dim(self, dim: int) -> list[tuple[float, float]]:
        return [(b, d) for b, d, p in self.points if p == dim]

    def finite_in_dim(self, dim: int) -> list[tuple[float, float]]:
        return [(b, d) for b, d, p in self.points if p == dim and math.isfinite(d)]


def simplex_count(n_vertices: int, max_dim: int) -> int:
    """Number of simplices a Rips complex on n vertices would hold."""
    eff = min(max_dim, n_vertices - 1)
    return sum(math.comb(n_vertices, d + 1) for d in range(eff + 1))


def rips_filtration(
    dm: DistanceMatrix,
    max_dim: int = DEFAULT_MAX_DIM,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
) -> Filtration:
    """All simplices up to dimension max_dim, entering at max pairwise distance.

    max_dim is clamped to |V|-1 for tiny spaces; values above 3 are refused
    (simplex counts explode).  Spaces larger than vertex_cap raise
    ResourceError carrying the simplex count that would be generated.
    """
    n = len(dm.labels)
    if max_dim < 1:
        raise InputError(f"max_dim must be at least 1, got {max_dim}")
    if max_dim > 3:
        raise InputError(f"max_dim above 3 is not supported, got {max_dim}")
    if n > vertex_cap:
        raise ResourceError(
            f"{n} vertices exceed the cap of {vertex_cap}; "
            f"a Rips complex would hold {simplex_count(n, max_dim)} simplices"
        )
    eff = min(max_dim, n - 1)
    d = dm.d
    entries: list[tuple[float, int, tuple[int, ...]]] = []
    for i in range(n):
        entries.append((0.0, 0, (i,)))
    for dim in range(1, eff + 1):
        for verts in combinations(range(n), dim + 1):
            value = max(d[i][j] for i, j in combinations(verts, 2))
            entries.append((float(value), dim, verts))
    entries.sort()
    return Filtration(
        labels=dm.labels,
        simplices=tuple(v for _, _, v in entries),
        values=np.array([x for x, _, _ in entries], dtype=np.float64),
        max_dim=eff,
    )


def _facets(simplex: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    for i in range(len(simplex)):
        yield simplex[:i] + simplex[i + 1 :]


def _validate(filtration: Filtration, pos: dict[tuple[int, ...], int]) -> None:
    vals = filtration.values
    if len(vals) != len(filtration.simplices):
        raise InputError("filtration values do not match simplices")
    if np.any(np.diff(vals) < 0):
        raise InputError("filtration values must be non-decreasing")
    for j, s in enumerate(filtration.simplices):
        if len(s) == 1:
            continue
        for f in _facets(s):
            i = pos.get(f)
            if i is None or i >= j:
                raise InputError(f"face {f} does not precede simplex {s}")


def persistence_diagrams(
    filtration: Filtration, with_reps: bool = False
) -> PersistenceDiagram:
    """Diagrams in dimensions 0 .. filtration.max_dim - 1 (dim 0 always).

    Classes of the top dimension are truncation artifacts (nothing above can
    kill them) and are not reported.  With ``with_reps`` the reduction keeps
    enough column memory to attach a representative cycle to every dim-1
    point: the reduced boundary column of the death simplex for finite
    points, the kernel column of the creating edge for infinite ones.
    """
    simplices = filtration.simplices
    values = filtration.values
    n = len(simplices)
    pos = {s: i for i, s in enumerate(simplices)}
    _validate(filtration, pos)
    dims = [len(s) - 1 for s in simplices]
    by_dim: dict[int, list[int]] = {}
    for j in range(n):
        by_dim.setdefault(dims[j], []).append(j)
    top = filtration.max_dim

    pairs: dict[int, int] = {}  # birth position -> death position
    cleared: set[int] = set()  # known-zero columns (pivot rows found above)
    infinite: dict[int, list[int]] = {}  # dim -> unpaired birth positions
    death_cycles: dict[int, set[int]] = {}  # death position -> 1-cycle edge set
    kernel_cycles: dict[int, set[int]] = {}  # edge position -> kernel 1-cycle

    for d in range(top, 0, -1):
        pivot_owner: dict[int, int] = {}
        reduced: dict[int, set[int]] = {}
        track_v = with_reps and d == 1
        vcols: dict[int, set[int]] = {}
        for j in by_dim.get(d, []):
            if j in cleared:
                continue
            col = {pos[f] for f in _facets(simplices[j])}
            vcol = {j} if track_v else None
            while col:
                low = max(col)
                k = pivot_owner.get(low)
                if k is None:
                    break
                col ^= reduced[k]
                if track_v:
                    vcol ^= vcols[k]
            if col:
                low = max(col)
                pivot_owner[low] = j
                reduced[j] = col
                if track_v:
                    vcols[j] = vcol
                pairs[low] = j
                cleared.add(low)
                if with_reps and d == 2:
                    death_cycles[j] = col
            else:
                infinite.setdefault(d, []).append(j)
                if track_v:
                    kernel_cycles[j] = vcol

    raw: list[tuple[float, float, int, int | None]] = []  # (b, d, dim, rep key)
    for j in by_dim.get(0, []):
        death_pos = pairs.get(j)
        death = values[death_pos] if death_pos is not None else math.inf
        raw.append((float(values[j]), float(death), 0, None))
    for d in range(1, max(top, 1)):
        for birth_pos, death_pos in pairs.items():
            if dims[birth_pos] != d:
                continue
            raw.append((float(values[birth_pos]), float(values[death_pos]), d, death_pos))
        for birth_pos in infinite.get(d, []):
            raw.append((float(values[birth_pos]), math.inf, d, birth_pos))

    kept = [(b, dth, dim, key) for b, dth, dim, key in raw if dth > b]
    kept.sort(key=lambda r: (r[2], r[0], r[1]))
    points = tuple((b, dth, dim) for b, dth, dim, _ in kept)
    reps: dict[int, tuple[str, ...]] = {}
    if with_reps:
        for idx, (_, dth, dim, key) in enumerate(kept):
            if dim != 1 or key is None:
                continue
            cycle = death_cycles.get(key) if math.isfinite(dth) else kernel_cycles.get(key)
            if cycle:
                reps[idx] = _cycle_walk(cycle, simplices, filtration.labels)
    return PersistenceDiagram(points=points, reps=reps)


def representative_cycles(filtration: Filtration) -> Mapping[int, tuple[str, ...]]:
    """Cycle per dim-1 diagram point, keyed by the point's index."""
    return persistence_diagrams(filtration, with_reps=True).reps


def _cycle_walk(
    edge_positions: set[int],
    simplices: tuple[tuple[int, ...], ...],
    labels: tuple[str, ...],
) -> tuple[str, ...]:
    """Order a 1-cycle's edge set into a vertex walk, smallest vertex first.

    Falls back to the sorted vertex set when the cycle is not one simple
    loop (possible for sums of loops, which Z/2 arithmetic can produce).
    """
    adj: dict[int, list[int]] = {}
    for p in sorted(edge_positions):
        i, j = simplices[p]
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    if any(len(nb) != 2 for nb in adj.values()):
        return tuple(labels[i] for i in sorted(adj))
    start = min(adj)
    walk = [start]
    prev, cur = None, start
    while True:
        nxts = [x for x in adj[cur] if x != prev]
        nxt = min(nxts)
        if nxt == start:
            break
        walk.append(nxt)
        prev, cur = cur, nxt
    if len(walk) != len(adj):  # several disjoint loops
        return tuple(labels[i] for i in sorted(adj))
    return tuple(labels[i] for i in walk)


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else format(x, ".12g")


def diagram_csv(diagram: PersistenceDiagram) -> str:
    """Diagram as CSV rows ``dim,birth,death`` with ``inf`` for no death."""
    out = io.StringIO()
    out.write("dim,birth,death\n")
    for b, d, p in diagram.points:
        out.write(f"{p},{_fmt(b)},{_fmt(d)}\n")
    return out.getvalue()


def parse_diagram_csv(text: str) -> PersistenceDiagram:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "dim,birth,death":
        raise FormatError("expected header 'dim,birth,death'")
    points = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != 3:
            raise FormatError(f"bad diagram row {ln!r}")
        try:
            p = int(cells[0])
            b = float(cells[1])
            d = math.inf if cells[2] == "inf" else float(cells[2])
        except ValueError as exc:
            raise FormatError(f"bad diagram row {ln!r}") from exc
        points.append((b, d, p))
    return PersistenceDiagram(points=tuple(points))


def reps_json(diagram: PersistenceDiagram) -> list[list[str]]:
    """Representative cycles as vertex-label arrays, in point-index order."""
    return [list(diagram.reps[k]) for k in sorted(diagram.reps)]
