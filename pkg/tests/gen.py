"""Random input generators shared by the tests."""

from __future__ import annotations

import numpy as np

from feathom import FeatureSet, FeaturedSeries, InfluenceVector, TimeSeries


def random_plain_values(rng: np.random.Generator, n_symbols: int, extra: int) -> list[str]:
    """Value list over exactly n_symbols symbols; consecutive walk keeps it connected."""
    symbols = [f"s{i}" for i in range(n_symbols)]
    values = [symbols[i] for i in rng.permutation(n_symbols)]
    values += [symbols[i] for i in rng.integers(0, n_symbols, size=extra)]
    return values


def random_featured_series(
    rng: np.random.Generator,
    n_symbols: int = 6,
    extra: int = 20,
    n0: int = 2,
    n1: int = 2,
    multi_first: bool = False,
) -> FeaturedSeries:
    values = random_plain_values(rng, n_symbols, extra)
    n = len(values)
    schema = FeatureSet(
        zeroth=tuple(f"a{i}" for i in range(n0)),
        first=tuple(f"b{i}" for i in range(n1)),
    )
    feat0 = []
    feat1 = []
    for _ in range(n):
        if n0 and rng.random() < 0.7:
            size = int(rng.integers(1, n0 + 1))
            picks = rng.choice(n0, size=size, replace=False)
            feat0.append(frozenset(schema.zeroth[i] for i in picks))
        else:
            feat0.append(frozenset())
        if n1 and rng.random() < 0.7:
            cap = n1 if multi_first else 1
            size = int(rng.integers(1, cap + 1))
            picks = rng.choice(n1, size=size, replace=False)
            feat1.append(frozenset(schema.first[i] for i in picks))
        else:
            feat1.append(frozenset())
    base = TimeSeries(tuple(str(t) for t in range(n)), tuple(values))
    return FeaturedSeries(base, schema, tuple(feat0), tuple(feat1))


def random_influence(
    rng: np.random.Generator, schema: FeatureSet, high: float = 5.0
) -> InfluenceVector:
    g0 = rng.uniform(0.0, high, size=len(schema.zeroth) + 1)
    g1 = rng.uniform(0.0, high, size=len(schema.first) + 1)
    return InfluenceVector(schema, tuple(g0), tuple(g1))


def random_diagram_points(
    rng: np.random.Generator, n_finite: int, n_infinite: int = 0
) -> list[tuple[float, float]]:
    pts = []
    for _ in range(n_finite):
        b = float(rng.uniform(0.0, 3.0))
        pts.append((b, b + float(rng.uniform(0.01, 3.0))))
    for _ in range(n_infinite):
        pts.append((float(rng.uniform(0.0, 3.0)), float("inf")))
    return pts


def random_metric(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random finite metric via shortest paths over a random positive graph."""
    w = rng.uniform(0.2, 2.0, size=(n, n))
    w = (w + w.T) / 2.0
    np.fill_diagonal(w, 0.0)
    d = w.copy()
    for m in range(n):
        d = np.minimum(d, d[:, m : m + 1] + d[m : m + 1, :])
    return d
