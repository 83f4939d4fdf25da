"""Acceptance gate: one test per release criterion.

Each test prints one PASS/FAIL line through the terminal-summary hook in
conftest.py, so `pytest -v tests/test_acceptance.py` reads as a checklist.
"""

import datetime
import functools
import time

import numpy as np
import pytest

from gen import random_diagram_points, random_featured_series, random_influence, random_metric
from oracles import (
    betti_numbers,
    bottleneck_exhaustive,
    kth_largest_tent,
    mst_edge_lengths,
    reciprocal_metric,
)

from feathom import (
    ActivationFn,
    DistanceMatrix,
    GAUSS_LIPSCHITZ,
    InfluenceVector,
    auto_activation,
    bottleneck_distance,
    build_skeleton,
    count_matrices,
    distance_matrix,
    featured_diagram,
    overlapping_percentage,
    persistence_diagrams,
    persistence_landscape,
    rips_filtration,
    stability_check,
    stock_preprocess,
    tasc_curve,
    weighted_graph,
)
from feathom.pipelines import asc_curve


@functools.lru_cache(maxsize=1)
def shared_random_cases():
    """200 random featured series reused by the reduction and axiom checks."""
    rng = np.random.default_rng(31207)
    cases = []
    for _ in range(200):
        cases.append(
            random_featured_series(
                rng,
                n_symbols=int(rng.integers(5, 16)),
                extra=int(rng.integers(10, 40)),
            )
        )
    return tuple(cases)


def test_criterion_01_plain_pentagon_frequencies_and_diagrams(pentagon_plain):
    t0 = time.perf_counter()
    skeleton = build_skeleton(pentagon_plain)
    assert skeleton.edge_freq.tolist() == [6, 6, 6, 6, 2]
    g = InfluenceVector.zeros(pentagon_plain.schema)
    diagram = featured_diagram(pentagon_plain, g).diagram
    assert diagram.in_dim(0) == pytest.approx(
        [(0.0, 1 / 6)] * 4 + [(0.0, np.inf)], abs=1e-12
    )
    assert diagram.in_dim(1) == []
    assert time.perf_counter() - t0 < 1.0


def test_criterion_02_featured_pentagon_weights_metric_and_diagrams(
    pentagon_featured, pentagon_influence
):
    t0 = time.perf_counter()
    res = featured_diagram(pentagon_featured, pentagon_influence)
    assert res.graph.edge_weight.tolist() == [6.0, 6.0, 6.0, 6.0, 12.0]
    assert res.distances.between("21", "25") == pytest.approx(1 / 12, abs=1e-12)
    assert res.diagram.in_dim(0) == pytest.approx(
        [(0.0, 1 / 12)] + [(0.0, 1 / 6)] * 3 + [(0.0, np.inf)], abs=1e-12
    )
    (cycle,) = res.diagram.in_dim(1)
    assert cycle == pytest.approx((1 / 6, 1 / 3), abs=1e-12)
    # brute-force homology over the 5-point metric confirms the death value
    d = res.distances.d
    assert betti_numbers(d, cycle[0], 2)[1] == 1
    assert betti_numbers(d, cycle[1] - 1e-9, 2)[1] == 1
    assert betti_numbers(d, cycle[1], 2)[1] == 0
    assert time.perf_counter() - t0 < 1.0


def test_criterion_03_zero_influence_reduces_to_reciprocal_frequency_metric():
    for series in shared_random_cases():
        skeleton = build_skeleton(series)
        counts = count_matrices(series, skeleton)
        graph = weighted_graph(skeleton, counts, InfluenceVector.zeros(series.schema))
        dm = distance_matrix(graph, auto_activation(graph))
        plain = reciprocal_metric(series.values)
        for u in skeleton.vertices:
            for v in skeleton.vertices:
                assert dm.between(u, v) == pytest.approx(plain[u][v], abs=1e-12)


def test_criterion_04_weighted_distances_satisfy_metric_axioms():
    rng = np.random.default_rng(40817)
    for series in shared_random_cases():
        g = random_influence(rng, series.schema, high=5.0)
        res = featured_diagram(series, g, max_dim=1)
        d = res.distances.d
        assert np.array_equal(d, d.T)
        assert np.all(np.diag(d) == 0.0)
        assert np.all(d[~np.eye(len(d), dtype=bool)] > 0.0)
        hops = np.min(d[:, :, None] + d[None, :, :], axis=1)
        assert np.all(hops >= d - 1e-9)


def test_criterion_05_influence_perturbations_respect_the_stability_bound():
    t0 = time.perf_counter()
    rng = np.random.default_rng(50817)
    for _ in range(100):
        series = random_featured_series(
            rng,
            n_symbols=int(rng.integers(4, 9)),
            extra=int(rng.integers(10, 26)),
        )
        g = random_influence(rng, series.schema, high=5.0)
        g2 = random_influence(rng, series.schema, high=5.0)
        report = stability_check(series, g, g2)
        assert report.all_satisfied, (report.bound, report.bottleneck)
    assert time.perf_counter() - t0 < 60.0


def test_criterion_06_reduction_matches_mst_bottleneck_and_tent_oracles():
    rng = np.random.default_rng(60817)
    for _ in range(100):
        n = int(rng.integers(3, 11))
        d = random_metric(rng, n)
        dm = DistanceMatrix(tuple(f"v{i}" for i in range(n)), d)
        diagram = persistence_diagrams(rips_filtration(dm, max_dim=1))
        deaths = sorted(pt[1] for pt in diagram.finite_in_dim(0))
        assert deaths == pytest.approx(mst_edge_lengths(d), abs=1e-12)

    for _ in range(50):
        a = random_diagram_points(rng, int(rng.integers(0, 7)))
        b = random_diagram_points(rng, int(rng.integers(0, 7)))
        assert bottleneck_distance(a, b) == pytest.approx(
            bottleneck_exhaustive(a, b), abs=1e-12
        )

    points = random_diagram_points(rng, 8)
    landscape = persistence_landscape(points)
    births = [p[0] for p in points]
    deaths = [p[1] for p in points]
    xs = np.linspace(min(births) - 0.5, max(deaths) + 0.5, 1000)
    for k in range(len(points)):
        got = landscape.value(k, xs)
        want = [kth_largest_tent(points, k, float(x)) for x in xs]
        assert got == pytest.approx(want, abs=1e-9)


def synthetic_prices(seed, n=500):
    rng = np.random.default_rng(seed)
    log_prices = np.cumsum(rng.normal(0.0, 0.02, size=n))
    d0 = datetime.date(2021, 1, 1)
    dates = [(d0 + datetime.timedelta(days=i)).isoformat() for i in range(n)]
    return list(zip(dates, np.exp(log_prices).tolist()))


def test_criterion_07_anomaly_curves_normalize_and_combine_correctly():
    t0 = time.perf_counter()
    series_a = stock_preprocess(synthetic_prices(70817))
    series_b = stock_preprocess(synthetic_prices(70818))
    zeros_a = InfluenceVector.zeros(series_a.schema)
    zeros_b = InfluenceVector.zeros(series_b.schema)

    curves = {}
    for w in (50, 100):
        curve = curves[w] = asc_curve(series_a, zeros_a, w=w)
        assert len(curve) == len(series_a) - w + 1
        assert np.all(curve.scores >= 0.0) and np.all(curve.scores <= 1.0)
        if curve.normalization > 0.0:
            assert curve.scores.max() == 1.0

    other = asc_curve(series_b, zeros_b, w=50)
    combined = tasc_curve([curves[50], other])
    dead = (curves[50].scores == 0.0) | (other.scores == 0.0)
    assert np.all(combined.scores[dead] == 0.0)
    assert np.all(combined.scores <= 1.0)

    solo = tasc_curve([curves[100]])
    assert np.array_equal(solo.scores, curves[100].scores)
    assert solo.window_starts == curves[100].window_starts
    assert time.perf_counter() - t0 < 30.0


def test_criterion_08_auto_activation_stays_bounded_and_lipschitz(
    pentagon_featured, pentagon_influence
):
    res = featured_diagram(pentagon_featured, pentagon_influence)
    rhos = [res.activation]
    rhos += [
        ActivationFn(kind="gaussian-auto", scale=m, lipschitz_k=2.0 * GAUSS_LIPSCHITZ)
        for m in (0.0, 1.0, 9.0, 100.0)
    ]
    grid = np.linspace(-10.0, 10.0, 100_000)
    dx = grid[1] - grid[0]
    for rho in rhos:
        vals = rho(grid)
        assert np.all(vals >= 0.0) and np.all(vals < 1.0)
        steps = np.diff(vals)
        assert np.all(steps >= 0.0)
        assert np.max(steps) / dx <= 1.7156


def test_criterion_09_overlapping_percentage_matches_hand_counts(
    two_square_series, pentagon_featured
):
    g = InfluenceVector.zeros(two_square_series.schema)
    res = featured_diagram(two_square_series, g, with_reps=True)
    reps = list(res.diagram.reps.values())
    assert len(reps) == 2
    # all 25 observations sit on a cycle; the 7 x rows sit on both
    assert overlapping_percentage(two_square_series, reps) == 28.0

    g = InfluenceVector.zeros(pentagon_featured.schema)
    res = featured_diagram(pentagon_featured, g, with_reps=True)
    assert overlapping_percentage(pentagon_featured, list(res.diagram.reps.values())) == 0.0
