"""Rips filtrations, diagram reduction, and representative cycles."""

import math

import numpy as np
import pytest

from feathom import (
    DistanceMatrix,
    Filtration,
    FormatError,
    InfluenceVector,
    InputError,
    ResourceError,
    diagram_csv,
    featured_diagram,
    parse_diagram_csv,
    persistence_diagrams,
    representative_cycles,
    reps_json,
    rips_filtration,
    simplex_count,
)
from gen import random_metric
from oracles import betti_numbers, mst_edge_lengths

F = 1.0 / 6
T = 1.0 / 12

SQUARE = DistanceMatrix(
    ("A", "B", "C", "D"),
    np.array([
        [0.0, 1.0, math.sqrt(2.0), 1.0],
        [1.0, 0.0, 1.0, math.sqrt(2.0)],
        [math.sqrt(2.0), 1.0, 0.0, 1.0],
        [1.0, math.sqrt(2.0), 1.0, 0.0],
    ]),
)


def labeled(d) -> DistanceMatrix:
    d = np.asarray(d, dtype=np.float64)
    return DistanceMatrix(tuple(f"v{i}" for i in range(d.shape[0])), d)


# --- filtration construction ---


def test_simplex_count():
    assert simplex_count(5, 2) == 25
    assert simplex_count(5, 1) == 15
    assert simplex_count(2, 3) == 3  # clamped to dimension |V| - 1
    assert simplex_count(64, 2) == 43744
    assert simplex_count(65, 2) == 45825


def test_triangle_filtration_order():
    dm = DistanceMatrix(("A", "B", "C"), np.array([
        [0.0, 1.0, 2.0],
        [1.0, 0.0, 1.5],
        [2.0, 1.5, 0.0],
    ]))
    f = rips_filtration(dm)
    assert f.simplices == ((0,), (1,), (2,), (0, 1), (1, 2), (0, 2), (0, 1, 2))
    assert f.values.tolist() == [0.0, 0.0, 0.0, 1.0, 1.5, 2.0, 2.0]
    assert f.max_dim == 2
    # the triangle enters at its longest side, tied with that side but after it


def test_filtration_clamps_max_dim_to_space_size():
    dm = labeled([[0.0, 0.7], [0.7, 0.0]])
    f = rips_filtration(dm, max_dim=3)
    assert f.max_dim == 1
    assert len(f.simplices) == 3


def test_filtration_rejects_bad_max_dim():
    dm = labeled([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(InputError, match="at least 1"):
        rips_filtration(dm, max_dim=0)
    with pytest.raises(InputError, match="above 3"):
        rips_filtration(dm, max_dim=4)


def test_filtration_enforces_the_vertex_cap():
    big = labeled(np.zeros((65, 65)))
    with pytest.raises(ResourceError, match="65 vertices exceed the cap of 64"):
        rips_filtration(big)
    with pytest.raises(ResourceError, match="45825 simplices"):
        rips_filtration(big)
    small = labeled(np.zeros((5, 5)))
    with pytest.raises(ResourceError, match="cap of 4"):
        rips_filtration(small, vertex_cap=4)


def test_handcrafted_filtrations_are_validated():
    labels = ("a", "b")
    with pytest.raises(InputError, match="non-decreasing"):
        persistence_diagrams(Filtration(
            labels, ((0,), (1,), (0, 1)), np.array([0.0, -1.0, 1.0]), 1
        ))
    with pytest.raises(InputError, match="does not precede"):
        persistence_diagrams(Filtration(
            labels, ((0,), (0, 1)), np.array([0.0, 1.0]), 1
        ))
    with pytest.raises(InputError, match="does not precede"):
        persistence_diagrams(Filtration(
            labels, ((0,), (0, 1), (1,)), np.array([0.0, 0.0, 0.0]), 1
        ))
    with pytest.raises(InputError, match="values do not match"):
        persistence_diagrams(Filtration(
            labels, ((0,), (1,)), np.array([0.0]), 1
        ))


# --- diagrams on hand-checked spaces ---


def test_single_point_space():
    diag = persistence_diagrams(rips_filtration(labeled([[0.0]])))
    assert diag.points == ((0.0, math.inf, 0),)
    assert diag.in_dim(1) == []


def test_two_point_space():
    diag = persistence_diagrams(rips_filtration(labeled([[0.0, 0.7], [0.7, 0.0]])))
    assert diag.in_dim(0) == [(0.0, 0.7), (0.0, math.inf)]
    assert diag.finite_in_dim(0) == [(0.0, 0.7)]


def test_equilateral_triangle_has_no_surviving_cycle():
    # the loop closes and fills at the same value: zero persistence, dropped
    dm = labeled(np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]))
    diag = persistence_diagrams(rips_filtration(dm))
    assert diag.in_dim(0) == [(0.0, 1.0), (0.0, 1.0), (0.0, math.inf)]
    assert diag.in_dim(1) == []


def test_square_cycle_and_representative():
    diag = persistence_diagrams(rips_filtration(SQUARE), with_reps=True)
    assert diag.in_dim(0) == [(0.0, 1.0)] * 3 + [(0.0, math.inf)]
    dim1 = diag.in_dim(1)
    assert len(dim1) == 1
    assert dim1[0][0] == pytest.approx(1.0, abs=1e-12)
    assert dim1[0][1] == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert diag.reps == {4: ("A", "B", "C", "D")}


def test_pentagon_plain_diagram(pentagon_plain):
    res = featured_diagram(pentagon_plain, InfluenceVector.zeros(pentagon_plain.schema))
    dim0 = res.diagram.in_dim(0)
    assert dim0[:4] == pytest.approx([(0.0, F)] * 4, abs=1e-12)
    assert dim0[4] == (0.0, math.inf)
    assert res.diagram.in_dim(1) == []


def test_pentagon_featured_diagram(pentagon_featured, pentagon_influence):
    res = featured_diagram(pentagon_featured, pentagon_influence, with_reps=True)
    dim0 = res.diagram.in_dim(0)
    assert dim0[0] == pytest.approx((0.0, T), abs=1e-12)
    assert dim0[1:4] == pytest.approx([(0.0, F)] * 3, abs=1e-12)
    assert dim0[4] == (0.0, math.inf)
    dim1 = res.diagram.in_dim(1)
    assert dim1 == pytest.approx([(F, 2 * F)], abs=1e-12)
    # the cycle walks the whole ring starting from its smallest vertex
    assert res.diagram.reps == {5: ("21", "22", "23", "24", "25")}


def test_two_square_diagram_and_reps(two_square_series):
    res = featured_diagram(
        two_square_series, InfluenceVector.zeros(two_square_series.schema), with_reps=True
    )
    third = 1.0 / 3
    assert res.diagram.in_dim(1) == pytest.approx(
        [(third, 2 * third), (third, 2 * third)], abs=1e-12
    )
    assert res.diagram.reps == {
        7: ("x", "a", "b", "c"),
        8: ("x", "p", "q", "r"),
    }


def test_points_are_sorted_by_dim_then_birth_then_death(two_square_series):
    res = featured_diagram(two_square_series, InfluenceVector.zeros(two_square_series.schema))
    pts = res.diagram.points
    assert pts == tuple(sorted(pts, key=lambda p: (p[2], p[0], p[1])))


# --- oracle cross-checks ---


def test_component_deaths_match_minimum_spanning_tree(rng):
    for _ in range(25):
        n = int(rng.integers(3, 11))
        d = random_metric(rng, n)
        diag = persistence_diagrams(rips_filtration(labeled(d), max_dim=1))
        deaths = sorted(dth for b, dth, p in diag.points if p == 0 and math.isfinite(dth))
        assert len(diag.in_dim(0)) == n
        assert deaths == pytest.approx(mst_edge_lengths(d), abs=1e-9)


def alive_count(diag, dim, eps):
    return sum(1 for b, d, p in diag.points if p == dim and b <= eps < d)


def test_alive_classes_match_brute_force_betti(rng):
    for _ in range(12):
        n = int(rng.integers(4, 8))
        d = random_metric(rng, n)
        diag = persistence_diagrams(rips_filtration(labeled(d)))
        flat = sorted(set(np.round(d[np.triu_indices(n, 1)], 12)))
        probes = [0.0] + flat + [(a + b) / 2 for a, b in zip(flat, flat[1:])]
        for eps in probes:
            b0, b1 = betti_numbers(d, eps, 2)
            assert alive_count(diag, 0, eps) == b0
            assert alive_count(diag, 1, eps) == b1


def test_pentagon_betti_profile(pentagon_featured, pentagon_influence):
    res = featured_diagram(pentagon_featured, pentagon_influence)
    profile = [(0.0, (5, 0)), (T, (4, 0)), (F, (1, 1)), (0.25, (1, 1)),
               (2 * F, (1, 0)), (0.6, (1, 0))]
    for eps, (b0, b1) in profile:
        assert alive_count(res.diagram, 0, eps) == b0
        assert alive_count(res.diagram, 1, eps) == b1
        assert tuple(betti_numbers(res.distances.d, eps, 2)) == (b0, b1)


# --- robustness of the reduction ---


def shuffle_ties(filtration: Filtration, rng) -> Filtration:
    """Permute simplices inside equal (value, dim) groups; order stays legal."""
    order = list(range(len(filtration.simplices)))
    keys = [(float(v), len(s)) for v, s in zip(filtration.values, filtration.simplices)]
    start = 0
    for i in range(1, len(order) + 1):
        if i == len(order) or keys[i] != keys[start]:
            chunk = order[start:i]
            rng.shuffle(chunk)
            order[start:i] = chunk
            start = i
    return Filtration(
        filtration.labels,
        tuple(filtration.simplices[i] for i in order),
        filtration.values[list(order)],
        filtration.max_dim,
    )


def test_tie_order_does_not_change_the_diagram(rng, two_square_series):
    res = featured_diagram(two_square_series, InfluenceVector.zeros(two_square_series.schema))
    base = persistence_diagrams(res.filtration).points
    for _ in range(5):
        shuffled = shuffle_ties(res.filtration, rng)
        assert persistence_diagrams(shuffled).points == base


def test_reps_do_not_change_the_points(rng):
    for _ in range(10):
        d = random_metric(rng, int(rng.integers(3, 9)))
        f = rips_filtration(labeled(d))
        assert persistence_diagrams(f).points == persistence_diagrams(f, with_reps=True).points


def test_representatives_are_cycles_alive_at_birth(pentagon_featured, pentagon_influence):
    res = featured_diagram(pentagon_featured, pentagon_influence, with_reps=True)
    dm = res.distances
    for idx, walk in res.diagram.reps.items():
        birth = res.diagram.points[idx][0]
        assert len(walk) >= 3
        assert len(set(walk)) == len(walk)
        for a, b in zip(walk, walk[1:] + walk[:1]):
            assert dm.between(a, b) <= birth + 1e-12


def test_random_representatives_name_real_vertices(rng):
    from feathom import featureless

    from gen import random_plain_values

    for _ in range(10):
        vals = random_plain_values(rng, int(rng.integers(3, 8)), 20)
        s = featureless(vals)
        res = featured_diagram(s, InfluenceVector.zeros(s.schema), with_reps=True)
        for idx, walk in res.diagram.reps.items():
            assert res.diagram.points[idx][2] == 1
            assert set(walk) <= set(res.skeleton.vertices)
            assert len(set(walk)) == len(walk) >= 3


def test_representative_helper_matches_full_reduction(pentagon_featured, pentagon_influence):
    res = featured_diagram(pentagon_featured, pentagon_influence)
    assert representative_cycles(res.filtration) == {5: ("21", "22", "23", "24", "25")}


# --- serialization ---


def test_diagram_csv_round_trip(pentagon_featured, pentagon_influence):
    diag = featured_diagram(pentagon_featured, pentagon_influence).diagram
    text = diagram_csv(diag)
    assert text.splitlines()[0] == "dim,birth,death"
    assert "inf" in text
    back = parse_diagram_csv(text)
    assert len(back.points) == len(diag.points)
    for got, want in zip(back.points, diag.points):
        assert got[2] == want[2]
        assert got[:2] == pytest.approx(want[:2], abs=1e-11)


def test_diagram_csv_parse_errors():
    with pytest.raises(FormatError, match="header"):
        parse_diagram_csv("birth,death\n")
    with pytest.raises(FormatError, match="bad diagram row"):
        parse_diagram_csv("dim,birth,death\n1,2\n")
    with pytest.raises(FormatError, match="bad diagram row"):
        parse_diagram_csv("dim,birth,death\na,b,c\n")


def test_reps_json(pentagon_featured, pentagon_influence):
    diag = featured_diagram(pentagon_featured, pentagon_influence, with_reps=True).diagram
    assert reps_json(diag) == [["21", "22", "23", "24", "25"]]
