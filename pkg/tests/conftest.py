"""Shared fixtures: the five-cycle walk series and the two-square series.

Both appear in many tests because their graphs are small enough to verify
every intermediate by hand: frequencies, count matrices, edge lengths,
distances, diagrams, and representative cycles.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from feathom import (
    FeatureSet,
    FeaturedSeries,
    InfluenceVector,
    TimeSeries,
    featureless,
)

# Walks a 5-cycle up and down three times, then closes the loop directly:
# the 21-25 edge is rare (twice) while the four step edges occur 6x each.
PENTAGON_VALUES = [
    21, 22, 23, 24, 25, 24, 23, 22,
    21, 22, 23, 24, 25, 24, 23, 22,
    21, 22, 23, 24, 25, 24, 23, 22,
    21, 25, 21,
]

# Two 4-cycles glued at the shared value x, each traversed three times.
TWO_SQUARE_VALUES = (
    ["x", "a", "b", "c"] * 3 + ["x", "p", "q", "r"] * 3 + ["x"]
)


@pytest.fixture
def rng():
    return np.random.default_rng(20260817)


@pytest.fixture
def pentagon_values():
    return [str(v) for v in PENTAGON_VALUES]


@pytest.fixture
def pentagon_plain(pentagon_values):
    return featureless(pentagon_values)


@pytest.fixture
def pentagon_schema():
    return FeatureSet(zeroth=("H", "L"), first=("1", "4"))


@pytest.fixture
def pentagon_featured(pentagon_values, pentagon_schema):
    """The walk annotated with a high/low tag and the jump size of each step."""
    feat0 = tuple(
        frozenset(("H",)) if int(v) >= 23 else frozenset(("L",))
        for v in pentagon_values
    )
    steps = [
        str(abs(int(b) - int(a)))
        for a, b in zip(pentagon_values, pentagon_values[1:])
    ]
    feat1 = tuple(frozenset((s,)) for s in steps) + (frozenset(),)
    base = TimeSeries(
        tuple(str(i) for i in range(len(pentagon_values))),
        tuple(pentagon_values),
    )
    return FeaturedSeries(base, pentagon_schema, feat0, feat1)


@pytest.fixture
def pentagon_influence(pentagon_schema):
    """Boosts the rare jump-4 edge so it becomes the shortest one."""
    return InfluenceVector.zeros(pentagon_schema).with_first("4", 5.0)


@pytest.fixture
def two_square_series():
    return featureless(TWO_SQUARE_VALUES)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One explicit PASS/FAIL line per acceptance check at the end of a run."""
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call":
                continue
            if "test_acceptance.py" in rep.nodeid:
                name = rep.nodeid.split("::")[-1]
                rows.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance checks")
    for name, verdict in sorted(rows):
        terminalreporter.write_line(f"[acceptance] {name}: {verdict}")
