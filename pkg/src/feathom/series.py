"""Featured time series: schemas, influence vectors, CSV and config ingestion.

A featured series is a plain time series (opaque string values at unique
timestamps) where every timestamp additionally carries a subset of the
declared zeroth features and a subset of the declared first features.
Zeroth features describe the state at a timestamp; first features describe
the transition that starts there.  The absent-feature states are modelled
as reserved symbols ``empty0`` / ``empty1`` rather than as schema entries.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from .errors import BoundsError, DomainError, FormatError, InputError, SchemaError

EMPTY_ZEROTH = "empty0"
EMPTY_FIRST = "empty1"

# both ASCII and symbol spellings of the empty states are reserved
_EMPTY_ZEROTH_ALIASES = frozenset({EMPTY_ZEROTH, "∅0"})
_EMPTY_FIRST_ALIASES = frozenset({EMPTY_FIRST, "∅1"})
_RESERVED = _EMPTY_ZEROTH_ALIASES | _EMPTY_FIRST_ALIASES
_CSV_HEADER = ("t", "value", "f0", "f1")
_CONFIG_KEYS = frozenset({"features0", "features1", "g0", "g1"})


def _validate_names(names: Sequence[str], which: str) -> None:
    seen = set()
    for name in names:
        if not isinstance(name, str) or not name.strip():
            raise SchemaError(f"blank {which} feature name")
        if name in _RESERVED:
            raise SchemaError(f"{which} feature name {name!r} is reserved")
        if ";" in name or "," in name:
            raise SchemaError(f"{which} feature name {name!r} contains a delimiter")
        if name in seen:
            raise SchemaError(f"duplicate {which} feature name {name!r}")
        seen.add(name)


@dataclass(frozen=True)
class FeatureSet:
    """Declared zeroth and first feature names, in a fixed order.

    The order matters: count-matrix columns and influence-vector slots are
    aligned to it, with the reserved empty state always occupying slot 0.
    """

    zeroth: tuple[str, ...] = ()
    first: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        _validate_names(self.zeroth, "zeroth")
        _validate_names(self.first, "first")

    @property
    def zeroth_columns(self) -> tuple[str, ...]:
        return (EMPTY_ZEROTH,) + self.zeroth

    @property
    def first_columns(self) -> tuple[str, ...]:
        return (EMPTY_FIRST,) + self.first


@dataclass(frozen=True)
class InfluenceVector:
    """Non-negative influence per feature, including the empty states.

    ``zeroth[0]`` / ``first[0]`` are the influences of ``empty0`` /
    ``empty1``; the remaining slots follow the schema order.
    """

    schema: FeatureSet
    zeroth: tuple[float, ...]
    first: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.zeroth) != 1 + len(self.schema.zeroth):
            raise InputError("zeroth influence length does not match schema")
        if len(self.first) != 1 + len(self.schema.first):
            raise InputError("first influence length does not match schema")
        for v in self.zeroth + self.first:
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"influence value {v!r} is not a finite number")
            if v < 0:
                raise DomainError(f"influence value {v} is negative")

    @classmethod
    def zeros(cls, schema: FeatureSet) -> "InfluenceVector":
        return cls(
            schema,
            (0.0,) * (1 + len(schema.zeroth)),
            (0.0,) * (1 + len(schema.first)),
        )

    def _slot(self, name: str) -> tuple[str, int]:
        """Locate a feature name; returns ('zeroth'|'first', slot index)."""
        if name in _EMPTY_ZEROTH_ALIASES:
            return "zeroth", 0
        if name in _EMPTY_FIRST_ALIASES:
            return "first", 0
        if name in self.schema.zeroth:
            return "zeroth", 1 + self.schema.zeroth.index(name)
        if name in self.schema.first:
            return "first", 1 + self.schema.first.index(name)
        raise SchemaError(f"unknown feature {name!r}")

    def influence(self, name: str) -> float:
        side, i = self._slot(name)
        return (self.zeroth if side == "zeroth" else self.first)[i]

    def with_influence(self, name: str, value: float) -> "InfluenceVector":
        """A copy with one feature's influence replaced.

        Looks the name up in the zeroth features first; use with_zeroth or
        with_first when a name appears in both schema halves.
        """
        side, i = self._slot(name)
        if side == "zeroth":
            z = list(self.zeroth)
            z[i] = float(value)
            return InfluenceVector(self.schema, tuple(z), self.first)
        f = list(self.first)
        f[i] = float(value)
        return InfluenceVector(self.schema, self.zeroth, tuple(f))

    def with_zeroth(self, name: str, value: float) -> "InfluenceVector":
        if name in _EMPTY_ZEROTH_ALIASES:
            i = 0
        elif name in self.schema.zeroth:
            i = 1 + self.schema.zeroth.index(name)
        else:
            raise SchemaError(f"unknown zeroth feature {name!r}")
        z = list(self.zeroth)
        z[i] = float(value)
        return InfluenceVector(self.schema, tuple(z), self.first)

    def with_first(self, name: str, value: float) -> "InfluenceVector":
        if name in _EMPTY_FIRST_ALIASES:
            i = 0
        elif name in self.schema.first:
            i = 1 + self.schema.first.index(name)
        else:
            raise SchemaError(f"unknown first feature {name!r}")
        f = list(self.first)
        f[i] = float(value)
        return InfluenceVector(self.schema, self.zeroth, tuple(f))

    def max_difference(self, other: "InfluenceVector") -> float:
        """Sup-norm distance over the whole domain, empty states included."""
        if other.schema != self.schema:
            raise InputError("influence vectors use different schemas")
        return max(
            max(abs(a - b) for a, b in zip(self.zeroth, other.zeroth)),
            max(abs(a - b) for a, b in zip(self.first, other.first)),
        )


@dataclass(frozen=True)
class TimeSeries:
    """Opaque string values observed at unique, ordered timestamps."""

    timestamps: tuple[str, ...]
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.timestamps) != len(self.values):
            raise InputError("timestamps and values differ in length")
        if len(set(self.timestamps)) != len(self.timestamps):
            raise FormatError("duplicate timestamp in series")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class FeaturedSeries:
    """A time series with per-timestamp zeroth/first feature subsets."""

    base: TimeSeries
    schema: FeatureSet
    feat0: tuple[frozenset[str], ...]
    feat1: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        n = len(self.base)
        if len(self.feat0) != n or len(self.feat1) != n:
            raise InputError("feature annotations do not cover the series")
        z, f = set(self.schema.zeroth), set(self.schema.first)
        for i in range(n):
            bad = self.feat0[i] - z
            if bad:
                raise SchemaError(f"unknown zeroth feature {sorted(bad)[0]!r} at row {i + 1}")
            bad = self.feat1[i] - f
            if bad:
                raise SchemaError(f"unknown first feature {sorted(bad)[0]!r} at row {i + 1}")

    @property
    def timestamps(self) -> tuple[str, ...]:
        return self.base.timestamps

    @property
    def values(self) -> tuple[str, ...]:
        return self.base.values

    def __len__(self) -> int:
        return len(self.base)


def featureless(values: Sequence[str], timestamps: Sequence[str] | None = None) -> FeaturedSeries:
    """Wrap plain values as a featured series with an empty schema."""
    vals = tuple(str(v) for v in values)
    ts = tuple(timestamps) if timestamps is not None else tuple(str(i) for i in range(len(vals)))
    empty = frozenset()
    return FeaturedSeries(
        TimeSeries(ts, vals), FeatureSet(), (empty,) * len(vals), (empty,) * len(vals)
    )


def _parse_feature_cell(cell: str, allowed: frozenset[str], row: int) -> frozenset[str]:
    names = set()
    for tok in cell.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        if tok not in allowed:
            raise SchemaError(f"unknown feature {tok!r} at row {row}")
        names.add(tok)
    return frozenset(names)


def parse_featured_series(text: str, schema: FeatureSet) -> FeaturedSeries:
    """Parse the four-column series CSV: ``t,value,f0,f1``.

    Feature cells are ``;``-joined names from the schema; a blank cell means
    the empty state.  Raises FormatError for shape problems (wrong header,
    short rows, blank or negative values, duplicate timestamps) and
    SchemaError for feature names outside the schema.
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(c.strip() for c in rows[0]) != _CSV_HEADER:
        raise FormatError("expected header 't,value,f0,f1'")
    z_allowed = frozenset(schema.zeroth)
    f_allowed = frozenset(schema.first)
    ts: list[str] = []
    vals: list[str] = []
    feat0: list[frozenset[str]] = []
    feat1: list[frozenset[str]] = []
    seen_ts = set()
    for r, row in enumerate(rows[1:], start=1):
        if not row:
            continue
        if len(row) != 4:
            raise FormatError(f"row {r} has {len(row)} cells, expected 4")
        t, value, f0, f1 = (c.strip() for c in row)
        if not t:
            raise FormatError(f"blank timestamp at row {r}")
        if not value:
            raise FormatError(f"blank value at row {r}")
        try:
            x = float(value)
        except ValueError:
            x = None
        if x is not None and x < 0:
            raise FormatError(f"negative value {value!r} at row {r}")
        if t in seen_ts:
            raise FormatError(f"duplicate timestamp {t!r} at row {r}")
        seen_ts.add(t)
        ts.append(t)
        vals.append(value)
        feat0.append(_parse_feature_cell(f0, z_allowed, r))
        feat1.append(_parse_feature_cell(f1, f_allowed, r))
    return FeaturedSeries(TimeSeries(tuple(ts), tuple(vals)), schema, tuple(feat0), tuple(feat1))


def serialize_featured_series(series: FeaturedSeries) -> str:
    """Inverse of parse_featured_series; feature cells keep schema order."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(_CSV_HEADER)
    for i in range(len(series)):
        f0 = ";".join(n for n in series.schema.zeroth if n in series.feat0[i])
        f1 = ";".join(n for n in series.schema.first if n in series.feat1[i])
        w.writerow([series.timestamps[i], series.values[i], f0, f1])
    return out.getvalue()


def load_featured_series(path: str | Path, schema: FeatureSet) -> FeaturedSeries:
    return parse_featured_series(Path(path).read_text(encoding="utf-8"), schema)


def slice_window(series: FeaturedSeries, start: int, width: int) -> FeaturedSeries:
    """The sub-series covering timestamps [start, start + width)."""
    if width < 2:
        raise BoundsError(f"window width {width} is below the minimum of 2")
    if start < 0 or start + width > len(series):
        raise BoundsError(
            f"window [{start}, {start + width}) out of range for series of length {len(series)}"
        )
    stop = start + width
    return FeaturedSeries(
        TimeSeries(series.timestamps[start:stop], series.values[start:stop]),
        series.schema,
        series.feat0[start:stop],
        series.feat1[start:stop],
    )


def feature_set_from_config(doc: Mapping) -> FeatureSet:
    """Build a FeatureSet from a config document's features0/features1 lists."""
    for key in doc:
        if key not in _CONFIG_KEYS:
            raise SchemaError(f"unknown config key {key!r}")
    for key in ("features0", "features1"):
        val = doc.get(key, [])
        if not isinstance(val, (list, tuple)) or not all(isinstance(x, str) for x in val):
            raise FormatError(f"config key {key!r} must be a list of strings")
    return FeatureSet(tuple(doc.get("features0", [])), tuple(doc.get("features1", [])))


def influence_vector_from_config(
    doc: Mapping, schema: FeatureSet | None = None
) -> InfluenceVector:
    """Build an InfluenceVector from a config document's g0/g1 mappings.

    Unlisted features default to influence 0.  Unknown feature keys raise
    SchemaError; negative influences raise DomainError.
    """
    if schema is None:
        schema = feature_set_from_config(doc)
    else:
        for key in doc:
            if key not in _CONFIG_KEYS:
                raise SchemaError(f"unknown config key {key!r}")
    slots = {
        "g0": [0.0] * (1 + len(schema.zeroth)),
        "g1": [0.0] * (1 + len(schema.first)),
    }
    for key, names, empty in (
        ("g0", schema.zeroth, _EMPTY_ZEROTH_ALIASES),
        ("g1", schema.first, _EMPTY_FIRST_ALIASES),
    ):
        mapping = doc.get(key, {})
        if not isinstance(mapping, Mapping):
            raise FormatError(f"config key {key!r} must be a mapping")
        for name, value in mapping.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise FormatError(f"influence for {name!r} must be a number")
            if name in empty:
                slots[key][0] = float(value)
            elif name in names:
                slots[key][1 + names.index(name)] = float(value)
            else:
                raise SchemaError(f"unknown feature {name!r} in config key {key!r}")
    return InfluenceVector(schema, tuple(slots["g0"]), tuple(slots["g1"]))


def load_config(path: str | Path) -> dict:
    """Load a JSON (default) or TOML (by .toml suffix) config document."""
    p = Path(path)
    raw = p.read_bytes()
    try:
        if p.suffix.lower() == ".toml":
            return tomllib.loads(raw.decode("utf-8"))
        return json.loads(raw.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot parse config {p}: {exc}") from exc
