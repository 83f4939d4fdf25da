"""Persistent homology of featured time series.

Time series become weighted transition graphs, per-timestamp feature
annotations and an influence vector reshape the graph metric, and the
Rips persistence of that metric feeds anomaly scores, diagram statistics,
and a stability bound check.
"""

from .analytics import (
    DiagramStats,
    Landscape,
    bottleneck_distance,
    diagram_stats,
    landscape_csv,
    landscape_norm,
    overlapping_percentage,
    persistence_landscape,
    stats_json,
)
from .errors import (
    BoundsError,
    DomainError,
    FeathomError,
    FormatError,
    InputError,
    ResourceError,
    SchemaError,
    StructureError,
)
from .graph import (
    CountMatrices,
    GraphSkeleton,
    WeightedGraph,
    build_skeleton,
    count_matrices,
    debug_dump,
    weighted_graph,
)
from .metric import (
    ActivationFn,
    DistanceMatrix,
    GAUSS_LIPSCHITZ,
    auto_activation,
    distance_matrix,
    distance_matrix_csv,
    edge_length,
    edge_lengths,
    raw_activation,
    table_activation,
)
from .persistence import (
    DEFAULT_MAX_DIM,
    DEFAULT_VERTEX_CAP,
    Filtration,
    PersistenceDiagram,
    diagram_csv,
    parse_diagram_csv,
    persistence_diagrams,
    representative_cycles,
    reps_json,
    rips_filtration,
    simplex_count,
)
from .pipelines import (
    AnalysisResult,
    AnomalyCurve,
    GridCell,
    StabilityReport,
    asc_curve,
    curve_csv,
    featured_diagram,
    grid_csv,
    music_stats_grid,
    parse_curve_csv,
    read_price_csv,
    report_json,
    stability_check,
    stability_constant,
    stock_preprocess,
    tasc_curve,
)
from .series import (
    EMPTY_FIRST,
    EMPTY_ZEROTH,
    FeatureSet,
    FeaturedSeries,
    InfluenceVector,
    TimeSeries,
    feature_set_from_config,
    featureless,
    influence_vector_from_config,
    load_config,
    load_featured_series,
    parse_featured_series,
    serialize_featured_series,
    slice_window,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationFn",
    "AnalysisResult",
    "AnomalyCurve",
    "BoundsError",
    "CountMatrices",
    "DEFAULT_MAX_DIM",
    "DEFAULT_VERTEX_CAP",
    "DiagramStats",
    "DistanceMatrix",
    "DomainError",
    "EMPTY_FIRST",
    "EMPTY_ZEROTH",
    "FeathomError",
    "FeatureSet",
    "FeaturedSeries",
    "Filtration",
    "FormatError",
    "GAUSS_LIPSCHITZ",
    "GraphSkeleton",
    "GridCell",
    "InfluenceVector",
    "InputError",
    "Landscape",
    "PersistenceDiagram",
    "ResourceError",
    "SchemaError",
    "StabilityReport",
    "StructureError",
    "TimeSeries",
    "WeightedGraph",
    "asc_curve",
    "auto_activation",
    "bottleneck_distance",
    "build_skeleton",
    "count_matrices",
    "curve_csv",
    "debug_dump",
    "diagram_csv",
    "diagram_stats",
    "distance_matrix",
    "distance_matrix_csv",
    "edge_length",
    "edge_lengths",
    "feature_set_from_config",
    "featured_diagram",
    "featureless",
    "grid_csv",
    "influence_vector_from_config",
    "landscape_csv",
    "landscape_norm",
    "load_config",
    "load_featured_series",
    "music_stats_grid",
    "overlapping_percentage",
    "parse_curve_csv",
    "parse_diagram_csv",
    "parse_featured_series",
    "persistence_diagrams",
    "persistence_landscape",
    "raw_activation",
    "read_price_csv",
    "report_json",
    "representative_cycles",
    "reps_json",
    "rips_filtration",
    "serialize_featured_series",
    "simplex_count",
    "slice_window",
    "stability_check",
    "stability_constant",
    "stats_json",
    "stock_preprocess",
    "table_activation",
    "tasc_curve",
    "weighted_graph",
]
