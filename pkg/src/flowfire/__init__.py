"""Flow-firing on the square grid with a marked face.

Core objects: sparse face configurations (:class:`MarkedConfig`), the
pulse and Aztec-diamond families, single firing moves, path firing with
its closed-form stable rows, constructive schedules (completion, flooding,
quadrant sweeps), and an exhaustive reachability explorer.
"""

from .grid import (
    ConfigError,
    EdgeFlow,
    Face,
    MarkedConfig,
    ORIGIN,
    aztec_value,
    ball,
    config_from_json,
    config_to_json,
    dist,
    dumps_config,
    is_conservative,
    loads_config,
    make_aztec,
    make_pulse,
    neighbors,
    support_radius,
    to_edge_representation,
    total_weight,
    violates_aztec,
)
from .firing import (
    FireMove,
    IllegalFireError,
    InvalidMoveError,
    apply,
    is_legal,
    is_stable,
    legal_moves,
    replay,
)
from .pathfire import (
    OutOfPathError,
    OutOfScopeError,
    PathSpec,
    canonical_row,
    check_trace_lemmas,
    closed_form_stable,
    path_fire_step,
    simulate_all_orders,
    support_length_bounds,
)
from .strategies import (
    QuadrantDecomposition,
    Regime,
    RegimeReport,
    aztec_weight,
    classify,
    complete_to_aztec,
    fire_quadrant_rows,
    flood_escape,
    min_r_exceeding,
    pulse_weight,
    quadrant_stabilize,
    regime2_reach_aztec,
    regime3_radius,
    stabilize_any,
    sweep_quadrants,
)
from .explore import ExploreBounds, ExploreResult, default_bounds, explore, is_confluent

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "EdgeFlow",
    "ExploreBounds",
    "ExploreResult",
    "Face",
    "FireMove",
    "IllegalFireError",
    "InvalidMoveError",
    "MarkedConfig",
    "ORIGIN",
    "OutOfPathError",
    "OutOfScopeError",
    "PathSpec",
    "QuadrantDecomposition",
    "Regime",
    "RegimeReport",
    "apply",
    "aztec_value",
    "aztec_weight",
    "ball",
    "canonical_row",
    "check_trace_lemmas",
    "classify",
    "closed_form_stable",
    "complete_to_aztec",
    "config_from_json",
    "config_to_json",
    "default_bounds",
    "dist",
    "dumps_config",
    "explore",
    "fire_quadrant_rows",
    "flood_escape",
    "is_confluent",
    "is_conservative",
    "is_legal",
    "is_stable",
    "legal_moves",
    "loads_config",
    "make_aztec",
    "make_pulse",
    "min_r_exceeding",
    "neighbors",
    "path_fire_step",
    "pulse_weight",
    "quadrant_stabilize",
    "regime2_reach_aztec",
    "regime3_radius",
    "replay",
    "simulate_all_orders",
    "stabilize_any",
    "support_length_bounds",
    "support_radius",
    "sweep_quadrants",
    "to_edge_representation",
    "total_weight",
    "violates_aztec",
]
