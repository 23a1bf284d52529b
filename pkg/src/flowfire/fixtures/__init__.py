"""Bundled reference configurations and traces.

``k33_d1`` / ``k33_d2`` are the two stable fixed points that the quadrant
schedule produces from the pulse (3, 3) under the two decompositions.
``equal_weight_reach`` and ``equal_weight_stuck`` are hand-checked height-4
configurations whose total weight equals the Aztec diamond's: the first
reaches the diamond by the moves in ``equal_weight_reach_trace``, the
second never can.
"""

from __future__ import annotations

import json
from importlib import resources

from ..firing import FireMove, trace_from_json
from ..grid import MarkedConfig, config_from_json


def _read(name: str) -> object:
    text = resources.files(__package__).joinpath(f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_config(name: str) -> MarkedConfig:
    return config_from_json(_read(name))


def load_trace(name: str) -> list[FireMove]:
    return trace_from_json(_read(name))
