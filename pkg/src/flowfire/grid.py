"""Grid geometry and flow configurations around a marked face.

Configurations live on the faces of the infinite square-grid complex.  A
configuration is a marked-face height ``n`` (the marked face sits at the
origin and its value never changes) plus a sparse map of non-negative
integer weights on the remaining faces.  The equivalent edge representation
(one flow value per lattice edge, positive meaning right/up) is derived,
never stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

Face = tuple[int, int]
Vertex = tuple[int, int]

ORIGIN: Face = (0, 0)

# Unit steps in the canonical enumeration order: east, north, west, south.
STEPS: tuple[Face, ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))


class ConfigError(ValueError):
    """Malformed configuration: negative weight, origin in the support, ..."""


def dist(a: Face, b: Face) -> int:
    """Manhattan distance between faces ``a`` and ``b``."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def neighbors(f: Face) -> tuple[Face, Face, Face, Face]:
    """The four edge-adjacent faces, in east/north/west/south order."""
    x, y = f
    return ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1))


def ball(radius: int) -> list[Face]:
    """Faces within ``radius`` of the origin, excluding the origin, sorted."""
    out = [
        (x, y)
        for x in range(-radius, radius + 1)
        for y in range(-radius + abs(x), radius - abs(x) + 1)
        if (x, y) != ORIGIN
    ]
    out.sort()
    return out


class MarkedConfig:
    """An immutable flow configuration in face representation.

    ``n`` is the weight of the marked face at the origin.  ``faces`` maps
    every other face to its weight; zeros are never stored and the origin
    never appears as a key, so equal configurations always compare (and
    hash) equal.
    """

    __slots__ = ("n", "faces", "_key", "_hash")

    n: int
    faces: Mapping[Face, int]

    def __init__(self, n: int, weights: Mapping[Face, int] | Iterable[tuple[Face, int]] = ()):
        if not isinstance(n, int) or n < 0:
            raise ConfigError(f"marked-face weight must be a non-negative integer, got {n!r}")
        items = weights.items() if isinstance(weights, Mapping) else weights
        store: dict[Face, int] = {}
        for face, value in items:
            try:
                x, y = face
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"faces must be (x, y) pairs, got {face!r}") from exc
            if not (isinstance(x, int) and isinstance(y, int) and isinstance(value, int)):
                raise ConfigError(f"coordinates and weights must be integers, got {face!r}: {value!r}")
            if value < 0:
                raise ConfigError(f"negative weight {value} at face {face}")
            if value == 0:
                continue
            face = (x, y)
            if face == ORIGIN:
                raise ConfigError("the marked face (0, 0) may not appear in the support")
            if face in store:
                raise ConfigError(f"duplicate face {face}")
            store[face] = value
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "faces", MappingProxyType(store))
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MarkedConfig is immutable")

    def weight(self, f: Face) -> int:
        """Face-representation value at ``f`` (the origin reports ``n``)."""
        if f == ORIGIN:
            return self.n
        return self.faces.get(f, 0)

    def key(self) -> tuple:
        """Canonical sparse form, usable as a sort key."""
        if self._key is None:
            object.__setattr__(self, "_key", (self.n, tuple(sorted(self.faces.items()))))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, MarkedConfig):
            return NotImplemented
        return self.n == other.n and self.faces == other.faces

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.key()))
        return self._hash

    def __repr__(self) -> str:
        return f"MarkedConfig(n={self.n}, faces={dict(sorted(self.faces.items()))!r})"

    def __iter__(self) -> Iterator[tuple[Face, int]]:
        return iter(self.faces.items())


def total_weight(c: MarkedConfig) -> int:
    """Sum of all face weights, the marked face included."""
    return c.n + sum(c.faces.values())


def support_radius(c: MarkedConfig) -> int:
    """Largest distance from the origin to a face of nonzero weight."""
    if not c.faces:
        return 0
    return max(abs(x) + abs(y) for x, y in c.faces)


def aztec_value(n: int, f: Face) -> int:
    """Weight of face ``f`` in the height-``n`` Aztec diamond: max(n - d + 1, 0)."""
    if f == ORIGIN:
        return n
    return max(n - dist(ORIGIN, f) + 1, 0)


def make_aztec(n: int) -> MarkedConfig:
    """The Aztec diamond of height ``n``: the canonical stable configuration."""
    if n < 0:
        raise ConfigError("n must be non-negative")
    return MarkedConfig(n, {f: aztec_value(n, f) for f in ball(n)})


def make_pulse(n: int, r: int) -> MarkedConfig:
    """The pulse of height ``n`` and radius ``r``: weight ``n`` within distance ``r``."""
    if n < 0 or r < 0:
        raise ConfigError("n and r must be non-negative")
    return MarkedConfig(n, {f: n for f in ball(r)} if n else {})


def violates_aztec(c: MarkedConfig, n: int) -> set[Face]:
    """Faces whose weight strictly exceeds their Aztec-diamond value."""
    return {f for f, w in c.faces.items() if w > aztec_value(n, f)}


# -- edge representation -----------------------------------------------------

# A directed lattice edge: its base vertex plus an axis.  "right" runs from
# (x, y) to (x + 1, y); "up" runs from (x, y) to (x, y + 1).  Positive flow
# follows the edge direction, negative flow opposes it.
Edge = tuple[Vertex, str]

RIGHT = "right"
UP = "up"


@dataclass(frozen=True)
class EdgeFlow:
    """Sparse edge representation of a flow; zero flows are not stored."""

    flows: Mapping[Edge, int]

    def flow(self, vertex: Vertex, direction: str) -> int:
        return self.flows.get((vertex, direction), 0)


@dataclass(frozen=True)
class ConservationReport:
    """Per-vertex balance of an edge flow.

    ``imbalances`` holds outflow minus inflow for every unbalanced vertex;
    ``over_threshold`` flags vertices whose absolute imbalance exceeds 4,
    the level at which the firing process can never terminate.
    """

    conservative: bool
    imbalances: Mapping[Vertex, int]
    over_threshold: tuple[Vertex, ...]


def to_edge_representation(c: MarkedConfig) -> EdgeFlow:
    """Derive the edge flows induced by a face configuration.

    A face of weight ``w`` circulates ``w`` units clockwise around its
    boundary, so each edge carries the difference of the two face weights
    it separates.
    """
    flows: dict[Edge, int] = {}

    def add(edge: Edge, value: int) -> None:
        total = flows.get(edge, 0) + value
        if total:
            flows[edge] = total
        else:
            flows.pop(edge, None)

    entries: list[tuple[Face, int]] = list(c.faces.items())
    if c.n:
        entries.append((ORIGIN, c.n))
    for (x, y), w in entries:
        add(((x, y + 1), RIGHT), w)   # top, clockwise points east
        add(((x, y), RIGHT), -w)      # bottom, clockwise points west
        add(((x, y), UP), w)          # left side, clockwise points north
        add(((x + 1, y), UP), -w)     # right side, clockwise points south
    return EdgeFlow(MappingProxyType(flows))


def is_conservative(e: EdgeFlow) -> ConservationReport:
    """Check that inflow equals outflow at every vertex of an edge flow."""
    balance: dict[Vertex, int] = {}

    def add(v: Vertex, value: int) -> None:
        total = balance.get(v, 0) + value
        if total:
            balance[v] = total
        else:
            balance.pop(v, None)

    for ((x, y), direction), value in e.flows.items():
        head = (x + 1, y) if direction == RIGHT else (x, y + 1)
        add((x, y), value)    # flows out of the base vertex
        add(head, -value)     # flows into the head vertex
    flagged = tuple(sorted(v for v, b in balance.items() if abs(b) > 4))
    return ConservationReport(not balance, MappingProxyType(balance), flagged)


# -- JSON interchange --------------------------------------------------------

def config_to_json(c: MarkedConfig) -> dict:
    """Plain-dict form: ``{"n": int, "faces": [[x, y, w], ...]}`` sorted by face."""
    return {"n": c.n, "faces": [[x, y, w] for (x, y), w in sorted(c.faces.items())]}


def config_from_json(obj: dict) -> MarkedConfig:
    try:
        n = obj["n"]
        faces = obj["faces"]
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"configuration object must have 'n' and 'faces': {exc}") from exc
    weights = []
    for entry in faces:
        if len(entry) != 3:
            raise ConfigError(f"face entries must be [x, y, w], got {entry!r}")
        x, y, w = entry
        weights.append(((x, y), w))
    return MarkedConfig(n, weights)


def dumps_config(c: MarkedConfig) -> str:
    return json.dumps(config_to_json(c))


def loads_config(text: str) -> MarkedConfig:
    return config_from_json(json.loads(text))
