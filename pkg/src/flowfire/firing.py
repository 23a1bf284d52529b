"""Single firing moves: legality, application, enumeration, stability.

Away from the marked face the usual rule applies: a face may fire one unit
to an adjacent face whose weight is lower by at least 2.  The marked face
is a combined source and sink with its own rules: it fires into a neighbor
of weight below ``n``, a neighbor of weight above ``n`` fires into it, and
its own stored weight never changes either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .grid import ORIGIN, STEPS, Face, MarkedConfig, dist


class InvalidMoveError(ValueError):
    """The move itself is malformed (faces not adjacent)."""


class IllegalFireError(ValueError):
    """A well-formed move whose firing rule does not hold."""

    def __init__(self, rule: str, move: "FireMove | None" = None, index: int | None = None):
        self.rule = rule
        self.move = move
        self.index = index
        at = f" (trace move {index})" if index is not None else ""
        super().__init__(f"illegal fire{at}: {rule}")


@dataclass(frozen=True)
class FireMove:
    """An ordered pair of adjacent faces; weight moves from source to target."""

    source: Face
    target: Face

    def __post_init__(self):
        if dist(self.source, self.target) != 1:
            raise InvalidMoveError(f"faces {self.source} and {self.target} are not adjacent")


def is_legal(c: MarkedConfig, m: FireMove) -> bool:
    """Whether ``m`` may fire on ``c``."""
    if m.source == ORIGIN:
        return c.faces.get(m.target, 0) < c.n
    if m.target == ORIGIN:
        return c.faces.get(m.source, 0) > c.n
    return c.faces.get(m.source, 0) >= c.faces.get(m.target, 0) + 2


def _explain(c: MarkedConfig, m: FireMove) -> str:
    if m.source == ORIGIN:
        return (f"marked face fires only into a neighbor below n={c.n}, "
                f"but {m.target} has weight {c.faces.get(m.target, 0)}")
    if m.target == ORIGIN:
        return (f"only a neighbor above n={c.n} fires into the marked face, "
                f"but {m.source} has weight {c.faces.get(m.source, 0)}")
    return (f"{m.source} (weight {c.faces.get(m.source, 0)}) must exceed "
            f"{m.target} (weight {c.faces.get(m.target, 0)}) by at least 2")


def apply(c: MarkedConfig, m: FireMove) -> MarkedConfig:
    """Fire ``m`` on ``c``; raises :class:`IllegalFireError` if the rule fails."""
    if not is_legal(c, m):
        raise IllegalFireError(_explain(c, m), m)
    weights = dict(c.faces)
    if m.source != ORIGIN:
        w = weights[m.source] - 1
        if w:
            weights[m.source] = w
        else:
            del weights[m.source]
    if m.target != ORIGIN:
        weights[m.target] = weights.get(m.target, 0) + 1
    return MarkedConfig(c.n, weights)


def iter_legal_moves(c: MarkedConfig) -> Iterator[FireMove]:
    """Legal moves in canonical order: source faces sorted, directions E, N, W, S.

    Only support faces and the marked face can ever fire, so those are the
    only sources inspected.
    """
    sources = sorted(c.faces)
    origin_at = 0
    while origin_at < len(sources) and sources[origin_at] < ORIGIN:
        origin_at += 1
    sources.insert(origin_at, ORIGIN)
    n = c.n
    weights = c.faces
    for src in sources:
        x, y = src
        w = n if src == ORIGIN else weights[src]
        for dx, dy in STEPS:
            tgt = (x + dx, y + dy)
            if src == ORIGIN:
                if weights.get(tgt, 0) < n:
                    yield FireMove(src, tgt)
            elif tgt == ORIGIN:
                if w > n:
                    yield FireMove(src, tgt)
            elif w >= weights.get(tgt, 0) + 2:
                yield FireMove(src, tgt)


def legal_moves(c: MarkedConfig) -> list[FireMove]:
    """All legal moves on ``c`` in canonical order."""
    return list(iter_legal_moves(c))


def is_stable(c: MarkedConfig) -> bool:
    """No move fires: adjacent ordinary faces differ by at most 1 and every
    neighbor of the marked face sits exactly at ``n``."""
    n = c.n
    weights = c.faces
    for (x, y), w in weights.items():
        for dx, dy in STEPS:
            tgt = (x + dx, y + dy)
            if tgt == ORIGIN:
                if w != n:
                    return False
            elif abs(w - weights.get(tgt, 0)) > 1:
                return False
    if n and not all(weights.get(g, 0) == n for g in ((1, 0), (0, 1), (-1, 0), (0, -1))):
        return False
    return True


def replay(c: MarkedConfig, trace: Iterable[FireMove]) -> MarkedConfig:
    """Apply a whole trace; errors carry the offending move index."""
    for index, move in enumerate(trace):
        if not is_legal(c, move):
            raise IllegalFireError(_explain(c, move), move, index)
        c = apply(c, move)
    return c


# -- JSON interchange --------------------------------------------------------

def move_to_json(m: FireMove) -> dict:
    return {"from": list(m.source), "to": list(m.target)}


def move_from_json(obj: dict) -> FireMove:
    try:
        fx, fy = obj["from"]
        tx, ty = obj["to"]
    except (TypeError, KeyError, ValueError) as exc:
        raise InvalidMoveError(f"moves must look like {{'from': [x, y], 'to': [x, y]}}: {exc}") from exc
    return FireMove((fx, fy), (tx, ty))


def trace_to_json(trace: Sequence[FireMove]) -> list[dict]:
    return [move_to_json(m) for m in trace]


def trace_from_json(obj: Iterable[dict]) -> list[FireMove]:
    return [move_from_json(entry) for entry in obj]
