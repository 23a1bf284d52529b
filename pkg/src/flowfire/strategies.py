"""Constructive firing schedules for pulses, and the regime classifier.

Three schedules drive everything here: greedy completion of a nowhere-
violating configuration up to the Aztec diamond, the flooding procedure
that pushes an Aztec violation outward until it escapes past distance
``n`` (dooming the run to a non-Aztec terminal), and per-quadrant path
firing, which reaches the diamond from mid-size pulses and, run to a
fixed point under the two mirror-image quadrant decompositions, produces
two distinct stable outcomes for wide pulses.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import isqrt
from typing import Iterable

from .firing import FireMove, IllegalFireError, is_stable
from .grid import (
    ORIGIN,
    STEPS,
    Face,
    MarkedConfig,
    aztec_value,
    ball,
    dist,
    make_aztec,
    make_pulse,
    violates_aztec,
)
from .pathfire import OutOfScopeError, fire_forward_stable


class AztecViolationError(ValueError):
    """A schedule that requires a nowhere-violating input was handed one
    with faces above the Aztec profile."""

    def __init__(self, faces: Iterable[Face]):
        self.faces = tuple(sorted(faces))
        super().__init__(f"configuration exceeds the Aztec profile at {list(self.faces)}")


class NothingToFloodError(ValueError):
    """Flooding needs at least one face above the Aztec profile."""


class BudgetExceededError(RuntimeError):
    """A step budget ran out; diagnostic only, not a statement about the dynamics."""


class ScheduleUnstableError(RuntimeError):
    """The quadrant schedule reached its fixed point but the marked face can
    still fire; happens when the pulse radius is too small for the schedule."""


# -- weight formulas and the regime classifier --------------------------------

def ceil_half(n: int) -> int:
    return (n + 1) // 2


def aztec_weight(n: int) -> int:
    """Total weight of the height-``n`` Aztec diamond: n + (2/3)n(n+1)(n+2)."""
    return n + 2 * n * (n + 1) * (n + 2) // 3


def pulse_weight(n: int, r: int) -> int:
    """Total weight of the pulse: n(2r(r+1) + 1)."""
    return n * (2 * r * (r + 1) + 1)


def min_r_exceeding(n: int) -> int:
    """Least radius whose pulse strictly outweighs the Aztec diamond.

    Equivalent to the least ``r`` with ``3r(r+1) > (n+1)(n+2)``.
    """
    if n < 1:
        raise OutOfScopeError("min_r_exceeding needs n >= 1")
    target = (n + 1) * (n + 2)
    r = 0
    while 3 * r * (r + 1) <= target:
        r += 1
    return r


def regime3_radius(n: int) -> int:
    """``ceil(n / sqrt(3)) + 1``, computed exactly: beyond this radius the
    pulse outweighs the diamond and can never terminate there."""
    m = isqrt(n * n // 3)
    while 3 * m * m < n * n:
        m += 1
    return m + 1


class Regime(Enum):
    R1 = "R1"    # r <= 1: unique termination in the Aztec diamond
    R2 = "R2"    # 2 <= r <= ceil(n/2): non-unique, diamond reachable
    GAP = "GAP"  # between R2 and R3: non-unique, reachability varies case by case
    R3 = "R3"    # r >= ceil(n/sqrt(3)) + 1: diamond unreachable by weight


@dataclass(frozen=True)
class RegimeReport:
    n: int
    r: int
    regime: Regime
    pulse_weight: int
    aztec_weight: int
    min_r_exceeding: int | None
    aztec_unreachable_by_weight: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "regime": self.regime.value,
            "pulse_weight": self.pulse_weight,
            "aztec_weight": self.aztec_weight,
            "min_r_exceeding": self.min_r_exceeding,
            "aztec_unreachable_by_weight": self.aztec_unreachable_by_weight,
        }


def classify(n: int, r: int) -> RegimeReport:
    """Place the pulse (n, r) in its firing regime, with weight comparisons."""
    if n < 0 or r < 0:
        raise OutOfScopeError("classify needs n >= 0 and r >= 0")
    if r <= 1:
        regime = Regime.R1
    elif r <= ceil_half(n):
        regime = Regime.R2
    elif r >= regime3_radius(n):
        regime = Regime.R3
    else:
        regime = Regime.GAP
    pw = pulse_weight(n, r)
    aw = aztec_weight(n)
    return RegimeReport(
        n=n,
        r=r,
        regime=regime,
        pulse_weight=pw,
        aztec_weight=aw,
        min_r_exceeding=min_r_exceeding(n) if n >= 1 else None,
        aztec_unreachable_by_weight=pw > aw,
    )


# -- shared firing plumbing ----------------------------------------------------

def _fire(
    weights: dict[Face, int], n: int, src: Face, tgt: Face, trace: list[FireMove] | None
) -> None:
    """Apply one fire to a working weight map, checking the rule it relies on."""
    move = FireMove(src, tgt)
    if src == ORIGIN:
        legal = weights.get(tgt, 0) < n
    elif tgt == ORIGIN:
        legal = weights.get(src, 0) > n
    else:
        legal = weights.get(src, 0) >= weights.get(tgt, 0) + 2
    if not legal:
        raise IllegalFireError(
            f"schedule produced an illegal fire {src}->{tgt} "
            f"(weights {weights.get(src, 0)} vs {weights.get(tgt, 0)}, n={n})",
            move,
        )
    if src != ORIGIN:
        w = weights[src] - 1
        if w:
            weights[src] = w
        else:
            del weights[src]
    if tgt != ORIGIN:
        weights[tgt] = weights.get(tgt, 0) + 1
    if trace is not None:
        trace.append(move)


# -- greedy completion to the Aztec diamond ------------------------------------

def complete_to_aztec(c: MarkedConfig, n: int) -> tuple[MarkedConfig, list[FireMove]]:
    """Fire a nowhere-violating configuration all the way up to the diamond.

    Repeatedly picks the closest face still below its Aztec value (ties
    broken by face order) and fires into it from an already-full closer
    neighbor, or from the marked face when adjacent.  Each fire moves one
    unit of deficit one step inward or fills it at the source, so the
    schedule terminates at exactly ``make_aztec(n)``.
    """
    if c.n != n:
        raise OutOfScopeError(f"configuration has marked weight {c.n}, expected {n}")
    bad = violates_aztec(c, n)
    if bad:
        raise AztecViolationError(bad)
    weights = dict(c.faces)
    trace: list[FireMove] = []
    profile = {f: aztec_value(n, f) for f in ball(n)}
    while True:
        target = None
        target_d = None
        for f, az in profile.items():
            if weights.get(f, 0) < az:
                d = dist(ORIGIN, f)
                if target is None or (d, f) < (target_d, target):
                    target, target_d = f, d
        if target is None:
            break
        if target_d == 1:
            _fire(weights, n, ORIGIN, target, trace)
        else:
            x, y = target
            src = next(
                (x + dx, y + dy)
                for dx, dy in STEPS
                if dist(ORIGIN, (x + dx, y + dy)) == target_d - 1
            )
            _fire(weights, n, src, target, trace)
    result = MarkedConfig(n, weights)
    if result != make_aztec(n):
        raise AssertionError("completion schedule ended away from the Aztec diamond")
    return result, trace


# -- flooding: push a violation out past distance n ------------------------------

def _l_path(g: Face, x_first: bool) -> list[Face]:
    gx, gy = g
    sx = 1 if gx >= 0 else -1
    sy = 1 if gy >= 0 else -1
    cells = [ORIGIN]
    if x_first:
        cells += [(sx * t, 0) for t in range(1, abs(gx) + 1)]
        cells += [(gx, sy * t) for t in range(1, abs(gy) + 1)]
    else:
        cells += [(0, sy * t) for t in range(1, abs(gy) + 1)]
        cells += [(sx * t, gy) for t in range(1, abs(gx) + 1)]
    return cells


def _escape_path(f: Face) -> tuple[Face, list[Face]]:
    """A farther neighbor of ``f`` plus a distance-increasing path from the
    origin to it that avoids ``f``.  Candidates are tried in E/N/W/S order;
    for a face on an axis the straight path is blocked by ``f`` itself, so
    the bent orientation (or the next neighbor) is taken instead."""
    d = dist(ORIGIN, f)
    x, y = f
    for dx, dy in STEPS:
        g = (x + dx, y + dy)
        if dist(ORIGIN, g) != d + 1:
            continue
        for x_first in (True, False):
            path = _l_path(g, x_first)
            if f not in path:
                return g, path
    raise AssertionError(f"no escape path from {f}")  # geometrically impossible


def _raise_path_to_profile(
    weights: dict[Face, int], n: int, path: list[Face], trace: list[FireMove]
) -> None:
    """Fire along a nowhere-violating origin path until every face sits at
    its Aztec value, pulling the needed weight out of the marked face."""

    def top_up(i: int) -> None:
        face = path[i]
        goal = aztec_value(n, face)
        while weights.get(face, 0) < goal:
            if i == 1:
                _fire(weights, n, ORIGIN, face, trace)
            else:
                top_up(i - 1)
                _fire(weights, n, path[i - 1], face, trace)

    for i in range(len(path) - 1, 0, -1):
        top_up(i)


def flood_escape(c: MarkedConfig, n: int) -> tuple[MarkedConfig, list[FireMove]]:
    """Push the farthest Aztec violation outward until one clears distance ``n``.

    Each round picks the farthest violating face ``f`` (ties broken by face
    order), a farther neighbor ``g``, and an origin path to ``g`` avoiding
    ``f``.  Violations already on the path are fired outward until the path
    is clean or the violation lands on ``g``; on a clean path the faces are
    raised to the Aztec profile and ``f`` fires into ``g``, putting ``g``
    above the profile.  Once a positive face sits past distance ``n`` no
    fire can ever empty it, so no continuation terminates in the diamond.
    """
    if c.n != n:
        raise OutOfScopeError(f"configuration has marked weight {c.n}, expected {n}")
    if not violates_aztec(c, n):
        raise NothingToFloodError("no face exceeds the Aztec profile; nothing to flood")
    weights = dict(c.faces)
    trace: list[FireMove] = []
    while True:
        violators = [f for f, w in weights.items() if w > aztec_value(n, f)]
        far = max(dist(ORIGIN, f) for f in violators)
        if far > n:
            break
        f = min(v for v in violators if dist(ORIGIN, v) == far)
        g, path = _escape_path(f)
        while True:
            on_path = [
                i for i in range(1, len(path))
                if weights.get(path[i], 0) > aztec_value(n, path[i])
            ]
            if not on_path:
                _raise_path_to_profile(weights, n, path, trace)
                _fire(weights, n, f, g, trace)
                break
            j = max(on_path)
            if j == len(path) - 1:
                break  # the violation reached g on its own
            _fire(weights, n, path[j], path[j + 1], trace)
    return MarkedConfig(n, weights), trace


# -- generic deterministic stabilization ----------------------------------------

def stabilize_any(
    c: MarkedConfig,
    max_steps: int = 10_000_000,
    trace: list[FireMove] | None = None,
) -> MarkedConfig:
    """Fire the first legal move in canonical order until stable.

    Pass a list as ``trace`` to collect the applied moves.  The budget is a
    safety net for inputs outside the proven-terminating regimes; running
    out raises rather than claiming anything.
    """
    n = c.n
    weights = dict(c.faces)
    for _ in range(max_steps):
        move = _first_move(weights, n)
        if move is None:
            return MarkedConfig(n, weights)
        _fire(weights, n, move[0], move[1], trace)
    raise BudgetExceededError(f"no stable configuration within {max_steps} moves")


def _first_move(weights: dict[Face, int], n: int) -> tuple[Face, Face] | None:
    sources = sorted(weights)
    at = 0
    while at < len(sources) and sources[at] < ORIGIN:
        at += 1
    sources.insert(at, ORIGIN)
    for src in sources:
        x, y = src
        w = n if src == ORIGIN else weights[src]
        for dx, dy in STEPS:
            tgt = (x + dx, y + dy)
            if src == ORIGIN:
                if weights.get(tgt, 0) < n:
                    return src, tgt
            elif tgt == ORIGIN:
                if w > n:
                    return src, tgt
            elif w >= weights.get(tgt, 0) + 2:
                return src, tgt
    return None


# -- quadrant decompositions and path-firing sweeps ------------------------------

class QuadrantDecomposition(Enum):
    """The two mirror-image ways to split all non-marked faces into four
    quarter-turn-symmetric quadrants."""

    D1 = "d1"
    D2 = "d2"


@dataclass(frozen=True)
class _Quadrant:
    """Faces with (x - x0)·sx >= 0 and (y - y0)·sy >= 0; rows fire in the
    sx direction from x0, columns in the sy direction from y0."""

    x0: int
    sx: int
    y0: int
    sy: int

    def contains(self, f: Face) -> bool:
        return (f[0] - self.x0) * self.sx >= 0 and (f[1] - self.y0) * self.sy >= 0


_QUADRANTS: dict[QuadrantDecomposition, tuple[_Quadrant, ...]] = {
    QuadrantDecomposition.D1: (
        _Quadrant(0, 1, 1, 1),     # N: x >= 0, y >= 1
        _Quadrant(-1, -1, 0, 1),   # W: x <= -1, y >= 0
        _Quadrant(0, -1, -1, -1),  # S: x <= 0, y <= -1
        _Quadrant(1, 1, 0, -1),    # E: x >= 1, y <= 0
    ),
    QuadrantDecomposition.D2: (
        _Quadrant(0, -1, 1, 1),    # N: x <= 0, y >= 1
        _Quadrant(1, 1, 0, 1),     # E: x >= 1, y >= 0
        _Quadrant(0, 1, -1, -1),   # S: x >= 0, y <= -1
        _Quadrant(-1, -1, 0, -1),  # W: x <= -1, y <= 0
    ),
}


def _fire_ray(
    weights: dict[Face, int], start: Face, step: tuple[int, int], trace: list[FireMove]
) -> bool:
    """Path-fire the ray from ``start`` along ``step`` to its fixed point."""
    x0, y0 = start
    dx, dy = step

    def face_at(k: int) -> Face:
        return (x0 + dx * k, y0 + dy * k)

    ks = []
    for x, y in weights:
        if dx:
            if y == y0 and (x - x0) * dx >= 0:
                ks.append((x - x0) * dx)
        elif x == x0 and (y - y0) * dy >= 0:
            ks.append((y - y0) * dy)
    if not ks:
        return False
    vals = [0] * (max(ks) + 1)
    for k in ks:
        vals[k] = weights[face_at(k)]
    new_vals, fired = fire_forward_stable(vals)
    if not fired:
        return False
    for k in range(max(len(vals), len(new_vals))):
        f = face_at(k)
        v = new_vals[k] if k < len(new_vals) else 0
        if v:
            weights[f] = v
        else:
            weights.pop(f, None)
    trace.extend(FireMove(face_at(i), face_at(i + 1)) for i in fired)
    return True


def _sweep_lines(
    weights: dict[Face, int], q: _Quadrant, vertical: bool, trace: list[FireMove]
) -> bool:
    if vertical:
        lines = {x for x, y in weights if q.contains((x, y))}
    else:
        lines = {y for x, y in weights if q.contains((x, y))}
    origin, sign = (q.x0, q.sx) if vertical else (q.y0, q.sy)
    fired = False
    for line in sorted(lines, key=lambda v: (v - origin) * sign):
        if vertical:
            fired |= _fire_ray(weights, (line, q.y0), (0, q.sy), trace)
        else:
            fired |= _fire_ray(weights, (q.x0, line), (q.sx, 0), trace)
    return fired


def sweep_quadrants(
    c: MarkedConfig,
    decomposition: QuadrantDecomposition,
    max_cycles: int = 10_000,
) -> tuple[MarkedConfig, list[FireMove]]:
    """Alternate row sweeps and column sweeps within each quadrant until a
    full cycle fires nothing; returns the fixed point and the fire trace."""
    weights = dict(c.faces)
    trace: list[FireMove] = []
    quadrants = _QUADRANTS[decomposition]
    for _ in range(max_cycles):
        fired = False
        for q in quadrants:
            fired |= _sweep_lines(weights, q, vertical=False, trace=trace)
        for q in quadrants:
            fired |= _sweep_lines(weights, q, vertical=True, trace=trace)
        if not fired:
            return MarkedConfig(c.n, weights), trace
    raise BudgetExceededError(f"quadrant sweeps still firing after {max_cycles} cycles")


def quadrant_stabilize(n: int, r: int, decomposition: QuadrantDecomposition) -> MarkedConfig:
    """Run the per-quadrant row/column schedule on the pulse (n, r).

    For radii past ``ceil(n/2)`` the innermost face of every line keeps
    weight ``n``, so the fixed point is globally stable and differs between
    the two decompositions.  For smaller radii the marked face can still
    fire at the fixed point, which is reported as an error.
    """
    if n < 1 or r < 0:
        raise OutOfScopeError("quadrant_stabilize needs n >= 1 and r >= 0")
    result, _ = sweep_quadrants(make_pulse(n, r), decomposition)
    if not is_stable(result):
        raise ScheduleUnstableError(
            f"quadrant schedule fixed point for pulse ({n}, {r}) is not stable; "
            f"the schedule settles only for r > {ceil_half(n)}"
        )
    return result


# -- regime 2: reach the Aztec diamond via per-quadrant row firing ---------------

def fire_quadrant_rows(n: int, r: int) -> tuple[MarkedConfig, list[FireMove]]:
    """One row sweep of every quadrant of the pulse (n, r).

    Each row is a canonical-row instance, so its stable profile stays within
    the Aztec diamond; the swept configuration therefore never violates it.
    """
    weights = dict(make_pulse(n, r).faces)
    trace: list[FireMove] = []
    for q in _QUADRANTS[QuadrantDecomposition.D1]:
        _sweep_lines(weights, q, vertical=False, trace=trace)
    return MarkedConfig(n, weights), trace


def regime2_reach_aztec(n: int, r: int) -> list[FireMove]:
    """A legal trace from the pulse (n, r) to the Aztec diamond, for
    ``2 <= r <= ceil(n/2)``: row-fire every quadrant, then complete."""
    if not 2 <= r <= ceil_half(n):
        raise OutOfScopeError(
            f"row firing reaches the diamond for 2 <= r <= {ceil_half(n)}, got r={r}"
        )
    intermediate, trace = fire_quadrant_rows(n, r)
    bad = violates_aztec(intermediate, n)
    if bad:
        raise AssertionError(f"row-fired intermediate exceeds the Aztec profile at {sorted(bad)}")
    _, tail = complete_to_aztec(intermediate, n)
    return trace + tail
