"""Firing restricted to a path of successively adjacent faces.

For weakly decreasing weight sequences, firing only ever moves forward
along the path, the terminal configuration is independent of the firing
order, and the canonical row (``length_l`` copies of ``n`` followed by
``floor(n/2)`` zeros) stabilizes to a closed-form staircase.  Trace
monitors watch for the weight patterns that forward firing can never
produce; a reported violation is a bug witness, not a user error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .firing import IllegalFireError
from .grid import ORIGIN, Face, dist

PathWeights = tuple[int, ...]


class OutOfPathError(IndexError):
    """Attempt to fire the final face of a path (there is no face after it)."""


class OutOfScopeError(ValueError):
    """Input outside the regime an operation is defined for."""


@dataclass(frozen=True)
class PathSpec:
    """A path of successively adjacent faces, never touching the marked face."""

    faces: tuple[Face, ...]

    def __post_init__(self):
        for a, b in zip(self.faces, self.faces[1:]):
            if dist(a, b) != 1:
                raise ValueError(f"path faces {a} and {b} are not adjacent")
        if ORIGIN in self.faces:
            raise ValueError("paths may not pass through the marked face")

    def __len__(self) -> int:
        return len(self.faces)


def ray(start: Face, step: Face, length: int) -> PathSpec:
    """The path of ``length`` faces from ``start`` in unit direction ``step``."""
    x, y = start
    dx, dy = step
    return PathSpec(tuple((x + k * dx, y + k * dy) for k in range(length)))


def canonical_row(n: int, length_l: int) -> PathWeights:
    """``length_l`` faces of weight ``n`` followed by ``floor(n/2)`` zeros."""
    if n < 1 or length_l < 1:
        raise OutOfScopeError("canonical rows need n >= 1 and length_l >= 1")
    return (n,) * length_l + (0,) * (n // 2)


def path_fire_step(w: Sequence[int], i: int) -> PathWeights:
    """Fire face ``i`` forward into face ``i + 1``."""
    if not 0 <= i < len(w):
        raise OutOfPathError(f"index {i} outside path of length {len(w)}")
    if i == len(w) - 1:
        raise OutOfPathError("the final path face has no forward neighbor to fire into")
    if w[i] < w[i + 1] + 2:
        raise IllegalFireError(
            f"path face {i} (weight {w[i]}) must exceed face {i + 1} (weight {w[i + 1]}) by at least 2"
        )
    out = list(w)
    out[i] -= 1
    out[i + 1] += 1
    return tuple(out)


def _forward_moves(w: Sequence[int]) -> list[int]:
    return [i for i in range(len(w) - 1) if w[i] >= w[i + 1] + 2]


def fire_forward_stable(w: Sequence[int]) -> tuple[list[int], list[int]]:
    """Fire forward, leftmost legal face first, until no forward fire applies.

    The sequence is treated as the visible prefix of a ray padded with
    zeros, so it may grow.  Returns the stabilized values (trailing zeros
    trimmed) and the fired indices in order.  After a fire at ``i`` only
    faces ``i - 1`` and ``i + 1`` can newly become able to fire, so the
    scan resumes one step back instead of from the start.
    """
    vals = list(w)
    fired: list[int] = []
    i = 0
    while i < len(vals):
        nxt = vals[i + 1] if i + 1 < len(vals) else 0
        if vals[i] >= nxt + 2:
            if i + 1 == len(vals):
                vals.append(0)
            vals[i] -= 1
            vals[i + 1] += 1
            fired.append(i)
            if i:
                i -= 1
        else:
            i += 1
    while vals and vals[-1] == 0:
        vals.pop()
    return vals, fired


def closed_form_stable(n: int, length_l: int) -> PathWeights:
    """The unique stable configuration of the canonical row, trailing zeros trimmed.

    The first ``max(0, length_l - floor(n/2))`` faces never fire and keep
    weight ``n``; the rest of the weight settles into a staircase
    ``s, s-1, ..., 1`` with at most one value repeated.
    """
    if n < 1 or length_l < 1:
        raise OutOfScopeError("closed form needs n >= 1 and length_l >= 1")
    prefix = max(0, length_l - n // 2)
    residual = n * length_l - prefix * n
    s = 0
    while (s + 1) * (s + 2) // 2 <= residual:
        s += 1
    rem = residual - s * (s + 1) // 2
    out = [n] * prefix
    for v in range(s, 0, -1):
        out.append(v)
        if v == rem:
            out.append(v)
    return tuple(out)


def simulate_all_orders(w0: Sequence[int]) -> set[PathWeights]:
    """Every stable configuration reachable from ``w0`` by any firing order.

    Exhaustive memoized search; restricted to weakly decreasing inputs,
    for which all fires move forward.
    """
    start = tuple(w0)
    if any(a < b for a, b in zip(start, start[1:])):
        raise OutOfScopeError(f"weights must be weakly decreasing, got {start}")
    if any(v < 0 for v in start):
        raise OutOfScopeError("weights must be non-negative")
    seen = {start}
    stack = [start]
    stable: set[PathWeights] = set()
    while stack:
        w = stack.pop()
        moves = _forward_moves(w)
        if not moves:
            stable.add(w)
            continue
        for i in moves:
            lst = list(w)
            lst[i] -= 1
            lst[i + 1] += 1
            nxt = tuple(lst)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return stable


def reachable_states(w0: Sequence[int]) -> set[PathWeights]:
    """Every configuration (stable or not) reachable from ``w0``."""
    start = tuple(w0)
    if any(a < b for a, b in zip(start, start[1:])):
        raise OutOfScopeError(f"weights must be weakly decreasing, got {start}")
    seen = {start}
    stack = [start]
    while stack:
        w = stack.pop()
        for i in _forward_moves(w):
            lst = list(w)
            lst[i] -= 1
            lst[i + 1] += 1
            nxt = tuple(lst)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


# -- trace monitors ----------------------------------------------------------

@dataclass(frozen=True)
class LemmaViolation:
    step: int          # index of the offending configuration within the trace
    kind: str          # "not-decreasing" | "equal-triple" | "double-repeat"
    position: int      # leftmost face index of the offending pattern
    detail: str


@dataclass(frozen=True)
class LemmaReport:
    configs_checked: int
    violations: tuple[LemmaViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _scan_config(w: Sequence[int], changed: Sequence[bool]) -> list[tuple[str, int, str]]:
    """Structural checks on one configuration.

    ``changed`` marks faces whose weight has moved since the start of the
    process; faces that never moved are exempt from the repeat patterns.
    """
    found: list[tuple[str, int, str]] = []
    for i in range(len(w) - 1):
        if w[i] < w[i + 1]:
            found.append(("not-decreasing", i, f"w[{i}]={w[i]} < w[{i + 1}]={w[i + 1]}"))
    for i in range(len(w) - 2):
        if w[i] == w[i + 1] == w[i + 2] and changed[i] and changed[i + 1] and changed[i + 2]:
            found.append(("equal-triple", i, f"three consecutive moved faces of weight {w[i]}"))
    # Two repeated pairs bridged by a run descending in unit steps.
    repeats = [
        p for p in range(len(w) - 1)
        if w[p] == w[p + 1] and changed[p] and changed[p + 1]
    ]
    for p, q in zip(repeats, repeats[1:]):
        if q == p + 1:
            continue  # overlapping pairs form a triple, reported above
        if all(w[j] - w[j + 1] == 1 for j in range(p + 1, q)) and all(changed[p:q + 2]):
            found.append((
                "double-repeat", p,
                f"repeats of {w[p]} at {p} and {w[q]} at {q} joined by a unit descent",
            ))
    return found


def check_trace_lemmas(trace: Sequence[Sequence[int]]) -> LemmaReport:
    """Check every configuration of a firing trace against the forward-firing
    structure theorems.  A clean report on a legal trace is expected; any
    violation witnesses a bug in the firing engine."""
    violations: list[LemmaViolation] = []
    if not trace:
        return LemmaReport(0, ())
    first = list(trace[0])
    changed = [False] * len(first)
    for step, w in enumerate(trace):
        if len(w) != len(first):
            raise OutOfScopeError("all trace configurations must share one path length")
        for i, v in enumerate(w):
            if v != first[i]:
                changed[i] = True
        for kind, pos, detail in _scan_config(w, changed):
            violations.append(LemmaViolation(step, kind, pos, detail))
    return LemmaReport(len(trace), tuple(violations))


def check_all_reachable(w0: Sequence[int]) -> LemmaReport:
    """Monitor every configuration reachable from a canonical-style row.

    Sound for starts whose entries all equal ``n`` or 0: no face can ever
    return to its starting weight, so "has moved" is simply "differs from
    the start", making the check independent of the particular trace.
    """
    start = tuple(w0)
    if any(v not in (0, max(start, default=0)) for v in start):
        raise OutOfScopeError("reachable-set monitoring expects a two-valued start")
    violations: list[LemmaViolation] = []
    states = sorted(reachable_states(start))
    for w in states:
        changed = [v != first for v, first in zip(w, start)]
        for kind, pos, detail in _scan_config(w, changed):
            violations.append(LemmaViolation(-1, kind, pos, detail))
    return LemmaReport(len(states), tuple(violations))


def support_length_bounds(n: int, length_l: int) -> tuple[int, int, bool]:
    """Support length of the stable canonical row, with its staircase offset.

    Returns ``(length, m, repeated)`` where the stable support has
    ``length`` faces, the staircase tops out at ``n - m`` (so
    ``length = n - m`` without a repeat and ``n - m + 1`` with one), and
    asserts the lower bound on ``m`` that keeps the row inside the Aztec
    diamond profile.
    """
    if length_l > (n + 1) // 2:
        raise OutOfScopeError(f"bounds hold for length_l <= ceil(n/2), got {length_l}")
    stable = closed_form_stable(n, length_l)
    length = len(stable)
    repeated = len(set(stable)) < length if length else False
    m = n - length + 1 if repeated else n - length
    bound = (n + 1) // 2 - length_l + (1 if repeated else 0)
    if m < bound:
        raise AssertionError(
            f"staircase offset m={m} fell below its bound {bound} for n={n}, length_l={length_l}"
        )
    return length, m, repeated
