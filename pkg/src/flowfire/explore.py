"""Exhaustive reachability over the firing relation.

Breadth-first closure with exact deduplication, bounded by a radius cap:
moves whose target lies past the cap are never taken, and the result is
flagged truncated if such a move was ever legal (or a state/depth budget
ran out).  An untruncated result therefore lists exactly the stable
configurations reachable from the start.

Weights admit a sound per-face ceiling computed from the start alone: a
face can only ever rise to one below what an adjacent face can hold, and
the marked face tops its neighbors out at ``n``, so the ceiling is the
upper envelope of decreasing-by-distance cones from the initial support
and the origin.  When the product of (ceiling + 1) over all faces is
small enough, every state packs into one integer below that product and
the visited set becomes a flat bitmap; reachable sets in the hundreds of
millions then fit in memory, with parent links spilled to a scratch file
for witness-trace reconstruction.  Otherwise states are canonical byte
strings deduplicated in a hash map, and the budget does the bounding.

Frontier expansion is chunked; chunks may be evaluated by worker threads
but their results are merged in a fixed order, so the outcome is
identical for any worker count.
"""

from __future__ import annotations

import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .firing import FireMove, trace_to_json
from .grid import ORIGIN, STEPS, Face, MarkedConfig, ball, config_to_json, dist, support_radius

_PERFECT_KEYSPACE_LIMIT = 1 << 33  # visited bitmap of at most 1 GiB
_CHUNK = 1 << 20
_PARENT_DTYPE = np.dtype([("parent", "<u8"), ("move", "<u2")])
_NO_PARENT = np.uint64(2**64 - 1)


class ExploreError(ValueError):
    pass


@dataclass(frozen=True)
class ExploreBounds:
    """Limits for one exploration.

    ``radius_cap`` freezes all faces beyond that distance (it must clear
    the initial support by at least one ring); ``max_states`` and
    ``max_depth`` cut the search off with a truncated result.
    """

    radius_cap: int
    max_states: int = 1_000_000
    max_depth: int | None = None


def default_bounds(c: MarkedConfig, max_states: int = 1_000_000) -> ExploreBounds:
    """Cap two rings past where weight can still match the Aztec profile."""
    return ExploreBounds(radius_cap=c.n + support_radius(c) + 2, max_states=max_states)


@dataclass(frozen=True)
class ExploreResult:
    terminals: frozenset[MarkedConfig]
    states_visited: int
    truncated: bool
    sample_traces: dict[MarkedConfig, tuple[FireMove, ...]]
    depth: int

    def to_json(self) -> dict:
        entries = sorted(self.terminals, key=MarkedConfig.key)
        return {
            "states_visited": self.states_visited,
            "truncated": self.truncated,
            "depth": self.depth,
            "terminal_count": len(entries),
            "terminals": [
                {
                    "config": config_to_json(t),
                    "witness_trace": trace_to_json(self.sample_traces[t]),
                }
                for t in entries
            ],
        }


def is_confluent(c0: MarkedConfig, bounds: ExploreBounds | None = None, workers: int = 1) -> bool | None:
    """True for exactly one reachable terminal, False for several, None if
    the exploration was truncated before the question was settled."""
    result = explore(c0, bounds, workers=workers)
    if result.truncated:
        return None
    return len(result.terminals) == 1


class _Universe:
    """Active faces, per-face weight ceilings, and the canonical move table."""

    def __init__(self, c0: MarkedConfig, radius_cap: int):
        if radius_cap < support_radius(c0) + 1:
            raise ExploreError(
                f"radius cap {radius_cap} must clear the initial support "
                f"(radius {support_radius(c0)}) by at least 1"
            )
        self.n = c0.n
        self.cap = radius_cap
        seeds = list(c0.faces.items())
        ceiling: dict[Face, int] = {}
        for f in ball(radius_cap):
            b = c0.n + 1 - dist(ORIGIN, f)
            for h, w in seeds:
                d = w - dist(f, h)
                if d > b:
                    b = d
            if b > 0:
                ceiling[f] = b
        self.active: list[Face] = sorted(ceiling)
        self.index = {f: i for i, f in enumerate(self.active)}
        self.ceiling = np.array([ceiling[f] for f in self.active], dtype=np.int64)

        # Canonical move order: sources ascending with the origin in its
        # slot, directions east/north/west/south.  Moves that the ceilings
        # rule out entirely are dropped; moves leaving the capped region
        # are legality checks only (they set the truncation flag).
        self.moves: list[FireMove] = []
        self.ord_pairs: list[tuple[int, int, int]] = []   # (src, dst, code)
        self.marked_out: list[tuple[int, int]] = []       # (dst, code)
        self.marked_in: list[tuple[int, int]] = []        # (src, code)
        outward: set[int] = set()
        sources = list(self.active)
        at = 0
        while at < len(sources) and sources[at] < ORIGIN:
            at += 1
        sources.insert(at, ORIGIN)
        for src in sources:
            x, y = src
            for dx, dy in STEPS:
                tgt = (x + dx, y + dy)
                if src == ORIGIN:
                    if tgt in self.index and self.n >= 1:
                        self.marked_out.append((self.index[tgt], len(self.moves)))
                        self.moves.append(FireMove(src, tgt))
                    continue
                i = self.index[src]
                if tgt == ORIGIN:
                    self.marked_in.append((i, len(self.moves)))
                    self.moves.append(FireMove(src, tgt))
                elif tgt in self.index:
                    self.ord_pairs.append((i, self.index[tgt], len(self.moves)))
                    self.moves.append(FireMove(src, tgt))
                elif dist(ORIGIN, tgt) > radius_cap and ceiling[src] >= 2:
                    outward.add(i)
        self.outward = np.array(sorted(outward), dtype=np.int64)
        self.initial = np.array([c0.faces.get(f, 0) for f in self.active], dtype=np.int64)

    def keyspace(self) -> int:
        space = 1
        for b in self.ceiling:
            space *= int(b) + 1
            if space > _PERFECT_KEYSPACE_LIMIT:
                return space
        return space

    def config_of(self, weights: Iterable[int]) -> MarkedConfig:
        return MarkedConfig(self.n, {f: int(w) for f, w in zip(self.active, weights) if w})


def explore(c0: MarkedConfig, bounds: ExploreBounds | None = None, workers: int = 1) -> ExploreResult:
    """Breadth-first closure of the firing relation from ``c0``."""
    if bounds is None:
        bounds = default_bounds(c0)
    uni = _Universe(c0, bounds.radius_cap)
    if not uni.active:
        # No face can ever hold weight; with n = 0 the marked face cannot
        # fire either, so the start is the single (stable) state.
        return ExploreResult(frozenset([c0]), 1, False, {c0: ()}, 0)
    if uni.keyspace() <= _PERFECT_KEYSPACE_LIMIT:
        return _explore_perfect(uni, bounds, workers)
    return _explore_hashed(uni, bounds, workers)


# -- perfect-key engine --------------------------------------------------------


def _explore_perfect(uni: _Universe, bounds: ExploreBounds, workers: int) -> ExploreResult:
    m = len(uni.active)
    radix = uni.ceiling + 1
    mult = np.ones(m, dtype=np.int64)
    for i in range(m - 2, -1, -1):
        mult[i] = mult[i + 1] * radix[i + 1]
    keyspace = int(mult[0] * radix[0])
    # uint8 values must survive the "+ 2" in the legality test without wrap
    value_dtype = np.uint8 if int(uni.ceiling.max()) <= 250 else np.int64

    ord_src = np.array([p[0] for p in uni.ord_pairs], dtype=np.int64)
    ord_dst = np.array([p[1] for p in uni.ord_pairs], dtype=np.int64)
    ord_code = np.array([p[2] for p in uni.ord_pairs], dtype=np.uint16)
    ord_delta = mult[ord_dst] - mult[ord_src]
    mo_dst = np.array([p[0] for p in uni.marked_out], dtype=np.int64)
    mo_code = np.array([p[1] for p in uni.marked_out], dtype=np.uint16)
    mi_src = np.array([p[0] for p in uni.marked_in], dtype=np.int64)
    mi_code = np.array([p[1] for p in uni.marked_in], dtype=np.uint16)
    n = uni.n

    def decode(keys: np.ndarray) -> np.ndarray:
        W = np.empty((len(keys), m), dtype=value_dtype)
        rem = keys.copy()
        for i in range(m):
            np.floor_divide(rem, mult[i], out=W[:, i], casting="unsafe")
            rem %= mult[i]
        return W

    # Candidates are deduplicated per distinct successor key, keeping the
    # (state, move)-least discoverer.  When key, row, and code fit one
    # 63-bit composite, a single sort does the whole job.
    code_bits = max(len(uni.moves), 1).bit_length()
    row_bits = _CHUNK.bit_length()
    key_bits = max(keyspace - 1, 1).bit_length()
    composite = key_bits + row_bits + code_bits <= 63
    rc_shift = row_bits + code_bits

    def _dedup(rows_parts, codes_parts, keys_parts):
        if not rows_parts:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty, np.empty(0, dtype=np.uint16)
        if composite:
            packed = np.concatenate(
                [
                    (k << rc_shift) | (r << code_bits) | int(c)
                    for k, r, c in zip(keys_parts, rows_parts, codes_parts)
                ]
            )
            packed.sort()
            keys = packed >> rc_shift
            first = np.ones(len(keys), dtype=bool)
            first[1:] = keys[1:] != keys[:-1]
            packed = packed[first]
            return (
                packed >> rc_shift,
                (packed >> code_bits) & ((1 << row_bits) - 1),
                (packed & ((1 << code_bits) - 1)).astype(np.uint16),
            )
        rows = np.concatenate(rows_parts)
        codes = np.concatenate(
            [np.full(len(r), c, dtype=np.uint16) for r, c in zip(rows_parts, codes_parts)]
        )
        keys = np.concatenate(keys_parts)
        order = np.lexsort((codes, rows, keys))
        keys, rows, codes = keys[order], rows[order], codes[order]
        first = np.ones(len(keys), dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        return keys[first], rows[first], codes[first]

    def expand(chunk: np.ndarray):
        """Pure per-chunk step: candidate successors plus per-state flags."""
        W = decode(chunk)
        any_move = np.zeros(len(chunk), dtype=bool)
        rows_parts, codes_parts, keys_parts = [], [], []

        def take(mask, code, delta):
            any_move_local = mask.any()
            if any_move_local:
                rows_parts.append(np.flatnonzero(mask))
                codes_parts.append(code)
                keys_parts.append(chunk[mask] + delta)
            return any_move_local

        for k in range(len(ord_src)):
            mask = W[:, ord_src[k]] >= W[:, ord_dst[k]] + 2
            if take(mask, ord_code[k], ord_delta[k]):
                any_move |= mask
        for k in range(len(mo_dst)):
            mask = W[:, mo_dst[k]] < n
            if take(mask, mo_code[k], mult[mo_dst[k]]):
                any_move |= mask
        for k in range(len(mi_src)):
            mask = W[:, mi_src[k]] > n
            if take(mask, mi_code[k], -mult[mi_src[k]]):
                any_move |= mask
        saw_outward = False
        for i in uni.outward:
            mask = W[:, i] >= 2
            if mask.any():
                any_move |= mask
                saw_outward = True
        keys, rows, codes = _dedup(rows_parts, codes_parts, keys_parts)
        return keys, rows, codes, any_move, saw_outward

    bitmap = np.zeros((keyspace + 7) // 8, dtype=np.uint8)
    one = np.uint8(1)

    def claim(keys: np.ndarray) -> np.ndarray:
        """Mark keys in the visited bitmap; returns a fresh-key mask."""
        byte = keys >> 3
        bit = (keys & 7).astype(np.uint8)
        fresh = (bitmap[byte] >> bit) & one == 0
        np.bitwise_or.at(bitmap, byte[fresh], one << bit[fresh])
        return fresh

    start_key = int(uni.initial @ mult)
    claim(np.array([start_key], dtype=np.int64))
    frontier = np.array([start_key], dtype=np.int64)
    visited = 1
    depth = 0
    truncated = False
    terminal_keys: list[int] = []
    terminal_ids: list[int] = []
    parents = tempfile.TemporaryFile()
    root = np.zeros(1, dtype=_PARENT_DTYPE)
    root["parent"] = _NO_PARENT
    root.tofile(parents)

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while len(frontier):
            if bounds.max_depth is not None and depth >= bounds.max_depth:
                truncated = True
                break
            chunks = [frontier[i:i + _CHUNK] for i in range(0, len(frontier), _CHUNK)]
            results = pool.map(expand, chunks) if pool else map(expand, chunks)
            next_parts: list[np.ndarray] = []
            level_base = visited - len(frontier)  # ids of this frontier are contiguous
            budget_hit = False
            for ci, (keys, rows, codes, any_move, saw_outward) in enumerate(results):
                truncated |= saw_outward
                chunk_base = level_base + ci * _CHUNK
                if not any_move.all():
                    for r in np.flatnonzero(~any_move):
                        terminal_keys.append(int(chunks[ci][r]))
                        terminal_ids.append(chunk_base + int(r))
                if budget_hit or not len(keys):
                    continue
                fresh = claim(keys)
                keys, rows, codes = keys[fresh], rows[fresh], codes[fresh]
                if visited + len(keys) > bounds.max_states:
                    keep = bounds.max_states - visited
                    keys, rows, codes = keys[:keep], rows[:keep], codes[:keep]
                    truncated = True
                    budget_hit = True
                if len(keys):
                    records = np.empty(len(keys), dtype=_PARENT_DTYPE)
                    records["parent"] = (rows + chunk_base).astype(np.uint64)
                    records["move"] = codes
                    records.tofile(parents)
                    visited += len(keys)
                    next_parts.append(keys)
            frontier = np.concatenate(next_parts) if next_parts else np.empty(0, dtype=np.int64)
            depth += 1
            if budget_hit:
                break
    finally:
        if pool:
            pool.shutdown()

    terminals: dict[MarkedConfig, tuple[FireMove, ...]] = {}
    parents.flush()
    for key, sid in zip(terminal_keys, terminal_ids):
        weights = _decode_single(key, mult, radix)
        config = uni.config_of(weights)
        codes = _walk_parents(parents, sid)
        terminals[config] = tuple(uni.moves[c] for c in codes)
    parents.close()
    return ExploreResult(
        frozenset(terminals), visited, truncated, terminals, depth
    )


def _decode_single(key: int, mult: np.ndarray, radix: np.ndarray) -> list[int]:
    out = []
    rem = key
    for i in range(len(mult)):
        out.append(rem // int(mult[i]))
        rem %= int(mult[i])
    return out


def _walk_parents(parents, sid: int) -> list[int]:
    codes: list[int] = []
    while True:
        parents.seek(sid * _PARENT_DTYPE.itemsize)
        rec = np.fromfile(parents, dtype=_PARENT_DTYPE, count=1)[0]
        if rec["parent"] == _NO_PARENT:
            break
        codes.append(int(rec["move"]))
        sid = int(rec["parent"])
    codes.reverse()
    return codes


# -- hashed-state engine -------------------------------------------------------


def _explore_hashed(uni: _Universe, bounds: ExploreBounds, workers: int) -> ExploreResult:
    if int(uni.ceiling.max()) > 0xFFFF:
        raise ExploreError("face weights beyond 65535 are not supported")
    m = len(uni.active)
    n = uni.n
    ord_pairs = uni.ord_pairs
    marked_out = uni.marked_out
    marked_in = uni.marked_in
    outward = set(int(i) for i in uni.outward)

    def expand(state: bytes):
        w = np.frombuffer(state, dtype=np.uint16)
        succs: list[tuple[int, bytes]] = []
        any_move = False
        saw_outward = False
        for src, dst, code in ord_pairs:
            if w[src] >= w[dst] + 2:
                any_move = True
                nxt = w.copy()
                nxt[src] -= 1
                nxt[dst] += 1
                succs.append((code, nxt.tobytes()))
        for dst, code in marked_out:
            if w[dst] < n:
                any_move = True
                nxt = w.copy()
                nxt[dst] += 1
                succs.append((code, nxt.tobytes()))
        for src, code in marked_in:
            if w[src] > n:
                any_move = True
                nxt = w.copy()
                nxt[src] -= 1
                succs.append((code, nxt.tobytes()))
        for i in outward:
            if w[i] >= 2:
                any_move = True
                saw_outward = True
                break
        return succs, any_move, saw_outward

    start = uni.initial.astype(np.uint16).tobytes()
    ids: dict[bytes, int] = {start: 0}
    parents: list[int] = [-1]
    pmoves: list[int] = [0]
    frontier: list[bytes] = [start]
    frontier_ids: list[int] = [0]
    truncated = False
    depth = 0
    terminal_states: list[tuple[bytes, int]] = []

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            if bounds.max_depth is not None and depth >= bounds.max_depth:
                truncated = True
                break
            results = (
                pool.map(expand, frontier, chunksize=256) if pool else map(expand, frontier)
            )
            next_frontier: list[bytes] = []
            next_ids: list[int] = []
            budget_hit = False
            for state, sid, (succs, any_move, saw_outward) in zip(frontier, frontier_ids, results):
                truncated |= saw_outward
                if not any_move:
                    terminal_states.append((state, sid))
                if budget_hit:
                    continue
                for code, succ in succs:
                    if succ in ids:
                        continue
                    if len(ids) >= bounds.max_states:
                        truncated = True
                        budget_hit = True
                        break
                    ids[succ] = len(ids)
                    parents.append(sid)
                    pmoves.append(code)
                    next_frontier.append(succ)
                    next_ids.append(ids[succ])
            frontier = next_frontier
            frontier_ids = next_ids
            depth += 1
            if budget_hit:
                break
    finally:
        if pool:
            pool.shutdown()

    terminals: dict[MarkedConfig, tuple[FireMove, ...]] = {}
    for state, sid in terminal_states:
        config = uni.config_of(np.frombuffer(state, dtype=np.uint16))
        codes: list[int] = []
        at = sid
        while parents[at] != -1:
            codes.append(pmoves[at])
            at = parents[at]
        codes.reverse()
        terminals[config] = tuple(uni.moves[c] for c in codes)
    return ExploreResult(frozenset(terminals), len(ids), truncated, terminals, depth)
