import json

import pytest

from flowfire import (
    ExploreBounds,
    MarkedConfig,
    default_bounds,
    explore,
    is_confluent,
    is_stable,
    make_aztec,
    make_pulse,
    replay,
    total_weight,
)
from flowfire.explore import ExploreError, _Universe


def test_point_pulse_confluent_to_aztec():
    result = explore(make_pulse(2, 0), ExploreBounds(radius_cap=6, max_states=10_000_000))
    assert result.terminals == frozenset([make_aztec(2)])
    assert not result.truncated
    assert result.states_visited == 9281


def test_aztec_is_its_own_closure():
    result = explore(make_aztec(3))
    assert result.terminals == frozenset([make_aztec(3)])
    assert result.states_visited == 1
    assert not result.truncated
    assert result.sample_traces[make_aztec(3)] == ()


def test_witness_traces_replay():
    start = make_pulse(2, 1)
    result = explore(start, ExploreBounds(radius_cap=5, max_states=10_000_000))
    assert result.states_visited == 3103
    for terminal, trace in result.sample_traces.items():
        assert replay(start, trace) == terminal


def test_marked_fire_bookkeeping_along_witness():
    start = make_pulse(2, 0)
    result = explore(start, ExploreBounds(radius_cap=5, max_states=10_000_000))
    (terminal,) = result.terminals
    trace = result.sample_traces[terminal]
    outs = sum(1 for m in trace if m.source == (0, 0))
    ins = sum(1 for m in trace if m.target == (0, 0))
    assert total_weight(start) + outs - ins == total_weight(terminal)


def test_every_terminal_is_stable_even_when_truncated():
    result = explore(make_pulse(2, 2), ExploreBounds(radius_cap=6, max_states=2_000))
    assert result.truncated
    for terminal in result.terminals:
        assert is_stable(terminal)


def test_wide_pulse_has_many_terminals():
    result = explore(make_pulse(2, 2), ExploreBounds(radius_cap=7, max_states=1_000_000))
    assert not result.truncated
    assert len(result.terminals) == 321
    assert make_aztec(2) not in result.terminals
    assert is_confluent(make_pulse(2, 2), ExploreBounds(7, 1_000_000)) is False


def test_is_confluent_verdicts():
    assert is_confluent(make_pulse(1, 0)) is True
    assert is_confluent(make_pulse(2, 1), ExploreBounds(5, 1_000_000)) is True
    assert is_confluent(make_pulse(3, 2), ExploreBounds(7, 50_000)) is None


def test_budget_truncation_is_exact():
    result = explore(make_pulse(2, 0), ExploreBounds(radius_cap=5, max_states=500))
    assert result.truncated
    assert result.states_visited == 500


def test_depth_bound_truncates():
    result = explore(make_pulse(2, 0), ExploreBounds(radius_cap=5, max_states=10**6, max_depth=3))
    assert result.truncated
    assert result.depth == 3


def test_radius_cap_must_clear_support():
    with pytest.raises(ExploreError):
        explore(make_pulse(2, 2), ExploreBounds(radius_cap=2))


def test_default_bounds_formula():
    assert default_bounds(make_pulse(3, 2)).radius_cap == 7
    assert default_bounds(make_aztec(2)).radius_cap == 6


def test_empty_universe_single_state():
    empty = MarkedConfig(0)
    result = explore(empty, ExploreBounds(radius_cap=3))
    assert result.terminals == frozenset([empty])
    assert result.states_visited == 1


@pytest.mark.parametrize("start,cap", [(make_pulse(2, 1), 5), (make_pulse(2, 2), 6)])
def test_worker_count_does_not_change_results(start, cap):
    bounds = ExploreBounds(radius_cap=cap, max_states=20_000)
    lone = explore(start, bounds, workers=1)
    pooled = explore(start, bounds, workers=4)
    assert json.dumps(lone.to_json()) == json.dumps(pooled.to_json())


def test_worker_count_irrelevant_in_hashed_engine():
    # pulse (3, 2) at cap 7 overflows the perfect keyspace, so this drives
    # the hash-map engine, truncating deterministically at the budget
    bounds = ExploreBounds(radius_cap=7, max_states=30_000)
    lone = explore(make_pulse(3, 2), bounds, workers=1)
    pooled = explore(make_pulse(3, 2), bounds, workers=4)
    assert lone.truncated and lone.states_visited == 30_000
    assert json.dumps(lone.to_json()) == json.dumps(pooled.to_json())


@pytest.mark.parametrize("n,r,cap", [(2, 0, 5), (2, 1, 5), (1, 0, 4)])
def test_both_engines_agree(monkeypatch, n, r, cap):
    # the perfect-key and hash-map engines must explore identical spaces;
    # witness traces may differ (discovery order), so replay them instead
    import sys

    explore_mod = sys.modules["flowfire.explore"]
    bounds = ExploreBounds(radius_cap=cap, max_states=1_000_000)
    fast = explore(make_pulse(n, r), bounds)
    monkeypatch.setattr(explore_mod, "_PERFECT_KEYSPACE_LIMIT", 0)
    slow = explore(make_pulse(n, r), bounds)
    assert fast.terminals == slow.terminals
    assert fast.states_visited == slow.states_visited
    assert fast.truncated == slow.truncated == False
    assert fast.depth == slow.depth
    for result in (fast, slow):
        for terminal, trace in result.sample_traces.items():
            assert replay(make_pulse(n, r), trace) == terminal


def test_weight_ceiling_matches_aztec_profile_for_thin_pulses():
    # the derived per-face ceiling reproduces the diamond profile, which is
    # what makes exact perfect-key deduplication possible at height 3
    uni = _Universe(make_pulse(3, 1), 6)
    for f, b in zip(uni.active, uni.ceiling):
        d = abs(f[0]) + abs(f[1])
        assert b == 3 - d + 1
    assert uni.keyspace() == 6879707136
