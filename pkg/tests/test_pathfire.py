import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowfire import (
    IllegalFireError,
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
from flowfire.pathfire import check_all_reachable, fire_forward_stable, ray, reachable_states


def trimmed(w):
    w = tuple(w)
    while w and w[-1] == 0:
        w = w[:-1]
    return w


# weakly decreasing non-negative rows
rows_st = st.lists(st.integers(0, 6), min_size=1, max_size=6).map(
    lambda xs: tuple(sorted(xs, reverse=True))
)


def test_path_spec_validation():
    PathSpec(((2, 0), (2, 1), (3, 1)))
    with pytest.raises(ValueError):
        PathSpec(((2, 0), (3, 1)))
    with pytest.raises(ValueError):
        PathSpec(((1, 0), (0, 0)))
    assert len(ray((0, 2), (1, 0), 4)) == 4


def test_step_examples():
    assert path_fire_step((4, 0, 0), 0) == (3, 1, 0)
    assert path_fire_step((4, 4, 0, 0), 1) == (4, 3, 1, 0)
    with pytest.raises(IllegalFireError):
        path_fire_step((3, 1, 0), 1)
    with pytest.raises(OutOfPathError):
        path_fire_step((3, 1, 0), 2)
    with pytest.raises(OutOfPathError):
        path_fire_step((3, 1, 0), 7)


def test_canonical_row_shape():
    assert canonical_row(4, 2) == (4, 4, 0, 0)
    assert canonical_row(3, 1) == (3, 0)
    assert canonical_row(1, 3) == (1, 1, 1)
    with pytest.raises(OutOfScopeError):
        canonical_row(0, 1)


def test_closed_form_examples():
    assert closed_form_stable(4, 1) == (2, 1, 1)
    assert closed_form_stable(4, 2) == (3, 2, 2, 1)
    assert closed_form_stable(4, 3) == (4, 3, 2, 2, 1)
    assert closed_form_stable(3, 2) == (3, 2, 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_closed_form_is_stable_and_conserves(n):
    for length_l in range(1, (n + 1) // 2 + 3):
        out = closed_form_stable(n, length_l)
        assert sum(out) == n * length_l
        assert all(a - b <= 1 for a, b in zip(out, out[1:]))
        assert len(out) <= length_l + n // 2  # the stable row fits its path


def test_simulate_examples():
    assert simulate_all_orders((4, 0, 0)) == {(2, 1, 1)}
    assert simulate_all_orders((1, 0)) == {(1, 0)}
    assert simulate_all_orders((4, 4, 0, 0)) == {(3, 2, 2, 1)}
    with pytest.raises(OutOfScopeError):
        simulate_all_orders((1, 2, 0))


@pytest.mark.parametrize("n", range(1, 5))
def test_unique_stable_matches_closed_form(n):
    for length_l in range(1, (n + 1) // 2 + 3):
        outcomes = simulate_all_orders(canonical_row(n, length_l))
        assert len(outcomes) == 1
        assert trimmed(next(iter(outcomes))) == closed_form_stable(n, length_l)


@pytest.mark.parametrize("n", range(2, 5))
def test_never_fired_prefix_length(n):
    for length_l in range(1, (n + 1) // 2 + 3):
        terminal = next(iter(simulate_all_orders(canonical_row(n, length_l))))
        lead = len(list(itertools.takewhile(lambda v: v == n, terminal)))
        assert lead == max(0, length_l - n // 2)


def test_trace_monitor_accepts_every_real_trace():
    # exhaustively enumerate all maximal firing orders of a small row
    start = (4, 4, 0, 0)
    full_traces = []

    def extend(trace):
        w = trace[-1]
        moves = [i for i in range(len(w) - 1) if w[i] >= w[i + 1] + 2]
        if not moves:
            full_traces.append(trace)
            return
        for i in moves:
            extend(trace + [path_fire_step(w, i)])

    extend([start])
    assert len(full_traces) > 1
    for trace in full_traces:
        report = check_trace_lemmas(trace)
        assert report.ok, report.violations


def test_trace_monitor_exemptions_and_flags():
    # never-fired faces may sit at equal weights
    assert check_trace_lemmas([(2, 2, 2)]).ok
    # a forged configuration with two moved repeats over a unit descent
    forged = [(6, 5, 4, 3, 2), (3, 2, 2, 1, 1)]
    report = check_trace_lemmas(forged)
    assert not report.ok
    assert any(v.kind == "double-repeat" for v in report.violations)
    # three equal moved values
    forged3 = [(5, 4, 2), (3, 3, 3)]
    report3 = check_trace_lemmas(forged3)
    assert any(v.kind == "equal-triple" for v in report3.violations)
    # weak decrease breach
    report_inc = check_trace_lemmas([(2, 1, 0), (1, 2, 0)])
    assert any(v.kind == "not-decreasing" for v in report_inc.violations)


@pytest.mark.parametrize("n,length_l", [(3, 1), (3, 2), (4, 2), (5, 2), (6, 3)])
def test_reachable_scan_is_clean(n, length_l):
    report = check_all_reachable(canonical_row(n, length_l))
    assert report.ok, report.violations
    assert report.configs_checked == len(reachable_states(canonical_row(n, length_l)))


def test_support_length_bounds_examples():
    assert support_length_bounds(4, 2) == (4, 1, True)
    assert support_length_bounds(3, 2) == (3, 0, False)
    assert support_length_bounds(4, 1) == (3, 2, True)
    with pytest.raises(OutOfScopeError):
        support_length_bounds(4, 5)


@given(rows_st, st.integers(0, 10))
@settings(max_examples=150)
def test_step_preserves_sum_and_monotonicity(w, pick):
    moves = [i for i in range(len(w) - 1) if w[i] >= w[i + 1] + 2]
    if not moves:
        return
    i = moves[pick % len(moves)]
    after = path_fire_step(w, i)
    assert sum(after) == sum(w)
    assert all(a >= b for a, b in zip(after, after[1:]))


def test_fire_forward_stable_matches_simulation():
    vals, fired = fire_forward_stable([4, 4, 0, 0])
    assert tuple(vals) == (3, 2, 2, 1)
    # replaying the fired indices step by step reaches the same profile
    w = (4, 4, 0, 0, 0)
    for i in fired:
        w = path_fire_step(w, i)
    assert trimmed(w) == (3, 2, 2, 1)
