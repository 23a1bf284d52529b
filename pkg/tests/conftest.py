"""Shared hand-checked reference data for the test suite."""

from __future__ import annotations

import pytest

from flowfire import MarkedConfig, make_aztec

# The pulse (4, 2) after one row sweep of every quadrant: each quadrant row
# settles to its staircase, nothing exceeds the height-4 Aztec profile.
ROW_FIRED_PULSE_4_2 = MarkedConfig(
    4,
    {
        (0, 2): 2, (1, 2): 1, (2, 2): 1,
        (-3, 1): 1, (-2, 1): 1, (-1, 1): 2,
        (0, 1): 3, (1, 1): 2, (2, 1): 2, (3, 1): 1,
        (-4, 0): 1, (-3, 0): 2, (-2, 0): 2, (-1, 0): 3,
        (1, 0): 3, (2, 0): 2, (3, 0): 2, (4, 0): 1,
        (-3, -1): 1, (-2, -1): 2, (-1, -1): 2,
        (0, -1): 3, (1, -1): 2, (2, -1): 1, (3, -1): 1,
        (-2, -2): 1, (-1, -2): 1, (0, -2): 2,
    },
)

# A stable configuration reachable from the pulse (3, 2): the height-3
# diamond plus one escaped unit at distance 4.
FLOODED_TERMINAL_3 = MarkedConfig(
    3, dict(make_aztec(3).faces) | {(-1, 3): 1}
)

# Published regime-boundary table: minimum r whose pulse outweighs the
# diamond, for n = 4..24.
PUBLISHED_MIN_R = [3, 4, 4, 5, 6, 6, 7, 7, 8, 8, 9, 10, 10, 11, 11, 12, 12, 13, 14, 14, 15]


@pytest.fixture
def row_fired_pulse_4_2():
    return ROW_FIRED_PULSE_4_2


@pytest.fixture
def flooded_terminal_3():
    return FLOODED_TERMINAL_3
