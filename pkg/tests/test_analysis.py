import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_controller, table_controller
from lightswitch.analysis import (
    INFINITE,
    BothInfinitelyOften,
    DeclaresDuringProbe,
    EventuallyConstant,
    NeverStuck,
    analyze_machine,
    classify_single_room,
    reset_index,
    stuck_state,
)
from lightswitch.checker import check_fair_liveness, explore
from lightswitch.dsl import load_builtin
from lightswitch.warden import FiniteStrategySpace

ALWAYS_1 = table_controller([(1, 0, False), (1, 0, False)])
ALWAYS_0 = table_controller([(0, 0, False), (0, 0, False)])
TOGGLE = table_controller([(1, 0, False), (0, 0, False)])
IDENTITY = table_controller([(0, 0, False), (1, 0, False)])
ONCE_THEN_IDENTITY = table_controller([(1, 1, False), (1, 1, False), (0, 1, False), (1, 1, False)])
# after the first reset it writes 0 and moves on; after the second it keeps the 1
TWO_PHASE = table_controller([(0, 0, False), (0, 1, False), (0, 1, False), (1, 1, False)])


def test_classify_examples():
    assert classify_single_room(ALWAYS_1, 0) == EventuallyConstant(1, 1, 0)
    assert classify_single_room(TOGGLE, 0) == BothInfinitelyOften()
    assert classify_single_room(IDENTITY, 1) == EventuallyConstant(1, 0, 0)


def test_classify_declaration():
    c = table_controller([(0, 1, False), (1, 1, False), (0, 2, True), (1, 2, True), (0, 2, False), (1, 2, False)])
    assert classify_single_room(c, 0) == DeclaresDuringProbe(2)


def test_classify_rejects_three_states():
    with pytest.raises(ValueError):
        classify_single_room(load_builtin("alice", 3), 0)


def test_stuck_state_examples():
    assert stuck_state(ALWAYS_1, 0, 0) == (1, 1)
    assert stuck_state(IDENTITY, 0, 0) == (0, 0)
    assert stuck_state(ONCE_THEN_IDENTITY, 0, 0) == (1, 1)
    assert stuck_state(TOGGLE, 0, 0) is None


def test_reset_index_examples():
    assert reset_index(ALWAYS_0, 0) == INFINITE
    assert reset_index(IDENTITY, 0) == 1
    assert reset_index(TWO_PHASE, 0) == 2


def test_reset_index_precondition():
    with pytest.raises(NeverStuck):
        reset_index(TOGGLE, 0)
    with pytest.raises(NeverStuck):
        reset_index(ALWAYS_1, 0)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 1))
def test_onset_pigeonhole_bound(seed, start):
    rng = random.Random(seed)
    c = random_controller(rng, 2, rng.randint(1, 6), 0.0)
    res = classify_single_room(c, start)
    assert not isinstance(res, DeclaresDuringProbe)
    if isinstance(res, EventuallyConstant):
        assert res.onset <= c.num_states * c.q
        assert stuck_state(c, c.initial, start) == (res.state, res.onset)


def settle(c, s, room, visits):
    """Probe by plain simulation: ``(value, ctrl at onset)`` or None if not constant."""
    rooms, ctrls = [room], [s]
    for _ in range(visits):
        room, s = c.step(s, room)[:2]
        rooms.append(room)
        ctrls.append(s)
    value = rooms[-1]
    if any(v != value for v in rooms[visits // 2:]):
        return None
    t = len(rooms) - 1
    while t > 0 and rooms[t - 1] == value:
        t -= 1
    return value, ctrls[t]


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_reset_index_agrees_with_direct_simulation(seed):
    rng = random.Random(seed)
    c = random_controller(rng, 2, rng.randint(1, 5), 0.0)
    visits = 4 * c.num_states * c.q + 4
    first = settle(c, c.initial, 0, visits)
    if first is None:
        assert not isinstance(classify_single_room(c, 0), EventuallyConstant)
        return
    x, s = first
    k = reset_index(c, x)
    for resets in range(1, c.num_states + 2):
        res = settle(c, s, 1 - x, visits)
        if res is None or res[0] != x:
            assert k == resets
            return
        s = res[1]
    assert k == INFINITE


def test_consistent_with_checker_on_small_space():
    """Both prisoners alternating in a lone room means the warden can stall them."""
    space = FiniteStrategySpace(memory=2, canonical=True)
    machines = [space.machine(i) for i in range(space.machine_count)]
    both = [c for c in machines if isinstance(classify_single_room(c, 0), BothInfinitelyOften)]
    assert both
    rng = random.Random(0)
    for _ in range(300):
        a, b = rng.choice(both), rng.choice(both)
        g = explore([a, b], 2, 2, 2, track_visited=False)
        assert check_fair_liveness(g) is not None


def test_report_lines():
    lines = analyze_machine(TWO_PHASE, "two").lines()
    assert lines[0] == "two:"
    assert any("reset index" in ln and ln.endswith("2") for ln in lines)
    assert any("not stuck" in ln for ln in analyze_machine(TOGGLE, "t").lines())
