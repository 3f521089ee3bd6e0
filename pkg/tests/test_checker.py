import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_verdict, random_controller, table_controller
from lightswitch.checker import (
    Encoding,
    Unsafe,
    WardenFairLoop,
    Win,
    check_eventually_exactly,
    check_fair_liveness,
    check_safety,
    explore,
    strongly_connected_components,
    verdict,
    verdict_to_json,
)
from lightswitch.dsl import noop_controller
from lightswitch.dsl.controller import Controller
from lightswitch.errors import BudgetExceeded
from lightswitch.semantics import replay, run_events
from lightswitch.strategies import three_state_suite


def assert_counterexample_valid(v, controllers, n, r, q, init=None):
    """Replay a counterexample against the plain semantics."""
    if isinstance(v, Unsafe):
        configs = replay(v.trace, controllers)
        last = configs[-1]
        assert last.declared_by is not None and not last.all_visited
    elif isinstance(v, WardenFairLoop):
        configs = replay(v.prefix, controllers)
        start = configs[-1]
        assert start.declared_by is None
        loop = run_events(start, [(e.prisoner, e.room) for e in v.cycle], controllers)
        assert len(loop) == len(v.cycle)
        assert not any(s.declared for s in loop.steps)
        end = replay(loop, controllers)[-1]
        assert (end.room_states, end.ctrl_states) == (start.room_states, start.ctrl_states)
        assert {(e.prisoner, e.room) for e in v.cycle} == {(p, j) for p in range(n) for j in range(r)}


def test_encoding_round_trip():
    cs = [noop_controller(3), random_controller(random.Random(0), 3, 4)]
    enc = Encoding(2, 3, 3, cs, True)
    code = enc.encode((2, 0, 1), (0, 3), (0b101, 0b011), 1)
    assert enc.decode(code) == ((2, 0, 1), (0, 3), (0b101, 0b011), 1)
    enc = Encoding(2, 3, 3, cs, False)
    assert enc.decode(enc.encode((1, 1, 0), (0, 2))) == ((1, 1, 0), (0, 2), None, None)


def test_canonical_sorts_rooms():
    cs = [noop_controller(3)] * 2
    enc = Encoding(2, 3, 3, cs, True)
    a, _ = enc.canonical(enc.encode((2, 0, 1), (0, 0), (0b001, 0b100)))
    b, _ = enc.canonical(enc.encode((1, 2, 0), (0, 0), (0b010, 0b001)))
    assert a == b
    rooms, _, visited, _ = enc.decode(a)
    assert rooms == (0, 1, 2)


def test_noop_graph_sizes():
    cs = [noop_controller(2)] * 2
    # the ledger alone gives 2^(n r) = 16 configurations
    assert explore(cs, 2, 2, 2, track_visited=True).num_nodes == 16
    assert explore(cs, 2, 2, 2, track_visited=False).num_nodes == 1


def test_noop_never_declares():
    v = verdict([noop_controller(2)] * 2, 2, 2, 2)
    assert isinstance(v, WardenFairLoop)
    assert_counterexample_valid(v, [noop_controller(2)] * 2, 2, 2, 2)


def test_immediate_declaration_is_unsafe():
    c = table_controller([(0, 1, True), (1, 1, True), (0, 1, False), (1, 1, False)])
    v = verdict([c, c], 2, 2, 2)
    assert isinstance(v, Unsafe)
    assert len(v.trace) == 1
    assert_counterexample_valid(v, [c, c], 2, 2, 2)


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        explore(three_state_suite(3, 3), 3, 3, 3, budget=10)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("LIGHTSWITCH_BUDGET", "5")
    with pytest.raises(BudgetExceeded):
        explore(three_state_suite(2, 3), 2, 3, 3)


def test_tarjan_on_small_graph():
    # 0 -> 1 -> 2 -> 0, 2 -> 3, 3 -> 3; node 4 is excluded
    adj = {0: [1], 1: [2], 2: [0, 3, 4], 3: [3]}
    comp = strongly_connected_components(5, lambda u: adj[u], [True] * 4 + [False])
    assert comp[0] == comp[1] == comp[2] != comp[3]
    assert comp[4] == -1


def random_game(seed):
    rng = random.Random(seed)
    n, r, q = rng.choice([(2, 2, 2), (2, 2, 3), (2, 3, 2), (3, 2, 2)])
    cs = [random_controller(rng, q, rng.randint(1, 3), rng.choice([0.05, 0.2])) for _ in range(n)]
    return cs, n, r, q


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_verdict_matches_brute_force(seed):
    cs, n, r, q = random_game(seed)
    expected = naive_verdict(cs, n, r, q)
    for kw in ({}, {"track_visited": True}, {"symmetry": True}):
        v = verdict(cs, n, r, q, **kw)
        assert v.kind == expected, kw
        assert_counterexample_valid(v, cs, n, r, q)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_suites_win_both_modes(n):
    cs = three_state_suite(n, 3)
    assert isinstance(verdict(cs, n, 3, 3), Win)
    if n < 4:
        assert isinstance(verdict(cs, n, 3, 3, track_visited=True), Win)
    assert isinstance(verdict(cs, n, 3, 3, symmetry=True), Win)


def test_symmetry_shrinks_graph():
    cs = three_state_suite(3, 3)
    full = explore(cs, 3, 3, 3, track_visited=True)
    red = explore(cs, 3, 3, 3, track_visited=True, symmetry=True)
    assert red.num_nodes < full.num_nodes


def test_symmetric_graph_refuses_liveness():
    g = explore(three_state_suite(2, 3), 2, 3, 3, symmetry=True)
    with pytest.raises(ValueError):
        check_fair_liveness(g)


def test_truncated_suite_is_caught():
    # dropping Deborah leaves nobody to declare
    cs = three_state_suite(4, 3)[:3]
    v = verdict(cs, 3, 3, 3)
    assert isinstance(v, WardenFairLoop)
    assert_counterexample_valid(v, cs, 3, 3, 3)


def test_unsafe_trace_is_shortest():
    # declares on the first visit to a room in state 1
    c = table_controller([(1, 0, False), (1, 1, True), (0, 1, False), (1, 1, False)])
    cs = [c, noop_controller(2)]
    g = explore(cs, 2, 2, 2, track_visited=True)
    trace = check_safety(g)
    assert len(trace) == 2


def test_verdict_json():
    v = verdict([noop_controller(2)] * 2, 2, 2, 2)
    d = verdict_to_json(v)
    assert d["verdict"] == "fairloop"
    assert d["counterexample"]["cycle"]
    assert verdict_to_json(verdict(three_state_suite(2, 3), 2, 3, 3))["counterexample"] is None


def test_eventually_exactly_on_toy():
    # a prisoner gets the label after seeing a 1; nobody writes 1, so some
    # fair loop stays at zero labelled prisoners
    table = ((0, 0, False), (1, 1, False), (0, 1, False), (1, 1, False))
    c = Controller(2, table, 0, (frozenset(), frozenset({"x"})))
    g = explore([c, c], 2, 2, 2, (0, 1), track_visited=False)
    rep = check_eventually_exactly(g, "x", 2)
    assert rep.holds
    g = explore([c, c], 2, 2, 2, (0, 0), track_visited=False)
    rep = check_eventually_exactly(g, "x", 1)
    assert not rep.holds and rep.short_loop is not None
