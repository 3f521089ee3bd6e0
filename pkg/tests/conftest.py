import random
import sys
from collections import deque

import pytest
from hypothesis import strategies as st

from lightswitch.dsl.controller import Controller
from lightswitch.semantics import ScheduleEvent, apply_event, initial_configuration
from lightswitch.dsl.ast import Declare, Flip, FlipAny, Repeat, See, WithoutSeeing


def table_controller(rows, q=2, name=""):
    """Controller from rows ``(write, next, declares)`` indexed state*q+obs."""
    return Controller(q, tuple(rows), 0, None, None, name)


def random_controller(rng, q, states, p_declare=0.1, name=""):
    """Random table; declaring entries go to a trailing absorbing sink."""
    sink = states
    rows = []
    for _ in range(states * q):
        if rng.random() < p_declare:
            rows.append((rng.randrange(q), sink, True))
        else:
            rows.append((rng.randrange(q), rng.randrange(states), False))
    rows.extend((o, sink, False) for o in range(q))
    return Controller(q, tuple(rows), 0, None, None, name)


def naive_verdict(controllers, n, r, q, init=None):
    """Reference verdict by brute force over Configuration objects.

    Unsafe if some reachable declaration has an incomplete ledger; fair
    loop if some set of mutually reachable configurations uses every
    (prisoner, room) label internally.  Quadratic, for tiny games only.
    """
    init = init or (0,) * r
    start = initial_configuration(n, r, q, init, controllers)
    key = lambda c: (c.room_states, c.ctrl_states, c.visited, c.declared_by)
    seen = {key(start): start}
    queue = deque([start])
    edges = {}
    while queue:
        c = queue.popleft()
        if c.declared_by is not None:
            if not c.all_visited:
                return "unsafe"
            continue
        out = []
        for p in range(n):
            for j in range(r):
                d = apply_event(c, ScheduleEvent(0, p, j), controllers)
                d = type(d)(d.n, d.r, d.q, d.room_states, d.ctrl_states, d.visited, d.declared_by, 0)
                k = key(d)
                if k not in seen:
                    seen[k] = d
                    queue.append(d)
                out.append(((p, j), k))
        edges[key(c)] = out
    # fair loop: drop the ledger (it only grows), look for a label-complete SCC
    proj = {}
    for u, out in edges.items():
        pu = (u[0], u[1])
        proj.setdefault(pu, set())
        for lab, v in out:
            if v[3] is None:
                proj[pu].add((lab, (v[0], v[1])))
    reach = {}
    for u in proj:
        stack, got = [u], {u}
        while stack:
            x = stack.pop()
            for _, y in proj[x]:
                if y not in got:
                    got.add(y)
                    stack.append(y)
        reach[u] = got
    full = {(p, j) for p in range(n) for j in range(r)}
    for u in proj:
        comp = {v for v in reach[u] if u in reach[v]}
        labels = {lab for x in comp for lab, y in proj[x] if y in comp}
        if labels >= full:
            return "fairloop"
    return "win"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.REPORT, key=lambda ln: int(ln.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(12345)


def instruction_trees(q, max_leaves=12):
    """Hypothesis strategy for instruction lists over states ``range(q)``."""
    state = st.integers(0, q - 1)
    leaf = st.one_of(
        st.builds(Flip, state, state),
        st.builds(FlipAny, state),
        st.builds(See, state),
        st.just(Declare()),
    )

    def extend(children):
        block = st.lists(children, min_size=0, max_size=3).map(tuple)
        return st.one_of(
            st.builds(Repeat, st.integers(0, 3), block),
            st.builds(WithoutSeeing, state, block, block),
        )

    node = st.recursive(leaf, extend, max_leaves=max_leaves)
    return st.lists(node, min_size=0, max_size=4).map(tuple)
