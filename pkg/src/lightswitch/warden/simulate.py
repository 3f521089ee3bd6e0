from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..semantics import (
    Configuration,
    ScheduleEvent,
    Trace,
    TraceStep,
    initial_configuration,
)


class Outcome(str, Enum):
    DECLARED_SAFE = "declared-safe"
    DECLARED_UNSAFE = "declared-unsafe"
    CUTOFF = "cutoff"


@dataclass
class Simulation:
    trace: Trace
    outcome: Outcome
    steps: int
    final: Configuration

    def __iter__(self):
        # allows ``trace, outcome = simulate(...)``
        yield self.trace
        yield self.outcome


def simulate(scheduler, controllers, n, r, q, init=None, max_steps=10**6, *, record=True, on_step=None):
    """Run until the first declaration or ``max_steps`` visits.

    ``on_step(t, prisoner, room, observed, written, declared, rooms, ctrls)``
    is called after every visit with the live room and control lists; it
    must not mutate them.
    """
    controllers = list(controllers)
    if init is None:
        init = (0,) * r
    cfg0 = initial_configuration(n, r, q, init, controllers)
    trace = Trace(cfg0)
    rooms = list(cfg0.room_states)
    ctrl = list(cfg0.ctrl_states)
    visited = [0] * n
    tables = [c.table for c in controllers]
    full = (1 << r) - 1
    steps = trace.steps
    declared_by = None
    t = 0
    while t < max_steps:
        if scheduler.oblivious:
            ev = scheduler.next()
        else:
            cfg = Configuration(n, r, q, tuple(rooms), tuple(ctrl), tuple(visited), None, t)
            ev = scheduler.next(trace, cfg)
        p, j = ev.prisoner, ev.room
        obs = rooms[j]
        w, nxt, dec = tables[p][ctrl[p] * q + obs]
        rooms[j] = w
        ctrl[p] = nxt
        visited[p] |= 1 << j
        t += 1
        if record:
            steps.append(TraceStep(ScheduleEvent(t - 1, p, j), obs, w, dec))
        if on_step is not None:
            on_step(t - 1, p, j, obs, w, dec, rooms, ctrl)
        if dec:
            declared_by = p
            break
    final = Configuration(n, r, q, tuple(rooms), tuple(ctrl), tuple(visited), declared_by, t)
    if declared_by is None:
        outcome = Outcome.CUTOFF
    elif all(v == full for v in visited):
        outcome = Outcome.DECLARED_SAFE
    else:
        outcome = Outcome.DECLARED_UNSAFE
    return Simulation(trace, outcome, t, final)
