"""Configurations of the game and the effect of one scheduled visit."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace

from .dsl.controller import Controller
from .errors import ConfigurationError


@dataclass(frozen=True)
class Configuration:
    """Room states, prisoner control states and the visited ledger.

    ``visited[p]`` is a bitmask over rooms: bit ``j`` is set once prisoner
    ``p`` has entered room ``j``.
    """

    n: int
    r: int
    q: int
    room_states: tuple
    ctrl_states: tuple
    visited: tuple
    declared_by: int | None = None
    time: int = 0

    def has_visited(self, prisoner, room):
        return bool(self.visited[prisoner] >> room & 1)

    def visited_matrix(self):
        return tuple(
            tuple(bool(row >> j & 1) for j in range(self.r)) for row in self.visited
        )

    @property
    def all_visited(self):
        full = (1 << self.r) - 1
        return all(row == full for row in self.visited)


@dataclass(frozen=True)
class ScheduleEvent:
    time: int
    prisoner: int
    room: int


@dataclass(frozen=True)
class TraceStep:
    event: ScheduleEvent
    observed: int
    written: int
    declared: bool


@dataclass
class Trace:
    initial: Configuration
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    @property
    def events(self):
        return [s.event for s in self.steps]


def initial_configuration(n, r, q, init_states, controllers=None):
    init_states = tuple(init_states)
    if len(init_states) != r:
        raise ConfigurationError(f"expected {r} initial room states, got {len(init_states)}")
    for s in init_states:
        if not 0 <= s < q:
            raise ConfigurationError(f"initial room state {s} outside [0, {q - 1}]")
    if controllers is None:
        ctrl = (0,) * n
    else:
        if len(controllers) != n:
            raise ConfigurationError(f"expected {n} controllers, got {len(controllers)}")
        ctrl = tuple(c.initial for c in controllers)
    return Configuration(n, r, q, init_states, ctrl, (0,) * n)


def apply_event(cfg, ev, controllers):
    if cfg.declared_by is not None:
        raise ConfigurationError("the game ended at the first declaration")
    p, j = ev.prisoner, ev.room
    if not (0 <= p < cfg.n and 0 <= j < cfg.r):
        raise ConfigurationError(f"event ({p}, {j}) out of range")
    c = controllers[p]
    obs = cfg.room_states[j]
    w, nxt, dec = c.table[cfg.ctrl_states[p] * c.q + obs]
    rooms = cfg.room_states[:j] + (w,) + cfg.room_states[j + 1:]
    ctrl = cfg.ctrl_states[:p] + (nxt,) + cfg.ctrl_states[p + 1:]
    visited = cfg.visited[:p] + (cfg.visited[p] | 1 << j,) + cfg.visited[p + 1:]
    return replace(
        cfg,
        room_states=rooms,
        ctrl_states=ctrl,
        visited=visited,
        declared_by=p if dec else None,
        time=cfg.time + 1,
    )


def is_safe_declare(cfg):
    if cfg.declared_by is None:
        raise ConfigurationError("no declaration has been made")
    return cfg.all_visited


def run_events(cfg, events, controllers):
    """Apply ``(prisoner, room)`` pairs in order; returns the resulting Trace.

    Stops early if a declaration happens.
    """
    trace = Trace(cfg)
    for p, j in events:
        if cfg.declared_by is not None:
            break
        ev = ScheduleEvent(cfg.time, p, j)
        obs = cfg.room_states[j]
        cfg = apply_event(cfg, ev, controllers)
        trace.steps.append(TraceStep(ev, obs, cfg.room_states[j], cfg.declared_by is not None))
    return trace


def replay(trace, controllers):
    """Re-run a trace, checking every recorded observation and write.

    Returns the list of configurations, initial included.
    """
    cfg = trace.initial
    configs = [cfg]
    for k, step in enumerate(trace.steps):
        ev = step.event
        obs = cfg.room_states[ev.room]
        if obs != step.observed:
            raise ConfigurationError(f"step {k}: recorded observation {step.observed}, replay {obs}")
        cfg = apply_event(cfg, ev, controllers)
        if cfg.room_states[ev.room] != step.written or (cfg.declared_by is not None) != step.declared:
            raise ConfigurationError(f"step {k}: replay diverges from the recorded write")
        configs.append(cfg)
    return configs


def dump_trace(trace, fh):
    init = trace.initial
    header = {"n": init.n, "r": init.r, "q": init.q, "init": list(init.room_states)}
    fh.write(json.dumps(header) + "\n")
    for s in trace.steps:
        fh.write(
            json.dumps(
                {
                    "t": s.event.time,
                    "prisoner": s.event.prisoner,
                    "room": s.event.room,
                    "observed": s.observed,
                    "written": s.written,
                    "declared": s.declared,
                }
            )
            + "\n"
        )


def load_trace(fh, controllers=None):
    lines = [ln for ln in fh if ln.strip()]
    header = json.loads(lines[0])
    init = initial_configuration(header["n"], header["r"], header["q"], header["init"], controllers)
    trace = Trace(init)
    for ln in lines[1:]:
        d = json.loads(ln)
        trace.steps.append(
            TraceStep(ScheduleEvent(d["t"], d["prisoner"], d["room"]), d["observed"], d["written"], d["declared"])
        )
    return trace


@dataclass(frozen=True)
class WrappedStart:
    controllers: tuple
    q_total: int
    init: tuple
    dirty: tuple  # original values mapped to dirty states, in state order


def _wrap_one(c, q_work, q_total):
    """Rewrite dirty observations (>= q_work) to 0 before the original step."""
    table = []
    for s in range(c.num_states):
        absorbing = s in c.declared_states
        for obs in range(q_total):
            if obs < q_work:
                table.append(c.table[s * c.q + obs])
            elif absorbing:
                table.append((obs, s, False))
            else:
                table.append(c.table[s * c.q])
    return Controller(q_total, tuple(table), c.initial, c.labels, c.lines, c.name)


def wrap_initial_state(controllers, known_init, q_work):
    """Adapt all-zero-start controllers to a known, non-zero starting vector.

    The most common initial value becomes state 0; each other distinct value
    gets a reserved dirty state above ``q_work - 1``.  Wrapped controllers
    clean a dirty room to 0 on sight, acting on it as if they had seen 0.
    """
    counts = Counter(known_init)
    # ties broken towards the smallest value so 0 wins when it is among the most common
    zero_value = min(counts, key=lambda v: (-counts[v], v))
    dirty = tuple(sorted(v for v in counts if v != zero_value))
    mapping = {zero_value: 0}
    for i, v in enumerate(dirty):
        mapping[v] = q_work + i
    q_total = q_work + len(dirty)
    init = tuple(mapping[v] for v in known_init)
    if not dirty:
        return WrappedStart(tuple(controllers), q_work, init, ())
    for c in controllers:
        if c.q != q_work:
            raise ValueError(f"controller {c.name!r} has q={c.q}, expected {q_work}")
    wrapped = tuple(_wrap_one(c, q_work, q_total) for c in controllers)
    return WrappedStart(wrapped, q_total, init, dirty)
