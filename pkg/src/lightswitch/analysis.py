"""Single-room probes of finite two-state strategies.

A prisoner led over and over into one room produces an eventually periodic
sequence of room states, because the pair (control state, room state)
evolves deterministically in a finite set.  These helpers find that cycle
and read off the limiting behaviour.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import LightswitchError

INFINITE = float("inf")


class ProbeDeclared(LightswitchError):
    def __init__(self, time):
        self.time = time
        super().__init__(f"prisoner declared during the single-room probe at visit {time}")


class NeverStuck(LightswitchError):
    pass


@dataclass(frozen=True)
class EventuallyConstant:
    state: int
    onset: int
    ctrl_at_onset: int


@dataclass(frozen=True)
class BothInfinitelyOften:
    pass


@dataclass(frozen=True)
class DeclaresDuringProbe:
    time: int


def _require_binary(c):
    if c.q != 2:
        raise ValueError(f"single-room analysis is for two-state switches (controller has q={c.q})")


def probe(c, ctrl, room_state):
    """Run the probe until the (control, room) pair repeats.

    Returns ``(rooms, ctrls, mu)``: room states and control states at times
    0, 1, ... up to the first repeat, and the time ``mu`` where the cycle
    starts.  Raises :class:`ProbeDeclared` if the prisoner declares.
    """
    q = c.q
    seen = {}
    rooms, ctrls = [], []
    t = 0
    s, x = ctrl, room_state
    while (s, x) not in seen:
        seen[(s, x)] = t
        rooms.append(x)
        ctrls.append(s)
        w, s, dec = c.table[s * q + x]
        t += 1
        if dec:
            raise ProbeDeclared(t)
        x = w
    return rooms, ctrls, seen[(s, x)]


def classify_single_room(c, start_state=0, ctrl=None):
    """Limit of the room state when only this prisoner visits one room."""
    _require_binary(c)
    ctrl = c.initial if ctrl is None else ctrl
    try:
        rooms, ctrls, mu = probe(c, ctrl, start_state)
    except ProbeDeclared as exc:
        return DeclaresDuringProbe(exc.time)
    cycle = set(rooms[mu:])
    if len(cycle) > 1:
        return BothInfinitelyOften()
    value = rooms[mu]
    onset = mu
    while onset > 0 and rooms[onset - 1] == value:
        onset -= 1
    return EventuallyConstant(value, onset, ctrls[onset])


def stuck_state(c, ctrl, room_state):
    """``(state, time)`` from which the probed room never changes, else None."""
    res = classify_single_room(c, room_state, ctrl)
    if isinstance(res, EventuallyConstant):
        return res.state, res.onset
    return None


def reset_index(c, stuck_in, start_state=0):
    """Number of resets after which the prisoner stops getting stuck.

    The prisoner is probed from its initial control state until stuck in
    ``stuck_in``; the room is then reset to the other value and the probe
    repeated from the control state at the moment of getting stuck.  Returns
    the first reset count after which it no longer gets stuck in
    ``stuck_in``, or ``INFINITE`` when the control states at reset instants
    start repeating first.
    """
    _require_binary(c)
    first = classify_single_room(c, start_state)
    if not isinstance(first, EventuallyConstant) or first.state != stuck_in:
        raise NeverStuck(f"initial probe is not stuck in {stuck_in}: {first}")
    other = 1 - stuck_in
    ctrl = first.ctrl_at_onset
    seen = set()
    resets = 0
    while ctrl not in seen:
        seen.add(ctrl)
        resets += 1
        res = classify_single_room(c, other, ctrl)
        if isinstance(res, DeclaresDuringProbe):
            raise ProbeDeclared(res.time)
        if isinstance(res, EventuallyConstant) and res.state == stuck_in:
            ctrl = res.ctrl_at_onset
            continue
        return resets
    return INFINITE


@dataclass
class MachineReport:
    name: str
    from_zero: object
    from_one: object
    stuck: tuple | None
    reset: float | int | None

    def lines(self):
        out = [f"{self.name}:"]
        out.append(f"  probe from 0: {_fmt(self.from_zero)}")
        out.append(f"  probe from 1: {_fmt(self.from_one)}")
        if self.stuck is not None:
            out.append(f"  stuck in {self.stuck[0]} from visit {self.stuck[1]}")
            k = "inf" if self.reset == INFINITE else self.reset
            out.append(f"  reset index (resets to {1 - self.stuck[0]}): {k}")
        else:
            out.append("  not stuck")
        return out


def _fmt(res):
    if isinstance(res, EventuallyConstant):
        return f"eventually constant {res.state} from visit {res.onset}"
    if isinstance(res, BothInfinitelyOften):
        return "takes both values infinitely often"
    return f"declares at visit {res.time}"


def analyze_machine(c, name=""):
    _require_binary(c)
    from_zero = classify_single_room(c, 0)
    from_one = classify_single_room(c, 1)
    stuck = None
    reset = None
    if isinstance(from_zero, EventuallyConstant):
        stuck = (from_zero.state, from_zero.onset)
        try:
            reset = reset_index(c, from_zero.state)
        except ProbeDeclared:
            reset = None
    return MachineReport(name or c.name, from_zero, from_one, stuck, reset)
