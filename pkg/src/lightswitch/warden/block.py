"""Block-invariant check for symmetric strategies under the block schedule."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from ..errors import InfeasibleError, NotSymmetricError


@dataclass
class BlockReport:
    boundaries: int
    violation: str | None = None
    violation_time: int | None = None
    declared: bool = False

    @property
    def holds(self):
        return self.violation is None


def _same_controller(a, b):
    return a is b or (a.q == b.q and a.table == b.table and a.initial == b.initial)


def check_block_invariant(trace, n, r, controllers):
    """Check block equalities at every ``t ≡ 0 (mod d)`` along ``trace``.

    At each boundary: rooms within a room block share one state, prisoners
    within a prisoner block have observed identical histories, and nobody
    has declared.  Stops at the first violation.
    """
    controllers = list(controllers)
    if len(controllers) != n or not all(_same_controller(controllers[0], c) for c in controllers):
        raise NotSymmetricError("block invariant applies to one shared symmetric controller")
    d = gcd(n, r)
    if d == 1:
        raise InfeasibleError("block invariant needs gcd(n, r) > 1")
    rooms = list(trace.initial.room_states)
    segments = [[] for _ in range(n)]
    report = BlockReport(0)

    def boundary(t):
        for jb in range(0, r, d):
            block = rooms[jb:jb + d]
            if any(s != block[0] for s in block):
                return f"rooms {jb}..{jb + d - 1} differ: {block}"
        for ib in range(0, n, d):
            seg = segments[ib]
            for p in range(ib + 1, ib + d):
                if segments[p] != seg:
                    return f"prisoners {ib} and {p} observed different histories"
        return None

    for t, step in enumerate(trace.steps):
        if t % d == 0:
            msg = boundary(t)
            report.boundaries += 1
            if msg is not None:
                report.violation, report.violation_time = msg, t
                return report
            for s in segments:
                s.clear()
        ev = step.event
        segments[ev.prisoner].append(step.observed)
        rooms[ev.room] = step.written
        if step.declared:
            report.declared = True
            report.violation = f"declaration by prisoner {ev.prisoner}"
            report.violation_time = t + 1
            return report
    if len(trace.steps) % d == 0:
        msg = boundary(len(trace.steps))
        report.boundaries += 1
        if msg is not None:
            report.violation, report.violation_time = msg, len(trace.steps)
    return report
