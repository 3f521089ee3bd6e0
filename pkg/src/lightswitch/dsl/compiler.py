"""Compile an instruction tree into a flat :class:`Controller`.

Repeats are unrolled, so every primitive instruction instance becomes one
control state, plus a final absorbing state shared by end-of-program and
declaration.  A ``without_seeing`` body is compiled with its guard attached
to each primitive inside it; a guard hit redirects control to the otherwise
block and that block's first instruction is tried against the same room.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ast import Declare, Flip, FlipAny, Repeat, See, WithoutSeeing
from .controller import Controller


class _Label:
    __slots__ = ("pos",)

    def __init__(self):
        self.pos = None


@dataclass
class _Prim:
    ins: object
    guards: tuple  # ((guard_state, _Label), ...) outermost first
    line: int


@dataclass
class _Jump:
    target: _Label


def listing_span(block):
    """Number of listing lines a block occupies (headers count, braces don't)."""
    total = 0
    for ins in block:
        total += 1
        if isinstance(ins, Repeat):
            total += listing_span(ins.body)
        elif isinstance(ins, WithoutSeeing):
            total += listing_span(ins.body) + 1 + listing_span(ins.otherwise)
    return total


def _flatten(instructions):
    ops = []

    def place(label):
        label.pos = len(ops)

    def emit(block, guards, line):
        for ins in block:
            if isinstance(ins, Repeat):
                for _ in range(ins.count):
                    emit(ins.body, guards, line + 1)
                line += 1 + listing_span(ins.body)
            elif isinstance(ins, WithoutSeeing):
                other, end = _Label(), _Label()
                emit(ins.body, guards + ((ins.guard, other),), line + 1)
                ops.append(_Jump(end))
                place(other)
                other_line = line + 1 + listing_span(ins.body)
                emit(ins.otherwise, guards, other_line + 1)
                place(end)
                line = other_line + 1 + listing_span(ins.otherwise)
            else:
                ops.append(_Prim(ins, guards, line))
                line += 1

    emit(instructions, (), 1)
    return ops


def compile_protocol(source, r=None, n=None, q=None):
    """Compile a parsed protocol; ``r``, ``n``, ``q`` must match its bindings."""
    bound = dict(source.bindings)
    for sym, value in (("r", r), ("n", n), ("q", q)):
        if value is not None and sym in bound and bound[sym] != value:
            raise ValueError(f"{sym}={value} does not match parse binding {bound[sym]}")
    q = bound.get("q", q)
    if q is None:
        raise ValueError("q is required")
    return compile_instructions(source.instructions, q, source.name)


def compile_instructions(instructions, q, name=""):
    ops = _flatten(instructions)
    end_pos = len(ops)

    def land(pos):
        seen = set()
        while pos < end_pos and isinstance(ops[pos], _Jump):
            if pos in seen:  # pragma: no cover - flatten never emits jump cycles
                raise RuntimeError("jump cycle")
            seen.add(pos)
            pos = ops[pos].target.pos
        return pos

    prim_positions = [i for i, op in enumerate(ops) if isinstance(op, _Prim)]
    state_of = {pos: s for s, pos in enumerate(prim_positions)}
    end_state = len(prim_positions)
    state_of[end_pos] = end_state

    def visit(pos, obs):
        while True:
            if pos == end_pos:
                return obs, end_state, False
            prim = ops[pos]
            jumped = False
            for guard, label in prim.guards:
                if obs == guard:
                    pos = land(label.pos)
                    jumped = True
                    break
            if jumped:
                continue
            ins = prim.ins
            if isinstance(ins, Flip):
                if obs == ins.src:
                    return ins.dst, state_of[land(pos + 1)], False
                return obs, state_of[pos], False
            if isinstance(ins, FlipAny):
                if obs != ins.dst:
                    return ins.dst, state_of[land(pos + 1)], False
                return obs, state_of[pos], False
            if isinstance(ins, See):
                return obs, state_of[land(pos + 1)] if obs == ins.target else state_of[pos], False
            if isinstance(ins, Declare):
                return obs, end_state, True
            raise TypeError(f"unknown instruction {ins!r}")

    table = []
    for pos in prim_positions + [end_pos]:
        for obs in range(q):
            table.append(visit(pos, obs))
    lines = tuple(ops[pos].line for pos in prim_positions) + (0,)
    initial = state_of[land(0)]
    return Controller(q, tuple(table), initial, None, lines, name)
