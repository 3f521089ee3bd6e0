"""Instruction tree for light-switch protocols."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Flip:
    """Wait for a room in state ``src``, then set it to ``dst``."""

    src: int
    dst: int


@dataclass(frozen=True)
class FlipAny:
    """Wait for a room in any state other than ``dst``, then set it to ``dst``."""

    dst: int


@dataclass(frozen=True)
class See:
    target: int


@dataclass(frozen=True)
class Repeat:
    count: int
    body: tuple


@dataclass(frozen=True)
class WithoutSeeing:
    """Run ``body`` unless a room in state ``guard`` is entered first.

    The guard is checked on every room entry while control is inside the
    body; on a hit, control moves to ``otherwise`` within the same visit.
    """

    guard: int
    body: tuple
    otherwise: tuple


@dataclass(frozen=True)
class Declare:
    pass


@dataclass(frozen=True)
class ProtocolSource:
    name: str
    instructions: tuple
    parameters: frozenset = frozenset()
    bindings: tuple = ()

    def binding(self, symbol):
        return dict(self.bindings).get(symbol)


def walk(instructions):
    """Yield every instruction in pre-order."""
    for ins in instructions:
        yield ins
        if isinstance(ins, Repeat):
            yield from walk(ins.body)
        elif isinstance(ins, WithoutSeeing):
            yield from walk(ins.body)
            yield from walk(ins.otherwise)


def format_instructions(instructions, indent="  "):
    """Render an instruction list in the canonical one-statement-per-line form."""
    out = []

    def emit(block, depth):
        pad = indent * depth
        for ins in block:
            if isinstance(ins, Flip):
                out.append(f"{pad}flip({ins.src},{ins.dst})")
            elif isinstance(ins, FlipAny):
                out.append(f"{pad}flip(*,{ins.dst})")
            elif isinstance(ins, See):
                out.append(f"{pad}see({ins.target})")
            elif isinstance(ins, Declare):
                out.append(f"{pad}declare")
            elif isinstance(ins, Repeat):
                out.append(f"{pad}repeat({ins.count}) {{")
                emit(ins.body, depth + 1)
                out.append(f"{pad}}}")
            elif isinstance(ins, WithoutSeeing):
                out.append(f"{pad}without_seeing({ins.guard}) {{")
                emit(ins.body, depth + 1)
                out.append(f"{pad}}} otherwise {{")
                emit(ins.otherwise, depth + 1)
                out.append(f"{pad}}}")
            else:
                raise TypeError(f"unknown instruction {ins!r}")

    emit(instructions, 0)
    return "\n".join(out) + "\n"


def format_protocol(source):
    return format_instructions(source.instructions)
