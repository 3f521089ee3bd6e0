from __future__ import annotations

from dataclasses import dataclass
from math import prod


@dataclass(frozen=True)
class SwitchLayout:
    """Several named sub-switches packed into one flat room state.

    The first sub-switch is the least significant digit.
    """

    names: tuple
    sizes: tuple

    def __post_init__(self):
        if len(self.names) != len(self.sizes):
            raise ValueError("names and sizes differ in length")
        if any(s < 1 for s in self.sizes):
            raise ValueError("sub-switch sizes must be positive")

    @property
    def size(self):
        return prod(self.sizes)

    def encode(self, *values, **named):
        if named:
            values = tuple(named[name] for name in self.names)
        code, mul = 0, 1
        for v, s in zip(values, self.sizes):
            if not 0 <= v < s:
                raise ValueError(f"sub-switch value {v} outside [0, {s - 1}]")
            code += v * mul
            mul *= s
        return code

    def decode(self, code):
        if not 0 <= code < self.size:
            raise ValueError(f"state {code} outside layout of size {self.size}")
        out = []
        for s in self.sizes:
            code, v = divmod(code, s)
            out.append(v)
        return tuple(out)

    def decode_named(self, code):
        return dict(zip(self.names, self.decode(code)))
