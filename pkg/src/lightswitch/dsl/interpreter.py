"""Direct tree-walking interpreter for instruction lists.

Runs the instruction tree as a coroutine, one room visit per ``visit`` call,
without unrolling or flattening.  Used as an independent reference for the
compiler.
"""
from __future__ import annotations

import itertools

from .ast import Declare, Flip, FlipAny, Repeat, See, WithoutSeeing


class _GuardHit(Exception):
    def __init__(self, block_id):
        super().__init__(block_id)
        self.block_id = block_id


class TreeInterpreter:
    def __init__(self, instructions):
        self._ids = itertools.count()
        self._pending = None
        self._result = None
        self.declared = False
        self._gen = self._program(tuple(instructions))
        next(self._gen)

    def visit(self, observed):
        """Enter a room in state ``observed``; returns ``(write, declares)``."""
        return self._gen.send(observed)

    def _observe(self, guards):
        if self._pending is None:
            self._pending = yield self._result
        obs = self._pending
        for block_id, guard in guards:
            if obs == guard:
                raise _GuardHit(block_id)
        return obs

    def _done(self, write, declares=False):
        self._result = (write, declares)
        self._pending = None

    def _program(self, instructions):
        yield from self._block(instructions, ())
        while True:
            obs = yield from self._observe(())
            self._done(obs)

    def _block(self, block, guards):
        for ins in block:
            yield from self._exec(ins, guards)

    def _exec(self, ins, guards):
        if isinstance(ins, Flip):
            while True:
                obs = yield from self._observe(guards)
                if obs == ins.src:
                    self._done(ins.dst)
                    return
                self._done(obs)
        elif isinstance(ins, FlipAny):
            while True:
                obs = yield from self._observe(guards)
                if obs != ins.dst:
                    self._done(ins.dst)
                    return
                self._done(obs)
        elif isinstance(ins, See):
            while True:
                obs = yield from self._observe(guards)
                self._done(obs)
                if obs == ins.target:
                    return
        elif isinstance(ins, Declare):
            obs = yield from self._observe(guards)
            self._done(obs, True)
            self.declared = True
            while True:
                obs = yield from self._observe(())
                self._done(obs)
        elif isinstance(ins, Repeat):
            for _ in range(ins.count):
                yield from self._block(ins.body, guards)
        elif isinstance(ins, WithoutSeeing):
            block_id = next(self._ids)
            try:
                yield from self._block(ins.body, guards + ((block_id, ins.guard),))
            except _GuardHit as hit:
                if hit.block_id != block_id:
                    raise
                yield from self._block(ins.otherwise, guards)
        else:
            raise TypeError(f"unknown instruction {ins!r}")
