"""Exhaustive enumeration of bounded-memory strategy pairs.

A raw machine with ``m`` memory states chooses, for each (memory state,
observed room state), a written state, a next memory state and whether to
declare: ``(2 q m) ** (m q)`` machines.  Declaring transitions all lead to
one added absorbing sink, whatever next state the raw machine names.

The canonical space drops what cannot affect a verdict.  The game stops at
the first declaration, so a declaring entry is a single option; and
machines are taken up to relabelling of memory states that fixes the
initial one, keeping only machines whose states are all reachable and
numbered in breadth-first order.  Machines with fewer reachable states
appear once, under their smallest memory size.
"""
from __future__ import annotations

import sys
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from ..checker import Unsafe, WardenFairLoop, verdict
from ..dsl.controller import Controller
from ..errors import LightswitchError

MAX_MEMORY = 2
DECLARE = "D"


class EnumerationBudgetError(LightswitchError):
    pass


def machine_controller(entries, m, q, name=""):
    """Controller from a raw entry tuple ``((write, next, declares), ...)``.

    ``entries`` is indexed by ``state * q + observed``; declaring entries
    are redirected to an absorbing sink appended after the ``m`` states.
    """
    has_declare = any(e[2] for e in entries)
    sink = m
    table = []
    for w, nxt, dec in entries:
        table.append((w, sink, True) if dec else (w, nxt, False))
    if has_declare:
        table.extend((o, sink, False) for o in range(q))
    return Controller(q, tuple(table), 0, None, None, name)


def _canonical_entries(m, q):
    """All BFS-numbered, fully reachable machines with exactly ``m`` states."""
    options = [DECLARE] + [(w, s) for w in range(q) for s in range(m)]
    out = []
    for choice in product(options, repeat=m * q):
        # breadth-first numbering: scanning states in order, new states must
        # appear as the next unused number
        seen = 1
        ok = True
        for e in choice:
            if e is DECLARE:
                continue
            s = e[1]
            if s > seen:
                ok = False
                break
            if s == seen:
                seen += 1
        if not ok or seen != m:
            continue
        if not _reaches_all(choice, m, q):
            continue
        out.append(choice)
    return out


def _reaches_all(choice, m, q):
    reached = {0}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for o in range(q):
            e = choice[s * q + o]
            if e is not DECLARE and e[1] not in reached:
                reached.add(e[1])
                queue.append(e[1])
    return len(reached) == m


def canonical_form(m, entries, q):
    """Relabel a raw machine into its canonical ``(m', entries')``.

    Unreachable states are dropped, the rest renumbered in breadth-first
    order, and declaring entries normalised to ``(0, 0, True)``.
    """
    order = {0: 0}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for o in range(q):
            w, nxt, dec = entries[s * q + o]
            if not dec and nxt not in order:
                order[nxt] = len(order)
                queue.append(nxt)
    inverse = sorted(order, key=order.get)
    out = []
    for s in inverse:
        for o in range(q):
            w, nxt, dec = entries[s * q + o]
            out.append((0, 0, True) if dec else (w, order[nxt], False))
    return len(order), tuple(out)


@dataclass(frozen=True)
class FiniteStrategySpace:
    n: int = 2
    r: int = 2
    q: int = 2
    memory: int = 1
    canonical: bool = False

    def __post_init__(self):
        if self.memory < 1:
            raise ValueError("memory bound must be positive")
        if self.memory > MAX_MEMORY:
            raise EnumerationBudgetError(
                f"memory bound {self.memory} exceeds the enumeration budget ({MAX_MEMORY})"
            )
        if self.n != 2:
            raise ValueError("enumeration covers two-prisoner games")

    @property
    def options_per_entry(self):
        return 2 * self.q * self.memory

    @cached_property
    def _canonical(self):
        machines = []
        for m in range(1, self.memory + 1):
            machines.extend((m, e) for e in _canonical_entries(m, self.q))
        return machines

    @cached_property
    def _canonical_index(self):
        return {mach: i for i, mach in enumerate(self._canonical)}

    @property
    def machine_count(self):
        if self.canonical:
            return len(self._canonical)
        return self.options_per_entry ** (self.memory * self.q)

    @property
    def pair_count(self):
        return self.machine_count ** 2

    def decode_machine(self, index):
        """Entries tuple for machine ``index`` (raw or canonical)."""
        if not 0 <= index < self.machine_count:
            raise IndexError(index)
        if self.canonical:
            m, choice = self._canonical[index]
            return m, tuple(
                (0, 0, True) if e is DECLARE else (e[0], e[1], False) for e in choice
            )
        q, m = self.q, self.memory
        entries = []
        for _ in range(m * q):
            index, opt = divmod(index, self.options_per_entry)
            dec, rest = divmod(opt, q * m)
            w, nxt = divmod(rest, m)
            entries.append((w, nxt, bool(dec)))
        return m, tuple(entries)

    def encode_machine(self, m, entries):
        if self.canonical:
            choice = tuple(DECLARE if dec else (w, nxt) for w, nxt, dec in entries)
            return self._canonical_index[(m, choice)]
        q = self.q
        index = 0
        for w, nxt, dec in reversed(entries):
            opt = int(dec) * q * m + w * m + nxt
            index = index * self.options_per_entry + opt
        return index

    def machine(self, index):
        m, entries = self.decode_machine(index)
        return machine_controller(entries, m, self.q, name=f"m{self.memory}#{index}")

    def pair(self, index):
        a, b = divmod(index, self.machine_count)
        return self.machine(a), self.machine(b)


def enumerate_strategies(space):
    """Yield ``(index, (controller_a, controller_b))`` over all ordered pairs."""
    machines = [space.machine(i) for i in range(space.machine_count)]
    M = len(machines)
    for a in range(M):
        for b in range(M):
            yield a * M + b, (machines[a], machines[b])


@dataclass
class PairResult:
    index: int
    verdict: str
    nodes: int
    counterexample_length: int

    def tsv(self):
        return f"{self.index}\t{self.verdict}\t{self.nodes}\t{self.counterexample_length}"


def _result(index, pair, space):
    v = verdict(list(pair), space.n, space.r, space.q)
    if isinstance(v, Unsafe):
        length = len(v.trace)
    elif isinstance(v, WardenFairLoop):
        length = len(v.prefix) + len(v.cycle)
    else:
        length = 0
    return PairResult(index, v.kind, v.nodes, length)


def _check_chunk(args):
    space, start, stop = args
    machines = [space.machine(i) for i in range(space.machine_count)]
    M = len(machines)
    out = []
    for idx in range(start, stop):
        a, b = divmod(idx, M)
        out.append(_result(idx, (machines[a], machines[b]), space))
    return out


def check_space(space, workers=1, chunk=2048, progress=None):
    """Model-check every ordered pair; yields :class:`PairResult` in index order."""
    total = space.pair_count
    chunks = [(space, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if workers <= 1:
        for c in chunks:
            results = _check_chunk(c)
            if progress:
                progress(c[2], total)
            yield from results
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for c, results in zip(chunks, pool.map(_check_chunk, chunks)):
            if progress:
                progress(c[2], total)
            yield from results


def progress_to_stderr(done, total):
    print(f"\r{done}/{total} pairs", end="" if done < total else "\n", file=sys.stderr)


__all__ = [
    "FiniteStrategySpace",
    "PairResult",
    "canonical_form",
    "check_space",
    "enumerate_strategies",
    "machine_controller",
]
