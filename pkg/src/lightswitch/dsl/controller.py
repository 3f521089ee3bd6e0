"""Deterministic finite-state transducers driving a single prisoner."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable

from ..errors import ControllerError


@dataclass(frozen=True)
class Controller:
    """Transition table ``(control state, observed) -> (write, next, declares)``.

    ``table`` is flat, indexed by ``state * q + observed``.  ``labels`` holds
    one frozenset of flag names per control state (e.g. ``"leader"``), and
    ``lines`` the listing line each state came from, 0 when not applicable.
    """

    q: int
    table: tuple
    initial: int = 0
    labels: tuple = None
    lines: tuple = None
    name: str = ""
    _absorbing: frozenset = field(default=frozenset(), compare=False, repr=False)

    def __post_init__(self):
        q = self.q
        if q < 1:
            raise ControllerError("q must be positive")
        if len(self.table) % q:
            raise ControllerError("table length is not a multiple of q")
        size = len(self.table) // q
        if size == 0:
            raise ControllerError("controller has no states")
        if not 0 <= self.initial < size:
            raise ControllerError(f"initial state {self.initial} out of range")
        for w, nxt, _ in self.table:
            if not 0 <= w < q:
                raise ControllerError(f"write {w} outside [0, {q - 1}]")
            if not 0 <= nxt < size:
                raise ControllerError(f"next state {nxt} out of range")
        absorbing = set()
        for i, (_, nxt, dec) in enumerate(self.table):
            if dec:
                absorbing.add(nxt)
        for s in absorbing:
            for obs in range(q):
                if self.table[s * q + obs] != (obs, s, False):
                    raise ControllerError(
                        f"state {s} is entered by a declaration but is not absorbing"
                    )
        if self.labels is None:
            object.__setattr__(self, "labels", (frozenset(),) * size)
        elif len(self.labels) != size:
            raise ControllerError("labels length does not match state count")
        if self.lines is None:
            object.__setattr__(self, "lines", (0,) * size)
        object.__setattr__(self, "_absorbing", frozenset(absorbing))

    @property
    def num_states(self):
        return len(self.table) // self.q

    def step(self, state, observed):
        return self.table[state * self.q + observed]

    @property
    def declared_states(self):
        """States entered by a declaring transition."""
        return self._absorbing

    def is_absorbing(self, state):
        """True when the state writes back every observation and never moves."""
        if state in self._absorbing:
            return True
        q = self.q
        return all(self.table[state * q + o] == (o, state, False) for o in range(q))

    def has_label(self, state, label):
        return label in self.labels[state]

    def renamed(self, name):
        return Controller(self.q, self.table, self.initial, self.labels, self.lines, name)


def step_controller(c, s, observed):
    """One visit: returns ``(write, next control state, declares)``."""
    return c.table[s * c.q + observed]


def noop_controller(q, name="noop"):
    return Controller(q, tuple((o, 0, False) for o in range(q)), name=name)


_DECLARED = ("__declared__",)


def build_controller(
    initial: Hashable,
    step: Callable,
    q: int,
    label_fn: Callable | None = None,
    name: str = "",
    max_states: int = 1_000_000,
) -> Controller:
    """Tabulate a controller from an abstract step function.

    ``step(state, observed)`` returns ``(write, next_state, declares)`` on
    hashable abstract states.  Only states reachable from ``initial`` are
    materialised; every declaring transition leads to one shared absorbing
    sink, so whatever ``next_state`` a declaring step returns is ignored.
    """
    index = {initial: 0}
    order = [initial]
    queue = deque([initial])
    rows = {}
    sink = None
    while queue:
        st = queue.popleft()
        row = []
        for obs in range(q):
            w, nxt, dec = step(st, obs)
            if dec:
                if sink is None:
                    sink = _DECLARED
                    index[sink] = len(order)
                    order.append(sink)
                nxt = sink
            elif nxt not in index:
                if len(order) >= max_states:
                    raise ControllerError(f"more than {max_states} control states")
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            row.append((w, index[nxt], bool(dec)))
        rows[st] = row
    table = []
    for st in order:
        if st is _DECLARED:
            table.extend((o, index[st], False) for o in range(q))
        else:
            table.extend(rows[st])
    labels = None
    if label_fn is not None:
        labels = tuple(
            frozenset({"declared"}) if st is _DECLARED else frozenset(label_fn(st))
            for st in order
        )
    return Controller(q, tuple(table), 0, labels, None, name)
