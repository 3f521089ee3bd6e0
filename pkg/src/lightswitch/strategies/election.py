"""Symmetric leader election: the level race and the candidate protocol.

Both are written as pure step rules on abstract prisoner states so they can
be tabulated alone or embedded into larger composite controllers.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, gcd

from ..dsl.controller import build_controller
from ..errors import InfeasibleError
from .layout import SwitchLayout


def symmetric_feasible(n, r):
    """A symmetric winning strategy exists for some q iff gcd(n, r) == 1."""
    return gcd(n, r) == 1


def compute_km(n, r):
    """Smallest positive ``(k, m)`` with ``k * n == m * r - 1``."""
    if gcd(n, r) != 1:
        raise InfeasibleError(f"gcd({n}, {r}) = {gcd(n, r)}: k*n = m*r - 1 has no solution")
    if r == 1:
        return 1, n + 1
    k = (-pow(n, -1, r)) % r or r
    return k, (k * n + 1) // r


def race_target(n, r, level):
    """``(count, marked_only)`` for a prisoner racing at ``level``."""
    if r % level:
        return ceil(r / level), False
    return ceil(n / level), True


@dataclass(frozen=True)
class Race:
    """Level race among ``n`` prisoners in ``r`` rooms over an S x T switch.

    Prisoner state is ``(marked, level, successes)``.  By default the unique
    prisoner who reaches level 1 is the leader, so T takes values
    ``0..n-1``.  With ``finish_level_one`` the leader must also complete the
    level-1 target, which needs the extra T value ``n``.
    """

    n: int
    r: int
    finish_level_one: bool = False

    @property
    def t_size(self):
        return self.n + 1 if self.finish_level_one else self.n

    @property
    def layout(self):
        return SwitchLayout(("S", "T"), (2, self.t_size))

    @property
    def last_level(self):
        return 1 if self.finish_level_one else 2

    @property
    def initial(self):
        return (False, self.n, 0)

    def is_leader(self, state):
        return state[1] < self.last_level

    def step(self, state, S, T):
        marked, level, done = state
        if not marked and S == 0:
            S, marked = 1, True
        if level >= self.last_level:
            target, marked_only = race_target(self.n, self.r, level)
            if T <= self.n - level and (S == 1 or not marked_only):
                T = self.n - level + 1
                done += 1
                if done == target:
                    level, done = level - 1, 0
        return S, T, (marked, level, done)

    def labels(self, state):
        out = {f"level{state[1]}"}
        if state[0]:
            out.add("marked")
        if self.is_leader(state):
            out.add("leader")
        return out


@dataclass(frozen=True)
class Candidates:
    """Candidate selection for ``n > r``: exactly ``r - 1`` become Type II.

    Prisoner state is ``(type_one, raises, lowers)`` over an S x T pair of
    binary switches.  ``k`` raises of T are owed by everyone; Type I
    prisoners owe ``m`` lowerings and become Type II once they are done.
    """

    n: int
    r: int
    k: int
    m: int

    layout = SwitchLayout(("S", "T"), (2, 2))

    @property
    def initial(self):
        return (False, 0, 0)

    def is_type_two(self, state):
        return state[0] and state[2] == self.m

    def step(self, state, S, T):
        type_one, raises, lowers = state
        if not type_one and S == 0:
            S, type_one = 1, True
        # several moves per visit are allowed; stop once one direction is complete
        while True:
            moved = finished = False
            if raises < self.k and T == 0:
                T, raises, moved = 1, raises + 1, True
                finished = raises == self.k
            if type_one and lowers < self.m and T == 1:
                T, lowers, moved = 0, lowers + 1, True
                finished = finished or lowers == self.m
            if not moved or finished:
                break
        return S, T, (type_one, raises, lowers)

    def labels(self, state):
        out = set()
        if state[0]:
            out.add("type1")
        if self.is_type_two(state):
            out.add("type2")
        return out


@dataclass(frozen=True)
class SymmetricStrategy:
    """One controller shared by all prisoners, plus how its states decompose."""

    controller: object
    layout: SwitchLayout
    n: int
    r: int
    kind: str

    @property
    def q(self):
        return self.controller.q

    def controllers(self):
        return [self.controller] * self.n


def _check_coprime(n, r, strict):
    if strict and gcd(n, r) != 1:
        raise InfeasibleError(f"gcd({n}, {r}) = {gcd(n, r)} > 1: no symmetric strategy exists")


def race_rules(n, r, finish_level_one=False):
    return Race(n, r, finish_level_one)


def race_leader_election(n, r, *, finish_level_one=False, strict=True):
    """Symmetric controller electing a unique leader when ``r > n``.

    ``strict=False`` builds the controller outside its precondition, which
    is how the block-schedule experiments exercise it.
    """
    _check_coprime(n, r, strict)
    if strict and not r > n >= 2:
        raise InfeasibleError(f"race needs r > n >= 2 (got n={n}, r={r})")
    race = Race(n, r, finish_level_one)
    layout = race.layout

    def step(state, obs):
        S, T = layout.decode(obs)
        S, T, state = race.step(state, S, T)
        return layout.encode(S, T), state, False

    c = build_controller(race.initial, step, layout.size, race.labels, name=f"race(n={n},r={r})")
    return SymmetricStrategy(c, layout, n, r, "race")


def candidate_rules(n, r, strict=True):
    if gcd(n, r) == 1:
        k, m = compute_km(n, r)
    elif strict:
        raise InfeasibleError(f"gcd({n}, {r}) > 1: no (k, m) exists")
    else:
        k, m = 1, ceil(n / r)
    return Candidates(n, r, k, m)


def candidate_leader(n, r, *, strict=True):
    """Symmetric controller after which exactly ``r - 1`` prisoners are Type II."""
    _check_coprime(n, r, strict)
    if strict and not n > r >= 2:
        raise InfeasibleError(f"candidate protocol needs n > r >= 2 (got n={n}, r={r})")
    cand = candidate_rules(n, r, strict)
    layout = cand.layout

    def step(state, obs):
        S, T = layout.decode(obs)
        S, T, state = cand.step(state, S, T)
        return layout.encode(S, T), state, False

    c = build_controller(
        cand.initial, step, layout.size, cand.labels, name=f"candidates(n={n},r={r})"
    )
    return SymmetricStrategy(c, layout, n, r, "candidates")


def candidate_race_election(n, r, *, strict=True):
    """Leader election for ``n > r``: candidates, then a race among them.

    The ``r - 1`` Type II prisoners race on an extra S x T switch that
    everybody else ignores.  With ``r == 2`` the single candidate leads.
    """
    _check_coprime(n, r, strict)
    cand = candidate_rules(n, r, strict)
    pool = r - 1
    race = Race(pool, r) if pool >= 2 else None
    if race is None:
        layout = SwitchLayout(("S", "T"), (2, 2))
    else:
        layout = SwitchLayout(("S", "T", "S2", "T2"), (2, 2, 2, race.t_size))

    def leader(state):
        cs, rs = state
        if not cand.is_type_two(cs):
            return False
        return race is None or race.is_leader(rs)

    def step(state, obs):
        parts = layout.decode(obs)
        cs, rs = state
        S, T, cs = cand.step(cs, parts[0], parts[1])
        if race is None:
            return layout.encode(S, T), (cs, rs), False
        S2, T2 = parts[2], parts[3]
        if cand.is_type_two(cs):
            S2, T2, rs = race.step(rs, S2, T2)
        return layout.encode(S, T, S2, T2), (cs, rs), False

    def labels(state):
        out = cand.labels(state[0])
        if leader(state):
            out.add("leader")
        return out

    initial = (cand.initial, race.initial if race else None)
    c = build_controller(initial, step, layout.size, labels, name=f"candidate-race(n={n},r={r})")
    return SymmetricStrategy(c, layout, n, r, "candidate-race")
