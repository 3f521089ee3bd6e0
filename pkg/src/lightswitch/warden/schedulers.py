"""Schedulers: the warden's side of the game."""
from __future__ import annotations

import random
from itertools import permutations
from math import gcd

from ..errors import InfeasibleError
from ..semantics import ScheduleEvent

DETERMINISTIC_FAIR = "deterministic-fair"
FAIR_ALMOST_SURELY = "fair-almost-surely"


class Scheduler:
    """Chooses the next (prisoner, room) visit.

    ``next(trace, cfg)`` may inspect the trace so far and the current
    configuration.  Oblivious schedulers ignore both; simulation then feeds
    them ``None`` to stay fast.
    """

    fairness = DETERMINISTIC_FAIR
    oblivious = True

    def __init__(self, n, r):
        self.n, self.r = n, r
        self.t = 0

    def next(self, trace=None, cfg=None):
        p, j = self.pair(self.t)
        ev = ScheduleEvent(self.t, p, j)
        self.t += 1
        return ev

    def pair(self, t):
        raise NotImplementedError

    def events(self, steps):
        return [self.next() for _ in range(steps)]


class RoundRobinScheduler(Scheduler):
    """Cycles through all ``n * r`` pairs, prisoner-major."""

    @property
    def period(self):
        return self.n * self.r

    def pair(self, t):
        k = t % (self.n * self.r)
        return divmod(k, self.r)


class RandomFairScheduler(Scheduler):
    """Independent uniform choice of a pair each step; fair with probability 1."""

    fairness = FAIR_ALMOST_SURELY

    def __init__(self, n, r, seed=0):
        super().__init__(n, r)
        self.seed = seed
        self._rng = random.Random(seed)

    def next(self, trace=None, cfg=None):
        p, j = divmod(self._rng.randrange(self.n * self.r), self.r)
        ev = ScheduleEvent(self.t, p, j)
        self.t += 1
        return ev


class BlockScheduler(Scheduler):
    """Moves size-``d`` blocks of prisoners into size-``d`` blocks of rooms.

    With ``d = gcd(n, r)``, at step ``t`` let ``l = t // d`` and
    ``k = t % d`` (0-based residues).  Prisoner ``i*d + k`` enters room
    ``j*d + sigma_l(k)`` where ``i = l % (n/d)`` and ``j = l % (r/d)``.
    Since ``n/d`` and ``r/d`` are coprime, ``l % (n/d * r/d)`` runs over
    every ``(i, j)``; ``sigma_l`` cycles through all permutations of
    ``range(d)`` once per such sweep, so every pair recurs forever.
    """

    def __init__(self, n, r, perms=None):
        super().__init__(n, r)
        d = gcd(n, r)
        if d == 1:
            raise InfeasibleError(f"gcd({n}, {r}) = 1: block schedule needs a common factor")
        self.d = d
        self.perms = list(perms) if perms is not None else list(permutations(range(d)))

    @property
    def period(self):
        d = self.d
        return (self.n // d) * (self.r // d) * len(self.perms) * d

    def sigma(self, block):
        sweep = (self.n // self.d) * (self.r // self.d)
        return self.perms[(block // sweep) % len(self.perms)]

    def pair(self, t):
        d = self.d
        block, k = divmod(t, d)
        i = block % (self.n // d)
        j = block % (self.r // d)
        return i * d + k, j * d + self.sigma(block)[k]


def round_robin_scheduler(n, r):
    return RoundRobinScheduler(n, r)


def random_fair_scheduler(n, r, seed=0):
    return RandomFairScheduler(n, r, seed)


def block_scheduler(n, r, permutation_source=None):
    return BlockScheduler(n, r, permutation_source)
