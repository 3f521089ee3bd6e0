from __future__ import annotations

from math import gcd

from ..errors import InfeasibleError
from .compose import leader_wins_compose
from .election import (
    SymmetricStrategy,
    candidate_race_election,
    race_leader_election,
)
from .layout import SwitchLayout
from .plugin import leader_phase_plugin


def full_symmetric_strategy(n, r, *, strict=True, plugin=None):
    """Symmetric winning controller for coprime ``n, r >= 2``.

    ``r > n`` elects by race, ``n > r`` by candidates followed by a race
    among them; the leader then drives the four-state plugin.  With
    ``strict=False`` non-coprime pairs are built anyway (race when
    ``r >= n``) so they can be run against the block schedule.
    """
    if strict:
        if gcd(n, r) != 1:
            raise InfeasibleError(
                f"gcd({n}, {r}) = {gcd(n, r)} > 1: no symmetric winning strategy for any q"
            )
        if n < 2 or r < 2:
            raise InfeasibleError("full symmetric strategy needs n >= 2 and r >= 2")
    if r >= n:
        election = race_leader_election(n, r, strict=False)
    else:
        election = candidate_race_election(n, r, strict=False)
    plugin = plugin or leader_phase_plugin(n, r)
    base = election.layout
    c = leader_wins_compose(election.controller, base.size, plugin, n, r)
    layout = SwitchLayout(("election", "plugin"), (base.size, plugin.q))
    return SymmetricStrategy(c, layout, n, r, f"full/{election.kind}")


def election_state_count(n, r):
    """Room states used by the election stage of the full strategy."""
    if r > n:
        return 2 * n
    return 8 * (r - 1) if r > 2 else 4
