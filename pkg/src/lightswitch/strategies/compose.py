"""Strategy combinators."""
from __future__ import annotations

from ..dsl.controller import Controller, build_controller
from ..errors import ControllerError


def sequential_compose(a: Controller, b: Controller) -> Controller:
    """One prisoner acting as ``a`` and then as ``b`` on every visit.

    ``b`` sees the state ``a`` wrote.  The composite declares if either part
    declares on its sub-step.
    """
    if a.q != b.q:
        raise ControllerError(f"q mismatch: {a.q} != {b.q}")
    q = a.q

    def step(state, obs):
        sa, sb = state
        w1, na, d1 = a.table[sa * q + obs]
        w2, nb, d2 = b.table[sb * q + w1]
        return w2, (na, nb), d1 or d2

    def labels(state):
        sa, sb = state
        return {f"a:{x}" for x in a.labels[sa]} | {f"b:{x}" for x in b.labels[sb]}

    return build_controller(
        (a.initial, b.initial), step, q, labels, name=f"({a.name};{b.name})"
    )


def leader_wins_compose(election, q_base, plugin, n, r):
    """Run ``election`` on states below ``q_base``, then ``plugin`` above.

    The prisoner whose election state gets the ``leader`` label promotes
    ``r`` rooms from election states to ``q_base`` and then runs the plugin
    leader.  Anybody else who meets a plugin state becomes a follower and
    ignores election states from then on.
    """
    if election.q != q_base:
        raise ControllerError(f"election uses q={election.q}, expected {q_base}")
    lead, follow = plugin.leader, plugin.follower
    pq = plugin.q
    q = q_base + pq

    def step(state, obs):
        mode, s = state
        if mode == "elect":
            if obs >= q_base:
                w, nxt, dec = follow.table[follow.initial * pq + obs - q_base]
                return q_base + w, ("follow", nxt), dec
            w, nxt, dec = election.table[s * q_base + obs]
            if "leader" in election.labels[nxt]:
                return w, ("promote", 0), dec
            return w, ("elect", nxt), dec
        if mode == "promote":
            if obs >= q_base:
                return obs, state, False
            if s + 1 == r:
                return q_base, ("lead", lead.initial), False
            return q_base, ("promote", s + 1), False
        c = lead if mode == "lead" else follow
        if obs < q_base:
            return obs, state, False
        w, nxt, dec = c.table[s * pq + obs - q_base]
        return q_base + w, (mode, nxt), dec

    def labels(state):
        mode, s = state
        if mode == "elect":
            return set(election.labels[s]) - {"leader"}
        if mode == "follow":
            return {"follower"}
        return {"leader", mode}

    return build_controller(
        ("elect", election.initial), step, q, labels, name=f"leader-wins(n={n},r={r})"
    )
