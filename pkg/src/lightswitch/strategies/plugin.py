"""Four-state leader-phase protocol: one leader, identical followers.

All rooms start in state 0.  The leader runs ``n - 1`` rounds.  Each round
the leader exposes a single token (state 1) while every other room is 0.
The first unfinished follower to find the token claims it (1 -> 2) and then
turns the remaining ``r - 1`` rooms from 0 to 2, so it has entered every
room.  The leader retires rooms 2 -> 3; it can do that ``r`` times only once
every room has reached 2, i.e. once the claimant is done.  Between rounds
the leader resets the 3s to 0, placing the next token last.  After the last
retirement of round ``n - 1`` the leader declares.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..dsl.controller import build_controller

IDLE, TOKEN, CLAIMED, RETIRED = range(4)


@dataclass(frozen=True)
class LeaderPhasePlugin:
    n: int
    r: int
    leader: object
    follower: object
    q: int = 4


def _leader_step(n, r):
    rounds = n - 1

    def step(state, obs):
        phase, rnd, cnt = state
        if phase == "token":
            if obs == IDLE:
                return TOKEN, ("collect", rnd, 0), False
            return obs, state, False
        if phase == "collect":
            if obs == CLAIMED:
                cnt += 1
                if cnt < r:
                    return RETIRED, ("collect", rnd, cnt), False
                if rnd == rounds:
                    return RETIRED, ("done", rnd, 0), True
                return RETIRED, ("reset", rnd + 1, 0), False
            return obs, state, False
        if phase == "reset":
            if obs == RETIRED:
                if cnt < r - 1:
                    return IDLE, ("reset", rnd, cnt + 1), False
                return TOKEN, ("collect", rnd, 0), False
            return obs, state, False
        return obs, state, False

    return step


def _follower_step(r):
    def step(state, obs):
        phase, left = state
        if phase == "idle" and obs == TOKEN:
            return CLAIMED, (("active", r - 1) if r > 1 else ("done", 0)), False
        if phase == "active" and obs == IDLE:
            left -= 1
            return CLAIMED, (("active", left) if left else ("done", 0)), False
        return obs, state, False

    return step


def leader_phase_plugin(n, r):
    if n < 2 or r < 1:
        raise ValueError("plugin needs n >= 2 and r >= 1")
    leader = build_controller(
        ("token", 1, 0), _leader_step(n, r), 4, lambda st: {"leader", st[0]}, name="plugin-leader"
    )
    follower = build_controller(
        ("idle", 0), _follower_step(r), 4, lambda st: {st[0]}, name="plugin-follower"
    )
    return LeaderPhasePlugin(n, r, leader, follower)
