"""Built-in controllers and strategy combinators."""
from .compose import leader_wins_compose, sequential_compose
from .election import (
    Candidates,
    Race,
    SymmetricStrategy,
    candidate_leader,
    candidate_race_election,
    candidate_rules,
    compute_km,
    race_leader_election,
    race_rules,
    race_target,
    symmetric_feasible,
)
from .layout import SwitchLayout
from .plugin import LeaderPhasePlugin, leader_phase_plugin
from .suites import five_prisoner_suite, four_prisoner_suite, three_state_suite
from .symmetric import election_state_count, full_symmetric_strategy

SYMMETRIC_BUILTINS = ("race", "candidates", "full_symmetric")

__all__ = [
    "Candidates",
    "LeaderPhasePlugin",
    "Race",
    "SYMMETRIC_BUILTINS",
    "SwitchLayout",
    "SymmetricStrategy",
    "candidate_leader",
    "candidate_race_election",
    "candidate_rules",
    "compute_km",
    "election_state_count",
    "five_prisoner_suite",
    "four_prisoner_suite",
    "full_symmetric_strategy",
    "leader_phase_plugin",
    "leader_wins_compose",
    "race_leader_election",
    "race_rules",
    "race_target",
    "sequential_compose",
    "symmetric_feasible",
    "three_state_suite",
]
