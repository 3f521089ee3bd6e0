"""Warden side: schedulers, block-schedule checks, strategy enumeration."""
from .block import BlockReport, check_block_invariant
from .enumeration import (
    FiniteStrategySpace,
    PairResult,
    check_space,
    enumerate_strategies,
    machine_controller,
)
from .schedulers import (
    DETERMINISTIC_FAIR,
    FAIR_ALMOST_SURELY,
    BlockScheduler,
    RandomFairScheduler,
    RoundRobinScheduler,
    Scheduler,
    block_scheduler,
    random_fair_scheduler,
    round_robin_scheduler,
)
from .simulate import Outcome, Simulation, simulate

__all__ = [
    "BlockReport",
    "BlockScheduler",
    "DETERMINISTIC_FAIR",
    "FAIR_ALMOST_SURELY",
    "FiniteStrategySpace",
    "Outcome",
    "PairResult",
    "RandomFairScheduler",
    "RoundRobinScheduler",
    "Scheduler",
    "Simulation",
    "block_scheduler",
    "check_block_invariant",
    "check_space",
    "enumerate_strategies",
    "machine_controller",
    "random_fair_scheduler",
    "round_robin_scheduler",
    "simulate",
]
