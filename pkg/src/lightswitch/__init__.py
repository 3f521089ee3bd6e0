"""Light-switch prisoner games: protocol notation, model checking, strategies."""
from .checker import Unsafe, WardenFairLoop, Win, explore, verdict
from .dsl import Controller, load_builtin, load_protocol, parse_protocol, compile_protocol
from .errors import (
    BudgetExceeded,
    InfeasibleError,
    LightswitchError,
    OpenProblemError,
    ProtocolError,
)
from .semantics import Configuration, Trace, initial_configuration

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "Configuration",
    "Controller",
    "InfeasibleError",
    "LightswitchError",
    "OpenProblemError",
    "ProtocolError",
    "Trace",
    "Unsafe",
    "WardenFairLoop",
    "Win",
    "compile_protocol",
    "explore",
    "initial_configuration",
    "load_builtin",
    "load_protocol",
    "parse_protocol",
    "verdict",
]
