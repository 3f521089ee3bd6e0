"""Exception hierarchy shared by every lightswitch module."""


class LightswitchError(Exception):
    """Base class for all errors raised by this package."""


class ProtocolError(LightswitchError):
    """A protocol text could not be turned into an instruction tree."""


class ProtocolSyntaxError(ProtocolError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class MissingOtherwiseError(ProtocolSyntaxError):
    pass


class StateIndexError(ProtocolError):
    pass


class RepeatCountError(ProtocolError):
    pass


class UnboundSymbolError(ProtocolError):
    pass


class ControllerError(LightswitchError):
    """A transition table violates a controller invariant."""


class ConfigurationError(LightswitchError):
    """Bad initial state, or an event applied to a finished game."""


class BudgetExceeded(LightswitchError):
    def __init__(self, budget, nodes):
        self.budget = budget
        self.nodes = nodes
        super().__init__(f"node budget {budget} exceeded after {nodes} nodes")


class InfeasibleError(LightswitchError):
    """The requested (n, r) instance has no strategy of the requested kind."""


class OpenProblemError(InfeasibleError):
    """The instance is an open problem; no strategy is shipped for it."""


class NotSymmetricError(LightswitchError):
    pass
