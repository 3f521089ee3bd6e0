"""Protocol notation: parsing, compilation and a reference interpreter."""
from importlib import resources

from .ast import (
    Declare,
    Flip,
    FlipAny,
    ProtocolSource,
    Repeat,
    See,
    WithoutSeeing,
    format_instructions,
    format_protocol,
    walk,
)
from .compiler import compile_instructions, compile_protocol
from .controller import Controller, build_controller, noop_controller, step_controller
from .interpreter import TreeInterpreter
from .parser import parse_protocol

BUILTIN_PROTOCOLS = ("alice", "bob", "charles", "deborah", "deborah_eve")


def builtin_text(name):
    if name not in BUILTIN_PROTOCOLS:
        raise KeyError(f"unknown built-in protocol {name!r}")
    return resources.files(__package__).joinpath("protocols", f"{name}.wsp").read_text("utf-8")


def load_protocol(text, r, q, n=None, name=""):
    """Parse and compile in one go."""
    source = parse_protocol(text, {"r": r, "n": n, "q": q}, name=name)
    return compile_protocol(source)


def load_builtin(name, r, q=3, n=None):
    return load_protocol(builtin_text(name), r, q, n, name)


__all__ = [
    "BUILTIN_PROTOCOLS",
    "Controller",
    "Declare",
    "Flip",
    "FlipAny",
    "ProtocolSource",
    "Repeat",
    "See",
    "TreeInterpreter",
    "WithoutSeeing",
    "build_controller",
    "builtin_text",
    "compile_instructions",
    "compile_protocol",
    "format_instructions",
    "format_protocol",
    "load_builtin",
    "load_protocol",
    "noop_controller",
    "parse_protocol",
    "step_controller",
    "walk",
]
