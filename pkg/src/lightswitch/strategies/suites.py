"""Three-state protocol suites for up to five prisoners."""
from __future__ import annotations

from ..dsl import builtin_text, load_protocol
from ..errors import InfeasibleError, OpenProblemError

SUITE_NAMES = ("alice", "bob", "charles", "deborah")


def four_prisoner_suite(r, q=3):
    """Alice, Bob, Charles and Deborah; all rooms must start in state 0."""
    if r < 3:
        raise InfeasibleError(
            f"r={r}: the two-room case needs a different strategy; "
            "the one-room case is the folklore single-switch game"
        )
    return [load_protocol(builtin_text(name), r, q, name=name) for name in SUITE_NAMES]


def three_state_suite(n, r, q=3):
    """The four-prisoner suite truncated to ``n`` prisoners.

    For ``n < 4`` the last kept prisoner gets a trailing ``declare``.
    """
    if not 2 <= n <= 4:
        raise InfeasibleError(f"n={n}: suite covers 2 <= n <= 4")
    if n == 4:
        return four_prisoner_suite(r, q)
    if r < 3:
        raise InfeasibleError(f"r={r}: suite needs r >= 3")
    out = []
    for i, name in enumerate(SUITE_NAMES[:n]):
        text = builtin_text(name)
        if i == n - 1:
            text += "declare\n"
            name += "+declare"
        out.append(load_protocol(text, r, q, name=name))
    return out


def five_prisoner_suite(r, q=3):
    """Alice, Bob, Charles, then Deborah and Eve sharing one protocol."""
    if r == 3:
        raise OpenProblemError("five prisoners with three rooms and three states is an open problem")
    if r < 3:
        raise InfeasibleError(f"r={r}: suite needs r >= 4")
    base = [load_protocol(builtin_text(name), r, q, name=name) for name in SUITE_NAMES[:3]]
    de = load_protocol(builtin_text("deborah_eve"), r, q, name="deborah_eve")
    return base + [de, de.renamed("eve")]
