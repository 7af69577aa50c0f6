"""Exception taxonomy shared by all rifs modules.

Three failure classes map onto the CLI exit codes: bad inputs (2),
exhausted resource budgets (3), and tripped internal invariants (4).
"""


class InputError(ValueError):
    """A caller-supplied value violates a documented precondition."""


class BudgetError(RuntimeError):
    """A configured resource budget was exceeded; the message names it."""


class InvariantError(RuntimeError):
    """An internal consistency check failed (a bug, not a usage error)."""
