"""Exception hierarchy shared by every selab module."""

from __future__ import annotations


class SelabError(Exception):
    """Base class for all errors raised by selab."""


class InputError(SelabError, ValueError):
    """Arguments are out of range, mismatched, or otherwise malformed."""


class ValidationError(SelabError, ValueError):
    """A structure failed one of its axioms.

    ``axiom`` names the violated law and ``witness`` holds the offending
    indices, e.g. the triple ``(a, b, c)`` for associativity.
    """

    def __init__(self, axiom: str, witness: tuple = (), detail: str = ""):
        self.axiom = axiom
        self.witness = tuple(witness)
        msg = f"{axiom} fails at {self.witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class CapacityError(SelabError):
    """A brute-force operation would exceed its configured size bound."""

    def __init__(self, what: str, size: int, bound: int):
        self.what = what
        self.size = size
        self.bound = bound
        super().__init__(f"{what}: size {size} exceeds bound {bound} (pass a larger bound or force=True)")


class ConsistencyError(SelabError, AssertionError):
    """Two independent computations of the same object disagree."""
