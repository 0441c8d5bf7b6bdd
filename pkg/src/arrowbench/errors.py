"""Exception hierarchy shared by every module.

Exit-code mapping used by the CLI: InputError -> 2, ResourceLimitExceeded -> 3.
Everything else propagating out of a decider is a bug.
"""


class ArrowbenchError(Exception):
    """Base class for all package errors."""


class InputError(ArrowbenchError):
    """Malformed user input (files, flags, inconsistent parameters)."""


class ParseError(InputError):
    """Syntax error in a structure / age / coloring / certificate file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


class SignatureMismatch(InputError):
    """Operands do not share the signature the operation requires."""


class PreconditionFailure(ArrowbenchError):
    """A decider's recorded precondition was not established.

    Raised e.g. when a stability-restricted arrow is asked about a pair
    that has a known unstable witness, or when a proximality-restricted
    witness search is given an unverified coloring.
    """


class ResourceLimitExceeded(ArrowbenchError):
    """A bounded search ran out of its node/candidate budget.

    Deliberately distinct from a negative result: an exhausted budget
    must never masquerade as a refutation.
    """

    def __init__(self, message: str, budget: int | None = None):
        self.budget = budget
        super().__init__(message)


class CertificateError(ArrowbenchError):
    """A certificate failed to parse, or its input digests do not match."""
