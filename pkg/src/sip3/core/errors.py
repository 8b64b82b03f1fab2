"""Exception hierarchy shared by the library, the CLI and the HTTP surface."""

from __future__ import annotations


class Sip3Error(Exception):
    """Base class; the CLI turns these into exit code 2."""


class ConfigError(Sip3Error, RuntimeError):
    pass


class GraphError(Sip3Error, ValueError):
    pass


class GraphFormatError(GraphError):
    def __init__(self, message: str, *, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PreconditionError(Sip3Error, ValueError):
    pass


class HostTooLarge(PreconditionError):
    pass


class MinorBudgetExceeded(Sip3Error, RuntimeError):
    def __init__(self, budget: int, nodes: int) -> None:
        self.budget = budget
        self.nodes = nodes
        super().__init__(f"minor search budget exhausted after {nodes} nodes (budget {budget})")


class LinkageError(Sip3Error, ValueError):
    pass


class LinkageInfeasible(LinkageError):
    pass


class CertificateError(Sip3Error, RuntimeError):
    pass


class InvariantViolation(Sip3Error, AssertionError):
    """Two independent routes disagreed. Always a bug, never a verdict."""


class UsageError(Sip3Error, ValueError):
    """Bad command line (unknown flag, missing argument)."""
