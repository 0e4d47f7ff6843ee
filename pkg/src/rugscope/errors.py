"""Exception types shared across the package."""
from __future__ import annotations


class RugscopeError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(RugscopeError):
    """A line of delimited input could not be decoded into a record."""

    def __init__(self, line_no: int, reason: str, source: str | None = None):
        self.line_no = line_no
        self.reason = reason
        self.source = source
        where = f"{source}:{line_no}" if source else f"line {line_no}"
        super().__init__(f"{where}: {reason}")


class MalformedEvent(RugscopeError):
    """A transfer event violates the sender/recipient rules."""


class ProjectMismatch(RugscopeError):
    """Records for more than one project address were mixed together."""


class EmptyTimeline(RugscopeError):
    """A timeline was requested for a project with no transfer events."""


class BeforeLaunch(RugscopeError):
    """A record predates the project's launch timestamp."""


class EmptySequence(RugscopeError):
    """An operation that needs at least one price point got none."""


class NoMint(RugscopeError):
    """Liveness is undefined for a project that never minted."""


class TooYoung(RugscopeError):
    """Liveness is undefined before the project is 60 days old."""


class NotApplicable(RugscopeError):
    """The check does not apply to this token standard."""


class MissingSupply(RugscopeError):
    """The project never declared a total supply."""


class EmptyReferenceList(RugscopeError):
    """Name matching needs at least one reference collection name."""


class CutoffBeforeLaunch(RugscopeError):
    """A feature cutoff earlier than the project launch is meaningless."""


class EmptyClass(RugscopeError):
    """A labeled dataset ended up with no positives or no negatives."""


class NonFinite(RugscopeError):
    """Training diverged: loss or parameters stopped being finite."""


class FoldTooSmall(RugscopeError):
    """A cross-validation fold is missing one of the classes."""


class DimensionMismatch(RugscopeError):
    """A feature vector's length does not match the model's."""


class SchemaMismatch(RugscopeError):
    """A persisted artifact does not match the expected schema."""


class StateCorrupt(RugscopeError):
    """The monitor state file exists but cannot be trusted."""


class InvalidCounts(RugscopeError):
    """The scenario request is empty, negative, or too short-lived."""
