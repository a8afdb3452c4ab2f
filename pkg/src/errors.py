"""
Error hierarchy for etalg.

Every failure raised by the library derives from EtalgError, which carries
the process exit code the CLI reports for it:

- 1: validation failure (the input is well-formed but violates an invariant)
- 2: schema error (malformed JSON or wrong field types)
- 3: internal assertion (a construction produced something that failed its own audit)
"""

from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SCHEMA = 2
EXIT_INTERNAL = 3


class EtalgError(ValueError):
    """Base class for all etalg errors."""

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        payload = {'error': type(self).__name__, 'message': self.message}
        payload.update({k: v for k, v in self.details.items() if v is not None})
        return payload


class SchemaError(EtalgError):
    """Malformed JSON input; `pointer` is the JSON pointer of the offending value."""

    exit_code = EXIT_SCHEMA

    def __init__(self, message: str, pointer: str = "", **details: Any):
        super().__init__(message, pointer=pointer or "/", **details)
        self.pointer = pointer or "/"


class InvalidPresentationError(EtalgError):
    """A presentation violates its structural invariants."""

    def __init__(self, message: str, violations: Optional[list] = None):
        super().__init__(message, violations=violations)
        self.violations = violations or []


class UnitalMismatchError(EtalgError):
    """Direct sum of a unital and a non-unital presentation."""


class NotClosedError(EtalgError):
    """A set fails the closed-subset invariants."""


class EmptySetError(EtalgError):
    """An operation needs a nonempty closed set."""


class ConstraintError(EtalgError):
    """Test-function parameters violate their constraints."""


class TaggedInputError(EtalgError):
    """A matrix-unit tagged test function was used where eigenvalue lists are needed."""


class DomainError(EtalgError):
    """A point or track lies outside the domain of a pattern."""


class SizeMismatchError(EtalgError):
    """Spectra or eigenvalue lists with different total sizes were compared."""


class PairingError(EtalgError):
    """No monotone matching covers the core spectral points."""


class ZeroLengthError(EtalgError):
    """A monotone surjection was requested for a set of total length zero."""


class PreconditionError(EtalgError):
    """A documented precondition of an operation does not hold."""


class BridgeHypothesisError(EtalgError):
    """A test function violates the almost-commutation hypothesis of the unitary bridge."""


class SingularPolarError(EtalgError):
    """The block-diagonal part may be singular because n^2 * eps' >= 1."""


class NotInjectiveError(EtalgError):
    """A pattern expected to be injective misses part of its source spectrum."""


class ZeroMapError(EtalgError):
    """A pattern has empty support."""


class DeltaSearchError(EtalgError):
    """The delta search exhausted its halvings without passing the audits."""

    exit_code = EXIT_INTERNAL


class StageError(EtalgError):
    """A chain rewrite step failed; wraps the cause with its stage index."""

    def __init__(self, stage: int, cause: EtalgError):
        super().__init__(f"stage {stage}: {cause.message}", stage=stage, cause=cause.to_dict())
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code


class InternalAssertionError(EtalgError):
    """A construction failed its own audit."""

    exit_code = EXIT_INTERNAL
