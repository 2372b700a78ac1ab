"""Shared error types.

Everything that is a rule-of-the-domain violation derives from DomainError so
the CLI can map it to one exit code; genuine I/O trouble stays OSError.
"""


class DomainError(Exception):
    """A domain rule was violated (CLI exit code 3)."""


class EncodingOverflow(DomainError):
    """Machine does not fit the instruction-table field widths."""


class MalformedCode(DomainError):
    """Bitstring is not a valid self-delimiting program code."""


class HorizonUncovered(DomainError):
    """A measure was requested beyond what the schedule decides."""


class KraftViolation(DomainError):
    """Code lengths are inconsistent with any prefix-free set."""


class DyadicGroundTruth(DomainError):
    """Exact threshold counting needs a ground truth that is not b-adic."""


class NotExact(DomainError):
    """Digits were requested from a lower-bound threshold record."""


class InconsistentOracle(DomainError):
    """Solvability oracle answers violate downward monotonicity."""


class IndexOutOfRange(DomainError):
    """Program index outside the enumerated range."""


class MissingVariable(DomainError):
    """Assignment does not cover every variable of the family."""


class UnknownParameter(DomainError):
    """Named parameter does not exist in the family."""


class UnsupportedInstruction(DomainError):
    """Machine exceeds what the compiler supports."""


class InvalidTrace(DomainError):
    """Trace rows do not follow from the machine semantics."""


class NonVerifyingWitness(DomainError):
    """Witness fails the equation system; nothing to decode."""


class ScheduleFormatError(DomainError):
    """Schedule file does not parse."""


class FamilyFormatError(DomainError):
    """Equation family file does not parse."""
