from typing import Optional


class VosError(Exception):
    """Base error of the toolkit"""


class DomainError(VosError, ValueError):
    """Input violates the precondition or hypothesis of an operation"""


class SizeError(VosError):
    """Result is too large to materialize; carries its exact size"""

    def __init__(self, message: str, count: Optional[int] = None, exponent: Optional[int] = None):
        super().__init__(message)
        self.count = count
        self.exponent = exponent


class NotADifferenceSetError(DomainError):
    """Difference counts are not constant on the nonzero residues"""

    def __init__(self, message: str, residue: int, occurrences: int):
        super().__init__(message)
        self.residue = residue
        self.occurrences = occurrences


class InconsistentCongruencesError(DomainError):
    """A system of required congruences has no common solution"""
