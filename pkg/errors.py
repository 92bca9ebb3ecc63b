"""
Exception hierarchy shared by every module.
"""
from typing import Any, Optional


class AnyonError(Exception):
    """Base class; `context` carries structured witness data."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.context = context


# Input errors (CLI exit code 2, HTTP 400)

class GroupError(AnyonError):
    pass


class NotLatinSquare(GroupError):
    pass


class NonAssociative(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class GroupTooLarge(GroupError):
    pass


class UnknownLabel(AnyonError):
    pass


class VacuumForbidden(AnyonError):
    pass


class UnknownTheory(AnyonError):
    pass


# Consistency errors (signal bugs or inconsistent data)

class OrthogonalityFailure(AnyonError):
    pass


class NonIntegerMultiplicity(AnyonError):
    pass


class NotUnitary(AnyonError):
    pass


class NonIntegerFusion(AnyonError):
    pass


class NegativeFusion(AnyonError):
    pass


class AttributionMismatch(AnyonError):
    pass


# Protocol outcomes

class ReconstructionFailed(AnyonError):
    pass


class NonCommutingFusion(ReconstructionFailed):
    pass


class NonVanishingComplement(AnyonError):
    pass


class ScriptStepFailed(AnyonError):
    def __init__(self, message: str, step_index: int, diff: Optional[str] = None, **context: Any):
        super().__init__(message, step_index=step_index, diff=diff, **context)
        self.step_index = step_index
        self.diff = diff


class NoValidTheory(AnyonError):
    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


INPUT_ERRORS = (GroupError, UnknownLabel, VacuumForbidden, UnknownTheory)
