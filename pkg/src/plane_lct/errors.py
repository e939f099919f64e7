"""Exception hierarchy. Every error carries a stable ``code`` used in CLI reports."""

from __future__ import annotations


class LctError(Exception):
    """Base class for all errors raised by the package."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def as_dict(self) -> dict:
        return {"code": self.code, "message": str(self)}


class ValidationError(LctError):
    pass


class MissingRoot(ValidationError):
    pass


class DanglingParent(ValidationError):
    pass


class InvalidSatellite(ValidationError):
    pass


class OrderViolation(ValidationError):
    pass


class InvalidPoint(ValidationError):
    pass


class UncoveredPoint(ValidationError):
    pass


class EmptyBranches(ValidationError):
    pass


class SameBranch(LctError):
    pass


class NonIntegralBeta(LctError):
    pass


class PointNotInF(LctError):
    pass


class NotInVLess(LctError):
    pass


class NoDistinguishedVertex(LctError):
    pass


class ExcludedInput(LctError):
    pass


class NotTwoBranches(LctError):
    pass


class EmptyIdeal(LctError):
    pass


class ZeroValuation(LctError):
    pass


class NotCoprime(LctError):
    pass


class BadOrder(LctError):
    pass


class GenerationFailed(LctError):
    pass


class MethodDisagreement(LctError):
    def __init__(self, message: str, values: dict | None = None):
        super().__init__(message)
        self.values = dict(values or {})

    def as_dict(self) -> dict:
        d = super().as_dict()
        d["values"] = {k: str(v) for k, v in self.values.items()}
        return d
