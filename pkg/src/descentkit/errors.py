"""Exception hierarchy and the violation report shared by all validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class DescentKitError(Exception):
    """Base class for every error raised by descentkit."""


# exact arithmetic
class NonPrimeModulus(DescentKitError, ValueError):
    pass


class DivisionByZero(DescentKitError, ZeroDivisionError):
    pass


class FieldMismatch(DescentKitError, TypeError):
    pass


class DimensionMismatch(DescentKitError, ValueError):
    pass


class ParseError(DescentKitError, ValueError):
    pass


# algebra / module structure
class NotTwoSided(DescentKitError):
    pass


class MissingAugmentation(DescentKitError):
    pass


class NotCertifiedLocal(DescentKitError):
    pass


class NotAGroup(DescentKitError, ValueError):
    pass


class BudgetExceeded(DescentKitError):
    pass


class Unsupported(BudgetExceeded):
    """Enumeration requested over a field where it cannot terminate."""


class AlgebraMismatch(DescentKitError, ValueError):
    pass


class BadFamilySpec(DescentKitError, ValueError):
    pass


class HypothesisError(DescentKitError):
    """A standing hypothesis on the extension ``A -> B`` failed.

    ``check`` names the hypothesis; ``checks`` records every check evaluated
    before the failure (``True`` = passed).
    """

    check = "hypothesis"

    def __init__(self, message: str, checks: dict[str, bool] | None = None):
        super().__init__(message)
        self.checks = dict(checks or {})


class NotAugmented(HypothesisError):
    check = "A_augmented"


class InvalidAlgebraMap(HypothesisError):
    check = "f_valid"


class KernelNotTwoSided(HypothesisError, NotTwoSided):
    check = "K_two_sided"


class KernelNotNilpotent(HypothesisError):
    check = "K_nilpotent"


class BaseNotLocal(HypothesisError):
    check = "A_local"


class NotFreeOverBase(HypothesisError):
    check = "B_free_over_A"


class QuotientNotLocal(HypothesisError):
    check = "C_local"


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: Any = None


@dataclass
class Report:
    """Ordered list of violations; an empty report means valid."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, witness: Any = None) -> None:
        self.violations.append(Violation(kind, message, witness))

    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def kinds(self) -> list[str]:
        return [v.kind for v in self.violations]

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> list[dict[str, Any]]:
        return [
            {"kind": v.kind, "message": v.message, "witness": _jsonable(v.witness)}
            for v in self.violations
        ]


def _jsonable(w: Any) -> Any:
    if w is None or isinstance(w, (bool, int, str)):
        return w
    if isinstance(w, (list, tuple)):
        return [_jsonable(x) for x in w]
    return str(w)
