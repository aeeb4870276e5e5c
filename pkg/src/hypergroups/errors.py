"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``kind`` so the CLI can emit
an error document without inspecting the message text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class HypergroupError(Exception):
    kind = "HypergroupError"
    exit_code = 2

    def to_dict(self) -> dict[str, Any]:
        return {"error": self.kind, "message": str(self)}


@dataclass(frozen=True)
class AxiomViolation:
    """One failed axiom check.

    ``kind`` is one of Negativity, RowSum, Identity, InvolutionSupport,
    InvolutionAntihomomorphism, Associativity.
    """

    kind: str
    location: tuple[int, ...]
    residual: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "location": list(self.location),
            "residual": float(self.residual),
        }


@dataclass
class AxiomViolationReport:
    violations: list[AxiomViolation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.violations)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict[str, Any]:
        return {"violations": [v.to_dict() for v in self.violations]}


class AxiomViolationError(HypergroupError):
    kind = "AxiomViolation"

    def __init__(self, report: AxiomViolationReport):
        self.report = report
        first = report.violations[:3]
        summary = ", ".join(f"{v.kind}@{v.location} ({v.residual:.3g})" for v in first)
        more = len(report.violations) - len(first)
        if more > 0:
            summary += f", ... {more} more"
        super().__init__(f"{len(report.violations)} axiom violation(s): {summary}")

    def to_dict(self) -> dict[str, Any]:
        out = super().to_dict()
        out.update(self.report.to_dict())
        return out


class DimensionError(HypergroupError):
    kind = "DimensionMismatch"


class DegenerateHaar(HypergroupError):
    kind = "DegenerateHaar"


class NotCommutative(HypergroupError):
    kind = "NotCommutative"


class CharacterDefect(HypergroupError):
    kind = "CharacterDefect"


class NonOrthogonal(HypergroupError):
    kind = "NonOrthogonal"


class NotUnitary(HypergroupError):
    kind = "NotUnitary"


class NotStrong(HypergroupError):
    kind = "NotStrong"

    def __init__(self, value: float, index: tuple[int, int, int], message: str = ""):
        self.value = value
        self.index = index
        super().__init__(
            message or f"dual structure constant {value:.3g} at {index} is negative"
        )

    def to_dict(self) -> dict[str, Any]:
        out = super().to_dict()
        out.update(value=self.value, index=list(self.index))
        return out


class CapExceeded(HypergroupError):
    kind = "CapExceeded"

    def __init__(self, cap: int, order: int):
        self.cap = cap
        super().__init__(f"order {order} exceeds enumeration cap {cap}")


class NotAPartition(HypergroupError):
    kind = "NotAPartition"


class NotClosed(HypergroupError):
    kind = "NotClosed"


class EquivalenceFailure(HypergroupError):
    kind = "EquivalenceFailure"

    def __init__(self, offenders: list[tuple[int, int]]):
        self.offenders = offenders
        super().__init__(f"conditions disagree at (character, coset) pairs {offenders}")

    def to_dict(self) -> dict[str, Any]:
        out = super().to_dict()
        out["offenders"] = [list(p) for p in self.offenders]
        return out


class ParamOutOfRange(HypergroupError):
    kind = "ParamOutOfRange"


class NotASubgroup(HypergroupError):
    kind = "NotASubgroup"


class InvalidGroupTable(HypergroupError):
    kind = "InvalidGroupTable"


class NormDrift(HypergroupError):
    kind = "NormDrift"


class Unresolved(HypergroupError):
    kind = "Unresolved"
    exit_code = 3

    def __init__(self, message: str, run: Any = None):
        self.run = run
        super().__init__(message)


class DocumentError(HypergroupError):
    kind = "DocumentError"
    exit_code = 4
