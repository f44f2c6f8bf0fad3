"""Diagnostic reports and the error hierarchy shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class StratkitError(Exception):
    pass


class ValidationError(StratkitError, ValueError):
    """Input data violates a structural axiom (bad poset, non-monotone strata...)."""

    def __init__(self, message: str, report: "Report | None" = None):
        super().__init__(message)
        self.report = report


class InvariantError(StratkitError, AssertionError):
    """A mathematical identity that must hold by construction failed.

    Signals a bug in this package, never bad input.
    """


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    detail: str = ""

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "witness": _jsonable(self.witness)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind: str, witness: tuple, detail: str = "") -> None:
        self.violations.append(Violation(kind, witness, detail))

    def warn(self, kind: str, witness: tuple, detail: str = "") -> None:
        self.warnings.append(Violation(kind, witness, detail))

    def raise_if_invalid(self) -> None:
        if not self.ok:
            first = self.violations[0]
            raise ValidationError(
                f"invalid {self.subject}: {first.kind} {first.witness!r}", self
            )

    def to_json(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "valid": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "warnings": [w.to_json() for w in self.warnings],
        }


def _jsonable(x):
    if isinstance(x, (tuple, list, frozenset, set)):
        return [_jsonable(y) for y in x]
    return x
