"""Shared result type and error classes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class PointOutsideSpace(ValueError):
    pass


class NotFinite(TypeError):
    """Raised by exhaustive checks when handed an interval space."""


class PreimageFailure(LookupError):
    pass


class NonSummable(ArithmeticError):
    """Iterates of a comparison function failed the geometric-decay guard."""


@dataclass
class CheckResult:
    """Outcome of a hypothesis check.

    ``witness`` holds the first (or worst) violating sample when the check
    fails; ``details`` holds sub-results for composite checks.
    """

    name: str
    passed: bool
    reason: str = ""
    witness: Any = None
    magnitude: float = 0.0
    checked: int = 0
    details: dict[str, "CheckResult"] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        out = f"{self.name}: {status}"
        if self.reason:
            out += f" ({self.reason})"
        if not self.passed and self.witness is not None:
            out += f" witness={self.witness}"
        return out
