"""Bound checks: every runtime-verified inequality is recorded with both sides."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PostconditionError


@dataclass(frozen=True)
class BoundCheck:
    """One verified inequality lhs <= rhs + tol."""

    name: str
    lhs: float
    rhs: float
    tol: float = 0.0

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + self.tol

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "tol": float(self.tol),
            "passed": bool(self.passed),
        }


def check_le(name: str, lhs: float, rhs: float, tol: float = 0.0) -> BoundCheck:
    return BoundCheck(name=name, lhs=float(lhs), rhs=float(rhs), tol=float(tol))


def require(*checks: BoundCheck) -> None:
    """Raise PostconditionError if any check fails; never hide a bad bound."""
    failed = [c for c in checks if not c.passed]
    if failed:
        msgs = "; ".join(f"{c.name}: {c.lhs!r} > {c.rhs!r} + {c.tol!r}" for c in failed)
        raise PostconditionError(f"verified bound failed: {msgs}")
