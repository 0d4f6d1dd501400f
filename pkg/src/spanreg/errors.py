"""Exception types shared across the package."""

from __future__ import annotations

from typing import Any


class DomainError(ValueError):
    """Input violates an operation's precondition."""


class CapabilityError(DomainError):
    """Request exceeds what an exact routine is allowed to attempt."""


class Infeasible(Exception):
    """A gadget or embedding search came up empty.

    Carries a structured report so callers can re-seed or escalate instead
    of parsing a message.
    """

    def __init__(self, role: str, detail: str = "", **info: Any) -> None:
        self.role = role
        self.detail = detail
        self.info = info
        super().__init__(f"{role}: {detail}" if detail else role)

    def report(self) -> dict:
        return {"role": self.role, "detail": self.detail, **_jsonable(self.info)}


class StageFailure(Exception):
    """A solver stage failed; ``witness`` holds independently checkable data."""

    def __init__(self, stage: str, detail: str = "", witness: dict | None = None) -> None:
        self.stage = stage
        self.detail = detail
        self.witness = witness or {}
        super().__init__(f"stage {stage!r} failed: {detail}")

    def report(self) -> dict:
        return {"stage": self.stage, "detail": self.detail, "witness": _jsonable(self.witness)}


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    if hasattr(obj, "report"):
        return obj.report()
    return repr(obj)
