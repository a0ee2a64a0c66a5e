"""Pass/fail reports shared by the verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    identity: str
    order_checked: int
    passed: bool
    first_failure: dict | None = None
    details: dict = field(default_factory=dict)
    children: list["Report"] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json_dict(self) -> dict:
        out: dict = {"identity": self.identity, "order_checked": self.order_checked, "status": self.status}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
        if self.details:
            out["details"] = self.details
        if self.children:
            out["checks"] = [c.to_json_dict() for c in self.children]
        return out


def combine(identity: str, order: int, children: list[Report]) -> Report:
    """A report that passes when every child passes; the first failure is surfaced."""
    failed = next((c for c in children if not c.passed), None)
    first = None
    if failed is not None:
        first = {"identity": failed.identity, **(failed.first_failure or {})}
    return Report(identity, order, failed is None, first, children=children)
