"""Structured check results shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, message: str, witness=None) -> None:
        self.failures.append(message)
        if witness is not None:
            self.witnesses.append(witness)

    def count(self, n: int = 1) -> None:
        self.checked += n

    def merge(self, other: Report, prefix: str = "") -> Report:
        self.checked += other.checked
        self.failures.extend(prefix + f for f in other.failures)
        self.witnesses.extend(other.witnesses)
        return self

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"[{status}] {self.name}: {self.checked} checks"
        if self.note:
            text += f" ({self.note})"
        if self.failures:
            text += f", {len(self.failures)} failures"
        return text

    def render(self, max_failures: int = 10) -> str:
        lines = [self.line()]
        for f in self.failures[:max_failures]:
            lines.append(f"    - {f}")
        if len(self.failures) > max_failures:
            lines.append(f"    - ... {len(self.failures) - max_failures} more")
        return "\n".join(lines)
