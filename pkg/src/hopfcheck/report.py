"""Residual reports: named identity checks with pass/fail bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckEntry:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }


@dataclass
class ResidualReport:
    """Collects per-identity sup-norm residuals; never averages."""

    entries: list[CheckEntry] = field(default_factory=list)

    def add(self, name: str, residual: float, tolerance: float) -> CheckEntry:
        entry = CheckEntry(name, float(residual), float(tolerance))
        self.entries.append(entry)
        return entry

    def extend(self, other: "ResidualReport", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(CheckEntry(prefix + e.name, e.residual, e.tolerance))

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def as_dict(self) -> dict:
        return {
            "pass": self.passed,
            "entries": [e.as_dict() for e in self.entries],
        }
