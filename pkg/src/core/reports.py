"""
Verification reports shared by the algebra and flag-variety checks.

Rows are kept in canonical order (sorted by check key) so that a report does
not depend on the order in which its checks were computed.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple


def _param_key(params: Dict[str, Any]) -> Tuple[Tuple[str, str], ...]:
    return tuple(sorted((key, repr(value)) for key, value in params.items()))


@dataclass(frozen=True)
class CheckRow:
    """Outcome of one exact identity."""

    condition: str
    params: Dict[str, Any]
    passed: bool
    weight: Optional[Tuple[int, ...]] = None
    nonzero_entries: int = 0

    def sort_key(self) -> Tuple[Any, ...]:
        return (self.condition, self.weight or (), _param_key(self.params))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "condition": self.condition,
            "weight": list(self.weight) if self.weight is not None else None,
            "params": dict(self.params),
            "pass": self.passed,
            "lhs_minus_rhs_nonzero_entries": self.nonzero_entries,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CheckRow":
        weight = data.get("weight")
        return cls(
            condition=data["condition"],
            params=dict(data.get("params", {})),
            passed=bool(data["pass"]),
            weight=tuple(weight) if weight is not None else None,
            nonzero_entries=int(data.get("lhs_minus_rhs_nonzero_entries", 0)),
        )


@dataclass
class CheckReport:
    """A titled collection of check rows."""

    title: str
    rows: List[CheckRow] = field(default_factory=list)
    untested: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add(self, row: CheckRow) -> None:
        self.rows.append(row)

    def extend(self, rows: Iterable[CheckRow]) -> None:
        self.rows.extend(rows)

    def merge(self, other: "CheckReport") -> None:
        """Absorb the rows and untested count of another report."""
        self.rows.extend(other.rows)
        self.untested += other.untested

    @property
    def sorted_rows(self) -> List[CheckRow]:
        return sorted(self.rows, key=CheckRow.sort_key)

    @property
    def failures(self) -> List[CheckRow]:
        return [row for row in self.sorted_rows if not row.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self) -> Dict[str, Dict[str, int]]:
        """Pass/fail counts per condition."""
        summary: Dict[str, Dict[str, int]] = {}
        for row in self.rows:
            bucket = summary.setdefault(row.condition, {"pass": 0, "fail": 0})
            bucket["pass" if row.passed else "fail"] += 1
        return dict(sorted(summary.items()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "pass": self.passed,
            "untested": self.untested,
            "metadata": dict(self.metadata),
            "checks": [row.to_dict() for row in self.sorted_rows],
        }

    def render_text(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for condition, bucket in self.counts().items():
            lines.append(f"  {condition}: {bucket['pass']} passed, {bucket['fail']} failed")
        if self.untested:
            lines.append(f"  untested: {self.untested}")
        for key, value in sorted(self.metadata.items()):
            lines.append(f"  {key}: {value}")
        for row in self.failures:
            where = f" weight={row.weight}" if row.weight is not None else ""
            lines.append(f"  FAILED {row.condition}{where} params={row.params}")
        return "\n".join(lines)


@dataclass(frozen=True)
class CommandOutcome:
    """What a command hands back to the driver."""

    data: Any
    text: str
    passed: bool = True
