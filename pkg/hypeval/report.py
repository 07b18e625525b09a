"""
Verification report models
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, computed_field

from .exact import format_rational

SCHEMA_VERSION = 1
MIN_ADMISSIBLE = 1

Status = Literal["pass", "fail", "skip", "error"]


def format_value(value: Any) -> str:
    """Rationals as "p/q", everything else through str"""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return ",".join(f"{k}={format_value(v)}" for k, v in value.items())
    return str(value)


class CheckRecord(BaseModel):
    """One verified fact"""
    name: str
    kind: Literal["exact", "numeric"]
    status: Status
    residual: Union[float, str, None] = None   # "exact-zero" for exact passes
    runtime_ms: float = 0.0
    parameters: Dict[str, str] = Field(default_factory=dict)
    values: Dict[str, str] = Field(default_factory=dict)
    reason: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def failed(self) -> bool:
        return self.status in ("fail", "error")


class Report(BaseModel):
    """Outcome of one CLI command"""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    command: str
    parameters: Dict[str, str] = Field(default_factory=dict)
    records: List[CheckRecord] = Field(default_factory=list)
    # admissible (non-skipped) records each check name needs
    min_admissible: int = Field(MIN_ADMISSIBLE, exclude=True)

    @computed_field  # type: ignore[misc]
    @property
    def starved(self) -> List[str]:
        """Check names with fewer admissible sample points than min_admissible"""
        admissible: Dict[str, int] = {}
        for record in self.records:
            admissible[record.name] = admissible.get(record.name, 0) + int(record.status != "skip")
        return [name for name, count in admissible.items() if count < self.min_admissible]

    @computed_field  # type: ignore[misc]
    @property
    def status(self) -> str:
        if any(r.failed for r in self.records) or self.starved:
            return "fail"
        return "pass"

    @property
    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if r.failed]

    def counts(self) -> Dict[str, int]:
        out = {"pass": 0, "fail": 0, "skip": 0, "error": 0}
        for record in self.records:
            out[record.status] += 1
        return out

    def to_json(self, deterministic: bool = False) -> str:
        report = self
        if deterministic:
            report = self.model_copy(update={
                "records": [r.model_copy(update={"runtime_ms": 0.0}) for r in self.records],
            })
        return report.model_dump_json(indent=2, by_alias=True)
