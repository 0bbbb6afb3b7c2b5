"""Refinement module schemas - strategies, cost reports and verdicts."""

from enum import Enum
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field


class Strategy(str, Enum):
    """Concrete refinement strategy; fixed for a whole run."""

    SINGLE_SPLITTER = "single-splitter"
    FULL_SIGNATURE = "full-signature"


class OracleMode(str, Enum):
    """Start partition source for a run."""

    NONE = "none"
    ES = "es"


class BoundCheck(BaseModel):
    """Measured value against a theoretical bound."""

    name: str
    relation: Literal["==", ">="]
    theoretical: int
    measured: int
    passed: bool

    @classmethod
    def compare(cls, name: str, relation: str, theoretical: int, measured: int) -> "BoundCheck":
        passed = measured == theoretical if relation == "==" else measured >= theoretical
        return cls(
            name=name,
            relation=relation,
            theoretical=theoretical,
            measured=measured,
            passed=passed,
        )


class CostReport(BaseModel):
    """Summary of one costed trace."""

    family: Optional[str] = None
    param: Optional[int] = None
    strategy: Optional[str] = None
    oracle: bool = False
    n: int = Field(..., ge=0)
    m: int = Field(..., ge=0)
    steps: int = Field(..., ge=0)
    total_irc: int = Field(..., ge=0)
    final_blocks: int = Field(..., ge=0)
    step_costs: List[int] = Field(default_factory=list)
    bound_checks: List[BoundCheck] = Field(default_factory=list)

    @property
    def bounds_pass(self) -> bool:
        return all(check.passed for check in self.bound_checks)


class TraceVerdict(BaseModel):
    """Outcome of verifying a trace; failing verdicts carry the first failure."""

    ok: bool
    step: Optional[int] = None
    pair: Optional[Tuple[int, int]] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "trace verified"
        where = f"step {self.step}" if self.step is not None else "trace"
        pair = f" (states {self.pair[0]}, {self.pair[1]})" if self.pair else ""
        return f"{where}: {self.reason}{pair}"


class RunReport(CostReport):
    """Report document written by the run command."""

    verified: bool
    verification: str
    invariant_violations: List[str] = Field(default_factory=list)
    updated_blocks: Optional[int] = None
    oracle_classes: Optional[int] = None
    final_partition: Optional[List[List[str]]] = None


class SweepRow(BaseModel):
    """One point of a cost curve over a family parameter."""

    param: int
    n: int
    m: int
    steps: int
    total_irc: int
    bound: Optional[int] = None
