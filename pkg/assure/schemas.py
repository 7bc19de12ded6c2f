"""
Pydantic records of assurance-based verification.
"""

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

Technique = Literal["formal", "simulation", "experiment"]
Kind = Literal["probability", "verdict", "rate"]
NUMERIC_KINDS = ("probability", "rate")

# Suspected causes of a disagreement, for the engineer to work through
CAUSE_CHECKLIST = ("system-model", "requirement-model", "tool")


class Interval(BaseModel):
    lo: float = Field(..., ge=0.0, le=1.0)
    hi: float = Field(..., ge=0.0, le=1.0)
    confidence: float = Field(0.95, gt=0.0, lt=1.0)


class Provenance(BaseModel):
    source_hash: Optional[str] = Field(None, description="Hash of the model, campaign config or dataset")
    seed: Optional[int] = None
    n: Optional[int] = Field(None, description="Tests or runs behind the value")
    tool_version: str


class Assurance(BaseModel):
    """One technique's claim about one requirement"""

    id: str
    requirement: str
    technique: Technique
    kind: Kind
    value: Union[bool, float]
    interval: Optional[Interval] = None
    constraints: str = Field("", description="Conditions the claim holds under, e.g. 'typical use case'")
    provenance: Provenance
    created_at: Optional[str] = Field(None, description="Ledger append time; excluded from the id and from reports")

    @model_validator(mode="after")
    def _value_matches_kind(self) -> "Assurance":
        if self.kind == "verdict":
            if not isinstance(self.value, bool):
                raise ValueError("verdict assurances carry a boolean value")
            return self
        if isinstance(self.value, bool) or not 0.0 <= self.value <= 1.0:
            raise ValueError(f"{self.kind} assurances carry a value in [0, 1], got {self.value!r}")
        if self.interval is not None and not self.interval.lo <= self.value <= self.interval.hi:
            raise ValueError(f"value {self.value} lies outside its interval [{self.interval.lo}, {self.interval.hi}]")
        return self


class PairDifference(BaseModel):
    first: str
    second: str
    difference: float


class Consensus(BaseModel):
    value: float
    direction: Literal["at least"] = "at least"
    statement: str


class AgreementReport(BaseModel):
    requirement: str
    kind: str
    assurances: List[str]
    techniques: List[str]
    values: List[Union[bool, float]]
    differences: List[PairDifference]
    verdict: Literal["agree", "disagree"]
    tolerance: float
    consensus: Optional[Consensus] = None
    causes: List[str] = Field(default_factory=list, description="Checklist attached to disagreements")


class ModeRate(BaseModel):
    occ: int = Field(..., ge=0)
    opp: int = Field(..., ge=0)
    rate: Optional[float] = Field(None, description="occ / opp; absent when not observable")
    source: Literal["experiments", "simulation", "assumed"] = "experiments"
    fallback_occ: Optional[int] = Field(None, description="Simulation counts behind a fallback rate")
    fallback_opp: Optional[int] = None
    fallback_rate: Optional[float] = Field(None, description="fallback_occ / fallback_opp")
    observable: bool = True

    @property
    def emitted(self) -> Optional[float]:
        """Rate the model constant is derived from"""
        return self.fallback_rate if self.source == "simulation" else self.rate


class FailureRates(BaseModel):
    modes: Dict[str, ModeRate]

    def flagged(self) -> List[str]:
        """Modes without opportunities (emitted as assumed values)"""
        return [mode for mode, entry in self.modes.items() if not entry.observable]
