from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .specs import MODELS

Metric = Union[int, float, bool, str, None]

MAX_SEED = 2**64 - 1


class ExperimentConfig(BaseModel):
    """One sweep: the model, the parameter lists crossed into cells, and trial counts."""

    model_config = ConfigDict(frozen=True)

    experiment: Literal["localtw", "spread", "edgespan"]
    model: str = "gnp"
    n: List[int] = [256]
    d: List[float] = [2.0]
    delta: List[int] = [3]
    eps: List[float] = [1.0]
    side: List[int] = [20]
    k: List[int] = [8]
    r: List[int] = [2]
    trials: int = Field(default=20, ge=1)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    ceiling: Optional[float] = Field(default=None, gt=0)
    exact_limit: int = Field(default=12, ge=1)

    @field_validator("model")
    @classmethod
    def known_model(cls, model: str) -> str:
        if model not in MODELS:
            raise ValueError(f"unknown model {model!r}; expected one of {', '.join(sorted(MODELS))}")
        return model

    @field_validator("n", "delta", "side", "r")
    @classmethod
    def positive(cls, values: List[int]) -> List[int]:
        if not values:
            raise ValueError("sweep must not be empty")
        if any(v <= 0 for v in values):
            raise ValueError(f"sweep values must be positive, got {values}")
        return values

    @field_validator("d", "eps", "k")
    @classmethod
    def non_negative(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("sweep must not be empty")
        if any(v < 0 for v in values):
            raise ValueError(f"sweep values must be non-negative, got {values}")
        return values


class ResultRow(BaseModel):
    experiment: str
    cell: Dict[str, Union[int, float, str]]
    trial: int
    seed: int
    metrics: Dict[str, Metric]

    def flat(self) -> Dict[str, Metric]:
        return {"experiment": self.experiment, **self.cell, "trial": self.trial, "seed": self.seed, **self.metrics}


class SolutionReport(BaseModel):
    problem: Literal["min", "stop"]
    method: str
    n: int
    m: int
    deleted_edges: List[Tuple[int, int]]
    additional_infected: int
    protected_infected: int
    budget: int
    optimal: bool
    verified: bool = True


class FitSummary(BaseModel):
    experiment: str
    root_seed: int
    cells: int
    rows: int
    constants: Dict[str, Optional[float]]
    checks: Dict[str, bool]
    per_cell: List[Dict[str, Metric]] = []


class OracleFailure(BaseModel):
    index: int
    seed: int
    expected: Optional[int]
    actual: Optional[int]
    error: Optional[str] = None
    dump: Optional[str] = None


class OracleReport(BaseModel):
    suite: Literal["gidm", "min", "stop"]
    count: int
    seed: int
    passed: bool
    failures: List[OracleFailure] = []


class InstanceDump(BaseModel):
    """Everything needed to replay a failing oracle instance."""

    suite: str
    index: int
    seed: int
    n: int
    edges: List[Tuple[int, int]]
    thresholds: List[Union[int, Literal["inf"]]]
    seeds: List[int] = []
    protected: List[int] = []
    immunizable: List[int] = []
    counted: List[int] = []
    budget: Optional[int] = None
    slack: Optional[int] = None
    expected: Optional[int] = None
    actual: Optional[int] = None
