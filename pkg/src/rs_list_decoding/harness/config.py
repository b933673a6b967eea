import math
from enum import Enum
from fractions import Fraction
from logging import getLogger
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer, field_validator, model_validator

from ..errors import InvalidParameters
from ..finite_field import FieldSpec

SCHEMA_VERSION = 1

logger = getLogger("rs_list_decoding.harness")


class OracleMode(Enum):
    exhaustive = 0
    sampled = 1


class TrialOutcome(Enum):
    decodable = 0
    bad_list_found = 1
    rank_deficiency_found = 2


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**6)
    return Fraction(value)


def parse_enum(enum_cls, value: Any):
    if isinstance(value, enum_cls):
        return value
    if isinstance(value, str):
        try:
            return enum_cls[value]
        except KeyError:
            raise ValueError(f"{value!r} is not one of {[m.name for m in enum_cls]}")
    return enum_cls(value)


class ExperimentConfig(BaseModel):
    """Parameters of a puncturing experiment.

    Derived quantities: rate R = k/n, lambda = eps/R, certificate length r = floor(lambda*k/2)
    and radius rho = (L/(L+1))(1 - R - eps).
    """

    model_config = ConfigDict(frozen=True)

    field: FieldSpec
    n: int = Field(ge=1)
    k: int = Field(ge=1)
    L: int = Field(ge=1)
    eps: float = Field(gt=0, lt=1)
    seed: int = 0
    trials: int = Field(default=100, ge=1)
    workers: int = Field(default=1, ge=1)
    mode: OracleMode = OracleMode.exhaustive
    samples: int = Field(default=20000, ge=1)

    @field_validator("field", mode="before")
    @classmethod
    def parse_field(cls, value: Any) -> Any:
        return FieldSpec.parse(value) if isinstance(value, str) else value

    @field_validator("mode", mode="before")
    @classmethod
    def parse_mode(cls, value: Any) -> OracleMode:
        return parse_enum(OracleMode, value)

    @field_serializer("field")
    def dump_field(self, value: FieldSpec) -> str:
        return str(value)

    @field_serializer("mode")
    def dump_mode(self, value: OracleMode) -> str:
        return value.name

    @model_validator(mode="after")
    def check_parameters(self) -> "ExperimentConfig":
        if self.k > self.n:
            raise ValueError(f"need k <= n, got k={self.k} and n={self.n}")
        if self.field.order <= self.n:
            raise ValueError(f"need q > n, got q={self.field.order} and n={self.n}")
        if self.r < 1:
            raise ValueError(f"certificate length r = floor(eps*n/2) must be at least 1, got {self.r}")
        if self.rho < 0:
            logger.warning(f"negative radius {float(self.rho)}: no list can be bad at capacity")
        return self

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def R(self) -> Fraction:
        return Fraction(self.k, self.n)

    @property
    def lam(self) -> Fraction:
        return as_fraction(self.eps) / self.R

    @property
    def r(self) -> int:
        return math.floor(self.lam * self.k / 2)

    @property
    def rho(self) -> Fraction:
        return Fraction(self.L, self.L + 1) * (1 - self.R - as_fraction(self.eps))

    @property
    def capacity_distance(self) -> int:
        """Largest total distance sum_j d(y, c_j) of L+1 codewords that is bad at radius rho."""
        return math.floor(self.L * (self.n - self.k - as_fraction(self.eps) * self.n))

    @property
    def singleton_distance(self) -> int:
        return self.L * (self.n - self.k)

    def derived(self) -> Dict[str, Any]:
        return {
            "R": str(self.R),
            "lambda": str(self.lam),
            "r": self.r,
            "rho": str(self.rho),
            "capacity_distance": self.capacity_distance,
            "singleton_distance": self.singleton_distance,
        }


def build_config(**kwargs: Any) -> ExperimentConfig:
    """ExperimentConfig from keyword arguments; validation failures become InvalidParameters."""
    try:
        return ExperimentConfig(**kwargs)
    except ValidationError as e:
        errors = e.errors()
        raise InvalidParameters(str(errors[0].get("msg", e)) if errors else str(e))


class Report(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


class BadList(BaseModel):
    y: List[int]
    codewords: List[int]
    total_distance: int


class OracleReport(Report):
    mode: str
    field: str
    n: int
    k: int
    L: int
    max_distance: int
    subsets_checked: int
    coverage: float
    translation_reduced: bool
    flagged: int
    flagged_total: int
    min_total_distance: Optional[int]
    bad_lists: List[BadList] = []


class ValidationReport(Report):
    field: str
    n: int
    k: int
    L: int
    alphas: List[int]
    bad_lists: int = 0
    filtered: int = 0
    extracted: int = 0
    weakly_partition_connected: int = 0
    rank_deficient: int = 0
    subset_sizes: Dict[int, int] = {}

    @property
    def passed(self) -> bool:
        checked = self.bad_lists - self.filtered
        return self.extracted == self.weakly_partition_connected == self.rank_deficient == checked


class TrialRecord(Report):
    trial: int
    outcome: str
    min_total_distance: Optional[int]
    rank_deficient: Optional[bool] = None
    alphas: List[int]
    seconds: float


class TrialReport(Report):
    config: Dict[str, Any]
    derived: Dict[str, Any]
    trials: List[TrialRecord]
    counts: Dict[str, int]
    failure_rate: float
    confidence_interval: Tuple[float, float]
    union_bound: Dict[str, Any]
    vacuous: bool
    seconds: float


class BlowupReport(Report):
    note: str
    field: str
    k: int
    agreement: int
    method: str
    searched: int
    best_y: List[int]
    list_size: int


class GmmdsWitness(Report):
    alphas: List[int]
    M: List[List[int]]
    product: List[List[int]]
    sets: List[List[int]]
    attempts: int


class SweepReport(Report):
    field: str
    t_max: int
    k_max: int
    max_edges: int
    minimal_only: bool
    checked: int
    full_rank: int
    by_size: Dict[str, int] = {}
    failures: List[Dict[str, Any]] = []


class RobustnessReport(Report):
    field: str
    t: int
    k: int
    lam: str
    trials: int
    full_rank: int
    deletions: List[int] = []
    failures: List[Dict[str, Any]] = []


class CertificateTrialsReport(Report):
    field: str
    k: int
    r: int
    t: int
    trials: int
    bottoms: int
    certificates: int
    distinct: bool
    max_descents: int
    min_refresh_gap: Optional[int]
    exposures: List[int]
    failures: List[int]
    per_step_bound: float
    records: List[Dict[str, Any]] = []


__all__ = [
    "SCHEMA_VERSION",
    "OracleMode",
    "TrialOutcome",
    "as_fraction",
    "parse_enum",
    "ExperimentConfig",
    "build_config",
    "Report",
    "BadList",
    "OracleReport",
    "ValidationReport",
    "TrialRecord",
    "TrialReport",
    "BlowupReport",
    "GmmdsWitness",
    "SweepReport",
    "RobustnessReport",
    "CertificateTrialsReport",
]
