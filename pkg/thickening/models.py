"""
Pydanticモデル定義（ジョブ指定と出力 JSON の形）
"""

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from .errors import ThickeningError
from .measures import PValue


class JobSpec(BaseModel):
    """1 回の計算の指定"""
    space: Optional[str] = None  # 距離行列 CSV
    cloud: Optional[str] = None  # 点群 CSV（ユークリッド距離を使う）
    ambient: Optional[str] = None  # ambient_cech の周囲空間
    embedding: Optional[str] = None  # X の各点の周囲空間での番号
    kind: Literal["vr", "cech", "ambient_cech", "classical"] = "cech"
    classical_kind: Literal["vr_inf", "cech_inf"] = "vr_inf"
    p: str = "2"
    q: str = "1"  # Wasserstein の指数（transport）
    max_dim: int = Field(1, ge=0)
    out: Literal["json", "csv", "svg"] = "json"
    seed: int = 0
    exact: bool = False

    @field_validator("p", "q", mode="before")
    @classmethod
    def _exponent(cls, v):
        try:
            return str(PValue.parse(str(v)))
        except ThickeningError as e:
            raise ValueError(e.message) from e

    @model_validator(mode="after")
    def _one_input(self):
        if (self.space is None) == (self.cloud is None):
            raise ValueError("exactly one of space and cloud is required")
        if self.kind == "ambient_cech" and self.ambient is None:
            raise ValueError("ambient_cech needs an ambient space")
        return self

    @property
    def p_value(self) -> PValue:
        return PValue.parse(self.p)

    @property
    def q_value(self) -> PValue:
        return PValue.parse(self.q)


Endpoint = Union[float, str]  # 無限は "inf"


class DiagramBlock(BaseModel):
    """1 つの次数の区間"""
    degree: int
    intervals: list[list[Endpoint]]


class DiagramExport(BaseModel):
    """diagram / oracle コマンドの出力"""
    label: str = ""
    kind: str = ""
    p: str = ""
    max_dim: Optional[int] = None
    reliable_degree: Optional[int] = None
    conjectural: bool = False
    diagrams: list[DiagramBlock]


class ComplexEntry(BaseModel):
    """FilteredComplex の 1 行（JSON lines）"""
    simplex: list[int]
    value: float


class PlanEntry(BaseModel):
    source: int
    target: int
    mass: float


class TransportReport(BaseModel):
    """transport コマンドの出力"""
    q: str
    distance: float
    n: int
    entries: list[PlanEntry]


class CompareReport(BaseModel):
    """compare コマンドの出力"""
    degree: int
    bottleneck: float | str
    gh_upper_bound: Optional[float] = None
    bound: Optional[float] = None
    passed: Optional[bool] = None


class SphereAudit(BaseModel):
    """audit-sphere コマンドの出力"""
    n_dim: int
    count: int
    p: str
    degree: int
    slack: float
    dominant: Optional[list[Endpoint]] = None
    birth_gap: Optional[float] = None
    death_gap: Optional[float] = None
    certified: bool
    note: str = ""


class SweepEntry(BaseModel):
    p: str
    diagrams: list[DiagramBlock]


class SweepExport(BaseModel):
    """sweep コマンドの出力（p ごとの図）"""
    label: str = ""
    kind: str
    max_dim: int
    slices: list[SweepEntry]
