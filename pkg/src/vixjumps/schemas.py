from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .asymptotics import Underlying
from .tables import TableId

Cell = Union[float, int, str, None]


class SourceRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    table: Optional[TableId] = None
    # INI text, same format as the --model file
    config: Optional[str] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.table is None) == (self.config is None):
            raise ValueError("give exactly one of 'table' or 'config'")
        return self


class StrikeRequest(SourceRequest):
    underlying: Optional[Underlying] = None
    strikes: Optional[list[float]] = None
    moneyness: Optional[list[float]] = None
    kind: Literal["auto", "call", "put"] = "auto"
    scaled: bool = True


class MCParams(BaseModel):
    paths: Optional[int] = Field(None, ge=1)
    steps: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = Field(None, ge=0, lt=2 ** 64)
    antithetic: Optional[bool] = None
    workers: int = Field(1, ge=1, le=64)


class AsymRequest(StrikeRequest):
    method: Literal["closed", "generic"] = "closed"
    bs_forward: Optional[Literal["mean", "median"]] = None


class MCRequest(StrikeRequest, MCParams):
    maturity: Optional[float] = Field(None, gt=0)


class ForwardRequest(SourceRequest, MCParams):
    maturity: Optional[float] = Field(None, gt=0)


class ConvergeRequest(SourceRequest, MCParams):
    underlying: Optional[Underlying] = None
    strike: float = Field(gt=0)
    kind: Literal["auto", "call", "put"] = "auto"
    maturities: list[float] = Field(min_length=1)


class TableResponse(BaseModel):
    table_id: str
    title: str
    underlying: Underlying
    scale: float
    cells: int


class RowsResponse(BaseModel):
    columns: list[str]
    rows: list[dict[str, Cell]]
    exit_code: int
    messages: list[str] = []


class ErrorResponse(BaseModel):
    kind: Literal["usage", "numeric"]
    message: str
