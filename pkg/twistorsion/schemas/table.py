from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class FilledRow(BaseModel):
    """A table row listing a witness in S_{n+1}."""

    model_config = ConfigDict(extra='forbid')

    p: int
    q: int
    n: int = Field(ge=1)
    x: list[int]
    y: list[int]


class UnknownRow(BaseModel):
    """A row for which no witness is known."""

    model_config = ConfigDict(extra='forbid')

    p: int
    q: int
    status: Literal['unknown']


class RowVerdict(BaseModel):
    index: int
    p: int | None = None
    q: int | None = None
    n: int | None = None
    status: Literal['pass', 'fail', 'unknown', 'error']
    message: str = ''
