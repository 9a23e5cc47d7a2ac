from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Constraint = Literal['fixed_x', 'unconstrained']


class WitnessRecord(BaseModel):
    """A homomorphism to S_{degree+1} sending the candidate to a non-identity permutation."""

    model_config = ConfigDict(frozen=True)

    p: int
    q: int
    degree: int = Field(ge=1)
    x: tuple[int, ...]
    y: tuple[int, ...]
    candidate: str
    candidate_word: str
    candidate_image: tuple[int, ...]
    constraint: Constraint = 'fixed_x'


class DegreeResult(BaseModel):
    """Outcome of the search at a single degree."""

    degree: int
    witness: WitnessRecord | None = None
    source: Literal['computed', 'cache'] = 'computed'
    seconds: float = 0.0
    oracle_agrees: bool | None = None
