from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

from twistorsion import __version__
from twistorsion.schemas.table import RowVerdict
from twistorsion.schemas.witness import WitnessRecord


class DegreeSummary(BaseModel):
    degree: int
    found: bool
    witness: Optional[WitnessRecord] = None
    oracle_agrees: Optional[bool] = None


class SearchOutcome(BaseModel):
    p: int
    q: int
    candidate: str
    candidate_word: str
    constraint: str
    mode: str
    max_degree: int
    degrees: list[DegreeSummary]
    first_witness_degree: Optional[int] = None
    verdict: Literal['witness', 'unknown', 'oracle_mismatch']


class TableOutcome(BaseModel):
    path: str
    rows: list[RowVerdict]
    passed: int
    failed: int
    unknown: int
    errors: int
    verdict: Literal['pass', 'fail']


class CertifyOutcome(BaseModel):
    p: int
    q: int
    knot: str
    k: int
    n: int
    m: int
    generator: str
    exponent: int
    factor_count: int
    certificate_word_text: str
    matrix_identity_verified: bool
    monodromy: list[list[str]]
    commutator_factor_count: int
    longitude_factor_count: int
    verdict: Literal['certified']


class BiorderOutcome(BaseModel):
    p: int
    q: int
    word: str
    rho: int
    xword: str
    phi: dict[str, Any]
    verdict: Literal['less', 'equal', 'greater']


class SurgeryInvariants(BaseModel):
    p: int
    q: int
    alexander: list[int]
    jsj: dict[str, Any]
    class_representative: list[int]


class ClassifyOutcome(BaseModel):
    invariants: SurgeryInvariants
    other: Optional[SurgeryInvariants] = None
    homeomorphic: Optional[bool] = None
    knot_relation: Optional[str] = None
    verdict: Literal['computed', 'homeomorphic', 'not_homeomorphic']


class PairStatus(BaseModel):
    first: list[int]
    second: list[int]
    first_status: str
    second_status: str
    consistent: bool


class PairsOutcome(BaseModel):
    n: int
    pairs: list[PairStatus]
    verdict: Literal['pass', 'fail']


PAYLOAD_SCHEMAS: dict[str, type[BaseModel]] = {
    'search': SearchOutcome,
    'verify-table': TableOutcome,
    'certify': CertifyOutcome,
    'biorder': BiorderOutcome,
    'classify': ClassifyOutcome,
    'pairs': PairsOutcome,
}


class ResultEnvelope(BaseModel):
    """Uniform wrapper around every command's result."""

    command: str
    version: str = __version__
    params: dict[str, Any]
    verdict: str
    outcome: dict[str, Any]
    timing: dict[str, Any] = Field(default_factory=dict)
    config: dict[str, Any] = Field(default_factory=dict)


def make_envelope(
    command: str,
    params: dict[str, Any],
    outcome: BaseModel,
    timing: dict[str, Any],
    config: dict[str, Any],
) -> ResultEnvelope:
    return ResultEnvelope(
        command=command,
        params=params,
        verdict=outcome.verdict,
        outcome=outcome.model_dump(mode='json'),
        timing=timing,
        config=config,
    )


def validate_envelope(envelope: ResultEnvelope | dict) -> ResultEnvelope:
    """
    Raises:
        pydantic.ValidationError: If the envelope or its outcome does not match the command's schema
    """
    envelope = ResultEnvelope.model_validate(envelope)
    PAYLOAD_SCHEMAS[envelope.command].model_validate(envelope.outcome)
    return envelope


def envelope_schema(command: str) -> dict[str, Any]:
    return {
        'envelope': ResultEnvelope.model_json_schema(),
        'outcome': PAYLOAD_SCHEMAS[command].model_json_schema(),
    }
