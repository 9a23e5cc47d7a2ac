"""schema: published JSON schema of a command's result envelope."""

from typing import Any

from twistorsion.core.exceptions import ParameterError
from twistorsion.schemas.envelope import PAYLOAD_SCHEMAS, envelope_schema


def cmd_schema(command: str) -> dict[str, Any]:
    if command not in PAYLOAD_SCHEMAS:
        raise ParameterError(
            f'No schema for command {command!r}',
            details={'known': sorted(PAYLOAD_SCHEMAS)},
        )
    return envelope_schema(command)
