"""verify-table: check every filled row of a witness table."""

import time
from pathlib import Path
from typing import Optional

from twistorsion.core.config import RunConfig
from twistorsion.schemas.envelope import ResultEnvelope, TableOutcome, make_envelope
from twistorsion.services.table import SHIPPED_TABLE, verify_table


def cmd_verify_table(path: Optional[str], config: RunConfig) -> ResultEnvelope:
    """
    Raises:
        TableError: If the table file cannot be read as a JSON array
    """
    start_time = time.time()
    verdicts = verify_table(Path(path) if path else None)
    duration = time.time() - start_time

    counts = {status: sum(1 for v in verdicts if v.status == status) for status in ('pass', 'fail', 'unknown', 'error')}
    outcome = TableOutcome(
        path=str(path) if path else SHIPPED_TABLE,
        rows=verdicts,
        passed=counts['pass'],
        failed=counts['fail'],
        unknown=counts['unknown'],
        errors=counts['error'],
        verdict='pass' if counts['fail'] == 0 and counts['error'] == 0 else 'fail',
    )
    return make_envelope(
        'verify-table',
        {'path': outcome.path},
        outcome,
        {'seconds': round(duration, 6)},
        config.snapshot(),
    )
