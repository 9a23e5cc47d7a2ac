"""
Witness table ingestion and verification.

The table is a JSON array of rows, either {p, q, n, x, y} or
{p, q, status: "unknown"}. A malformed row produces an 'error' verdict for
that row and the run continues with the next one.
"""

from __future__ import annotations

import json
import time
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from twistorsion.core.exceptions import ParameterError, PermutationError, TableError
from twistorsion.core.logging_config import get_logger
from twistorsion.schemas.table import FilledRow, RowVerdict, UnknownRow
from twistorsion.services.classify import canonicalize
from twistorsion.services.permrep import make_witness, verify_witness
from twistorsion.services.presentations import candidate

logger = get_logger(__name__)

Row = Union[FilledRow, UnknownRow]

SHIPPED_TABLE = 'table.json'


def read_table_document(path: Optional[Union[str, Path]] = None) -> list:
    """
    Read the raw JSON array, from path or from the table shipped with the package.

    Raises:
        TableError: If the file cannot be read or is not a JSON array
    """
    try:
        if path is None:
            text = resources.files('twistorsion.data').joinpath(SHIPPED_TABLE).read_text(encoding='utf-8')
            source = f'<shipped {SHIPPED_TABLE}>'
        else:
            text = Path(path).read_text(encoding='utf-8')
            source = str(path)
        document = json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise TableError(
            f'Failed to read witness table: {e}',
            details={'path': str(path) if path else SHIPPED_TABLE, 'error': str(e)},
        ) from e

    if not isinstance(document, list):
        raise TableError('Witness table must be a JSON array', details={'path': source})
    logger.debug(f'Read witness table: source={source}, rows={len(document)}')
    return document


def parse_row(raw: object) -> Row:
    """
    Raises:
        ValidationError: If the row matches neither row shape
    """
    if isinstance(raw, dict) and 'status' in raw:
        return UnknownRow.model_validate(raw)
    return FilledRow.model_validate(raw)


def load_table(path: Optional[Union[str, Path]] = None) -> list[Row]:
    """Parsed rows; malformed rows are skipped with a warning."""
    rows = []
    for i, raw in enumerate(read_table_document(path)):
        try:
            rows.append(parse_row(raw))
        except ValidationError as e:
            logger.warning(f'Skipping malformed table row {i}: {e.error_count()} problem(s)')
    return rows


def verify_row(index: int, row: Row) -> RowVerdict:
    if isinstance(row, UnknownRow):
        return RowVerdict(index=index, p=row.p, q=row.q, status='unknown')

    if len(row.x) != row.n + 1 or len(row.y) != row.n + 1:
        return RowVerdict(
            index=index,
            p=row.p,
            q=row.q,
            n=row.n,
            status='error',
            message=f'expected {row.n + 1} images, got x={len(row.x)}, y={len(row.y)}',
        )
    try:
        record = make_witness((row.p, row.q), row.x, row.y, candidate('[xy,yx]'))
    except (PermutationError, ParameterError) as e:
        return RowVerdict(index=index, p=row.p, q=row.q, n=row.n, status='fail', message=e.message)
    status = 'pass' if verify_witness(record) else 'fail'
    return RowVerdict(index=index, p=row.p, q=row.q, n=row.n, status=status)


def verify_table(path: Optional[Union[str, Path]] = None) -> list[RowVerdict]:
    """
    Verify every filled row of a witness table.

    Args:
        path: Table file; the shipped table when None

    Returns:
        One verdict per row, in file order

    Raises:
        TableError: If the file as a whole cannot be read
    """
    start_time = time.time()
    document = read_table_document(path)
    if not document:
        logger.warning('Witness table is empty; nothing to verify')

    verdicts = []
    for i, raw in enumerate(document):
        try:
            row = parse_row(raw)
        except ValidationError as e:
            logger.warning(f'Malformed table row {i}: {e.error_count()} problem(s)')
            verdicts.append(RowVerdict(index=i, status='error', message=str(e).splitlines()[0]))
            continue
        verdict = verify_row(i, row)
        if verdict.status == 'fail':
            logger.warning(f'Table row {i} failed: p={row.p}, q={row.q}, {verdict.message}')
        verdicts.append(verdict)

    duration = time.time() - start_time
    failed = sum(1 for v in verdicts if v.status in ('fail', 'error'))
    logger.info(f'Verified witness table: rows={len(verdicts)}, failed={failed}, duration={duration:.2f}s')
    return verdicts


def filled_classes(rows: list[Row]) -> dict[tuple[int, int], FilledRow]:
    """Filled rows indexed by the canonical representative of their homeomorphism class."""
    return {canonicalize(row.p, row.q): row for row in rows if isinstance(row, FilledRow)}
