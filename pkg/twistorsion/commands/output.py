"""Rendering of result envelopes as JSON, CSV or plain text."""

import csv
import io
import json
from typing import Any

from twistorsion.schemas.envelope import ResultEnvelope


def _cell(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ' '.join(str(v) for v in value)
    if value is None:
        return ''
    return str(value)


def _csv_rows(envelope: ResultEnvelope) -> tuple[list[str], list[dict]]:
    outcome = envelope.outcome
    if envelope.command == 'search':
        header = ['p', 'q', 'candidate', 'degree', 'found', 'x', 'y', 'candidate_image', 'oracle_agrees']
        rows = []
        for summary in outcome['degrees']:
            witness = summary.get('witness') or {}
            rows.append({
                'p': outcome['p'],
                'q': outcome['q'],
                'candidate': outcome['candidate'],
                'degree': summary['degree'],
                'found': summary['found'],
                'x': witness.get('x'),
                'y': witness.get('y'),
                'candidate_image': witness.get('candidate_image'),
                'oracle_agrees': summary.get('oracle_agrees'),
            })
        return header, rows
    if envelope.command == 'verify-table':
        return ['index', 'p', 'q', 'n', 'status', 'message'], outcome['rows']
    if envelope.command == 'pairs':
        return ['first', 'second', 'first_status', 'second_status', 'consistent'], outcome['pairs']

    flat = {k: v for k, v in outcome.items() if not isinstance(v, dict)}
    return list(flat), [flat]


def render_csv(envelope: ResultEnvelope) -> str:
    header, rows = _csv_rows(envelope)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in header})
    return buffer.getvalue()


def _text_lines(value: Any, indent: int = 0) -> list[str]:
    pad = '  ' * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item and not all(isinstance(v, (int, str)) for v in item):
                lines.append(f'{pad}{key}:')
                lines.extend(_text_lines(item, indent + 1))
            else:
                lines.append(f'{pad}{key}: {_cell(item)}')
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                lines.append(f'{pad}-')
                lines.extend(_text_lines(item, indent + 1))
            else:
                lines.append(f'{pad}- {_cell(item)}')
    else:
        lines.append(f'{pad}{_cell(value)}')
    return lines


def render_text(envelope: ResultEnvelope) -> str:
    lines = [f'{envelope.command}: {envelope.verdict}']
    lines.extend(_text_lines(envelope.outcome, 1))
    return '\n'.join(lines) + '\n'


def render(envelope: ResultEnvelope, output_format: str) -> str:
    if output_format == 'csv':
        return render_csv(envelope)
    if output_format == 'text':
        return render_text(envelope)
    return json.dumps(envelope.model_dump(mode='json'), indent=2, sort_keys=True) + '\n'
