"""Logging to stderr, as plain lines or JSON, tagged with the run id and knot parameters."""

import json
import logging
import sys
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any

run_id_var: ContextVar[str] = ContextVar('run_id', default='')
params_var: ContextVar[str] = ContextVar('params', default='')


def _context() -> dict[str, str]:
    fields = {'run_id': run_id_var.get(), 'params': params_var.get()}
    return {k: v for k, v in fields.items() if v}


class RunFormatter(logging.Formatter):
    """Formats a record with the current run context; one JSON object per line when as_json is set."""

    def __init__(self, as_json: bool = False):
        super().__init__()
        self.as_json = as_json

    def format(self, record: logging.LogRecord) -> str:
        now = datetime.now(timezone.utc)
        context = _context()
        fields: dict[str, Any] = getattr(record, 'extra_fields', {}) or {}
        exception = self.formatException(record.exc_info) if record.exc_info else None

        if self.as_json:
            entry: dict[str, Any] = {
                'timestamp': now.isoformat().replace('+00:00', 'Z'),
                'level': record.levelname,
                'logger': record.name,
                'message': record.getMessage(),
                **context,
                **fields,
            }
            if exception:
                entry['exception'] = exception
            return json.dumps(entry, default=str)

        tags = ' '.join(f'{k}={v}' for k, v in context.items())
        line = f'{now:%Y-%m-%d %H:%M:%S} {record.levelname:8} {record.name}'
        if tags:
            line += f' [{tags}]'
        line += f' {record.getMessage()}'
        if fields:
            line += ' (' + ' '.join(f'{k}={v}' for k, v in fields.items()) + ')'
        if exception:
            line += '\n' + exception
        return line


def setup_logging(use_json: bool = False, level: str = 'WARNING') -> None:
    """Send every log record to stderr; stdout carries only command output."""
    root = logging.getLogger()
    root.setLevel(level.upper())
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(RunFormatter(as_json=use_json))
    root.addHandler(handler)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def log_with_context(logger: logging.Logger, level: str, message: str, **fields) -> None:
    getattr(logger, level.lower())(message, extra={'extra_fields': fields})


def set_run_context(run_id: str = '', params: str = '') -> None:
    if run_id:
        run_id_var.set(run_id)
    if params:
        params_var.set(params)


def clear_run_context() -> None:
    run_id_var.set('')
    params_var.set('')
