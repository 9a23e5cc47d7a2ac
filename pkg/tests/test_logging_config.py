import json
import logging
import sys

import pytest

from twistorsion.core.logging_config import (
    RunFormatter,
    clear_run_context,
    get_logger,
    log_with_context,
    set_run_context,
    setup_logging,
)


@pytest.fixture(autouse=True)
def run_context():
    yield
    clear_run_context()
    setup_logging(level='WARNING')


def make_record(message='searching', fields=None):
    record = logging.LogRecord('twistorsion.services.permrep', logging.INFO, __file__, 1, message, None, None)
    if fields is not None:
        record.extra_fields = fields
    return record


def test_json_lines_carry_run_context_and_fields():
    set_run_context(run_id='abc123', params='p=2,q=2')
    entry = json.loads(RunFormatter(as_json=True).format(make_record(fields={'degree': 5})))
    assert entry['message'] == 'searching'
    assert entry['level'] == 'INFO'
    assert entry['run_id'] == 'abc123'
    assert entry['params'] == 'p=2,q=2'
    assert entry['degree'] == 5
    assert entry['timestamp'].endswith('Z')


def test_plain_lines_omit_empty_context():
    line = RunFormatter().format(make_record())
    assert line.endswith('twistorsion.services.permrep searching')
    assert '[' not in line

    set_run_context(params='p=3,q=-1')
    line = RunFormatter().format(make_record(fields={'degree': 6}))
    assert '[params=p=3,q=-1]' in line
    assert line.endswith('(degree=6)')


def test_exception_is_included():
    try:
        raise ValueError('bad row')
    except ValueError:
        record = make_record()
        record.exc_info = sys.exc_info()
    entry = json.loads(RunFormatter(as_json=True).format(record))
    assert 'ValueError: bad row' in entry['exception']


def test_setup_logging_writes_json_to_stderr(capsys):
    setup_logging(use_json=True, level='info')
    log_with_context(get_logger('twistorsion.test'), 'info', 'table verified', rows=60)
    captured = capsys.readouterr()
    assert captured.out == ''
    entry = json.loads(captured.err.strip().splitlines()[-1])
    assert entry['message'] == 'table verified'
    assert entry['rows'] == 60
