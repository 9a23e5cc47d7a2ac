import csv
import io
import json

import pytest
from click.testing import CliRunner

from twistorsion.main import cli
from twistorsion.schemas.envelope import validate_envelope
from twistorsion.services.table import read_table_document


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def invoke(runner, tmp_path):
    def run(*args, env=None):
        return runner.invoke(cli, [str(a) for a in args], env={'TWISTORSION_CACHE_DIR': str(tmp_path / 'cache'), **(env or {})})
    return run


def envelope(result) -> dict:
    data = json.loads(result.stdout)
    validate_envelope(data)
    return data


def error(result) -> dict:
    return json.loads(result.stderr.strip().splitlines()[-1])


class TestSearch:
    def test_witness_at_degree_five(self, invoke):
        result = invoke('search', 2, 2, '--max-degree', 5)
        assert result.exit_code == 0
        data = envelope(result)
        assert data['verdict'] == 'witness'
        assert data['outcome']['first_witness_degree'] == 5
        assert data['config']['max_degree'] == 5

    def test_no_witness_is_unknown(self, invoke):
        result = invoke('search', 1, 1, '--max-degree', 4, '--no-cache')
        assert result.exit_code == 3
        assert envelope(result)['verdict'] == 'unknown'

    def test_negative_parameters(self, invoke):
        result = invoke('search', -2, 3, '--max-degree', 3, '--mode', 'both')
        assert result.exit_code == 3
        outcome = envelope(result)['outcome']
        assert (outcome['p'], outcome['q']) == (-2, 3)
        assert all(d['oracle_agrees'] for d in outcome['degrees'])

    def test_cache_hit_gives_identical_payload(self, invoke):
        first = invoke('search', 2, 2, '--max-degree', 5)
        second = invoke('search', 2, 2, '--max-degree', 5)
        assert json.loads(first.stdout)['outcome'] == json.loads(second.stdout)['outcome']
        assert json.loads(second.stdout)['timing']['cache_hits'] == 5

    def test_custom_candidate(self, invoke):
        result = invoke('search', 2, 2, '--max-degree', 5, '--word', '[b,t^-1 b t]', '--basis', 'std')
        assert result.exit_code in (0, 3)
        assert envelope(result)['outcome']['candidate'] == 'b^-1 t^-1 b^-1 t b t^-1 b t'

    def test_budget_exceeded(self, invoke):
        result = invoke('search', 2, 2, '--max-degree', 12)
        assert result.exit_code == 4
        assert error(result)['code'] == 'BUDGET_EXCEEDED'

    def test_zero_parameter(self, invoke):
        result = invoke('search', 2, 0)
        assert result.exit_code == 2
        assert error(result)['code'] == 'PARAMETER_ERROR'

    def test_csv(self, invoke):
        result = invoke('search', 2, 2, '--max-degree', 5, '--format', 'csv')
        rows = list(csv.DictReader(io.StringIO(result.stdout)))
        assert [row['degree'] for row in rows] == ['1', '2', '3', '4', '5']
        assert rows[0]['candidate'] == '[xy,yx]'
        assert rows[-1]['found'] == 'True'

    def test_text(self, invoke):
        result = invoke('search', 2, 2, '--max-degree', 5, '--format', 'text')
        assert result.stdout.startswith('search: witness')


class TestVerifyTable:
    def test_shipped_table(self, invoke):
        result = invoke('verify-table')
        assert result.exit_code == 0
        outcome = envelope(result)['outcome']
        assert outcome['failed'] == 0
        assert outcome['unknown'] == 11

    def test_corrupted_table(self, invoke, tmp_path):
        rows = read_table_document()
        rows[1]['y'] = list(reversed(rows[1]['y']))
        path = tmp_path / 'table.json'
        path.write_text(json.dumps(rows))
        result = invoke('verify-table', path)
        assert result.exit_code == 1
        assert envelope(result)['outcome']['rows'][1]['status'] == 'fail'

    def test_missing_table(self, invoke, tmp_path):
        result = invoke('verify-table', tmp_path / 'nope.json')
        assert result.exit_code == 6
        assert error(result)['code'] == 'TABLE_ERROR'


class TestCertify:
    @pytest.mark.parametrize('p,q,expected', [(1, 1, (2, 1, 1)), (1, 2, (3, 8, 9))])
    def test_constants(self, invoke, p, q, expected):
        result = invoke('certify', p, q)
        assert result.exit_code == 0
        outcome = envelope(result)['outcome']
        assert (outcome['k'], outcome['n'], outcome['m']) == expected
        assert outcome['matrix_identity_verified']
        assert outcome['commutator_factor_count'] == p * q

    def test_zero(self, invoke):
        assert invoke('certify', 0, 1).exit_code == 2

    def test_k_cap(self, invoke):
        result = invoke('certify', 5, 5, '--k-cap', 2)
        assert result.exit_code == 4
        assert error(result)['code'] == 'CERTIFICATE_ERROR'


class TestBiorder:
    @pytest.mark.parametrize('p,q,word,verdict', [
        (1, 1, 'b', 'greater'),
        (1, 1, 't^-1', 'less'),
        (2, 3, '[b,t^-1 b t]', 'equal'),
    ])
    def test_examples(self, invoke, p, q, word, verdict):
        result = invoke('biorder', p, q, word)
        assert result.exit_code == 0
        assert envelope(result)['verdict'] == verdict

    def test_bad_word(self, invoke):
        result = invoke('biorder', 1, 1, 'x y')
        assert result.exit_code == 2
        assert error(result)['code'] == 'WORD_ERROR'

    def test_negative_parameters(self, invoke):
        assert invoke('biorder', -1, 1, 'b').exit_code == 2


class TestClassify:
    def test_invariants(self, invoke):
        result = invoke('classify', 3, 2)
        assert result.exit_code == 0
        invariants = envelope(result)['outcome']['invariants']
        assert invariants['jsj'] == {'kind': 'two_tori', 'pieces': ['M(-2)', 'M(3)']}
        assert invariants['alexander'] == [-6, 13, -6]
        assert invariants['class_representative'] == [2, 3]

    @pytest.mark.parametrize('args,verdict', [
        ((2, 3, 3, 2), 'homeomorphic'),
        ((2, 3, -2, -3), 'homeomorphic'),
        ((2, 3, 6, 1), 'not_homeomorphic'),
    ])
    def test_homeomorphism(self, invoke, args, verdict):
        result = invoke('classify', *args)
        assert result.exit_code == 0
        assert envelope(result)['verdict'] == verdict

    def test_three_parameters(self, invoke):
        assert invoke('classify', 1, 2, 3).exit_code == 2

    def test_zero(self, invoke):
        assert invoke('classify', 0, 2).exit_code == 2


def test_pairs(invoke):
    result = invoke('pairs', 6)
    assert result.exit_code == 0
    pairs = envelope(result)['outcome']['pairs']
    assert pairs[0]['first'] == [1, 6] and pairs[0]['second'] == [2, 3]
    assert pairs[0]['first_status'] == pairs[0]['second_status'] == 'pass'


def test_schema(invoke):
    result = invoke('schema', 'search')
    assert result.exit_code == 0
    schema = json.loads(result.stdout)
    assert 'verdict' in schema['outcome']['properties']


def test_configuration_error(invoke):
    result = invoke('classify', 1, 2, env={'TWISTORSION_THREADS': 'abc'})
    assert result.exit_code == 5
    assert error(result)['code'] == 'CONFIGURATION_ERROR'


def test_version(invoke):
    result = invoke('--version')
    assert result.exit_code == 0
    assert '0.1.0' in result.stdout
