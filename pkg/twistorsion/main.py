import json
import sys
import uuid
from typing import Callable, Optional

import click

from twistorsion import __version__
from twistorsion.commands.biorder import cmd_biorder
from twistorsion.commands.certify import cmd_certify
from twistorsion.commands.classify import cmd_classify, cmd_pairs
from twistorsion.commands.output import render
from twistorsion.commands.schema import cmd_schema
from twistorsion.commands.search import cmd_search
from twistorsion.commands.table import cmd_verify_table
from twistorsion.core.config import OUTPUT_FORMATS, SEARCH_MODES, RunConfig, config
from twistorsion.core.exceptions import (
    CacheError,
    CertificateError,
    ConfigurationError,
    OrderError,
    ParameterError,
    PermutationError,
    PresentationError,
    SearchBudgetError,
    TableError,
    TwistorsionError,
    WordError,
)
from twistorsion.core.logging_config import clear_run_context, get_logger, set_run_context, setup_logging
from twistorsion.schemas.envelope import PAYLOAD_SCHEMAS, ResultEnvelope
from twistorsion.services.presentations import CANDIDATE_LABELS, candidate, custom_candidate

logger = get_logger(__name__)

# Negative knot parameters must reach the arguments instead of the option parser
PARAMS_CONTEXT = {'ignore_unknown_options': True}

EXIT_INTERNAL = 70

# Verdicts that are not a plain success
VERDICT_EXIT_CODES = {
    'fail': 1,
    'oracle_mismatch': 1,
    'unknown': 3,
}


# ========================================
# Error handlers
# ========================================
# Each error class maps to an exit code and the payload written to stderr.
# The first matching entry wins, so subclasses come before TwistorsionError.

ERROR_HANDLERS: list[tuple[type[TwistorsionError], int, str, str]] = [
    (ParameterError, 2, 'Invalid parameters', 'PARAMETER_ERROR'),
    (WordError, 2, 'Invalid word', 'WORD_ERROR'),
    (PresentationError, 2, 'Unsupported presentation operation', 'PRESENTATION_ERROR'),
    (SearchBudgetError, 4, 'Search budget exceeded', 'BUDGET_EXCEEDED'),
    (CertificateError, 4, 'Certificate search exceeded its cap', 'CERTIFICATE_ERROR'),
    (ConfigurationError, 5, 'Invalid configuration', 'CONFIGURATION_ERROR'),
    (TableError, 6, 'Unable to read table', 'TABLE_ERROR'),
    (CacheError, 6, 'Cache unavailable', 'CACHE_ERROR'),
    (PermutationError, EXIT_INTERNAL, 'Internal error', 'PERMUTATION_ERROR'),
    (OrderError, EXIT_INTERNAL, 'Internal error', 'ORDER_ERROR'),
    (TwistorsionError, EXIT_INTERNAL, 'Internal error', 'INTERNAL_ERROR'),
]


def _emit_error(error: str, message: str, code: str) -> None:
    click.echo(json.dumps({'error': error, 'message': message, 'code': code}), err=True)


def handle_error(exc: TwistorsionError) -> int:
    """Log the error, write its payload to stderr and return the exit code."""
    for exc_type, exit_code, error, code in ERROR_HANDLERS:
        if isinstance(exc, exc_type):
            if exit_code == EXIT_INTERNAL:
                logger.error(f'{type(exc).__name__}: {exc.message}', extra={'details': exc.details})
            else:
                logger.warning(f'{error}: {exc.message}', extra={'details': exc.details})
            _emit_error(error, exc.message, code)
            return exit_code
    return EXIT_INTERNAL


def run_command(ctx: click.Context, flags: dict, command: Callable[[RunConfig], ResultEnvelope]) -> None:
    """Resolve the run configuration, run the command and exit with its code."""
    try:
        run_config = config.build_run_config(**flags)
        envelope = command(run_config)
        click.echo(render(envelope, run_config.output_format), nl=False)
        exit_code = VERDICT_EXIT_CODES.get(envelope.verdict, 0)
    except TwistorsionError as e:
        exit_code = handle_error(e)
    except Exception as e:
        # Final safety net
        logger.exception(f'Unhandled exception: {type(e).__name__}: {str(e)}')
        _emit_error('Internal error', 'An unexpected error occurred.', 'UNHANDLED_EXCEPTION')
        exit_code = EXIT_INTERNAL
    finally:
        clear_run_context()
    ctx.exit(exit_code)


def run_options(func):
    """Flags shared by every command that produces a result envelope."""
    options = [
        click.option('--max-degree', type=int, default=None, help='Largest degree n searched (S_{n+1}).'),
        click.option('--mode', 'search_mode', type=click.Choice(SEARCH_MODES), default=None,
                     help='pruned search, exhaustive oracle, or both with comparison.'),
        click.option('--threads', type=int, default=None, help='Worker processes for the search.'),
        click.option('--cache-dir', type=click.Path(file_okay=False), default=None, help='Witness cache directory.'),
        click.option('--no-cache', is_flag=True, default=False, help='Do not read or write the witness cache.'),
        click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS), default=None,
                     help='Output format.'),
        click.option('--k-cap', type=int, default=None, help='Upper bound for the Chebyshev constant k.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _flags(max_degree, search_mode, threads, cache_dir, no_cache, output_format, k_cap) -> dict:
    return {
        'max_degree': max_degree,
        'search_mode': search_mode,
        'threads': threads,
        'cache_dir': '' if no_cache else cache_dir,
        'output_format': output_format,
        'k_cap': k_cap,
    }


@click.group()
@click.version_option(version=__version__, prog_name='twistorsion')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'], case_sensitive=False),
              default=None, help='Overrides LOG_LEVEL.')
@click.option('--json-logs/--no-json-logs', default=None, help='Overrides USE_JSON_LOGGING.')
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], json_logs: Optional[bool]):
    """Generalized torsion and 0-surgeries on double twist knots K_{p,q}."""
    try:
        config.validate_and_load()
    except ConfigurationError as e:
        _emit_error('Invalid configuration', e.message, 'CONFIGURATION_ERROR')
        ctx.exit(5)

    setup_logging(
        use_json=config.USE_JSON_LOGGING if json_logs is None else json_logs,
        level=(log_level or config.LOG_LEVEL).upper(),
    )
    set_run_context(run_id=uuid.uuid4().hex[:12])


@cli.command(context_settings=PARAMS_CONTEXT)
@click.argument('p', type=int)
@click.argument('q', type=int)
@click.option('--candidate', 'label', type=click.Choice(CANDIDATE_LABELS), default='[xy,yx]',
              help='Named candidate element.')
@click.option('-n', '--conjugation', 'n', type=int, default=1, help='n in t^{-n} b t^n.')
@click.option('--word', default=None, help='Custom candidate word; overrides --candidate.')
@click.option('--basis', default='two_gen', help='Basis of --word (two_gen, std, abt).')
@click.option('--constraint', type=click.Choice(['fixed_x', 'unconstrained']), default='fixed_x')
@run_options
@click.pass_context
def search(ctx, p, q, label, n, word, basis, constraint, **options):
    """Search symmetric groups for a witness that the candidate is non-trivial."""
    set_run_context(params=f'p={p},q={q}')

    def command(run_config: RunConfig) -> ResultEnvelope:
        cand = custom_candidate(word, basis) if word else candidate(label, n)
        return cmd_search(p, q, run_config, cand=cand, constraint=constraint, progress=sys.stderr.isatty())

    run_command(ctx, _flags(**options), command)


@cli.command('verify-table')
@click.argument('path', required=False, type=click.Path(dir_okay=False))
@run_options
@click.pass_context
def verify_table(ctx, path, **options):
    """Verify every filled row of a witness table (default: the shipped one)."""
    run_command(ctx, _flags(**options), lambda run_config: cmd_verify_table(path, run_config))


@cli.command(context_settings=PARAMS_CONTEXT)
@click.argument('p', type=int)
@click.argument('q', type=int)
@click.option('--generator', type=click.Choice(['a', 'b']), default='a')
@run_options
@click.pass_context
def certify(ctx, p, q, generator, **options):
    """Torsion certificate for the 0-surgery on K_{p,-q}, p, q > 0."""
    set_run_context(params=f'p={p},q={-q}')
    run_command(ctx, _flags(**options), lambda run_config: cmd_certify(p, q, run_config, generator=generator))


@cli.command(context_settings=PARAMS_CONTEXT)
@click.argument('p', type=int)
@click.argument('q', type=int)
@click.argument('word')
@run_options
@click.pass_context
def biorder(ctx, p, q, word, **options):
    """Image of a word over {a, b, t} in K and its sign in the bi-order."""
    set_run_context(params=f'p={p},q={q}')
    run_command(ctx, _flags(**options), lambda run_config: cmd_biorder(p, q, word, run_config))


@cli.command(context_settings=PARAMS_CONTEXT)
@click.argument('p', type=int)
@click.argument('q', type=int)
@click.argument('p2', type=int, required=False)
@click.argument('q2', type=int, required=False)
@run_options
@click.pass_context
def classify(ctx, p, q, p2, q2, **options):
    """Invariants of K_{p,q}(0); with four parameters, decide homeomorphism."""
    if (p2 is None) != (q2 is None):
        raise click.UsageError('classify takes either two or four parameters')
    set_run_context(params=f'p={p},q={q}')
    run_command(ctx, _flags(**options), lambda run_config: cmd_classify(p, q, run_config, p2=p2, q2=q2))


@cli.command(context_settings=PARAMS_CONTEXT)
@click.argument('n', type=int)
@click.option('--table', 'table_path', default=None, type=click.Path(dir_okay=False))
@run_options
@click.pass_context
def pairs(ctx, n, table_path, **options):
    """Same-pq pairs of non-homeomorphic 0-surgeries, checked against the table."""
    run_command(ctx, _flags(**options), lambda run_config: cmd_pairs(n, run_config, table_path=table_path))


@cli.command()
@click.argument('command', type=click.Choice(sorted(PAYLOAD_SCHEMAS)))
def schema(command):
    """Print the JSON schema of a command's result envelope."""
    click.echo(json.dumps(cmd_schema(command), indent=2, sort_keys=True))


if __name__ == '__main__':
    cli()
