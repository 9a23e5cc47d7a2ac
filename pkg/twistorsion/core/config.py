"""Configuration validation and environment variable management."""

import os
import logging
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from twistorsion.core.exceptions import ConfigurationError

load_dotenv()

logger = logging.getLogger(__name__)

SearchMode = Literal['pruned', 'exhaustive', 'both']
OutputFormat = Literal['json', 'csv', 'text']

SEARCH_MODES = ('pruned', 'exhaustive', 'both')
OUTPUT_FORMATS = ('json', 'csv', 'text')

# Largest degree the exhaustive oracle is allowed to enumerate
EXHAUSTIVE_DEGREE_LIMIT = 9


class RunConfig(BaseModel):
    """Resolved settings for a single CLI invocation."""

    max_degree: int = Field(default=9, ge=1)
    degree_cap: int = Field(default=11, ge=1)
    search_mode: SearchMode = 'pruned'
    threads: int = Field(default=1, ge=1)
    cache_dir: Optional[str] = '.twistorsion-cache'
    output_format: OutputFormat = 'json'
    k_cap: int = Field(default=10000, ge=1)
    log_level: str = 'WARNING'
    use_json_logging: bool = False

    def snapshot(self) -> dict:
        """Configuration as recorded in result envelopes."""
        return self.model_dump(mode='json')


def _parse_int(name: str, default: int, errors: list[str]) -> int:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        errors.append(f'{name} must be an integer, got {raw!r}')
        return default
    if value < 1:
        errors.append(f'{name} must be positive, got {value}')
    return value


class Config:
    """Application configuration with validation."""

    MAX_DEGREE: int = 9
    DEGREE_CAP: int = 11
    SEARCH_MODE: str = 'pruned'
    THREADS: int = 1
    CACHE_DIR: str = '.twistorsion-cache'
    FORMAT: str = 'json'
    K_CAP: int = 10000

    LOG_LEVEL: str = 'WARNING'
    USE_JSON_LOGGING: bool = False

    @classmethod
    def validate_and_load(cls) -> None:
        """
        Validate and load all TWISTORSION_* environment variables.
        Raises ConfigurationError listing every invalid variable.
        """
        errors: list[str] = []

        cls.MAX_DEGREE = _parse_int('TWISTORSION_MAX_DEGREE', 9, errors)
        cls.DEGREE_CAP = _parse_int('TWISTORSION_DEGREE_CAP', 11, errors)
        cls.THREADS = _parse_int('TWISTORSION_THREADS', 1, errors)
        cls.K_CAP = _parse_int('TWISTORSION_K_CAP', 10000, errors)

        cls.SEARCH_MODE = os.getenv('TWISTORSION_SEARCH_MODE', 'pruned').lower()
        if cls.SEARCH_MODE not in SEARCH_MODES:
            errors.append(
                f'TWISTORSION_SEARCH_MODE must be one of {", ".join(SEARCH_MODES)}, '
                f'got {cls.SEARCH_MODE!r}'
            )

        cls.FORMAT = os.getenv('TWISTORSION_FORMAT', 'json').lower()
        if cls.FORMAT not in OUTPUT_FORMATS:
            errors.append(
                f'TWISTORSION_FORMAT must be one of {", ".join(OUTPUT_FORMATS)}, '
                f'got {cls.FORMAT!r}'
            )

        cls.CACHE_DIR = os.getenv('TWISTORSION_CACHE_DIR', '.twistorsion-cache')

        cls.LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING').upper()
        if cls.LOG_LEVEL not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f'LOG_LEVEL is not a logging level: {cls.LOG_LEVEL!r}')
        cls.USE_JSON_LOGGING = os.getenv('USE_JSON_LOGGING', 'false').lower() in ('true', '1', 'yes')

        if errors:
            error_message = 'Configuration validation failed:\n  - ' + '\n  - '.join(errors)
            raise ConfigurationError(error_message, details={'errors': errors})

        logger.debug('Configuration validated successfully')

    @classmethod
    def build_run_config(cls, **flags) -> RunConfig:
        """
        Merge CLI flags over the loaded environment values.

        Flags set to None fall back to the environment, which falls back
        to the defaults. Call validate_and_load() first.

        Raises:
            ConfigurationError: If the merged values are inconsistent.
        """
        values = {
            'max_degree': cls.MAX_DEGREE,
            'degree_cap': cls.DEGREE_CAP,
            'search_mode': cls.SEARCH_MODE,
            'threads': cls.THREADS,
            'cache_dir': cls.CACHE_DIR or None,
            'output_format': cls.FORMAT,
            'k_cap': cls.K_CAP,
            'log_level': cls.LOG_LEVEL,
            'use_json_logging': cls.USE_JSON_LOGGING,
        }
        values.update({k: v for k, v in flags.items() if v is not None})
        try:
            return RunConfig(**values)
        except ValidationError as e:
            problems = [f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()]
            raise ConfigurationError(
                'Configuration validation failed:\n  - ' + '\n  - '.join(problems),
                details={'errors': problems},
            ) from e


config = Config
