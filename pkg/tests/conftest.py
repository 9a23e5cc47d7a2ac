import random

import pytest

from twistorsion.core.config import RunConfig
from twistorsion.services.presentations import STD_ALPHABET, TWO_GEN_ALPHABET
from twistorsion.services.words import Word

ENV_VARS = (
    'TWISTORSION_MAX_DEGREE',
    'TWISTORSION_DEGREE_CAP',
    'TWISTORSION_SEARCH_MODE',
    'TWISTORSION_THREADS',
    'TWISTORSION_CACHE_DIR',
    'TWISTORSION_FORMAT',
    'TWISTORSION_K_CAP',
    'LOG_LEVEL',
    'USE_JSON_LOGGING',
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def run_config(tmp_path) -> RunConfig:
    return RunConfig(cache_dir=str(tmp_path / 'cache'))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


def random_word(rng: random.Random, alphabet=STD_ALPHABET, max_syllables: int = 6, max_exp: int = 3) -> Word:
    syllables = []
    for _ in range(rng.randint(0, max_syllables)):
        gen = rng.choice(alphabet.generators)
        exp = rng.choice([e for e in range(-max_exp, max_exp + 1) if e])
        syllables.append((gen, exp))
    return Word(alphabet, tuple(syllables))


def random_two_gen_word(rng: random.Random, max_syllables: int = 6) -> Word:
    return random_word(rng, TWO_GEN_ALPHABET, max_syllables)
