"""
On-disk cache of per-degree search results.

Entries are grouped in a directory per homeomorphism class (canonical
(p̂, q̂)); the file name carries the literal (p, q), degree, candidate and
constraint, since a witness is specific to the presentation it was found in.
"""

import hashlib
import json
import os
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from twistorsion.core.exceptions import CacheError
from twistorsion.core.logging_config import get_logger
from twistorsion.schemas.witness import DegreeResult
from twistorsion.services.classify import canonicalize
from twistorsion.services.presentations import CandidateElement, KnotParams
from twistorsion.services.words import format_word

logger = get_logger(__name__)

CACHE_VERSION = 1


def safe_filename(name: str) -> str:
    return ''.join(c if c.isalnum() or c in '-_.' else '-' for c in name).strip('-') or 'word'


def hash_text_sha256(text: str) -> str:
    h = hashlib.sha256()
    h.update(text.encode('utf-8'))
    return h.hexdigest()


def build_entry_path(root: Path, params: KnotParams, n: int, cand: CandidateElement, constraint: str) -> Path:
    p_hat, q_hat = canonicalize(params.p, params.q)
    word_key = hash_text_sha256(f'{cand.basis}:{format_word(cand.word)}')[:12]
    name = f'p{params.p}_q{params.q}_n{n}_{safe_filename(cand.label)}_{word_key}_{safe_filename(constraint)}.json'
    return root / f'{p_hat}_{q_hat}' / name


class WitnessCache:
    """Directory-backed cache implementing the search's get/put protocol."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def get(self, params: KnotParams, n: int, cand: CandidateElement, constraint: str) -> Optional[DegreeResult]:
        path = build_entry_path(self.root, params, n, cand, constraint)
        if not path.exists():
            self.misses += 1
            return None
        try:
            entry = json.loads(path.read_text(encoding='utf-8'))
            if entry.get('cache_version') != CACHE_VERSION:
                logger.warning(
                    f'Ignoring cache entry with version {entry.get("cache_version")}: path={path}'
                )
                self.misses += 1
                return None
            result = DegreeResult.model_validate(entry['result'])
        except (OSError, json.JSONDecodeError, KeyError, ValidationError) as e:
            logger.warning(f'Ignoring unreadable cache entry: path={path}, error={e}')
            self.misses += 1
            return None

        self.hits += 1
        logger.debug(f'Cache hit: path={path}')
        return result.model_copy(update={'source': 'cache'})

    def put(self, params: KnotParams, n: int, cand: CandidateElement, constraint: str, result: DegreeResult) -> None:
        """
        Raises:
            CacheError: If the entry cannot be written
        """
        path = build_entry_path(self.root, params, n, cand, constraint)
        entry = {
            'cache_version': CACHE_VERSION,
            'key': {
                'p': params.p,
                'q': params.q,
                'n': n,
                'candidate': cand.label,
                'candidate_word': format_word(cand.word),
                'basis': cand.basis,
                'constraint': constraint,
            },
            'result': result.model_dump(mode='json'),
        }
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix('.tmp')
            tmp.write_text(json.dumps(entry, indent=2, sort_keys=True), encoding='utf-8')
            os.replace(tmp, path)
        except OSError as e:
            raise CacheError(
                f'Failed to write cache entry: {e}',
                details={'path': str(path), 'error': str(e)},
            ) from e
        logger.debug(f'Cache stored: path={path}')
