"""search: look for permutation witnesses of generalized torsion, degree by degree."""

import time
from typing import Optional

from twistorsion.core.config import RunConfig
from twistorsion.core.logging_config import get_logger
from twistorsion.schemas.envelope import DegreeSummary, ResultEnvelope, SearchOutcome, make_envelope
from twistorsion.schemas.witness import Constraint
from twistorsion.services.cache import WitnessCache
from twistorsion.services.permrep import search_degrees
from twistorsion.services.presentations import CandidateElement, KnotParams, candidate
from twistorsion.services.words import format_word

logger = get_logger(__name__)


def cmd_search(
    p: int,
    q: int,
    config: RunConfig,
    cand: Optional[CandidateElement] = None,
    constraint: Constraint = 'fixed_x',
    progress: bool = False,
) -> ResultEnvelope:
    """
    Search degrees 1..config.max_degree for a witness.

    A degree with no witness is reported as such; when no degree has one the
    verdict is 'unknown', since a bounded search cannot show the candidate is
    trivial.

    Raises:
        SearchBudgetError: If max_degree exceeds the budget for the chosen mode
        CacheError: If results cannot be written to the cache directory
    """
    params = KnotParams(p, q)
    cand = (cand or candidate('[xy,yx]')).in_basis('two_gen', params)
    cache = WitnessCache(config.cache_dir) if config.cache_dir else None

    start_time = time.time()
    results = search_degrees(
        params,
        config.max_degree,
        cand,
        constraint,
        mode=config.search_mode,
        workers=config.threads,
        degree_cap=config.degree_cap,
        cache=cache,
        progress=progress,
    )
    duration = time.time() - start_time

    first = next((r.degree for r in results if r.witness is not None), None)
    if any(r.oracle_agrees is False for r in results):
        verdict = 'oracle_mismatch'
    elif first is not None:
        verdict = 'witness'
    else:
        verdict = 'unknown'

    outcome = SearchOutcome(
        p=p,
        q=q,
        candidate=cand.label,
        candidate_word=format_word(cand.word),
        constraint=constraint,
        mode=config.search_mode,
        max_degree=config.max_degree,
        degrees=[
            DegreeSummary(
                degree=r.degree,
                found=r.witness is not None,
                witness=r.witness,
                oracle_agrees=r.oracle_agrees,
            )
            for r in results
        ],
        first_witness_degree=first,
        verdict=verdict,
    )
    logger.info(f'Search finished: p={p}, q={q}, verdict={verdict}, duration={duration:.2f}s')
    timing = {
        'seconds': round(duration, 6),
        'per_degree': {str(r.degree): {'seconds': r.seconds, 'source': r.source} for r in results},
        'cache_hits': cache.hits if cache else 0,
    }
    return make_envelope('search', {'p': p, 'q': q}, outcome, timing, config.snapshot())
