import json

import pytest

from twistorsion.core.exceptions import CacheError
from twistorsion.schemas.witness import DegreeResult
from twistorsion.services.cache import CACHE_VERSION, WitnessCache, build_entry_path
from twistorsion.services.permrep import search_degrees
from twistorsion.services.presentations import KnotParams, candidate

COMMUTATOR = candidate('[xy,yx]')


def test_entries_grouped_by_homeomorphism_class(tmp_path):
    first = build_entry_path(tmp_path, KnotParams(3, 2), 5, COMMUTATOR, 'fixed_x:pruned')
    second = build_entry_path(tmp_path, KnotParams(-2, -3), 5, COMMUTATOR, 'fixed_x:pruned')
    assert first.parent == second.parent == tmp_path / '2_3'
    assert first != second


def test_round_trip(tmp_path):
    cache = WitnessCache(tmp_path)
    params = KnotParams(2, 2)
    assert cache.get(params, 3, COMMUTATOR, 'fixed_x:pruned') is None
    cache.put(params, 3, COMMUTATOR, 'fixed_x:pruned', DegreeResult(degree=3, seconds=0.5))
    hit = cache.get(params, 3, COMMUTATOR, 'fixed_x:pruned')
    assert hit.degree == 3
    assert hit.source == 'cache'
    assert (cache.hits, cache.misses) == (1, 1)


def test_search_reuses_cache(tmp_path):
    cache = WitnessCache(tmp_path)
    fresh = search_degrees((2, 2), 5, COMMUTATOR, cache=cache)
    again = search_degrees((2, 2), 5, COMMUTATOR, cache=cache)
    assert cache.hits == 5
    assert [r.witness for r in again] == [r.witness for r in fresh]
    assert all(r.source == 'cache' for r in again)


def test_stale_and_corrupt_entries_are_ignored(tmp_path):
    cache = WitnessCache(tmp_path)
    params = KnotParams(2, 2)
    path = build_entry_path(tmp_path, params, 2, COMMUTATOR, 'fixed_x:pruned')
    cache.put(params, 2, COMMUTATOR, 'fixed_x:pruned', DegreeResult(degree=2))

    entry = json.loads(path.read_text())
    entry['cache_version'] = CACHE_VERSION + 1
    path.write_text(json.dumps(entry))
    assert cache.get(params, 2, COMMUTATOR, 'fixed_x:pruned') is None

    path.write_text('{')
    assert cache.get(params, 2, COMMUTATOR, 'fixed_x:pruned') is None


def test_unwritable_cache(tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('not a directory')
    cache = WitnessCache(blocker)
    with pytest.raises(CacheError):
        cache.put(KnotParams(2, 2), 1, COMMUTATOR, 'fixed_x:pruned', DegreeResult(degree=1))
