"""
Permutation representations of the surgery groups.

Composition follows the convention a·b = (i ↦ a(b(i))): b is applied first,
so evaluate(uv) = evaluate(u)·evaluate(v).

The witness search fixes the image of x (by default the full cycle
[1, 2, ..., n, 0]) and assigns y(0), y(1), ... depth first in ascending
order. Partial assignments are partial injections; the relators are
evaluated on them as a straight-line program, and a node is abandoned as soon
as some relator is defined at a point it does not fix. The first leaf reached
is therefore the lexicographically smallest y.
"""

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Protocol, Sequence

from twistorsion.core.config import EXHAUSTIVE_DEGREE_LIMIT
from twistorsion.core.exceptions import (
    ParameterError,
    PermutationError,
    SearchBudgetError,
    TwistorsionError,
)
from twistorsion.core.logging_config import get_logger, log_with_context
from twistorsion.core.progress import pbar
from twistorsion.schemas.witness import Constraint, DegreeResult, WitnessRecord
from twistorsion.services.presentations import (
    TWO_GEN_ALPHABET,
    CandidateElement,
    KnotParams,
    Presentation,
    surgery_group_two_gen,
)
from twistorsion.services.words import Alphabet, Generator, Word, format_word, parse_word

logger = get_logger(__name__)

DEFAULT_DEGREE_CAP = 11


@dataclass(frozen=True)
class Permutation:
    """Bijection of {0, ..., degree} stored as its image array."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if not images or sorted(images) != list(range(len(images))):
            raise PermutationError(
                f'Not a permutation of 0..{len(images) - 1}: {list(images)}',
            )
        object.__setattr__(self, 'images', images)

    @classmethod
    def identity(cls, degree: int) -> 'Permutation':
        return cls(tuple(range(degree + 1)))

    @classmethod
    def full_cycle(cls, degree: int) -> 'Permutation':
        """[1, 2, ..., degree, 0]."""
        return cls(tuple(range(1, degree + 1)) + (0,))

    @property
    def degree(self) -> int:
        return len(self.images) - 1

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: 'Permutation') -> 'Permutation':
        return perm_compose(self, other)

    def __pow__(self, k: int) -> 'Permutation':
        return perm_power(self, k)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def __str__(self) -> str:
        return '[' + ','.join(str(i) for i in self.images) + ']'


def _check_degrees(a: Permutation, b: Permutation) -> None:
    if a.degree != b.degree:
        raise PermutationError(
            f'Degree mismatch: {a.degree} vs {b.degree}',
            details={'left': a.degree, 'right': b.degree},
        )


def perm_compose(a: Permutation, b: Permutation) -> Permutation:
    """a·b, the bijection i ↦ a(b(i))."""
    _check_degrees(a, b)
    return Permutation(_p_compose(a.images, b.images))


def perm_inverse(a: Permutation) -> Permutation:
    return Permutation(_p_inverse(a.images))


def perm_power(a: Permutation, k: int) -> Permutation:
    return Permutation(_p_power(a.images, k))


def cycle_type(a: Permutation) -> tuple[int, ...]:
    """Cycle lengths in decreasing order, fixed points included."""
    seen = [False] * len(a.images)
    lengths = []
    for start in range(len(a.images)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = a.images[i]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def perm_order(a: Permutation) -> int:
    return math.lcm(*cycle_type(a))


# Partial injections: tuples where -1 marks an undefined point. Composition
# of restrictions is a restriction, so a contradiction found on a partial
# assignment persists in every completion.

def _p_compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(a[j] if j >= 0 else -1 for j in b)


def _p_inverse(a: Sequence[int]) -> tuple[int, ...]:
    inv = [-1] * len(a)
    for i, v in enumerate(a):
        if v >= 0:
            inv[v] = i
    return tuple(inv)


def _p_power(a: Sequence[int], k: int) -> tuple[int, ...]:
    if k < 0:
        a, k = _p_inverse(a), -k
    result = tuple(range(len(a)))
    base = tuple(a)
    while k:
        if k & 1:
            result = _p_compose(result, base)
        k >>= 1
        if k:
            base = _p_compose(base, base)
    return result


def _relator_sides(x, y, p: int, q: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """
    Pairs of partial maps that agree in every model, from splitting the
    surgery relators x L^p y L^-p and L'^p L^p at several points.

    Comparing two sides catches a contradiction as soon as both are defined
    at one point, well before the whole relator is defined there.
    """
    xy = _p_compose(x, y)
    yx = _p_compose(y, x)
    yx_q = _p_power(yx, q)
    xy_q = _p_power(xy, q)
    l_p = _p_power(_p_compose(yx_q, _p_inverse(xy_q)), p)
    l_mp = _p_inverse(l_p)
    yield _p_power(_p_compose(_p_inverse(yx_q), xy_q), p), l_mp

    x_lp = _p_compose(x, l_p)
    lp_ym = _p_compose(l_p, _p_inverse(y))
    yield x_lp, lp_ym
    yield x, _p_compose(lp_ym, l_mp)
    yield _p_compose(x_lp, y), l_p


def _agree(left: Sequence[int], right: Sequence[int]) -> bool:
    """False when no bijections extending left and right can be equal."""
    preimage = _p_inverse(left)
    for i, (a, b) in enumerate(zip(left, right)):
        if b < 0:
            continue
        if a >= 0 and a != b:
            return False
        if preimage[b] >= 0 and preimage[b] != i:
            return False
    return True


def _consistent(x, y, p: int, q: int) -> bool:
    return all(_agree(left, right) for left, right in _relator_sides(x, y, p, q))


def _iter_models(
    x: tuple[int, ...],
    p: int,
    q: int,
    first_values: Optional[Sequence[int]] = None,
) -> Iterator[tuple[int, ...]]:
    """All y making (x, y) a model, in lexicographic order."""
    size = len(x)
    y = [-1] * size
    used = [False] * size

    def extend(depth: int) -> Iterator[tuple[int, ...]]:
        if depth == size:
            yield tuple(y)
            return
        values = first_values if depth == 0 and first_values is not None else range(size)
        for v in values:
            if used[v]:
                continue
            y[depth] = v
            used[v] = True
            if _consistent(x, y, p, q):
                yield from extend(depth + 1)
            y[depth] = -1
            used[v] = False

    yield from extend(0)


def _raw_syllables(word: Word) -> tuple[tuple[int, int], ...]:
    """Candidate syllables as (0 for x / 1 for y, exponent) for worker processes."""
    return tuple((0 if g.name == 'x' else 1, e) for g, e in word.syllables)


def _eval_raw(syllables, x, y) -> tuple[int, ...]:
    result = tuple(range(len(x)))
    for gen, exp in syllables:
        result = _p_compose(result, _p_power(x if gen == 0 else y, exp))
    return result


def _search_shard(p: int, q: int, x: tuple[int, ...], first: int, syllables) -> Optional[tuple[int, ...]]:
    """Smallest witness y with y(0) = first, if any."""
    for y in _iter_models(x, p, q, first_values=(first,)):
        image = _eval_raw(syllables, x, y)
        if any(i != v for i, v in enumerate(image)):
            return y
    return None


@dataclass(frozen=True)
class PermAssignment:
    degree: int
    images: Mapping[Generator, Permutation]

    def __post_init__(self):
        for gen, perm in self.images.items():
            if perm.degree != self.degree:
                raise PermutationError(
                    f'Image of {gen.name} has degree {perm.degree}, expected {self.degree}',
                )

    @classmethod
    def from_names(cls, alphabet: Alphabet, images: Mapping[str, Sequence[int]]) -> 'PermAssignment':
        perms = {alphabet[name]: Permutation(tuple(img)) for name, img in images.items()}
        degrees = {perm.degree for perm in perms.values()}
        if len(degrees) != 1:
            raise PermutationError(f'Images have different degrees: {sorted(degrees)}')
        return cls(degrees.pop(), perms)

    def __getitem__(self, gen: Generator) -> Permutation:
        try:
            return self.images[gen]
        except KeyError:
            raise PermutationError(f'Generator {gen.name!r} is not assigned') from None


def evaluate(w: Word, asg: PermAssignment) -> Permutation:
    """Image of w under the homomorphism determined by asg."""
    result = tuple(range(asg.degree + 1))
    powers: dict[tuple[Generator, int], tuple[int, ...]] = {}
    for gen, exp in w.syllables:
        key = (gen, exp)
        if key not in powers:
            powers[key] = _p_power(asg[gen].images, exp)
        result = _p_compose(result, powers[key])
    return Permutation(result)


def is_homomorphism(pres: Presentation, asg: PermAssignment) -> bool:
    return all(evaluate(r, asg).is_identity() for r in pres.relators)


def _two_gen_assignment(x: Sequence[int], y: Sequence[int]) -> PermAssignment:
    return PermAssignment.from_names(TWO_GEN_ALPHABET, {'x': x, 'y': y})


def make_witness(
    params,
    x: Sequence[int],
    y: Sequence[int],
    cand: CandidateElement,
    constraint: Constraint = 'fixed_x',
) -> WitnessRecord:
    """
    Build a WitnessRecord, verifying it first.

    Raises:
        PermutationError: If (x, y) is not a model or the candidate maps to the identity
    """
    params = KnotParams.of(params)
    cand = cand.in_basis('two_gen', params)
    asg = _two_gen_assignment(x, y)
    image = evaluate(cand.word, asg)
    if not is_homomorphism(surgery_group_two_gen(params), asg) or image.is_identity():
        raise PermutationError(
            f'Assignment is not a witness for {params}',
            details={'x': list(x), 'y': list(y), 'candidate': cand.label},
        )
    return WitnessRecord(
        p=params.p,
        q=params.q,
        degree=asg.degree,
        x=tuple(x),
        y=tuple(y),
        candidate=cand.label,
        candidate_word=format_word(cand.word),
        candidate_image=image.images,
        constraint=constraint,
    )


def verify_witness(rec: WitnessRecord) -> bool:
    """True iff the record's (x, y) satisfies the surgery relators and the candidate image is not the identity."""
    try:
        params = KnotParams(rec.p, rec.q)
        asg = _two_gen_assignment(rec.x, rec.y)
        if asg.degree != rec.degree:
            return False
        word = parse_word(rec.candidate_word, TWO_GEN_ALPHABET)
        if not is_homomorphism(surgery_group_two_gen(params), asg):
            return False
        return not evaluate(word, asg).is_identity()
    except TwistorsionError as e:
        logger.debug(f'Witness record rejected: {e.message}')
        return False


def _partitions(n: int, largest: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def conjugacy_representatives(degree: int) -> list[Permutation]:
    """
    One permutation per cycle type of S_{degree+1}, cycles on consecutive
    blocks, starting with the full cycle.
    """
    reps = []
    for shape in _partitions(degree + 1):
        images = []
        start = 0
        for length in shape:
            images.extend(range(start + 1, start + length))
            images.append(start)
            start += length
        reps.append(Permutation(tuple(images)))
    return reps


def _x_choices(degree: int, constraint: Constraint) -> list[Permutation]:
    if constraint == 'fixed_x':
        return [Permutation.full_cycle(degree)]
    if constraint == 'unconstrained':
        return conjugacy_representatives(degree)
    raise ParameterError(f'Unknown search constraint {constraint!r}')


def _check_degree(n: int, degree_cap: int) -> None:
    if n < 1:
        raise ParameterError(f'Degree must be at least 1, got {n}')
    if n > degree_cap:
        raise SearchBudgetError(
            f'Degree {n} exceeds the configured budget of {degree_cap}',
            details={'degree': n, 'degree_cap': degree_cap},
        )


def _first_witness_y(p: int, q: int, x: tuple[int, ...], syllables, workers: int) -> Optional[tuple[int, ...]]:
    shards = range(len(x))
    if workers <= 1:
        for first in shards:
            y = _search_shard(p, q, x, first, syllables)
            if y is not None:
                return y
        return None

    # Shards are consumed in y(0) order, so the first hit is the global minimum
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_search_shard, p, q, x, first, syllables) for first in shards]
        try:
            for future in futures:
                y = future.result()
                if y is not None:
                    return y
            return None
        finally:
            for future in futures:
                future.cancel()


def search_witness(
    params,
    n: int,
    cand: CandidateElement,
    constraint: Constraint = 'fixed_x',
    workers: int = 1,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> Optional[WitnessRecord]:
    """
    Pruned depth-first search for a witness in S_{n+1}.

    Args:
        params: (p, q)
        n: Degree; permutations act on {0, ..., n}
        cand: Candidate element, translated to the x, y basis if needed
        constraint: 'fixed_x' pins x to the full cycle, 'unconstrained' tries
            one x per cycle type
        workers: Number of processes to shard y(0) across
        degree_cap: Largest degree allowed

    Returns:
        The witness with lexicographically smallest y, or None

    Raises:
        SearchBudgetError: If n exceeds degree_cap
    """
    params = KnotParams.of(params)
    _check_degree(n, degree_cap)
    cand = cand.in_basis('two_gen', params)
    syllables = _raw_syllables(cand.word)

    for x in _x_choices(n, constraint):
        y = _first_witness_y(params.p, params.q, x.images, syllables, workers)
        if y is not None:
            return make_witness(params, x.images, y, cand, constraint)
    return None


def _trace_point(w: Word, asg: PermAssignment, inverses: dict, point: int) -> int:
    for gen, exp in reversed(w.syllables):
        images = asg[gen].images if exp > 0 else inverses[gen]
        for _ in range(abs(exp)):
            point = images[point]
    return point


def search_exhaustive_oracle(
    params,
    n: int,
    cand: CandidateElement,
    constraint: Constraint = 'fixed_x',
) -> Optional[WitnessRecord]:
    """
    Same contract as search_witness, by enumerating all (n+1)! images of y
    and evaluating the relator words directly.

    Raises:
        SearchBudgetError: If n is beyond the enumeration limit
    """
    params = KnotParams.of(params)
    _check_degree(n, EXHAUSTIVE_DEGREE_LIMIT)
    cand = cand.in_basis('two_gen', params)
    pres = surgery_group_two_gen(params)
    gen_x, gen_y = TWO_GEN_ALPHABET['x'], TWO_GEN_ALPHABET['y']

    for x in _x_choices(n, constraint):
        for images in itertools.permutations(range(n + 1)):
            y = Permutation(images)
            asg = PermAssignment(n, {gen_x: x, gen_y: y})
            inverses = {gen_x: perm_inverse(x).images, gen_y: perm_inverse(y).images}
            if any(_trace_point(r, asg, inverses, 0) != 0 for r in pres.relators):
                continue
            if is_homomorphism(pres, asg) and not evaluate(cand.word, asg).is_identity():
                return make_witness(params, x.images, y.images, cand, constraint)
    return None


def iter_models(params, n: int, x: Optional[Permutation] = None) -> Iterator[Permutation]:
    """Every y such that (x, y) satisfies the surgery relators, lexicographically; x defaults to the full cycle."""
    params = KnotParams.of(params)
    x = x or Permutation.full_cycle(n)
    for y in _iter_models(x.images, params.p, params.q):
        yield Permutation(y)


class ResultCache(Protocol):
    def get(self, params: KnotParams, n: int, cand: CandidateElement, constraint: str) -> Optional[DegreeResult]: ...

    def put(self, params: KnotParams, n: int, cand: CandidateElement, constraint: str, result: DegreeResult) -> None: ...


def search_degrees(
    params,
    n_max: int,
    cand: CandidateElement,
    constraint: Constraint = 'fixed_x',
    *,
    mode: str = 'pruned',
    workers: int = 1,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    cache: Optional[ResultCache] = None,
    progress: bool = False,
) -> list[DegreeResult]:
    """
    Run the search at every degree 1..n_max.

    In 'both' mode the pruned search and the exhaustive oracle are run and
    their agreement is recorded on each result.

    Raises:
        SearchBudgetError: If n_max exceeds degree_cap, or the oracle limit in
            exhaustive/both mode
    """
    params = KnotParams.of(params)
    _check_degree(n_max, degree_cap)
    if mode in ('exhaustive', 'both'):
        _check_degree(n_max, EXHAUSTIVE_DEGREE_LIMIT)

    results: list[DegreeResult] = []
    for n in pbar(range(1, n_max + 1), desc=f'search {params}', verbose=progress):
        if cache is not None:
            cached = cache.get(params, n, cand, constraint + ':' + mode)
            if cached is not None:
                results.append(cached)
                continue

        start = time.time()
        if mode == 'exhaustive':
            witness = search_exhaustive_oracle(params, n, cand, constraint)
            agrees = None
        else:
            witness = search_witness(params, n, cand, constraint, workers, degree_cap)
            agrees = None
            if mode == 'both':
                agrees = search_exhaustive_oracle(params, n, cand, constraint) == witness
        elapsed = time.time() - start

        result = DegreeResult(degree=n, witness=witness, seconds=round(elapsed, 6), oracle_agrees=agrees)
        log_with_context(
            logger,
            'info',
            f'Searched degree {n} for {params}',
            degree=n,
            found=witness is not None,
            seconds=round(elapsed, 3),
            mode=mode,
        )
        if cache is not None:
            cache.put(params, n, cand, constraint + ':' + mode, result)
        results.append(result)
    return results


def search_range(
    params,
    n_max: int,
    cand: CandidateElement,
    constraint: Constraint = 'fixed_x',
    **kwargs,
) -> list[WitnessRecord]:
    """First witness at each degree 1..n_max that has one."""
    return [r.witness for r in search_degrees(params, n_max, cand, constraint, **kwargs) if r.witness]
