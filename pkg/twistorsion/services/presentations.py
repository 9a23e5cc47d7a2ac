"""
Group presentations attached to the double twist knot K_{p,q} and its 0-surgery.

Each builder returns an immutable Presentation whose label names the basis it
is written in. Generator changes between bases are free-group homomorphisms;
they are isomorphisms of the presented groups (never of the free groups), so
a relator pushed through a change is trivial in the target group but usually
not freely trivial.
"""

from dataclasses import dataclass
from typing import Mapping, Optional

from twistorsion.core.exceptions import ParameterError, PresentationError
from twistorsion.core.logging_config import get_logger
from twistorsion.services.words import (
    Alphabet,
    Generator,
    Word,
    commutator,
    concat,
    exponent_sum,
    format_word,
    invert,
    parse_word,
    power,
    substitute,
)

logger = get_logger(__name__)

STD_ALPHABET = Alphabet.from_names('a', 'b', 't')
TWO_GEN_ALPHABET = Alphabet.from_names('x', 'y')
ABT_ALPHABET = Alphabet.from_names('A', 'B', 'T')
COMPLEMENT_ALPHABET = Alphabet.from_names('a', 'b')

# Presentation label -> basis (alphabet family) it is written in
BASIS_OF_LABEL = {
    'lin': 'std',
    'std': 'std',
    'two_gen_knot': 'two_gen',
    'two_gen': 'two_gen',
    'abt': 'abt',
    'complement': 'complement',
    'h_window': 'h_window',
}

_ALPHABET_OF_BASIS = {
    'std': STD_ALPHABET,
    'two_gen': TWO_GEN_ALPHABET,
    'abt': ABT_ALPHABET,
    'complement': COMPLEMENT_ALPHABET,
}


@dataclass(frozen=True)
class KnotParams:
    """Twist parameters (p, q) of K_{p,q}; both nonzero."""

    p: int
    q: int

    def __post_init__(self):
        if self.p == 0 or self.q == 0:
            raise ParameterError(
                f'Twist parameters must be nonzero, got (p, q) = ({self.p}, {self.q})',
                details={'p': self.p, 'q': self.q},
            )

    @classmethod
    def of(cls, value) -> 'KnotParams':
        if isinstance(value, KnotParams):
            return value
        p, q = value
        return cls(int(p), int(q))

    @property
    def pq(self) -> int:
        return self.p * self.q

    def as_tuple(self) -> tuple[int, int]:
        return (self.p, self.q)

    def __str__(self) -> str:
        return f'({self.p},{self.q})'


@dataclass(frozen=True)
class Presentation:
    generators: Alphabet
    relators: tuple[Word, ...]
    label: str
    params: Optional[KnotParams] = None

    def __post_init__(self):
        for r in self.relators:
            if r.alphabet != self.generators:
                raise PresentationError(
                    f'Relator {format_word(r)} is not over {self.generators}',
                    details={'label': self.label},
                )

    @property
    def basis(self) -> str:
        return BASIS_OF_LABEL[self.label]


@dataclass(frozen=True)
class GeneratorMap:
    """Free-group homomorphism given by the images of the source generators."""

    source: Alphabet
    target: Alphabet
    images: Mapping[Generator, Word]

    def apply(self, w: Word) -> Word:
        if w.alphabet != self.source:
            raise PresentationError(
                f'Word {format_word(w)} is not over the source alphabet {self.source}'
            )
        return substitute(w, self.images, self.target)

    def then(self, other: 'GeneratorMap') -> 'GeneratorMap':
        """Composite map: apply self, then other."""
        if self.target != other.source:
            raise PresentationError('Cannot compose maps with mismatched alphabets')
        return GeneratorMap(
            self.source,
            other.target,
            {g: other.apply(img) for g, img in self.images.items()},
        )


def _std_letters():
    a = Word.letter(STD_ALPHABET, 'a')
    b = Word.letter(STD_ALPHABET, 'b')
    t = Word.letter(STD_ALPHABET, 't')
    return a, b, t


def _two_gen_blocks(params: KnotParams) -> tuple[Word, Word, Word, Word]:
    """xy, yx, L = (yx)^q (xy)^-q and L' = (yx)^-q (xy)^q."""
    x = Word.letter(TWO_GEN_ALPHABET, 'x')
    y = Word.letter(TWO_GEN_ALPHABET, 'y')
    xy, yx = concat(x, y), concat(y, x)
    big_l = concat(power(yx, params.q), power(xy, -params.q))
    big_l_prime = concat(power(yx, -params.q), power(xy, params.q))
    return xy, yx, big_l, big_l_prime


def knot_group_lin(params) -> Presentation:
    """
    Three-generator knot group presentation:
    ⟨a,b,t | t a^p t⁻¹ = b⁻¹ a^p, t b^-q a⁻¹ t⁻¹ = b^-q⟩.
    """
    params = KnotParams.of(params)
    a, b, t = _std_letters()
    a_p = power(a, params.p)
    b_mq = power(b, -params.q)
    r1 = concat(concat(t, a_p), concat(invert(t), invert(concat(invert(b), a_p))))
    r2 = concat(
        concat(concat(t, b_mq), concat(invert(a), invert(t))),
        invert(b_mq),
    )
    return Presentation(STD_ALPHABET, (r1, r2), 'lin', params)


def surgery_group_std(params) -> Presentation:
    """The knot group with the 0-framed longitude [b^q, a^p] killed."""
    params = KnotParams.of(params)
    knot = knot_group_lin(params)
    a, b, _ = _std_letters()
    longitude = commutator(power(b, params.q), power(a, params.p))
    return Presentation(STD_ALPHABET, knot.relators + (longitude,), 'std', params)


def knot_group_two_gen(params) -> Presentation:
    """⟨x,y | x L^p y L^-p⟩."""
    params = KnotParams.of(params)
    x = Word.letter(TWO_GEN_ALPHABET, 'x')
    y = Word.letter(TWO_GEN_ALPHABET, 'y')
    _, _, big_l, _ = _two_gen_blocks(params)
    l_p = power(big_l, params.p)
    r1 = concat(concat(x, l_p), concat(y, invert(l_p)))
    return Presentation(TWO_GEN_ALPHABET, (r1,), 'two_gen_knot', params)


def surgery_group_two_gen(params) -> Presentation:
    """⟨x,y | x L^p y L^-p, L'^p L^p⟩."""
    params = KnotParams.of(params)
    knot = knot_group_two_gen(params)
    _, _, big_l, big_l_prime = _two_gen_blocks(params)
    r2 = concat(power(big_l_prime, params.p), power(big_l, params.p))
    return Presentation(TWO_GEN_ALPHABET, knot.relators + (r2,), 'two_gen', params)


def surgery_group_abt(params) -> Presentation:
    """
    The surgery group in the A, B, T basis: the std presentation for (q, p)
    with a, b, t renamed B, A, T.
    """
    params = KnotParams.of(params)
    p, q = params.p, params.q
    big_a = Word.letter(ABT_ALPHABET, 'A')
    big_b = Word.letter(ABT_ALPHABET, 'B')
    big_t = Word.letter(ABT_ALPHABET, 'T')
    a_q = power(big_a, q)
    b_mp = power(big_b, -p)
    r1 = concat(concat(big_t, a_q), concat(invert(big_t), invert(concat(invert(big_b), a_q))))
    r2 = concat(
        concat(concat(big_t, b_mp), concat(invert(big_a), invert(big_t))),
        invert(b_mp),
    )
    r3 = commutator(power(big_b, p), power(big_a, q))
    return Presentation(ABT_ALPHABET, (r1, r2, r3), 'abt', params)


def complement_group(params) -> Presentation:
    """⟨a,b | [b^q, a^p]⟩, the complement of the torus link pieces glued along a torus."""
    params = KnotParams.of(params)
    a = Word.letter(COMPLEMENT_ALPHABET, 'a')
    b = Word.letter(COMPLEMENT_ALPHABET, 'b')
    r = commutator(power(b, params.q), power(a, params.p))
    return Presentation(COMPLEMENT_ALPHABET, (r,), 'complement', params)


def h_window_alphabet(window: int) -> Alphabet:
    return Alphabet.from_names('tau', *(f'x_{i}' for i in range(-window, window + 1)))


def h_presentation_window(params, window: int) -> Presentation:
    """
    Finite window of the infinite presentation of the HNN-type quotient:
    generators τ and x_i for |i| ≤ window; commutators [x_i, x_j] for i < j,
    x_{i+1}^{pq} x_i^{-(2pq+1)} x_{i-1}^{pq} whenever i±1 are in the window,
    and τ x_i τ⁻¹ x_{i+1}⁻¹ whenever i, i+1 are in the window.
    """
    params = KnotParams.of(params)
    if window < 1:
        raise PresentationError(f'Window size must be at least 1, got {window}')
    alphabet = h_window_alphabet(window)
    pq = params.pq
    xs = {i: Word.letter(alphabet, f'x_{i}') for i in range(-window, window + 1)}
    tau = Word.letter(alphabet, 'tau')

    relators: list[Word] = []
    indices = sorted(xs)
    for i in indices:
        for j in indices:
            if i < j:
                relators.append(commutator(xs[i], xs[j]))
    for i in indices:
        if i - 1 in xs and i + 1 in xs:
            relators.append(
                concat(
                    concat(power(xs[i + 1], pq), power(xs[i], -(2 * pq + 1))),
                    power(xs[i - 1], pq),
                )
            )
    for i in indices:
        if i + 1 in xs:
            relators.append(
                concat(concat(tau, xs[i]), concat(invert(tau), invert(xs[i + 1])))
            )
    return Presentation(alphabet, tuple(relators), 'h_window', params)


def h_window_to_std(params, window: int) -> GeneratorMap:
    """τ ↦ t, x_i ↦ t^i b t^-i."""
    KnotParams.of(params)
    alphabet = h_window_alphabet(window)
    _, b, t = _std_letters()
    images = {alphabet['tau']: t}
    for i in range(-window, window + 1):
        images[alphabet[f'x_{i}']] = concat(concat(power(t, i), b), power(t, -i))
    return GeneratorMap(alphabet, STD_ALPHABET, images)


def _map_from_text(source: Alphabet, target: Alphabet, images: dict[str, Word]) -> GeneratorMap:
    return GeneratorMap(source, target, {source[name]: img for name, img in images.items()})


def _std_to_two_gen(params: KnotParams) -> GeneratorMap:
    xy, _, big_l, _ = _two_gen_blocks(params)
    y = Word.letter(TWO_GEN_ALPHABET, 'y')
    return _map_from_text(STD_ALPHABET, TWO_GEN_ALPHABET, {'a': big_l, 'b': xy, 't': invert(y)})


def _two_gen_to_std() -> GeneratorMap:
    _, b, t = _std_letters()
    return _map_from_text(TWO_GEN_ALPHABET, STD_ALPHABET, {'x': concat(b, t), 'y': invert(t)})


def _abt_to_std() -> GeneratorMap:
    a, b, t = _std_letters()
    return _map_from_text(
        ABT_ALPHABET,
        STD_ALPHABET,
        {'A': invert(b), 'B': a, 'T': invert(concat(t, a))},
    )


def _std_to_abt() -> GeneratorMap:
    big_a = Word.letter(ABT_ALPHABET, 'A')
    big_b = Word.letter(ABT_ALPHABET, 'B')
    big_t = Word.letter(ABT_ALPHABET, 'T')
    return _map_from_text(
        STD_ALPHABET,
        ABT_ALPHABET,
        {'a': big_b, 'b': invert(big_a), 't': invert(concat(big_b, big_t))},
    )


def _identity_map(alphabet: Alphabet) -> GeneratorMap:
    return GeneratorMap(alphabet, alphabet, {g: Word(alphabet, ((g, 1),)) for g in alphabet})


def generator_change(from_label: str, to_label: str, params) -> GeneratorMap:
    """
    Explicit generator substitution between two presentations of the same group.

    Supported: std/lin ↔ two_gen/two_gen_knot, std ↔ abt, abt ↔ two_gen (by
    composition through std) and complement → std (inclusion). The image of
    a under std → two_gen depends on q, hence the params argument.

    Raises:
        PresentationError: If the pair of labels is not supported
    """
    params = KnotParams.of(params)
    try:
        src = BASIS_OF_LABEL[from_label]
        dst = BASIS_OF_LABEL[to_label]
    except KeyError as e:
        raise PresentationError(f'Unknown presentation label {e.args[0]!r}') from None

    if src == dst and src in _ALPHABET_OF_BASIS:
        return _identity_map(_ALPHABET_OF_BASIS[src])

    direct = {
        ('std', 'two_gen'): lambda: _std_to_two_gen(params),
        ('two_gen', 'std'): _two_gen_to_std,
        ('abt', 'std'): _abt_to_std,
        ('std', 'abt'): _std_to_abt,
        ('abt', 'two_gen'): lambda: _abt_to_std().then(_std_to_two_gen(params)),
        ('two_gen', 'abt'): lambda: _two_gen_to_std().then(_std_to_abt()),
        ('complement', 'std'): lambda: _map_from_text(
            COMPLEMENT_ALPHABET,
            STD_ALPHABET,
            {'a': Word.letter(STD_ALPHABET, 'a'), 'b': Word.letter(STD_ALPHABET, 'b')},
        ),
    }
    builder = direct.get((src, dst))
    if builder is None:
        raise PresentationError(
            f'Unsupported generator change {from_label} -> {to_label}',
            details={'from': from_label, 'to': to_label},
        )
    return builder()


def translate(word: Word, from_label: str, to_label: str, params) -> Word:
    return generator_change(from_label, to_label, params).apply(word)


def exponent_sum_matrix(pres: Presentation) -> list[list[int]]:
    """Rows are relators, columns generators; the relation matrix of the abelianization."""
    return [[exponent_sum(r, g) for g in pres.generators] for r in pres.relators]


def presentation_to_json(pres: Presentation) -> dict:
    return {
        'label': pres.label,
        'params': list(pres.params.as_tuple()) if pres.params else None,
        'generators': list(pres.generators.names),
        'relators': [format_word(r) for r in pres.relators],
    }


def presentation_from_json(data: dict) -> Presentation:
    try:
        alphabet = Alphabet.from_names(*data['generators'])
        relators = tuple(parse_word(text, alphabet) for text in data['relators'])
        params = KnotParams.of(data['params']) if data.get('params') else None
        label = data['label']
    except (KeyError, TypeError) as e:
        raise PresentationError(f'Malformed presentation document: {e}') from e
    if label not in BASIS_OF_LABEL:
        raise PresentationError(f'Unknown presentation label {label!r}')
    return Presentation(alphabet, relators, label, params)


@dataclass(frozen=True)
class CandidateElement:
    """A group element proposed as generalized torsion, in some basis."""

    label: str
    word: Word
    basis: str

    def in_basis(self, basis: str, params=None) -> 'CandidateElement':
        if basis == self.basis:
            return self
        if params is None:
            raise PresentationError(
                f'Translating candidate {self.label} from {self.basis} to {basis} needs (p, q)'
            )
        return CandidateElement(self.label, translate(self.word, self.basis, basis, params), basis)


def _conjugated_commutator(alphabet: Alphabet, b_name: str, t_name: str, n: int) -> Word:
    b = Word.letter(alphabet, b_name)
    t = Word.letter(alphabet, t_name)
    return commutator(b, concat(concat(power(t, -n), b), power(t, n)))


def _candidate_builders() -> dict[str, tuple[str, object]]:
    x = Word.letter(TWO_GEN_ALPHABET, 'x')
    y = Word.letter(TWO_GEN_ALPHABET, 'y')
    a = Word.letter(STD_ALPHABET, 'a')
    b = Word.letter(STD_ALPHABET, 'b')
    return {
        '[xy,yx]': ('two_gen', lambda n: commutator(concat(x, y), concat(y, x))),
        '[b,t^{-n}bt^n]': ('std', lambda n: _conjugated_commutator(STD_ALPHABET, 'b', 't', n)),
        '[B,T^{-n}BT^n]': ('abt', lambda n: _conjugated_commutator(ABT_ALPHABET, 'B', 'T', n)),
        '[b^{-1},a]': ('std', lambda n: commutator(invert(b), a)),
        'a': ('std', lambda n: a),
        'b': ('std', lambda n: b),
    }


CANDIDATE_LABELS = tuple(_candidate_builders())


def candidate(label: str, n: int = 1, basis: Optional[str] = None, params=None) -> CandidateElement:
    """
    Build a named candidate element, optionally translated to another basis.

    Args:
        label: One of CANDIDATE_LABELS
        n: Conjugation depth for the labels involving t^n or T^n
        basis: Requested basis; defaults to the candidate's native basis
        params: (p, q), required only when a translation is needed

    Raises:
        PresentationError: Unknown label or a basis the candidate cannot be moved to
    """
    builders = _candidate_builders()
    if label not in builders:
        raise PresentationError(
            f'Unknown candidate {label!r}',
            details={'known': list(CANDIDATE_LABELS)},
        )
    native, build = builders[label]
    element = CandidateElement(label, build(n), native)
    if basis is None:
        return element
    if basis not in _ALPHABET_OF_BASIS or basis == 'complement':
        raise PresentationError(f'Candidate {label} cannot be expressed in basis {basis!r}')
    return element.in_basis(basis, params)


def custom_candidate(text: str, basis: str) -> CandidateElement:
    """Candidate given as word text over one of the named bases."""
    if basis not in _ALPHABET_OF_BASIS:
        raise PresentationError(f'Unknown basis {basis!r}')
    word = parse_word(text, _ALPHABET_OF_BASIS[basis])
    return CandidateElement(format_word(word), word, basis)


def alphabet_of_basis(basis: str) -> Alphabet:
    try:
        return _ALPHABET_OF_BASIS[basis]
    except KeyError:
        raise PresentationError(f'Unknown basis {basis!r}') from None
