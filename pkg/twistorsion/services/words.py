"""
Free-group words over a finite alphabet.

Words are stored as tuples of syllables (generator, nonzero exponent) and are
kept freely reduced: no zero exponents and no two adjacent syllables on the
same generator. Every constructor reduces, so two words are equal as group
elements of the free group exactly when they compare equal.
"""

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Union

from twistorsion.core.exceptions import WordError
from twistorsion.core.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, order=True)
class Generator:
    index: int
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of named generators."""

    generators: tuple[Generator, ...]

    @classmethod
    def from_names(cls, *names: str) -> 'Alphabet':
        if len(set(names)) != len(names):
            raise WordError(f'Duplicate generator names: {names}')
        return cls(tuple(Generator(i, name) for i, name in enumerate(names)))

    @cached_property
    def _by_name(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    @cached_property
    def _members(self) -> frozenset[Generator]:
        return frozenset(self.generators)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def __getitem__(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise WordError(
                f'Unknown generator {name!r}',
                details={'alphabet': list(self.names)},
            ) from None

    def __contains__(self, item: object) -> bool:
        return item in self._members

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __str__(self) -> str:
        return '{' + ', '.join(self.names) + '}'


Syllable = tuple[Generator, int]


def _reduce(syllables: Iterable[Syllable]) -> tuple[Syllable, ...]:
    stack: list[list] = []
    for gen, exp in syllables:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + exp
            if merged == 0:
                stack.pop()
            else:
                stack[-1][1] = merged
        else:
            stack.append([gen, exp])
    return tuple((gen, exp) for gen, exp in stack)


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    syllables: tuple[Syllable, ...] = field(default=())

    def __post_init__(self):
        for gen, _ in self.syllables:
            if gen not in self.alphabet:
                raise WordError(
                    f'Generator {gen.name!r} is not in alphabet {self.alphabet}',
                )
        object.__setattr__(self, 'syllables', _reduce(self.syllables))

    @classmethod
    def empty(cls, alphabet: Alphabet) -> 'Word':
        return cls(alphabet, ())

    @classmethod
    def letter(cls, alphabet: Alphabet, name: str, exponent: int = 1) -> 'Word':
        return cls(alphabet, ((alphabet[name], exponent),))

    def is_empty(self) -> bool:
        return not self.syllables

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __mul__(self, other: 'Word') -> 'Word':
        return concat(self, other)

    def __pow__(self, k: int) -> 'Word':
        return power(self, k)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f'Word({format_word(self)!r})'


def _check_same_alphabet(u: Word, v: Word) -> None:
    if u.alphabet != v.alphabet:
        raise WordError(
            'Words live over different alphabets',
            details={'left': list(u.alphabet.names), 'right': list(v.alphabet.names)},
        )


def concat(u: Word, v: Word) -> Word:
    """Free product uv, reduced at the seam."""
    _check_same_alphabet(u, v)
    return Word(u.alphabet, u.syllables + v.syllables)


def invert(w: Word) -> Word:
    return Word(w.alphabet, tuple((g, -e) for g, e in reversed(w.syllables)))


def power(w: Word, k: int) -> Word:
    """w^k by repeated squaring; w^0 is the empty word and negative k inverts."""
    if k < 0:
        w, k = invert(w), -k
    result = Word.empty(w.alphabet)
    base = w
    while k:
        if k & 1:
            result = concat(result, base)
        k >>= 1
        if k:
            base = concat(base, base)
    return result


def conjugate(w: Word, c: Word) -> Word:
    """c⁻¹ w c."""
    return concat(concat(invert(c), w), c)


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u⁻¹ v⁻¹ u v."""
    return concat(concat(invert(u), invert(v)), concat(u, v))


def substitute(
    w: Word,
    images: Mapping[Generator, Word],
    target: Optional[Alphabet] = None,
) -> Word:
    """
    Apply the free-group homomorphism determined by generator images.

    Args:
        w: Word to rewrite
        images: Image word for every generator occurring in w
        target: Alphabet of the result; inferred from the images when omitted

    Returns:
        The reduced image word over the target alphabet

    Raises:
        WordError: If a generator of w has no image or the images disagree on alphabet
    """
    if target is None:
        alphabets = {img.alphabet for img in images.values()}
        if len(alphabets) != 1:
            raise WordError(
                'Cannot infer target alphabet from substitution images',
                details={'alphabets': [list(a.names) for a in alphabets]},
            )
        target = alphabets.pop()

    parts: list[Syllable] = []
    for gen, exp in w.syllables:
        image = images.get(gen)
        if image is None:
            raise WordError(
                f'No image given for generator {gen.name!r}',
                details={'generator': gen.name, 'mapped': [g.name for g in images]},
            )
        if image.alphabet != target:
            raise WordError(f'Image of {gen.name!r} is not over {target}')
        parts.extend(power(image, exp).syllables)
    return Word(target, tuple(parts))


def length(w: Word) -> int:
    """Number of letters, i.e. the sum of absolute exponents."""
    return sum(abs(e) for _, e in w.syllables)


def exponent_sum(w: Word, gen: Generator) -> int:
    return sum(e for g, e in w.syllables if g == gen)


def format_word(w: Word) -> str:
    """Canonical text form, e.g. 'x y^-2 x^3'; the empty word prints as '1'."""
    if not w.syllables:
        return '1'
    return ' '.join(g.name if e == 1 else f'{g.name}^{e}' for g, e in w.syllables)


_TOKEN = re.compile(
    r'\s*(?:(?P<name>[A-Za-z](?:[A-Za-z0-9]|_-?[0-9]+|_)*)'
    r'|(?P<int>[+-]?[0-9]+)'
    r'|(?P<sym>[\^\[\](),{}]))'
)


class _Parser:
    """Recursive descent over: item* where item = atom ('^' int)?."""

    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[tuple[str, str]]:
        tokens = []
        i = 0
        stripped = text.rstrip()
        while i < len(stripped):
            m = _TOKEN.match(stripped, i)
            if not m or m.end() == i:
                raise WordError(f'Cannot parse word {text!r} at offset {i}')
            kind = m.lastgroup
            tokens.append((kind, m.group(kind)))
            i = m.end()
        return tokens

    def _peek(self) -> Optional[tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self, kind: str, value: Optional[str] = None) -> str:
        tok = self._peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            expected = value or kind
            raise WordError(f'Expected {expected!r} in word {self.text!r}')
        self.pos += 1
        return tok[1]

    def parse(self) -> Word:
        word = self._sequence(stop=())
        if self._peek() is not None:
            raise WordError(f'Unexpected {self._peek()[1]!r} in word {self.text!r}')
        return word

    def _sequence(self, stop: tuple[str, ...]) -> Word:
        result = Word.empty(self.alphabet)
        while True:
            tok = self._peek()
            if tok is None or (tok[0] == 'sym' and tok[1] in stop):
                return result
            result = concat(result, self._item())

    def _exponent(self) -> int:
        if self._peek() == ('sym', '{'):
            self.pos += 1
            value = int(self._take('int'))
            self._take('sym', '}')
            return value
        return int(self._take('int'))

    def _letters(self, name: str) -> tuple[Word, Word]:
        """Split juxtaposed single-letter generators such as 'xy' into prefix and last letter."""
        if name in self.alphabet.names or len(name) == 1 or not all(c in self.alphabet.names for c in name):
            return Word.empty(self.alphabet), Word.letter(self.alphabet, name)
        prefix = Word(self.alphabet, tuple((self.alphabet[c], 1) for c in name[:-1]))
        return prefix, Word.letter(self.alphabet, name[-1])

    def _item(self) -> Word:
        kind, value = self._peek()
        prefix = Word.empty(self.alphabet)
        if kind == 'name':
            self.pos += 1
            prefix, atom = self._letters(value)
        elif kind == 'int' and value == '1':
            self.pos += 1
            atom = Word.empty(self.alphabet)
        elif (kind, value) == ('sym', '['):
            self.pos += 1
            left = self._sequence(stop=(',',))
            self._take('sym', ',')
            right = self._sequence(stop=(']',))
            self._take('sym', ']')
            atom = commutator(left, right)
        elif (kind, value) == ('sym', '('):
            self.pos += 1
            atom = self._sequence(stop=(')',))
            self._take('sym', ')')
        else:
            raise WordError(f'Unexpected {value!r} in word {self.text!r}')

        if self._peek() == ('sym', '^'):
            self.pos += 1
            atom = power(atom, self._exponent())
        return concat(prefix, atom)


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """
    Parse the text form produced by format_word.

    Also accepts commutator brackets '[u,v]', parenthesised subwords with an
    exponent '(u)^k', braces around exponents 't^{-1}', '1' or 'ε' for the
    empty word, and juxtaposed one-letter generators ('xy^2' is x y^2).

    Raises:
        WordError: On unknown generators or malformed syntax
    """
    if text.strip() in ('', 'ε'):
        return Word.empty(alphabet)
    return _Parser(text, alphabet).parse()


WordLike = Union[Word, str]


def as_word(value: WordLike, alphabet: Alphabet) -> Word:
    if isinstance(value, Word):
        if value.alphabet != alphabet:
            raise WordError(f'Word {value} is not over {alphabet}')
        return value
    return parse_word(value, alphabet)
