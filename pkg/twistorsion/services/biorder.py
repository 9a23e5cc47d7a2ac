"""
The group K = R² ⋊ Z and the bi-order pulled back to words over {a, b, t}.

K multiplies as (v1, n1)·(v2, n2) = (v1 + A^n1 v2, n1 + n2) with
A = [[1, -1/q], [-1/p, 1 + 1/(pq)]]. For p, q >= 1 the eigenvalues
λ± = ((2pq+1) ± √(4pq+1)) / (2pq) are real and positive, so ordering K
lexicographically by (level, V₊ coefficient, V₋ coefficient) is invariant
under multiplication on both sides.

All arithmetic is exact in Q(√(4pq+1)); floating point is used only for
display.
"""

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Optional

import mpmath

from twistorsion.core.exceptions import OrderError, ParameterError, WordError
from twistorsion.core.logging_config import get_logger
from twistorsion.services.certificates import Matrix2
from twistorsion.services.presentations import STD_ALPHABET, KnotParams
from twistorsion.services.words import Word, exponent_sum, format_word, power, substitute

logger = get_logger(__name__)


@total_ordering
class QuadExt:
    """a + b√D with a, b rational; b is folded into a when D is a perfect square."""

    __slots__ = ('_a', '_b', '_d')

    def __init__(self, a=0, b=0, d: int = 5):
        if d <= 0:
            raise ParameterError(f'Discriminant must be positive, got {d}')
        a, b = Fraction(a), Fraction(b)
        root = math.isqrt(d)
        if b and root * root == d:
            a, b = a + b * root, Fraction(0)
        self._a, self._b, self._d = a, b, d

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    def _coerce(self, other) -> 'QuadExt':
        if isinstance(other, QuadExt):
            if other.d != self._d:
                raise OrderError(
                    f'Cannot mix Q(√{self._d}) and Q(√{other.d})',
                    details={'left': self._d, 'right': other.d},
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self._d)
        return NotImplemented

    def __add__(self, other) -> 'QuadExt':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadExt(self._a + other.a, self._b + other.b, self._d)

    __radd__ = __add__

    def __neg__(self) -> 'QuadExt':
        return QuadExt(-self._a, -self._b, self._d)

    def __sub__(self, other) -> 'QuadExt':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> 'QuadExt':
        return (-self) + other

    def __mul__(self, other) -> 'QuadExt':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadExt(
            self._a * other.a + self._b * other.b * self._d,
            self._a * other.b + self._b * other.a,
            self._d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> 'QuadExt':
        return QuadExt(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        return self._a * self._a - self._b * self._b * self._d

    def inverse(self) -> 'QuadExt':
        norm = self.norm()
        if norm == 0:
            raise ZeroDivisionError('QuadExt division by zero')
        return QuadExt(self._a / norm, -self._b / norm, self._d)

    def __truediv__(self, other) -> 'QuadExt':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> 'QuadExt':
        return self.inverse() * other

    def sign(self) -> int:
        """Exact sign of a + b√D."""
        sa = (self._a > 0) - (self._a < 0)
        sb = (self._b > 0) - (self._b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger of a² and b²D wins
        lhs = self._a * self._a
        rhs = self._b * self._b * self._d
        return sa if lhs > rhs else sb

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        if isinstance(other, QuadExt):
            return (self._a, self._b, self._d) == (other.a, other.b, other.d)
        return NotImplemented

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def approx(self, dps: int = 50) -> mpmath.mpf:
        """Decimal value to dps significant digits."""
        with mpmath.workdps(dps):
            a = mpmath.mpf(self._a.numerator) / self._a.denominator
            b = mpmath.mpf(self._b.numerator) / self._b.denominator
            return a + b * mpmath.sqrt(self._d)

    def __repr__(self) -> str:
        return f'QuadExt({self._a}, {self._b}, {self._d})'

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        if self._a == 0:
            return f'{self._b}*sqrt({self._d})'
        sign = '+' if self._b > 0 else '-'
        return f'{self._a} {sign} {abs(self._b)}*sqrt({self._d})'


Vector = tuple[QuadExt, QuadExt]


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    @classmethod
    def of(cls, sign: int) -> 'Ordering':
        return cls((sign > 0) - (sign < 0))


@dataclass(frozen=True)
class BiorderContext:
    """Per-(p, q) data: the matrix A, its eigenvalues and eigenvectors."""

    p: int
    q: int
    _powers: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        KnotParams(self.p, self.q)
        if self.p < 1 or self.q < 1:
            raise ParameterError(
                f'The bi-order is defined for p, q >= 1, got ({self.p}, {self.q})',
                details={'p': self.p, 'q': self.q},
            )

    @property
    def discriminant(self) -> int:
        return 4 * self.p * self.q + 1

    @property
    def matrix(self) -> Matrix2:
        pq = self.p * self.q
        return Matrix2(Fraction(1), Fraction(-1, self.q), Fraction(-1, self.p), 1 + Fraction(1, pq))

    def matrix_power(self, n: int) -> Matrix2:
        if n not in self._powers:
            self._powers[n] = self.matrix ** n
        return self._powers[n]

    def scalar(self, value) -> QuadExt:
        return QuadExt(value, 0, self.discriminant)

    def vector(self, s, l) -> Vector:
        return (self.scalar(s), self.scalar(l))

    def zero(self) -> Vector:
        return self.vector(0, 0)

    def to_eigen(self, raw: Vector, scales: Optional[tuple] = None) -> Vector:
        """Coefficients (α, β) with raw = α·V₊ + β·V₋; dividing by positive scales rescales the basis."""
        _, _, v_plus, v_minus = eigenbasis(self.p, self.q)
        det = v_plus[0] * v_minus[1] - v_minus[0] * v_plus[1]
        alpha = (raw[0] * v_minus[1] - v_minus[0] * raw[1]) / det
        beta = (v_plus[0] * raw[1] - raw[0] * v_plus[1]) / det
        if scales is not None:
            c_plus, c_minus = scales
            if c_plus <= 0 or c_minus <= 0:
                raise ParameterError('Eigenvector rescaling factors must be positive')
            alpha, beta = alpha / Fraction(c_plus), beta / Fraction(c_minus)
        return (alpha, beta)

    def from_eigen(self, coeffs: Vector) -> Vector:
        _, _, v_plus, v_minus = eigenbasis(self.p, self.q)
        alpha, beta = coeffs
        return (alpha * v_plus[0] + beta * v_minus[0], alpha * v_plus[1] + beta * v_minus[1])


_contexts: dict[tuple[int, int], BiorderContext] = {}


def context_for(p: int, q: int) -> BiorderContext:
    key = (p, q)
    if key not in _contexts:
        _contexts[key] = BiorderContext(p, q)
    return _contexts[key]


@lru_cache(maxsize=None)
def eigenbasis(p: int, q: int) -> tuple[QuadExt, QuadExt, Vector, Vector]:
    """
    λ± = ((2pq+1) ± √D) / (2pq) and V± = (-2p, 1 ± √D) / (2√D), D = 4pq + 1.
    """
    if p < 1 or q < 1:
        raise ParameterError(f'Eigenbasis is defined for p, q >= 1, got ({p}, {q})')
    pq = p * q
    d = 4 * pq + 1
    root = QuadExt(0, 1, d)
    lam_plus = (root + (2 * pq + 1)) / (2 * pq)
    lam_minus = (-root + (2 * pq + 1)) / (2 * pq)
    scale = (2 * root).inverse()
    v_plus = (QuadExt(-2 * p, 0, d) * scale, (root + 1) * scale)
    v_minus = (QuadExt(-2 * p, 0, d) * scale, (-root + 1) * scale)
    return lam_plus, lam_minus, v_plus, v_minus


@dataclass(frozen=True)
class KElement:
    context: BiorderContext
    raw: Vector
    level: int

    @property
    def coefficients(self) -> Vector:
        return self.context.to_eigen(self.raw)

    def to_json(self, dps: int = 20) -> dict:
        alpha, beta = self.coefficients
        return {
            'level': self.level,
            'raw': [str(c) for c in self.raw],
            'eigen': [str(alpha), str(beta)],
            'approx': {
                'raw': [mpmath.nstr(c.approx(), dps) for c in self.raw],
                'eigen': [mpmath.nstr(alpha.approx(), dps), mpmath.nstr(beta.approx(), dps)],
            },
        }


def k_element(ctx: BiorderContext, s, l, level: int = 0) -> KElement:
    return KElement(ctx, ctx.vector(s, l), level)


def k_identity(ctx: BiorderContext) -> KElement:
    return KElement(ctx, ctx.zero(), 0)


def _check_context(e1: KElement, e2: KElement) -> None:
    if e1.context != e2.context:
        raise OrderError(
            'Elements belong to different (p, q) contexts',
            details={
                'left': [e1.context.p, e1.context.q],
                'right': [e2.context.p, e2.context.q],
            },
        )


def k_multiply(e1: KElement, e2: KElement) -> KElement:
    """(v1 + A^n1·v2, n1 + n2)."""
    _check_context(e1, e2)
    shifted = e1.context.matrix_power(e1.level).apply(e2.raw)
    return KElement(
        e1.context,
        (e1.raw[0] + shifted[0], e1.raw[1] + shifted[1]),
        e1.level + e2.level,
    )


def k_inverse(e: KElement) -> KElement:
    back = e.context.matrix_power(-e.level).apply(e.raw)
    return KElement(e.context, (-back[0], -back[1]), -e.level)


def k_power(e: KElement, k: int) -> KElement:
    """e^k by repeated squaring."""
    if k < 0:
        e, k = k_inverse(e), -k
    result = k_identity(e.context)
    base = e
    while k:
        if k & 1:
            result = k_multiply(result, base)
        k >>= 1
        if k:
            base = k_multiply(base, base)
    return result


def _check_std(w: Word) -> None:
    if w.alphabet != STD_ALPHABET:
        raise WordError(f'Expected a word over {{a, b, t}}, got one over {w.alphabet}')


def rho(w: Word) -> int:
    """Abelianization to Z: the exponent sum of t (a and b map to 0)."""
    _check_std(w)
    return exponent_sum(w, STD_ALPHABET['t'])


def expand_a(w: Word, q: int) -> Word:
    """Replace a by t⁻¹ b^q t b^-q."""
    _check_std(w)
    b = Word.letter(STD_ALPHABET, 'b')
    t = Word.letter(STD_ALPHABET, 't')
    images = {
        STD_ALPHABET['a']: power(t, -1) * power(b, q) * t * power(b, -q),
        STD_ALPHABET['b']: b,
        STD_ALPHABET['t']: t,
    }
    return substitute(w, images, STD_ALPHABET)


@dataclass(frozen=True)
class XWord:
    """Product of x_depth^exponent, followed by τ^level."""

    terms: tuple[tuple[int, int], ...]
    level: int

    def __str__(self) -> str:
        body = ' '.join(f'x_{d}' if e == 1 else f'x_{d}^{e}' for d, e in self.terms) or '1'
        return body if self.level == 0 else f'{body} tau^{self.level}'


def to_xword(w: Word) -> XWord:
    """
    Rewrite a word in b and t as a product of x_i = t^i b t^-i times a
    power of t; the depth of each b is the t-exponent sum before it.
    """
    _check_std(w)
    terms: list[list[int]] = []
    depth = 0
    for gen, exp in w.syllables:
        if gen.name == 't':
            depth += exp
        elif gen.name == 'b':
            if terms and terms[-1][0] == depth:
                terms[-1][1] += exp
                if terms[-1][1] == 0:
                    terms.pop()
            else:
                terms.append([depth, exp])
        else:
            raise WordError('to_xword expects a word without a; expand it first')
    return XWord(tuple((d, e) for d, e in terms), depth)


def r_map(xw: XWord, ctx: BiorderContext) -> Vector:
    """Σ exponent · A^depth · (0, 1)."""
    if xw.level != 0:
        raise OrderError(
            f'r_map needs an element of the kernel of rho, got residual level {xw.level}',
            details={'level': xw.level},
        )
    s, l = ctx.scalar(0), ctx.scalar(0)
    for depth, exp in xw.terms:
        power_matrix = ctx.matrix_power(depth)
        s = s + exp * power_matrix.b
        l = l + exp * power_matrix.d
    return (s, l)


def phi(w: Word, ctx: BiorderContext) -> KElement:
    """φ(g) = (r(g·τ^-ρ(g)), ρ(g)); a homomorphism on the free group over {a, b, t}."""
    xw = to_xword(expand_a(w, ctx.q))
    raw = r_map(XWord(xw.terms, 0), ctx)
    return KElement(ctx, raw, xw.level)


def k_compare(e1: KElement, e2: KElement, scales: Optional[tuple] = None) -> Ordering:
    """Lexicographic on (level, V₊ coefficient, V₋ coefficient)."""
    _check_context(e1, e2)
    if e1.level != e2.level:
        return Ordering.of(e1.level - e2.level)
    diff = (e1.raw[0] - e2.raw[0], e1.raw[1] - e2.raw[1])
    alpha, beta = e1.context.to_eigen(diff, scales)
    if alpha.sign() != 0:
        return Ordering.of(alpha.sign())
    return Ordering.of(beta.sign())


def word_sign(w: Word, ctx: BiorderContext) -> Ordering:
    """Position of w relative to the identity."""
    verdict = k_compare(phi(w, ctx), k_identity(ctx))
    logger.debug(f'word_sign {format_word(w)} -> {verdict.name}')
    return verdict
