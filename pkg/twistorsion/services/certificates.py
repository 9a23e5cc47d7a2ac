"""
Exact certificates of generalized torsion.

Two kinds of evidence are produced here:

* conjugate-product expansions: a word written explicitly as a product of
  conjugates c⁻¹ B c of a single base element B, checked by free reduction;
* the Chebyshev construction for K_{p,-q}: the monodromy matrix A has
  eigenvalues on the unit circle, so for the least k with T_k(Re λ) < 0 we
  get n·A^k + m·I + n·A^-k = 0 with n, m > 0, and hence an explicit word in
  conjugates of a that is trivial once a and b commute.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from twistorsion.core.exceptions import CertificateError, ParameterError
from twistorsion.core.logging_config import get_logger, log_with_context
from twistorsion.services.presentations import (
    STD_ALPHABET,
    TWO_GEN_ALPHABET,
    KnotParams,
    surgery_group_std,
    surgery_group_two_gen,
)
from twistorsion.services.words import (
    Word,
    commutator,
    concat,
    conjugate,
    format_word,
    invert,
    power,
)

logger = get_logger(__name__)

DEFAULT_K_CAP = 10_000


@dataclass(frozen=True)
class Matrix2:
    """2×2 matrix [[a, b], [c, d]] over an exact field (Fraction by default)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> 'Matrix2':
        (a, b), (c, d) = rows
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @classmethod
    def identity(cls) -> 'Matrix2':
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    @classmethod
    def zero(cls) -> 'Matrix2':
        return cls(Fraction(0), Fraction(0), Fraction(0), Fraction(0))

    def __add__(self, other: 'Matrix2') -> 'Matrix2':
        return Matrix2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __mul__(self, other: 'Matrix2') -> 'Matrix2':
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def scale(self, s) -> 'Matrix2':
        return Matrix2(s * self.a, s * self.b, s * self.c, s * self.d)

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def trace(self) -> Fraction:
        return self.a + self.d

    def inverse(self) -> 'Matrix2':
        det = self.det()
        if det == 0:
            raise CertificateError('Matrix is singular', details={'matrix': self.rows()})
        return Matrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, k: int) -> 'Matrix2':
        base = self.inverse() if k < 0 else self
        k = abs(k)
        result = Matrix2.identity()
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def apply(self, vector):
        """Matrix times a column vector; entries may be any type closed under + and * with Fraction."""
        s, l = vector
        return (self.a * s + self.b * l, self.c * s + self.d * l)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def rows(self) -> list[list[str]]:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]


@dataclass(frozen=True)
class ConjugateProduct:
    """
    factors[i] = (conjugator c_i, base B_i) stands for c_i⁻¹ B_i c_i; the
    product of all factors freely reduces to target.
    """

    factors: tuple[tuple[Word, Word], ...]
    target: Word

    def __post_init__(self):
        if not self.factors:
            raise CertificateError('A conjugate product needs at least one factor')
        reduced = self.product()
        if reduced != self.target:
            raise CertificateError(
                'Conjugate product does not reduce to its target',
                details={'product': format_word(reduced), 'target': format_word(self.target)},
            )

    def product(self) -> Word:
        result = Word.empty(self.target.alphabet)
        for conjugator, base in self.factors:
            result = concat(result, conjugate(base, conjugator))
        return result

    @property
    def bases(self) -> set[Word]:
        return {base for _, base in self.factors}

    def rebase(self, new_base: Word, k: Word) -> 'ConjugateProduct':
        """
        Rewrite every factor over new_base, given that each current base
        equals k⁻¹·new_base·k.
        """
        if any(base != conjugate(new_base, k) for base in self.bases):
            raise CertificateError('Base is not the stated conjugate of the new base')
        return ConjugateProduct(
            tuple((concat(k, c), new_base) for c, _ in self.factors),
            self.target,
        )

    def to_json(self) -> dict:
        return {
            'target': format_word(self.target),
            'factors': [
                {'conjugator': format_word(c), 'base': format_word(b)} for c, b in self.factors
            ],
        }


def expand_power_product(g: Word, h: Word, n: int) -> ConjugateProduct:
    """g^n h^n = Π_{j=n-1..0} g^j (gh) g^-j."""
    if n < 1:
        raise ParameterError(f'n must be positive, got {n}')
    gh = concat(g, h)
    return expand_power_product_from(g, h, n, ConjugateProduct(((Word.empty(g.alphabet), gh),), gh))


def expand_power_product_from(g: Word, h: Word, n: int, witness: ConjugateProduct) -> ConjugateProduct:
    """
    Given gh as a product of conjugates, write g^n h^n as one: each copy of
    gh in the power-product expansion is replaced by the witness factors,
    their conjugators extended by g^-j.
    """
    if n < 1:
        raise ParameterError(f'n must be positive, got {n}')
    if witness.target != concat(g, h):
        raise CertificateError(
            'Witness does not expand gh',
            details={'witness_target': format_word(witness.target)},
        )
    factors = []
    for j in range(n - 1, -1, -1):
        shift = power(g, -j)
        factors.extend((concat(c, shift), base) for c, base in witness.factors)
    target = concat(power(g, n), power(h, n))
    return ConjugateProduct(tuple(factors), target)


def expand_commutator_power(g: Word, h: Word, n: int, m: int) -> ConjugateProduct:
    """
    [g^n, h^m] as a product of conjugates of [g, h].

    First [g^n, h] = G^n H^n with G = g⁻¹ and H = h⁻¹gh, where GH = [g, h].
    Then [g^n, h^m] = G'^m H'^m with G' = g^-n h⁻¹ g^n and H' = h, where
    G'H' = [g^n, h] is the product from the first step.
    """
    if n < 1 or m < 1:
        raise ParameterError(f'n and m must be positive, got n={n}, m={m}')
    base = commutator(g, h)
    empty = Word.empty(g.alphabet)
    single = ConjugateProduct(((empty, base),), base)

    g_inv = invert(g)
    first = expand_power_product_from(g_inv, concat(concat(invert(h), g), h), n, single)

    g_n = power(g, n)
    second_g = concat(concat(invert(g_n), invert(h)), g_n)
    return expand_power_product_from(second_g, h, m, first)


def expand_longitude(g: Word, h: Word, n: int, m: int) -> ConjugateProduct:
    """
    {(hg)^-m (gh)^m}^n {(hg)^m (gh)^-m}^n as a product of conjugates of [gh, hg].
    """
    if n < 1 or m < 1:
        raise ParameterError(f'n and m must be positive, got n={n}, m={m}')
    hg, gh = concat(h, g), concat(g, h)
    gh_inv = invert(gh)

    # (hg)^-m (gh)^m (hg)^m (gh)^-m = [(hg)^m, (gh)^-m]
    inner = expand_commutator_power(hg, gh_inv, m, m)
    # [hg, (gh)⁻¹] = (gh) [gh, hg] (gh)⁻¹
    inner = inner.rebase(commutator(gh, hg), gh_inv)

    big_g = concat(power(hg, -m), power(gh, m))
    big_h = concat(power(hg, m), power(gh, -m))
    return expand_power_product_from(big_g, big_h, n, inner)


def longitude_certificate(p: int, q: int) -> ConjugateProduct:
    """
    The second relator L'^p L^p of the two-generator surgery presentation as
    a product of conjugates of [xy, yx], for p > 0 and q of either sign.
    """
    params = KnotParams(p, q)
    if p < 0:
        raise ParameterError(f'Longitude certificate needs p > 0, got p={p}')
    x = Word.letter(TWO_GEN_ALPHABET, 'x')
    y = Word.letter(TWO_GEN_ALPHABET, 'y')
    xy, yx = concat(x, y), concat(y, x)
    if q > 0:
        product = expand_longitude(x, y, p, q)
    else:
        # g = y⁻¹, h = x⁻¹ gives base [(xy)⁻¹, (yx)⁻¹] = (xy)(yx) [xy, yx] (yx)⁻¹(xy)⁻¹
        product = expand_longitude(invert(y), invert(x), p, -q)
        product = product.rebase(commutator(xy, yx), invert(concat(xy, yx)))

    relator = surgery_group_two_gen(params).relators[1]
    if product.target != relator:
        raise CertificateError(
            'Longitude expansion does not match the surgery relator',
            details={'p': p, 'q': q},
        )
    return product


def commutator_certificate(p: int, q: int) -> ConjugateProduct:
    """For K_{p,-q}: the longitude [b^-q, a^p] as a product of conjugates of [b⁻¹, a]."""
    if p < 1 or q < 1:
        raise ParameterError(f'p and q must be positive, got ({p}, {q})')
    a = Word.letter(STD_ALPHABET, 'a')
    b = Word.letter(STD_ALPHABET, 'b')
    product = expand_commutator_power(invert(b), a, q, p)
    if product.target != surgery_group_std((p, -q)).relators[2]:
        raise CertificateError('Commutator expansion does not match the longitude', details={'p': p, 'q': q})
    return product


def _check_positive(p: int, q: int) -> None:
    if p < 1 or q < 1:
        raise ParameterError(
            f'Expected p, q >= 1 (the certificate is for K_{{p,-q}}), got ({p}, {q})',
            details={'p': p, 'q': q},
        )


def monodromy_matrix(p: int, q: int) -> Matrix2:
    """[[1, 1/q], [-1/p, 1 - 1/(pq)]]: conjugation by t on the (a, b) exponent lattice of K_{p,-q}."""
    _check_positive(p, q)
    return Matrix2(Fraction(1), Fraction(1, q), Fraction(-1, p), 1 - Fraction(1, p * q))


def chebyshev_eval(k: int, r) -> Fraction:
    """T_k(r) by the three-term recurrence, exactly."""
    if k < 0:
        raise ParameterError(f'Chebyshev index must be non-negative, got {k}')
    r = Fraction(r)
    prev, cur = Fraction(1), r
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, 2 * r * cur - prev
    return cur


def find_chebyshev_constants(p: int, q: int, k_cap: int = DEFAULT_K_CAP) -> tuple[int, int, int]:
    """
    Least k with T_k((2pq-1)/(2pq)) < 0, and m/n = -2·T_k in lowest terms.

    Returns:
        (k, n, m)

    Raises:
        CertificateError: If no such k is found within k_cap
    """
    _check_positive(p, q)
    pq = p * q
    r = Fraction(2 * pq - 1, 2 * pq)
    prev, cur = Fraction(1), r
    k = 1
    while cur >= 0:
        if k >= k_cap:
            raise CertificateError(
                f'No negative Chebyshev value up to k={k_cap}',
                details={'p': p, 'q': q, 'k_cap': k_cap},
            )
        prev, cur = cur, 2 * r * cur - prev
        k += 1
    ratio = -2 * cur
    return k, ratio.denominator, ratio.numerator


def verify_matrix_identity(matrix: Matrix2, k: int, n: int, m: int) -> bool:
    """Exact test of n·A^k + m·I + n·A^-k = 0."""
    power_k = matrix ** k
    power_mk = matrix.inverse() ** k
    total = power_k.scale(n) + Matrix2.identity().scale(m) + power_mk.scale(n)
    return total.is_zero()


@dataclass(frozen=True)
class TorsionCertificate:
    p: int
    q: int
    k: int
    n: int
    m: int
    generator: str
    exponent: int
    word: Word
    matrix_identity_verified: bool

    @property
    def factor_count(self) -> int:
        """Number of conjugates of the generator in the certificate."""
        return self.exponent * (2 * self.n + self.m)

    def to_json(self) -> dict:
        return {
            'p': self.p,
            'q': self.q,
            'k': self.k,
            'n': self.n,
            'm': self.m,
            'generator': self.generator,
            'exponent': self.exponent,
            'factor_count': self.factor_count,
            'certificate_word_text': format_word(self.word),
            'matrix_identity_verified': self.matrix_identity_verified,
        }


def torsion_certificate(
    p: int,
    q: int,
    generator: Literal['a', 'b'] = 'a',
    k_cap: int = DEFAULT_K_CAP,
) -> TorsionCertificate:
    """
    Certificate word for K_{p,-q}(0), p, q >= 1:
    (t^k g^E t^-k)^n · g^(E·m) · (t^-k g^E t^k)^n with E = (pq)^k and g = a or b.

    The word is trivial in any quotient where a and b commute, because
    E is large enough for every intermediate conjugate to stay in the
    lattice on which t acts by the monodromy matrix.

    Raises:
        ParameterError: If p or q is not positive, or generator is unknown
        CertificateError: If the k search exceeds k_cap or the identity fails
    """
    _check_positive(p, q)
    if generator not in ('a', 'b'):
        raise ParameterError(f'Generator must be a or b, got {generator!r}')
    k, n, m = find_chebyshev_constants(p, q, k_cap)
    verified = verify_matrix_identity(monodromy_matrix(p, q), k, n, m)
    if not verified:
        raise CertificateError(
            'Chebyshev constants fail the matrix identity',
            details={'p': p, 'q': q, 'k': k, 'n': n, 'm': m},
        )

    exponent = (p * q) ** k
    g_e = Word.letter(STD_ALPHABET, generator, exponent)
    t_k = Word.letter(STD_ALPHABET, 't', k)
    forward = concat(concat(t_k, g_e), invert(t_k))
    backward = concat(concat(invert(t_k), g_e), t_k)
    word = concat(
        concat(power(forward, n), Word.letter(STD_ALPHABET, generator, exponent * m)),
        power(backward, n),
    )
    log_with_context(
        logger,
        'info',
        f'Built torsion certificate for K_({p},{-q})',
        k=k,
        n=n,
        m=m,
        generator=generator,
    )
    return TorsionCertificate(p, q, k, n, m, generator, exponent, word, verified)
