from fractions import Fraction

import mpmath
import pytest

from twistorsion.core.exceptions import OrderError, ParameterError, WordError
from twistorsion.services.biorder import (
    Ordering,
    QuadExt,
    XWord,
    context_for,
    eigenbasis,
    expand_a,
    k_compare,
    k_element,
    k_identity,
    k_inverse,
    k_multiply,
    k_power,
    phi,
    r_map,
    rho,
    to_xword,
    word_sign,
)
from twistorsion.services.presentations import (
    STD_ALPHABET,
    TWO_GEN_ALPHABET,
    h_presentation_window,
    h_window_to_std,
)
from twistorsion.services.words import concat, parse_word
from tests.conftest import random_word


def w(text: str):
    return parse_word(text, STD_ALPHABET)


class TestQuadExt:
    def test_arithmetic(self):
        root5 = QuadExt(0, 1, 5)
        assert root5 * root5 == 5
        assert (1 + root5) * (1 - root5) == -4
        assert (root5 / root5) == 1
        assert QuadExt(1, 2, 5).inverse() * QuadExt(1, 2, 5) == 1

    def test_perfect_square_folds(self):
        value = QuadExt(1, 2, 9)
        assert value.b == 0
        assert value == 7

    @pytest.mark.parametrize('a,b,expected', [
        (0, 0, 0),
        (3, 0, 1),
        (0, -1, -1),
        (2, -1, -1),   # 2 - √5
        (3, -1, 1),    # 3 - √5
        (-3, 1, -1),
        (Fraction(-9, 4), 1, -1),  # -2.25 + √5
    ])
    def test_exact_sign(self, a, b, expected):
        value = QuadExt(a, b, 5)
        assert value.sign() == expected
        assert mpmath.sign(value.approx(50)) == expected

    def test_ordering(self):
        assert QuadExt(2, -1, 5) < 0 < QuadExt(3, -1, 5)

    def test_fields_do_not_mix(self):
        with pytest.raises(OrderError):
            QuadExt(0, 1, 5) + QuadExt(0, 1, 13)


class TestContext:
    def test_parameters(self):
        with pytest.raises(ParameterError):
            context_for(0, 1)
        with pytest.raises(ParameterError):
            context_for(-1, 2)

    @pytest.mark.parametrize('p,q', [(1, 1), (2, 3), (1, 2), (4, 1)])
    def test_eigenpairs(self, p, q):
        ctx = context_for(p, q)
        lam_plus, lam_minus, v_plus, v_minus = eigenbasis(p, q)
        for lam, vec in ((lam_plus, v_plus), (lam_minus, v_minus)):
            image = ctx.matrix.apply(vec)
            assert image == (lam * vec[0], lam * vec[1])
            assert lam > 0
        assert lam_plus > lam_minus
        assert lam_plus * lam_minus == 1

    def test_eigen_coordinates_round_trip(self):
        ctx = context_for(2, 3)
        raw = ctx.vector(Fraction(3, 7), -2)
        assert ctx.from_eigen(ctx.to_eigen(raw)) == raw


class TestGroupLaw:
    def test_identity_and_inverse(self):
        ctx = context_for(2, 3)
        e = k_element(ctx, 1, -2, level=3)
        assert k_multiply(e, k_identity(ctx)) == e
        assert k_multiply(k_identity(ctx), e) == e
        assert k_multiply(e, k_inverse(e)) == k_identity(ctx)
        assert k_multiply(k_inverse(e), e) == k_identity(ctx)

    def test_power(self):
        ctx = context_for(1, 1)
        e = k_element(ctx, 0, 1, level=1)
        assert k_power(e, 3) == k_multiply(e, k_multiply(e, e))
        assert k_power(e, -2) == k_inverse(k_power(e, 2))
        assert k_power(e, 0) == k_identity(ctx)

    @pytest.mark.parametrize('k', [-9, -4, -1, 1, 2, 5, 8, 64])
    def test_power_matches_repeated_multiplication(self, k):
        ctx = context_for(2, 3)
        e = k_element(ctx, 1, -2, level=1 if abs(k) < 10 else 0)
        base = e if k > 0 else k_inverse(e)
        expected = k_identity(ctx)
        for _ in range(abs(k)):
            expected = k_multiply(expected, base)
        assert k_power(e, k) == expected

    def test_contexts_do_not_mix(self):
        with pytest.raises(OrderError):
            k_multiply(k_identity(context_for(1, 1)), k_identity(context_for(1, 2)))


class TestPhi:
    def test_rho(self):
        assert rho(w('t^2 a t^-1 b')) == 1
        with pytest.raises(WordError):
            rho(parse_word('x', TWO_GEN_ALPHABET))

    def test_expand_a(self):
        assert expand_a(w('a'), 2) == w('t^-1 b^2 t b^-2')

    def test_to_xword(self):
        xw = to_xword(w('t b t^-1 b^2 t^-1'))
        assert xw == XWord(((1, 1), (0, 2)), -1)
        assert str(xw) == 'x_1 x_0^2 tau^-1'
        with pytest.raises(WordError):
            to_xword(w('a'))

    def test_r_map_needs_level_zero(self):
        with pytest.raises(OrderError):
            r_map(XWord(((0, 1),), 1), context_for(1, 1))

    @pytest.mark.parametrize('p,q', [(1, 1), (2, 3), (3, 1)])
    def test_homomorphism(self, p, q, rng):
        ctx = context_for(p, q)
        for _ in range(200):
            u, v = random_word(rng, max_syllables=5, max_exp=2), random_word(rng, max_syllables=5, max_exp=2)
            assert phi(concat(u, v), ctx) == k_multiply(phi(u, ctx), phi(v, ctx))

    @pytest.mark.parametrize('p', range(1, 4))
    @pytest.mark.parametrize('q', range(1, 4))
    def test_h_window_relators_vanish(self, p, q):
        ctx = context_for(p, q)
        change = h_window_to_std((p, q), 2)
        for relator in h_presentation_window((p, q), 2).relators:
            assert phi(change.apply(relator), ctx) == k_identity(ctx)


class TestOrder:
    @pytest.mark.parametrize('p,q,text,expected', [
        (1, 1, 'b', Ordering.GREATER),
        (1, 1, 't^-1', Ordering.LESS),
        (2, 3, '[b,t^-1 b t]', Ordering.EQUAL),
        (1, 1, 't', Ordering.GREATER),
        (2, 1, 'b^-1', Ordering.LESS),
    ])
    def test_word_sign(self, p, q, text, expected):
        assert word_sign(w(text), context_for(p, q)) == expected

    def test_total_order_axioms(self, rng):
        ctx = context_for(2, 3)
        elements = [phi(random_word(rng, max_syllables=4, max_exp=2), ctx) for _ in range(25)]
        for e1 in elements:
            assert k_compare(e1, e1) == Ordering.EQUAL
            for e2 in elements:
                forward = k_compare(e1, e2)
                assert k_compare(e2, e1) == Ordering.of(-forward.value)
                for e3 in elements[:8]:
                    if forward == Ordering.LESS and k_compare(e2, e3) == Ordering.LESS:
                        assert k_compare(e1, e3) == Ordering.LESS

    @pytest.mark.parametrize('p,q', [(1, 1), (2, 3)])
    def test_bi_invariance(self, p, q, rng):
        ctx = context_for(p, q)
        for _ in range(300):
            e1, e2, g, h = (phi(random_word(rng, max_syllables=4, max_exp=2), ctx) for _ in range(4))
            verdict = k_compare(e1, e2)
            shifted = k_compare(k_multiply(k_multiply(g, e1), h), k_multiply(k_multiply(g, e2), h))
            assert shifted == verdict

    def test_positive_rescaling_preserves_order(self, rng):
        ctx = context_for(2, 3)
        for _ in range(100):
            e1, e2 = (phi(random_word(rng, max_syllables=4, max_exp=2), ctx) for _ in range(2))
            assert k_compare(e1, e2) == k_compare(e1, e2, scales=(Fraction(3), Fraction(1, 5)))
        with pytest.raises(ParameterError):
            k_compare(e1, e1, scales=(-1, 1))

    @pytest.mark.parametrize('p,q', [(1, 1), (2, 3), (2, 1)])
    def test_exact_sign_matches_high_precision(self, p, q, rng):
        ctx = context_for(p, q)
        for _ in range(200):
            alpha, beta = phi(random_word(rng, max_syllables=5, max_exp=3), ctx).coefficients
            for coeff in (alpha, beta):
                approx = coeff.approx(50)
                if abs(approx) > mpmath.mpf('1e-40'):
                    assert coeff.sign() == int(mpmath.sign(approx))

    def test_json(self):
        data = phi(w('b t'), context_for(1, 1)).to_json()
        assert data['level'] == 1
        assert data['raw'] == ['0', '1']
        assert data['eigen'] == ['1', '-1']


@pytest.mark.slow
def test_homomorphism_law_on_many_pairs(rng):
    contexts = {(p, q): context_for(p, q) for p in range(1, 6) for q in range(1, 6)}
    for _ in range(10_000):
        ctx = contexts[rng.randint(1, 5), rng.randint(1, 5)]
        u, v = random_word(rng, max_syllables=5, max_exp=2), random_word(rng, max_syllables=5, max_exp=2)
        assert phi(concat(u, v), ctx) == k_multiply(phi(u, ctx), phi(v, ctx))


@pytest.mark.slow
@pytest.mark.parametrize('p', range(1, 6))
@pytest.mark.parametrize('q', range(1, 6))
@pytest.mark.parametrize('window', range(1, 5))
def test_h_window_relators_vanish_on_wide_windows(p, q, window):
    ctx = context_for(p, q)
    change = h_window_to_std((p, q), window)
    for relator in h_presentation_window((p, q), window).relators:
        assert phi(change.apply(relator), ctx) == k_identity(ctx)


@pytest.mark.slow
def test_order_axioms_on_many_samples(rng):
    ctx = context_for(2, 3)
    pool = [phi(random_word(rng, max_syllables=4, max_exp=2), ctx) for _ in range(200)]
    for _ in range(10_000):
        e1, e2, e3, g = (rng.choice(pool) for _ in range(4))
        forward = k_compare(e1, e2)
        assert k_compare(e2, e1) == Ordering.of(-forward.value)
        if forward == Ordering.LESS and k_compare(e2, e3) == Ordering.LESS:
            assert k_compare(e1, e3) == Ordering.LESS
        assert k_compare(k_multiply(g, e1), k_multiply(g, e2)) == forward
        assert k_compare(k_multiply(e1, g), k_multiply(e2, g)) == forward
