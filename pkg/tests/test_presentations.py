import pytest
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from twistorsion.core.exceptions import ParameterError, PresentationError
from twistorsion.services.permrep import PermAssignment, evaluate, is_homomorphism
from twistorsion.services.presentations import (
    ABT_ALPHABET,
    CANDIDATE_LABELS,
    STD_ALPHABET,
    TWO_GEN_ALPHABET,
    KnotParams,
    candidate,
    complement_group,
    custom_candidate,
    exponent_sum_matrix,
    generator_change,
    h_presentation_window,
    h_window_to_std,
    knot_group_lin,
    knot_group_two_gen,
    presentation_from_json,
    presentation_to_json,
    surgery_group_abt,
    surgery_group_std,
    surgery_group_two_gen,
    translate,
)
from twistorsion.services.words import Word, exponent_sum, parse_word

# Witnesses from the shipped table: (p, q) -> (x, y) in the two-generator basis
TABLE_MODELS = {
    (2, 2): ([1, 2, 3, 4, 5, 0], [1, 3, 0, 4, 5, 2]),
    (3, 1): ([1, 2, 3, 4, 5, 6, 0], [3, 0, 5, 2, 6, 4, 1]),
    (3, 2): ([1, 2, 3, 4, 5, 6, 7, 0], [3, 5, 0, 1, 6, 7, 2, 4]),
    (5, 2): ([1, 2, 3, 4, 5, 6, 0], [1, 3, 4, 5, 0, 6, 2]),
}


def two_gen_model(params):
    x, y = TABLE_MODELS[params]
    return PermAssignment.from_names(TWO_GEN_ALPHABET, {'x': x, 'y': y})


def std_model(params):
    """The same representation read in the a, b, t basis through std -> two_gen."""
    asg = two_gen_model(params)
    change = generator_change('std', 'two_gen', params)
    return PermAssignment.from_names(
        STD_ALPHABET,
        {name: evaluate(change.apply(Word.letter(STD_ALPHABET, name)), asg).images for name in 'abt'},
    )


def abelian_invariants(pres) -> list[int]:
    snf = smith_normal_form(Matrix(exponent_sum_matrix(pres)))
    diagonal = [abs(snf[i, i]) for i in range(min(snf.shape))]
    return sorted(diagonal) + [0] * (len(pres.generators) - len(diagonal))


class TestKnotParams:
    def test_zero_rejected(self):
        with pytest.raises(ParameterError):
            KnotParams(0, 3)
        with pytest.raises(ParameterError):
            surgery_group_two_gen((2, 0))

    def test_of(self):
        assert KnotParams.of((2, -3)) == KnotParams(2, -3)
        assert KnotParams(2, -3).pq == -6


class TestBuilders:
    def test_relator_counts(self):
        assert len(knot_group_lin((2, 3)).relators) == 2
        assert len(surgery_group_std((2, 3)).relators) == 3
        assert len(knot_group_two_gen((2, 3)).relators) == 1
        assert len(surgery_group_two_gen((2, 3)).relators) == 2
        assert len(surgery_group_abt((2, 3)).relators) == 3
        assert len(complement_group((2, 3)).relators) == 1

    def test_longitude_relator(self):
        longitude = surgery_group_std((2, 3)).relators[2]
        assert longitude == parse_word('[b^3, a^2]', STD_ALPHABET)

    def test_two_gen_relator_exponent_sums(self):
        r1, r2 = surgery_group_two_gen((3, -2)).relators
        x, y = TWO_GEN_ALPHABET['x'], TWO_GEN_ALPHABET['y']
        assert (exponent_sum(r1, x), exponent_sum(r1, y)) == (1, 1)
        assert (exponent_sum(r2, x), exponent_sum(r2, y)) == (0, 0)

    @pytest.mark.parametrize('params', [(1, 1), (2, 3), (-2, 5), (4, -1)])
    def test_zero_surgery_has_infinite_cyclic_homology(self, params):
        for pres in (surgery_group_std(params), surgery_group_two_gen(params), surgery_group_abt(params)):
            invariants = abelian_invariants(pres)
            assert invariants.count(0) == 1
            assert all(d in (0, 1) for d in invariants)

    def test_h_window_shape(self):
        pres = h_presentation_window((2, 3), 2)
        assert len(pres.generators) == 6
        # 10 commutators, 3 recurrences, 4 shifts
        assert len(pres.relators) == 17
        with pytest.raises(PresentationError):
            h_presentation_window((2, 3), 0)

    def test_h_window_to_std(self):
        change = h_window_to_std((2, 3), 1)
        x_1 = Word.letter(change.source, 'x_1')
        assert change.apply(x_1) == parse_word('t b t^-1', STD_ALPHABET)


class TestGeneratorChanges:
    @pytest.mark.parametrize('params', sorted(TABLE_MODELS))
    def test_table_models_are_homomorphisms(self, params):
        assert is_homomorphism(surgery_group_two_gen(params), two_gen_model(params))

    @pytest.mark.parametrize('params', sorted(TABLE_MODELS))
    def test_std_relators_hold_through_the_change(self, params):
        assert is_homomorphism(surgery_group_std(params), std_model(params))

    @pytest.mark.parametrize('params', sorted(TABLE_MODELS))
    def test_round_trip_through_std_is_identity_in_the_quotient(self, params):
        asg = two_gen_model(params)
        there = generator_change('two_gen', 'std', params)
        back = generator_change('std', 'two_gen', params)
        for name in 'xy':
            letter = Word.letter(TWO_GEN_ALPHABET, name)
            assert evaluate(back.apply(there.apply(letter)), asg) == evaluate(letter, asg)

    @pytest.mark.parametrize('params', sorted(TABLE_MODELS))
    def test_abt_relators_hold_through_the_change(self, params):
        asg = two_gen_model(params)
        change = generator_change('abt', 'two_gen', params)
        for relator in surgery_group_abt(params).relators:
            assert evaluate(change.apply(relator), asg).is_identity()

    @pytest.mark.parametrize('params', [(1, 1), (2, 3), (-2, 5), (3, -1)])
    def test_candidate_translates_freely_to_commutator_of_xy_and_yx(self, params):
        word = parse_word('[b,t^-1 b t]', STD_ALPHABET)
        assert translate(word, 'std', 'two_gen', params) == parse_word('[xy,yx]', TWO_GEN_ALPHABET)

    @pytest.mark.parametrize('params', [(1, 1), (2, 3), (3, 2), (-2, 5), (3, -1), (-1, -4)])
    def test_longitude_translates_freely_to_second_surgery_relator(self, params):
        longitude = surgery_group_std(params).relators[2]
        assert translate(longitude, 'std', 'two_gen', params) == surgery_group_two_gen(params).relators[1]

    def test_translate_composes_through_std(self):
        params = (2, 3)
        word = parse_word('A B^-1 T', ABT_ALPHABET)
        direct = translate(word, 'abt', 'two_gen', params)
        via_std = translate(translate(word, 'abt', 'std', params), 'std', 'two_gen', params)
        assert direct == via_std

    def test_identity_change(self):
        word = parse_word('a b t', STD_ALPHABET)
        assert translate(word, 'lin', 'std', (1, 2)) == word

    def test_unsupported_change(self):
        with pytest.raises(PresentationError):
            generator_change('std', 'complement', (2, 3))
        with pytest.raises(PresentationError):
            generator_change('std', 'nope', (2, 3))

    def test_source_alphabet_checked(self):
        change = generator_change('std', 'two_gen', (2, 3))
        with pytest.raises(PresentationError):
            change.apply(parse_word('x', TWO_GEN_ALPHABET))


class TestCandidates:
    @pytest.mark.parametrize('label', CANDIDATE_LABELS)
    def test_every_candidate_translates_to_two_gen(self, label):
        element = candidate(label, n=2, basis='two_gen', params=(2, 3))
        assert element.basis == 'two_gen'
        assert element.word.alphabet == TWO_GEN_ALPHABET

    def test_native_candidate(self):
        element = candidate('[xy,yx]')
        assert element.word == parse_word('[xy,yx]', TWO_GEN_ALPHABET)

    def test_translation_needs_params(self):
        with pytest.raises(PresentationError):
            candidate('a').in_basis('two_gen')

    def test_unknown_label(self):
        with pytest.raises(PresentationError):
            candidate('[a,a]')

    def test_custom_candidate(self):
        element = custom_candidate('[x,y]', 'two_gen')
        assert element.label == 'x^-1 y^-1 x y'


def test_presentation_json_round_trip():
    pres = h_presentation_window((2, -1), 1)
    assert presentation_from_json(presentation_to_json(pres)) == pres


def test_presentation_json_malformed():
    with pytest.raises(PresentationError):
        presentation_from_json({'label': 'std'})
