"""biorder: image of a word in K and its position relative to the identity."""

import time

from twistorsion.core.config import RunConfig
from twistorsion.schemas.envelope import BiorderOutcome, ResultEnvelope, make_envelope
from twistorsion.services.biorder import context_for, expand_a, phi, rho, to_xword, word_sign
from twistorsion.services.presentations import STD_ALPHABET
from twistorsion.services.words import format_word, parse_word


def cmd_biorder(p: int, q: int, word_text: str, config: RunConfig) -> ResultEnvelope:
    """
    Raises:
        ParameterError: If p or q is not positive
        WordError: If the word does not parse over {a, b, t}
    """
    start_time = time.time()
    ctx = context_for(p, q)
    word = parse_word(word_text, STD_ALPHABET)
    image = phi(word, ctx)
    verdict = word_sign(word, ctx)
    duration = time.time() - start_time

    outcome = BiorderOutcome(
        p=p,
        q=q,
        word=format_word(word),
        rho=rho(word),
        xword=str(to_xword(expand_a(word, q))),
        phi=image.to_json(),
        verdict=verdict.name.lower(),
    )
    return make_envelope(
        'biorder',
        {'p': p, 'q': q, 'word': word_text},
        outcome,
        {'seconds': round(duration, 6)},
        config.snapshot(),
    )
