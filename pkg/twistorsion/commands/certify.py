"""certify: the explicit torsion certificate for K_{p,-q}(0)."""

import time

from twistorsion.core.config import RunConfig
from twistorsion.schemas.envelope import CertifyOutcome, ResultEnvelope, make_envelope
from twistorsion.services.certificates import (
    commutator_certificate,
    longitude_certificate,
    monodromy_matrix,
    torsion_certificate,
)


def cmd_certify(p: int, q: int, config: RunConfig, generator: str = 'a') -> ResultEnvelope:
    """
    Raises:
        ParameterError: If p or q is not positive
        CertificateError: If the Chebyshev search exceeds config.k_cap
    """
    start_time = time.time()
    cert = torsion_certificate(p, q, generator=generator, k_cap=config.k_cap)
    commutator = commutator_certificate(p, q)
    longitude = longitude_certificate(p, -q)
    duration = time.time() - start_time

    data = cert.to_json()
    outcome = CertifyOutcome(
        **data,
        knot=f'K_({p},{-q})',
        monodromy=monodromy_matrix(p, q).rows(),
        commutator_factor_count=len(commutator.factors),
        longitude_factor_count=len(longitude.factors),
        verdict='certified',
    )
    return make_envelope(
        'certify',
        {'p': p, 'q': q, 'generator': generator},
        outcome,
        {'seconds': round(duration, 6)},
        config.snapshot(),
    )
