"""classify and pairs: parameter-level invariants and the same-pq pair driver."""

import time
from typing import Optional

from twistorsion.core.config import RunConfig
from twistorsion.schemas.envelope import (
    ClassifyOutcome,
    PairsOutcome,
    PairStatus,
    ResultEnvelope,
    SurgeryInvariants,
    make_envelope,
)
from twistorsion.schemas.table import UnknownRow
from twistorsion.services.classify import (
    alexander,
    canonicalize,
    jsj,
    knot_relation,
    theorem1_pairs,
    zero_surgery_homeo,
)
from twistorsion.services.table import load_table, verify_row


def _invariants(p: int, q: int) -> SurgeryInvariants:
    return SurgeryInvariants(
        p=p,
        q=q,
        alexander=alexander(p, q).coefficients(),
        jsj=jsj(p, q).to_json(),
        class_representative=list(canonicalize(p, q)),
    )


def cmd_classify(
    p: int,
    q: int,
    config: RunConfig,
    p2: Optional[int] = None,
    q2: Optional[int] = None,
) -> ResultEnvelope:
    """
    Raises:
        ParameterError: If any parameter is zero
    """
    start_time = time.time()
    invariants = _invariants(p, q)
    params = {'p': p, 'q': q}
    if p2 is None or q2 is None:
        outcome = ClassifyOutcome(invariants=invariants, verdict='computed')
    else:
        homeomorphic = zero_surgery_homeo(p, q, p2, q2)
        outcome = ClassifyOutcome(
            invariants=invariants,
            other=_invariants(p2, q2),
            homeomorphic=homeomorphic,
            knot_relation=knot_relation(p, q, p2, q2).value,
            verdict='homeomorphic' if homeomorphic else 'not_homeomorphic',
        )
        params.update({'p2': p2, 'q2': q2})
    duration = time.time() - start_time
    return make_envelope('classify', params, outcome, {'seconds': round(duration, 6)}, config.snapshot())


def cmd_pairs(n: int, config: RunConfig, table_path: Optional[str] = None) -> ResultEnvelope:
    """
    List same-pq pairs and check them against the witness table: a pair whose
    members are both filled rows must have at least one verified witness.

    Raises:
        ParameterError: If n is zero
        TableError: If the table cannot be read
    """
    start_time = time.time()
    statuses: dict[tuple[int, int], str] = {}
    for i, row in enumerate(load_table(table_path)):
        key = canonicalize(row.p, row.q)
        statuses[key] = 'unknown' if isinstance(row, UnknownRow) else verify_row(i, row).status

    pairs = []
    for first, second in theorem1_pairs(n):
        s1 = statuses.get(first, 'not_listed')
        s2 = statuses.get(second, 'not_listed')
        both_filled = s1 in ('pass', 'fail') and s2 in ('pass', 'fail')
        pairs.append(
            PairStatus(
                first=list(first),
                second=list(second),
                first_status=s1,
                second_status=s2,
                consistent=not both_filled or 'pass' in (s1, s2),
            )
        )
    outcome = PairsOutcome(
        n=n,
        pairs=pairs,
        verdict='pass' if all(pair.consistent for pair in pairs) else 'fail',
    )
    duration = time.time() - start_time
    return make_envelope('pairs', {'n': n}, outcome, {'seconds': round(duration, 6)}, config.snapshot())
