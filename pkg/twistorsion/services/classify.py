"""
Parameter-level invariants of K_{p,q} and its 0-surgery.

Everything here is decided from (p, q) alone: the Alexander polynomial, the
JSJ pieces of the 0-surgery, when two 0-surgeries are homeomorphic, and when
two knots of the family are isotopic or mirror images.
"""

import enum
from dataclasses import dataclass
from typing import Union

from twistorsion.core.exceptions import ParameterError

Pair = tuple[int, int]


def _check_nonzero(*values: int) -> None:
    if any(v == 0 for v in values):
        raise ParameterError(
            f'Parameters must be nonzero, got {values}',
            details={'values': list(values)},
        )


@dataclass(frozen=True)
class AlexanderPoly:
    """c0 + c1·t + c2·t²."""

    c0: int
    c1: int
    c2: int

    def evaluate(self, t) -> int:
        return self.c0 + self.c1 * t + self.c2 * t * t

    def coefficients(self) -> list[int]:
        return [self.c0, self.c1, self.c2]


@dataclass(frozen=True)
class SeifertPiece:
    """M(k): k-surgery on one component of the (2, 4) torus link."""

    k: int

    def __post_init__(self):
        _check_nonzero(self.k)

    def __str__(self) -> str:
        return f'M({self.k})'


@dataclass(frozen=True)
class SeifertNoTori:
    def to_json(self) -> dict:
        return {'kind': 'seifert_no_tori', 'pieces': []}


@dataclass(frozen=True)
class OneTorus:
    piece: SeifertPiece

    def to_json(self) -> dict:
        return {'kind': 'one_torus', 'pieces': [str(self.piece)]}


@dataclass(frozen=True)
class TwoTori:
    """Pieces are kept sorted, so equality ignores their order."""

    pieces: tuple[SeifertPiece, SeifertPiece]

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(sorted(self.pieces, key=lambda piece: piece.k)))

    def to_json(self) -> dict:
        return {'kind': 'two_tori', 'pieces': [str(piece) for piece in self.pieces]}


JsjDescriptor = Union[SeifertNoTori, OneTorus, TwoTori]


class KnotRelation(enum.Enum):
    ISOTOPIC = 'isotopic'
    MIRROR = 'mirror'
    NEITHER = 'neither'


def alexander(p: int, q: int) -> AlexanderPoly:
    _check_nonzero(p, q)
    pq = p * q
    return AlexanderPoly(-pq, 2 * pq + 1, -pq)


def jsj(p: int, q: int) -> JsjDescriptor:
    _check_nonzero(p, q)
    if (p, q) in ((1, -1), (-1, 1)):
        return SeifertNoTori()
    if abs(p) == 1 or abs(q) == 1:
        return OneTorus(SeifertPiece(p * q))
    return TwoTori((SeifertPiece(p), SeifertPiece(-q)))


def m_homeo(k1: int, k2: int) -> bool:
    _check_nonzero(k1, k2)
    return abs(k1) == abs(k2)


def jsj_equivalent(d1: JsjDescriptor, d2: JsjDescriptor) -> bool:
    """Same shape with pairwise homeomorphic pieces, in some order."""
    if type(d1) is not type(d2):
        return False
    if isinstance(d1, OneTorus):
        return m_homeo(d1.piece.k, d2.piece.k)
    if isinstance(d1, TwoTori):
        return sorted(abs(piece.k) for piece in d1.pieces) == sorted(abs(piece.k) for piece in d2.pieces)
    return True


def homeo_class(p: int, q: int) -> frozenset[Pair]:
    """The (at most) four parameter pairs with 0-surgery homeomorphic to that of (p, q)."""
    _check_nonzero(p, q)
    return frozenset({(p, q), (q, p), (-p, -q), (-q, -p)})


def zero_surgery_homeo(p: int, q: int, p2: int, q2: int) -> bool:
    _check_nonzero(p, q, p2, q2)
    return (p2, q2) in homeo_class(p, q)


def canonicalize(p: int, q: int) -> Pair:
    """Smallest member of the homeomorphism class with positive first entry."""
    return min(pair for pair in homeo_class(p, q) if pair[0] > 0)


def knot_relation(p: int, q: int, p2: int, q2: int) -> KnotRelation:
    _check_nonzero(p, q, p2, q2)
    if (p2, q2) in ((p, q), (-q, -p)):
        return KnotRelation.ISOTOPIC
    if (p2, q2) in ((-p, -q), (q, p)):
        return KnotRelation.MIRROR
    return KnotRelation.NEITHER


def _factorizations(n: int) -> list[Pair]:
    pairs = []
    for p in range(1, abs(n) + 1):
        if n % p == 0:
            pairs.append((p, n // p))
            pairs.append((-p, -(n // p)))
    return pairs


def theorem1_pairs(n: int) -> list[tuple[Pair, Pair]]:
    """
    Pairs of non-homeomorphic 0-surgeries with the same pq = n, excluding
    pairs that share a twist parameter up to sign. Each pair is given by
    canonical representatives, sorted.
    """
    _check_nonzero(n)
    classes = sorted({canonicalize(p, q) for p, q in _factorizations(n)})
    pairs = []
    for i, first in enumerate(classes):
        for second in classes[i + 1:]:
            if {abs(first[0]), abs(first[1])} != {abs(second[0]), abs(second[1])}:
                pairs.append((first, second))
    return pairs
