"""
Closed subsets of Sp(A) in piecewise-canonical form.

A set is a collection of theta indices plus, per interval block, a sorted
list of disjoint closed rational intervals and isolated points. Closedness
in the glued topology means: a piece touching coordinate 0 of block i forces
every theta in the alpha-support of row i into the set (beta at 1).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from ..algebra.presentation import Presentation
from .points import Number, SpectrumPoint, Theta, as_fraction

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, order=True)
class Piece:
    """Closed interval [lo, hi]; lo == hi is an isolated point."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'lo', as_fraction(self.lo))
        object.__setattr__(self, 'hi', as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty piece [{self.lo}, {self.hi}]")
        if self.lo < 0 or self.hi > 1:
            raise ValueError(f"piece [{self.lo}, {self.hi}] leaves [0,1]")

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, t: Fraction) -> bool:
        return self.lo <= t <= self.hi

    def to_dict(self) -> dict:
        return {'lo': self.lo, 'hi': self.hi}


Block = Tuple[Piece, ...]


def merge_pieces(pieces: Iterable[Piece]) -> Block:
    """Sort and merge overlapping or touching pieces."""
    merged: List[Piece] = []
    for piece in sorted(pieces):
        if merged and piece.lo <= merged[-1].hi:
            if piece.hi > merged[-1].hi:
                merged[-1] = Piece(merged[-1].lo, piece.hi)
        else:
            merged.append(piece)
    return tuple(merged)


def _as_piece(raw) -> Piece:
    if isinstance(raw, Piece):
        return raw
    if isinstance(raw, dict):
        return Piece(raw['lo'], raw['hi'])
    lo, hi = raw
    return Piece(lo, hi)


@dataclass(frozen=True)
class ClosedSubset:
    """
    thetas: F1 indices in the set; pieces[i]: merged pieces of block i.

    Instances are only guaranteed closed when produced by closure(),
    full_spectrum() or the set operations; is_closed() checks a raw one.
    """

    thetas: FrozenSet[int]
    pieces: Tuple[Block, ...]

    @classmethod
    def build(cls, thetas: Iterable[int], pieces: Sequence[Iterable]) -> 'ClosedSubset':
        """Raw constructor: pieces may be Piece objects, (lo, hi) pairs or {'lo','hi'} dicts."""
        return cls(
            thetas=frozenset(int(j) for j in thetas),
            pieces=tuple(merge_pieces(_as_piece(r) for r in block) for block in pieces),
        )

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.pieces)

    def block(self, i: int) -> Block:
        return self.pieces[i]

    def is_empty(self) -> bool:
        return not self.thetas and all(not block for block in self.pieces)

    def block_length(self, i: int) -> Fraction:
        return sum((p.length for p in self.pieces[i]), ZERO)

    def interval_pieces(self) -> List[Tuple[int, Piece]]:
        """All (block, piece) pairs with positive length, in block order."""
        return [(i, p) for i, block in enumerate(self.pieces) for p in block if not p.is_point]

    def point_pieces(self) -> List[Tuple[int, Piece]]:
        return [(i, p) for i, block in enumerate(self.pieces) for p in block if p.is_point]

    def __str__(self) -> str:
        parts = [f"theta{j}" for j in sorted(self.thetas)]
        for i, block in enumerate(self.pieces):
            for p in block:
                parts.append(f"{{{p.lo}}}_{i}" if p.is_point else f"[{p.lo},{p.hi}]_{i}")
        return " u ".join(parts) if parts else "{}"


def full_spectrum(P: Presentation) -> ClosedSubset:
    """All thetas and [0,1] on every interval block."""
    return ClosedSubset(frozenset(range(P.p)), tuple((Piece(ZERO, ONE),) for _ in range(P.l)))


def empty_set(P: Presentation) -> ClosedSubset:
    return ClosedSubset(frozenset(), tuple(() for _ in range(P.l)))


def _check_shape(P: Presentation, S: ClosedSubset) -> None:
    if S.l != P.l:
        raise ValueError(f"set has {S.l} blocks, presentation has {P.l}")
    bad = [j for j in S.thetas if not 0 <= j < P.p]
    if bad:
        raise ValueError(f"theta indices {bad} out of range")


def closure(P: Presentation, S: ClosedSubset) -> ClosedSubset:
    """
    Smallest closed set containing S.

    A piece with lo == 0 pulls in the alpha-support of its row, one with
    hi == 1 the beta-support. Isolated points at 0 or 1 are glued points:
    they are replaced by their thetas and dropped from the block.
    """
    _check_shape(P, S)
    thetas = set(S.thetas)
    blocks = []
    for i, block in enumerate(S.pieces):
        kept = []
        for piece in merge_pieces(block):
            if piece.lo == 0:
                thetas.update(P.alpha_support(i))
            if piece.hi == 1:
                thetas.update(P.beta_support(i))
            if piece.is_point and piece.lo in (ZERO, ONE):
                continue
            kept.append(piece)
        blocks.append(tuple(kept))
    return ClosedSubset(frozenset(thetas), tuple(blocks))


def is_closed(P: Presentation, S: ClosedSubset) -> bool:
    try:
        return closure(P, S) == S
    except ValueError:
        return False


def contains(P: Presentation, S: ClosedSubset, x: SpectrumPoint) -> bool:
    """
    Membership of a point.

    A raw endpoint Interior(i, 0) belongs to S when a piece of block i
    contains 0; for a closed S this implies its theta image is in S too.
    """
    if isinstance(x, Theta):
        return x.j in S.thetas
    return any(p.contains(x.t) for p in S.pieces[x.i])


def union(P: Presentation, A: ClosedSubset, B: ClosedSubset) -> ClosedSubset:
    merged = tuple(merge_pieces(a + b) for a, b in zip(A.pieces, B.pieces))
    return closure(P, ClosedSubset(A.thetas | B.thetas, merged))


def _intersect_blocks(a: Block, b: Block) -> Block:
    out = []
    for p in a:
        for q in b:
            lo, hi = max(p.lo, q.lo), min(p.hi, q.hi)
            if lo <= hi:
                out.append(Piece(lo, hi))
    return merge_pieces(out)


def intersection(P: Presentation, A: ClosedSubset, B: ClosedSubset) -> ClosedSubset:
    blocks = tuple(_intersect_blocks(a, b) for a, b in zip(A.pieces, B.pieces))
    return closure(P, ClosedSubset(A.thetas & B.thetas, blocks))


def is_subset(A: ClosedSubset, B: ClosedSubset) -> bool:
    """A contained in B (blockwise piece containment)."""
    if not A.thetas <= B.thetas:
        return False
    for a, b in zip(A.pieces, B.pieces):
        for p in a:
            if not any(q.lo <= p.lo and p.hi <= q.hi for q in b):
                return False
    return True


def complement_gaps(S: ClosedSubset, i: int) -> List[Tuple[Fraction, Fraction, bool, bool]]:
    """
    Maximal parts of [0,1]_i missed by S, as (lo, hi, lo_closed, hi_closed).

    An endpoint 0 or 1 of the block counts as closed when no piece touches it.
    """
    gaps = []
    cursor, cursor_closed = ZERO, True
    for p in S.pieces[i]:
        if p.lo > cursor:
            gaps.append((cursor, p.lo, cursor_closed, False))
        cursor, cursor_closed = p.hi, False
    if cursor < ONE:
        gaps.append((cursor, ONE, cursor_closed, True))
    return gaps
