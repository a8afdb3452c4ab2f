"""
Restriction of a presentation to a closed subset Z of its spectrum.

A|_Z is presented again as an Elliott-Thomsen algebra B:

- E1 blocks, in order: the thetas of Z (ascending); one stub per left-touching
  block (the free end s_i of [0, s_i]); one stub per right-touching block (the
  free end t_i of [t_i, 1]); a start and an end stub for every interior
  interval; one block per isolated interior point.
- E2 blocks, in order: full blocks, left pieces [0, s_i], right pieces
  [t_i, 1], then interior intervals in block and piece order.

The quotient pattern A -> B restricts functions to Z; the section pattern
B -> A|_Z is its inverse.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..algebra.presentation import Presentation, ValidationReport
from ..errors import DomainError, EmptySetError
from ..patterns.homs import (
    IntervalTrack,
    PatternHom,
    Segment,
    ThetaTrack,
    eval_spectrum,
    validate_pattern,
)
from ..patterns.operations import compose
from ..patterns.spectra import FiniteSpectrum
from ..spectrum.closed_sets import ClosedSubset, Piece, full_spectrum
from ..spectrum.index_sets import IndexSets, index_sets
from ..spectrum.piecewise import PLMap
from ..spectrum.points import Interior, SpectrumPoint, Theta

logger = logging.getLogger(__name__)

THETA = 'theta'
LEFT_STUB = 'left_stub'
RIGHT_STUB = 'right_stub'
START_STUB = 'interval_start'
END_STUB = 'interval_end'
POINT = 'point'

FULL = 'full'
LEFT = 'left'
RIGHT = 'right'
INTERVAL = 'interval'


@dataclass(frozen=True)
class BlockInfo:
    """Where a block of B sits in Sp(A): a theta, a point (i, lo) or an interval [lo, hi]_i."""

    kind: str
    ambient: int
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None

    def chart(self) -> PLMap:
        """Affine chart [0,1] -> [lo, hi] of an E2 block."""
        return PLMap.affine(0, 1, self.lo, self.hi)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {'kind': self.kind, 'ambient_block': self.ambient}
        if self.lo is not None:
            payload['lo'] = self.lo
            payload['hi'] = self.hi
        return payload


@dataclass
class RestrictionResult:
    """
    B with its block correspondence, the quotient A -> B and the section B -> A|_Z.
    """

    source: Presentation
    Z: ClosedSubset
    B: Presentation
    sets: IndexSets
    e1: Tuple[BlockInfo, ...]
    e2: Tuple[BlockInfo, ...]
    quotient: PatternHom
    section: PatternHom

    def to_ambient(self, x: SpectrumPoint) -> SpectrumPoint:
        """The point of Z corresponding to a point of Sp(B)."""
        if isinstance(x, Theta):
            info = self.e1[x.j]
            return Theta(info.ambient) if info.kind == THETA else Interior(info.ambient, info.lo)
        if x.t == 0 or x.t == 1:
            raise DomainError(f"{x} is a glued endpoint; use its theta image")
        info = self.e2[x.i]
        return Interior(info.ambient, info.chart()(x.t))

    def from_ambient(self, z: SpectrumPoint) -> SpectrumPoint:
        """
        The point of Sp(B) corresponding to z in Z.

        Raises:
            DomainError: if z is not in Z
        """
        if isinstance(z, Theta):
            for q, info in enumerate(self.e1):
                if info.kind == THETA and info.ambient == z.j:
                    return Theta(q)
            raise DomainError(f"theta{z.j} is not in Z")
        for q, info in enumerate(self.e1):
            if info.kind != THETA and info.ambient == z.i and info.lo == z.t:
                return Theta(q)
        for q, info in enumerate(self.e2):
            if info.ambient == z.i and info.lo <= z.t <= info.hi:
                return Interior(q, (z.t - info.lo) / (info.hi - info.lo))
        raise DomainError(f"{z} is not in Z")

    def correspondence(self) -> Dict[str, Any]:
        return {
            'schema': 'correspondence/v1',
            'e1': [info.to_dict() for info in self.e1],
            'e2': [info.to_dict() for info in self.e2],
        }


def _interior_intervals(Z: ClosedSubset, sets: IndexSets) -> List[Tuple[int, Piece]]:
    out = []
    for i in sorted(sets.La):
        for piece in Z.pieces[i]:
            if piece.is_point or piece.lo == 0 or piece.hi == 1:
                continue
            out.append((i, piece))
    return out


def restrict_algebra(P: Presentation, Z: ClosedSubset) -> RestrictionResult:
    """
    Present A|_Z as an algebra of class C.

    Args:
        P: Presentation of A
        Z: Nonempty closed subset of Sp(A)

    Returns:
        RestrictionResult

    Raises:
        EmptySetError: if Z is empty
        NotClosedError: if Z is not closed
    """
    if Z.is_empty():
        raise EmptySetError("cannot restrict to the empty set")
    sets = index_sets(P, Z)

    e1: List[BlockInfo] = [BlockInfo(THETA, j) for j in sorted(sets.J)]
    e1 += [BlockInfo(LEFT_STUB, i, sets.s[i], sets.s[i]) for i in sorted(sets.Ll)]
    e1 += [BlockInfo(RIGHT_STUB, i, sets.t[i], sets.t[i]) for i in sorted(sets.Lr)]
    intervals = _interior_intervals(Z, sets)
    for i, piece in intervals:
        e1.append(BlockInfo(START_STUB, i, piece.lo, piece.lo))
        e1.append(BlockInfo(END_STUB, i, piece.hi, piece.hi))
    e1 += [BlockInfo(POINT, i, p.lo, p.lo) for i, p in Z.point_pieces()]

    e2: List[BlockInfo] = [BlockInfo(FULL, i, Fraction(0), Fraction(1)) for i in sorted(sets.L1)]
    e2 += [BlockInfo(LEFT, i, Fraction(0), sets.s[i]) for i in sorted(sets.Ll)]
    e2 += [BlockInfo(RIGHT, i, sets.t[i], Fraction(1)) for i in sorted(sets.Lr)]
    e2 += [BlockInfo(INTERVAL, i, piece.lo, piece.hi) for i, piece in intervals]

    theta_column = {info.ambient: q for q, info in enumerate(e1) if info.kind == THETA}
    stub_column = {(info.kind, info.ambient, info.lo): q for q, info in enumerate(e1) if info.kind != THETA}

    def size_of(info: BlockInfo) -> int:
        return P.k[info.ambient] if info.kind == THETA else P.dims[info.ambient]

    def ambient_row(row: Tuple[int, ...]) -> List[int]:
        out = [0] * len(e1)
        for j, mult in enumerate(row):
            if mult:
                out[theta_column[j]] = mult
        return out

    def unit_row(q: int) -> List[int]:
        out = [0] * len(e1)
        out[q] = 1
        return out

    alpha, beta = [], []
    for info in e2:
        i = info.ambient
        if info.kind == FULL:
            alpha.append(ambient_row(P.alpha[i]))
            beta.append(ambient_row(P.beta[i]))
        elif info.kind == LEFT:
            alpha.append(ambient_row(P.alpha[i]))
            beta.append(unit_row(stub_column[(LEFT_STUB, i, info.hi)]))
        elif info.kind == RIGHT:
            alpha.append(unit_row(stub_column[(RIGHT_STUB, i, info.lo)]))
            beta.append(ambient_row(P.beta[i]))
        else:
            alpha.append(unit_row(stub_column[(START_STUB, i, info.lo)]))
            beta.append(unit_row(stub_column[(END_STUB, i, info.hi)]))

    B = Presentation(
        k=tuple(size_of(info) for info in e1),
        dims=tuple(P.dims[info.ambient] for info in e2),
        alpha=tuple(tuple(r) for r in alpha),
        beta=tuple(tuple(r) for r in beta),
        unital=P.unital,
    )

    quotient = _quotient_pattern(P, B, e1, e2)
    section = _section_pattern(P, Z, B, e1, e2)
    logger.debug(f"restrict_algebra: Z={Z} gives p'={B.p}, l'={B.l}")
    return RestrictionResult(P, Z, B, sets, tuple(e1), tuple(e2), quotient, section)


def _quotient_pattern(P: Presentation, B: Presentation, e1, e2) -> PatternHom:
    vertex = {}
    for q, info in enumerate(e1):
        if info.kind == THETA:
            vertex[q] = FiniteSpectrum(tuple(int(j == info.ambient) for j in range(P.p)))
        else:
            vertex[q] = FiniteSpectrum((0,) * P.p, (Interior(info.ambient, info.lo),))
    segments = tuple(
        (Segment(0, 1, (IntervalTrack(info.ambient, info.chart()),)),) for info in e2
    )
    return PatternHom(P, B, full_spectrum(B), vertex, segments, name="pi")


def _section_pattern(P: Presentation, Z: ClosedSubset, B: Presentation, e1, e2) -> PatternHom:
    theta_column = {info.ambient: q for q, info in enumerate(e1) if info.kind == THETA}
    point_column = {(info.ambient, info.lo): q for q, info in enumerate(e1) if info.kind == POINT}
    vertex = {j: FiniteSpectrum(tuple(int(q == theta_column[j]) for q in range(B.p))) for j in Z.thetas}

    segments: List[List[Segment]] = [[] for _ in range(P.l)]
    for q, info in enumerate(e2):
        inverse = PLMap.affine(info.lo, info.hi, 0, 1)
        segments[info.ambient].append(Segment(info.lo, info.hi, (IntervalTrack(q, inverse),)))
    for i, piece in Z.point_pieces():
        segments[i].append(Segment(piece.lo, piece.lo, (ThetaTrack(point_column[(i, piece.lo)]),)))
    ordered = tuple(tuple(sorted(blk, key=lambda s: s.lo)) for blk in segments)
    return PatternHom(B, P, Z, vertex, ordered, name="sigma")


def fiber_dimension(P: Presentation, x: SpectrumPoint) -> int:
    return P.k[x.j] if isinstance(x, Theta) else P.dims[x.i]


def dimension_at(P: Presentation, Z: ClosedSubset, result: RestrictionResult,
                 z: SpectrumPoint) -> Tuple[int, int]:
    """
    Fiber dimensions of A at z and of B at the corresponding point.

    Raises:
        DomainError: if z is not in Z
    """
    return fiber_dimension(P, z), fiber_dimension(result.B, result.from_ambient(z))


def audit_points(Z: ClosedSubset, samples: int) -> List[SpectrumPoint]:
    """Thetas, piece endpoints and evenly spaced interior points of every piece."""
    points: List[SpectrumPoint] = [Theta(j) for j in sorted(Z.thetas)]
    for i, block in enumerate(Z.pieces):
        for piece in block:
            points.append(Interior(i, piece.lo))
            if piece.is_point:
                continue
            points.append(Interior(i, piece.hi))
            step = piece.length / (samples + 1)
            points.extend(Interior(i, piece.lo + step * r) for r in range(1, samples + 1))
    return points


def audit_restriction(result: RestrictionResult, samples: int = 10,
                      extra_points: Optional[List[SpectrumPoint]] = None) -> ValidationReport:
    """
    Ground-truth audit of a restriction.

    Features:
    - Fiber dimensions agree at thetas, stub endpoints and interior samples
    - Quotient and section are valid patterns (gluing multiplicities included)
    - quotient after section is the identity of B at every sample point
    """
    report = ValidationReport()
    P, Z, B = result.source, result.Z, result.B
    for z in audit_points(Z, samples) + list(extra_points or []):
        try:
            dim_a, dim_b = dimension_at(P, Z, result, z)
        except DomainError as exc:
            report.add('correspondence', (), exc.message)
            continue
        if isinstance(z, Interior) and z.is_endpoint:
            continue
        if dim_a != dim_b:
            report.add('fiber_dimension', (), f"at {z}: A has {dim_a}, B has {dim_b}")

    report.extend(validate_pattern(result.quotient))
    report.extend(validate_pattern(result.section))
    if not report.ok:
        return report

    round_trip = compose(result.section, result.quotient)
    for q in range(B.p):
        expected = FiniteSpectrum(tuple(int(r == q) for r in range(B.p)))
        if eval_spectrum(round_trip, Theta(q)) != expected:
            report.add('round_trip', (q,), f"theta{q} does not return to itself")
    for q in range(B.l):
        for r in range(1, samples + 1):
            tau = Fraction(r, samples + 1)
            got = eval_spectrum(round_trip, Interior(q, tau))
            if got != FiniteSpectrum((0,) * B.p, (Interior(q, tau),)):
                report.add('round_trip', (q,), f"({tau}, {q}) does not return to itself")
    return report

