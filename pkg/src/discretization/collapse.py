"""
Discretization of a closed set Y into Z and the collapse map rho: Y -> Z.

Consecutive skeleton vertices y_s < y_t are joined by an edge when Y has
positive length between them; rho is then a monotone surjection onto
[y_s, y_t]. Otherwise Y has finitely many points there and rho splits them
at the widest gap, sending the left group to y_s and the right to y_t.
Z keeps the coordinates of Y: every vertex and every edge.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from ..algebra.presentation import Presentation, ValidationReport
from ..errors import DomainError
from ..patterns.homs import IntervalTrack, PatternHom, Segment
from ..patterns.spectra import FiniteSpectrum
from ..spectrum.closed_sets import ClosedSubset, Piece, closure, is_closed, merge_pieces
from ..spectrum.elements import ProfileElement
from ..spectrum.index_sets import index_sets
from ..spectrum.piecewise import PLMap, crossing_points, interval_union_range
from ..spectrum.points import Interior, Number, SpectrumPoint, Theta, as_fraction
from .skeleton import GridRun, Skeleton, build_skeleton, item_gaps
from .surjection import monotone_surjection

logger = logging.getLogger(__name__)

GAP_RULE = "largest_open_gap_leftmost"


@dataclass(frozen=True)
class FullSpan:
    """Y contains all of [lo, hi]; rho is the identity there."""

    lo: Fraction
    hi: Fraction

    def rho(self) -> PLMap:
        return PLMap.identity(self.lo, self.hi)


@dataclass(frozen=True)
class EdgeMap:
    """Y meets [lo, hi] in parts of positive total length; rho stretches them onto [lo, hi]."""

    lo: Fraction
    hi: Fraction
    parts: Tuple[Piece, ...]

    def rho(self) -> PLMap:
        return monotone_surjection(self.parts, self.lo, self.hi)


@dataclass(frozen=True)
class SplitMap:
    """Finitely many points of Y in [lo, hi]; those up to gap[0] go to lo, the rest to hi."""

    lo: Fraction
    hi: Fraction
    points: Tuple[Fraction, ...]
    gap: Tuple[Fraction, Fraction]

    def image_of(self, y: Fraction) -> Fraction:
        return self.lo if y <= self.gap[0] else self.hi


Component = Union[FullSpan, EdgeMap, SplitMap]


def _classify(block: Tuple[Piece, ...], lo: Fraction, hi: Fraction) -> Component:
    parts = merge_pieces(
        Piece(max(p.lo, lo), min(p.hi, hi)) for p in block if p.lo <= hi and p.hi >= lo
    )
    total = sum((p.length for p in parts), Fraction(0))
    if total > 0:
        if len(parts) == 1 and parts[0].lo == lo and parts[0].hi == hi:
            return FullSpan(lo, hi)
        return EdgeMap(lo, hi, parts)
    points = tuple(sorted({p.lo for p in parts}))
    gaps = [(a, b) for a, b in zip(points, points[1:])]
    widest = max(gaps, key=lambda g: g[1] - g[0])
    return SplitMap(lo, hi, points, widest)


def block_components(block: Tuple[Piece, ...], skeleton: Skeleton, i: int) -> List[Component]:
    """Components of rho on block i, sorted; grid runs become one identity span each."""
    components: List[Component] = [
        FullSpan(item.lo, item.hi) for item in skeleton.items[i]
        if isinstance(item, GridRun) and item.stop > item.start
    ]
    for lo, hi in item_gaps(skeleton, i):
        components.append(_classify(block, lo, hi))
    components.sort(key=lambda c: c.lo)
    return components


@dataclass
class CollapseMap:
    """
    rho: Y -> Z, per block an ordered list of components covering the hull of Y.

    Theta points map to themselves.
    """

    P: Presentation
    Y: ClosedSubset
    Z: ClosedSubset
    delta: Fraction
    skeleton: Skeleton
    components: Tuple[Tuple[Component, ...], ...]
    gap_rule: str = GAP_RULE
    _maps: Dict[int, List[Tuple[Piece, PLMap]]] = field(default_factory=dict, repr=False, compare=False)

    @property
    def m(self) -> int:
        return self.skeleton.m

    def component_at(self, i: int, t: Fraction) -> Component:
        for comp in self.components[i]:
            if comp.lo <= t <= comp.hi:
                return comp
        raise DomainError(f"coordinate {t} of block {i} is outside the skeleton hull")

    def value(self, i: int, t: Number) -> Fraction:
        t = as_fraction(t)
        comp = self.component_at(i, t)
        if isinstance(comp, SplitMap):
            return comp.image_of(t)
        return comp.rho()(t)

    def apply(self, y: SpectrumPoint) -> SpectrumPoint:
        if isinstance(y, Theta):
            if y.j not in self.Y.thetas:
                raise DomainError(f"theta{y.j} is not in Y")
            return y
        if not any(p.contains(y.t) for p in self.Y.pieces[y.i]):
            raise DomainError(f"{y} is not in Y")
        return Interior(y.i, self.value(y.i, y.t))

    def block_maps(self, i: int) -> List[Tuple[Piece, PLMap]]:
        """rho on each piece of Y in block i as one PL map."""
        if i in self._maps:
            return self._maps[i]
        out = []
        for piece in self.Y.pieces[i]:
            if piece.is_point:
                out.append((piece, PLMap([(piece.lo, self.value(i, piece.lo))])))
                continue
            xs = {piece.lo, piece.hi}
            for comp in self.components[i]:
                lo, hi = max(comp.lo, piece.lo), min(comp.hi, piece.hi)
                if lo > hi:
                    continue
                xs.update((lo, hi))
                if isinstance(comp, EdgeMap):
                    xs.update(x for p in comp.parts for x in (p.lo, p.hi) if lo <= x <= hi)
            out.append((piece, PLMap((x, self.value(i, x)) for x in sorted(xs))))
        self._maps[i] = out
        return out

    def to_dict(self) -> Dict[str, Any]:
        blocks = []
        for i, comps in enumerate(self.components):
            entries = []
            for comp in comps:
                if isinstance(comp, FullSpan):
                    entries.append({'kind': 'identity', 'lo': comp.lo, 'hi': comp.hi})
                elif isinstance(comp, EdgeMap):
                    entries.append({'kind': 'edge', 'lo': comp.lo, 'hi': comp.hi,
                                    'parts': [p.to_dict() for p in comp.parts],
                                    'map': [[x, y] for x, y in comp.rho().points]})
                else:
                    entries.append({'kind': 'split', 'lo': comp.lo, 'hi': comp.hi,
                                    'points': list(comp.points), 'gap': list(comp.gap)})
            blocks.append(entries)
        return {'schema': 'rho/v1', 'delta': self.delta, 'm': self.m,
                'gap_rule': self.gap_rule, 'blocks': blocks}


def discretize(P: Presentation, Y: ClosedSubset, delta: Number) -> Tuple[ClosedSubset, CollapseMap]:
    """
    Discretize Y at scale delta.

    Args:
        P: Presentation
        Y: Closed subset of Sp(P)
        delta: Positive rational scale

    Returns:
        (Z, rho) with Z closed and dist(rho(y), y) < delta on Y
    """
    delta = as_fraction(delta)
    skeleton = build_skeleton(P, Y, delta)
    components = []
    z_blocks = []
    for i, block in enumerate(Y.pieces):
        items = skeleton.items[i]
        comps = block_components(block, skeleton, i)
        components.append(tuple(comps))
        z_pieces = [Piece(c.lo, c.hi) for c in comps if not isinstance(c, SplitMap)]
        for item in items:
            z_pieces.append(Piece(item.lo, item.hi) if isinstance(item, GridRun) else Piece(item, item))
        z_blocks.append(z_pieces)
    Z = closure(P, ClosedSubset.build(Y.thetas, z_blocks))
    rho = CollapseMap(P, Y, Z, delta, skeleton, tuple(components))
    logger.debug(f"discretize: m={skeleton.m}, Z={Z}")
    return Z, rho


def verify_collapse(rho: CollapseMap) -> ValidationReport:
    """
    Audit a collapse map.

    Features:
    - rho maps Y into Z and onto Z (exact interval images and PL inversion)
    - rho is non-decreasing on every piece
    - dist(rho(y), y) < delta at every breakpoint
    - Z is closed with no double-sided index sets
    """
    report = ValidationReport()
    P, Z = rho.P, rho.Z
    if not is_closed(P, Z):
        report.add('z_closed', (), f"Z={Z} is not closed")
        return report
    sets = index_sets(P, Z)
    if sets.Lll or sets.Lrr:
        report.add('index_sets', (), "Z has double-sided index sets")
    if not Z.thetas == rho.Y.thetas:
        report.add('thetas', (), "Z and Y carry different thetas")

    for i in range(P.l):
        maps = rho.block_maps(i)
        images = []
        for piece, f in maps:
            if not f.is_nondecreasing():
                report.add('monotone', (i,), f"rho decreases on [{piece.lo}, {piece.hi}]")
            for x, y in f.points:
                if abs(y - x) >= rho.delta:
                    report.add('distance', (i,), f"|rho({x}) - {x}| = {abs(y - x)} >= {rho.delta}")
            lo, hi = f.image()
            if not any(q.lo <= lo and hi <= q.hi for q in Z.pieces[i]):
                report.add('into_z', (i,), f"rho image [{lo}, {hi}] leaves Z")
            images.append(f)

        covered = interval_union_range(images)
        for q in Z.pieces[i]:
            if not any(a <= q.lo and q.hi <= b for a, b in covered):
                report.add('surjective', (i,), f"Z piece [{q.lo}, {q.hi}] is not covered by rho")
            for z in (q.lo, q.hi):
                if not any(f.first_preimage(z) is not None for f in images):
                    report.add('surjective', (i,), f"Z point {z} has no preimage")
    return report


def collapse_defect(rho: CollapseMap, g: ProfileElement) -> Fraction:
    """sup over y in Y of the sorted-eigenvalue distance between g(rho(y)) and g(y)."""
    worst = Fraction(0)
    for i in range(rho.P.l):
        for piece, f in rho.block_maps(i):
            if piece.is_point:
                xs = [piece.lo]
            else:
                moved = [b.compose(f) for b in g.branches[i]]
                fixed = [b.restrict(piece.lo, piece.hi) for b in g.branches[i]]
                xs = sorted(set(crossing_points(moved, piece.lo, piece.hi))
                            | set(crossing_points(fixed, piece.lo, piece.hi)))
                xs += [(a + b) / 2 for a, b in zip(xs, xs[1:])]
            for x in xs:
                here = g.eig_at(Interior(i, x))
                there = g.eig_at(Interior(i, f(x)))
                worst = max(worst, here.distance(there))
    return worst


def collapse_pattern(rho: CollapseMap) -> PatternHom:
    """
    The pullback rho*: P|_Z -> P|_Y as a pattern, f -> f o rho.

    Source and target are both P; tracks take values in Z, the domain is Y.
    """
    P = rho.P
    vertex = {j: FiniteSpectrum(tuple(int(jj == j) for jj in range(P.p))) for j in rho.Y.thetas}
    segments = []
    for i in range(P.l):
        segments.append(tuple(
            Segment(piece.lo, piece.hi, (IntervalTrack(i, f),)) for piece, f in rho.block_maps(i)
        ))
    return PatternHom(P, P, rho.Y, vertex, tuple(segments), name="rho*")


def collapse_summary(rho: CollapseMap, i: Optional[int] = None) -> Dict[str, int]:
    blocks = range(rho.P.l) if i is None else [i]
    counts = {'identity': 0, 'edge': 0, 'split': 0}
    for b in blocks:
        for comp in rho.components[b]:
            key = 'identity' if isinstance(comp, FullSpan) else 'edge' if isinstance(comp, EdgeMap) else 'split'
            counts[key] += 1
    return counts
