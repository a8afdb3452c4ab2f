"""
Homomorphisms between presentations recorded as eigenvalue patterns.

A PatternHom phi: A -> B|_Y stores, for every point z of Y in Sp(B), the
spectrum of phi followed by evaluation at z: a FiniteSpectrum at each theta
of Y, and on every interval piece of Y a tiling by segments, each carrying
tracks (PL maps into interval blocks of Sp(A), or constant thetas) plus a
constant zero summand.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from ..algebra.presentation import Presentation, ValidationReport, validate_presentation
from ..errors import DomainError
from ..spectrum.closed_sets import ClosedSubset, full_spectrum, is_closed
from ..spectrum.elements import EigList
from ..spectrum.piecewise import PLMap
from ..spectrum.points import Interior, Number, SpectrumPoint, Theta, as_fraction
from ..testfns.functions import Element, as_profile
from .spectra import FiniteSpectrum, boundary_rewrite, gluing_expansion, spectrum_eigs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThetaTrack:
    """A constant eigenvalue pattern at theta_j of the source."""

    j: int

    def sort_key(self) -> tuple:
        return (0, self.j)


@dataclass(frozen=True)
class IntervalTrack:
    """A PL path t -> (f(t), i) in interval block i of the source."""

    i: int
    f: PLMap

    def sort_key(self) -> tuple:
        return (1, self.i, self.f.points[0][1], self.f.points[-1][1], self.f.points)


Track = Union[ThetaTrack, IntervalTrack]


def sort_tracks(tracks) -> Tuple[Track, ...]:
    return tuple(sorted(tracks, key=lambda tr: tr.sort_key()))


@dataclass(frozen=True)
class Segment:
    """Tracks valid on [lo, hi] of one block of the target; lo == hi for an isolated point."""

    lo: Fraction
    hi: Fraction
    tracks: Tuple[Track, ...]
    pad: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'lo', as_fraction(self.lo))
        object.__setattr__(self, 'hi', as_fraction(self.hi))
        object.__setattr__(self, 'tracks', sort_tracks(self.tracks))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, t: Fraction) -> bool:
        return self.lo <= t <= self.hi

    def spectrum_at(self, P: Presentation, t: Number) -> FiniteSpectrum:
        """Spectrum at coordinate t, with endpoint values rewritten into thetas."""
        t = as_fraction(t)
        mult = [0] * P.p
        points: List[Interior] = []
        for tr in self.tracks:
            if isinstance(tr, ThetaTrack):
                mult[tr.j] += 1
            else:
                points.append(Interior(tr.i, tr.f(t)))
        return boundary_rewrite(P, FiniteSpectrum(tuple(mult), tuple(points), self.pad))

    def size(self, P: Presentation) -> int:
        total = self.pad
        for tr in self.tracks:
            total += P.k[tr.j] if isinstance(tr, ThetaTrack) else P.dims[tr.i]
        return total

    def restrict(self, a: Number, b: Number) -> 'Segment':
        a, b = as_fraction(a), as_fraction(b)
        tracks = [tr if isinstance(tr, ThetaTrack) else IntervalTrack(tr.i, tr.f.restrict(a, b))
                  for tr in self.tracks]
        return Segment(a, b, tuple(tracks), self.pad)

    def breakpoints(self) -> List[Fraction]:
        xs = {self.lo, self.hi}
        for tr in self.tracks:
            if isinstance(tr, IntervalTrack):
                xs.update(tr.f.breakpoints)
        return sorted(xs)


@dataclass(frozen=True)
class PatternHom:
    """
    phi: source -> target|_domain.

    vertex_spec maps each theta of the domain to its spectrum in Sp(source);
    segments[i] tiles the pieces of block i of the domain, in order.
    """

    source: Presentation
    target: Presentation
    domain: ClosedSubset
    vertex_spec: Dict[int, FiniteSpectrum]
    segments: Tuple[Tuple[Segment, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'segments', tuple(tuple(blk) for blk in self.segments))

    def segment_at(self, i: int, t: Fraction) -> Segment:
        for seg in self.segments[i]:
            if seg.contains(t):
                return seg
        raise DomainError(f"coordinate {t} of block {i} is outside the domain {self.domain}")

    def all_segments(self) -> List[Tuple[int, Segment]]:
        return [(i, seg) for i, blk in enumerate(self.segments) for seg in blk]

    def max_track_slope(self) -> Fraction:
        slopes = [tr.f.max_abs_slope() for _, seg in self.all_segments()
                  for tr in seg.tracks if isinstance(tr, IntervalTrack)]
        return max(slopes, default=Fraction(0))

    def is_global(self) -> bool:
        return self.domain == full_spectrum(self.target)


def eval_spectrum(phi: PatternHom, z: SpectrumPoint) -> FiniteSpectrum:
    """
    Spectrum of phi followed by evaluation at z.

    Raises:
        DomainError: if z is not in the domain of phi
    """
    if isinstance(z, Theta):
        if z.j not in phi.domain.thetas:
            raise DomainError(f"theta{z.j} is outside the domain {phi.domain}")
        return phi.vertex_spec[z.j]
    if z.t in (0, 1) and not any(seg.contains(z.t) for seg in phi.segments[z.i]):
        return endpoint_spectrum(phi, z.i, z.t)
    return phi.segment_at(z.i, z.t).spectrum_at(phi.source, z.t)


def endpoint_spectrum(phi: PatternHom, i: int, t: Fraction) -> FiniteSpectrum:
    """
    Spectrum at the end t of block i through the thetas glued there.

    Used where the domain holds those thetas but no interval piece reaching t.

    Raises:
        DomainError: if a glued theta is outside the domain
    """
    B = phi.target
    row = B.alpha[i] if t == 0 else B.beta[i]
    missing = [j for j, mult in enumerate(row) if mult and j not in phi.domain.thetas]
    if missing:
        raise DomainError(f"end {t} of block {i} is glued to theta{missing[0]}, outside the domain {phi.domain}")
    empty = FiniteSpectrum((0,) * phi.source.p)
    specs = [phi.vertex_spec.get(j, empty) for j in range(B.p)]
    weight = B.alpha_weight(i) if t == 0 else B.beta_weight(i)
    return gluing_expansion(phi.source, row, specs, B.dims[i] - weight)


def eval_element(phi: PatternHom, f: Element, z: SpectrumPoint) -> EigList:
    """Eigenvalue list of phi(f) at z; test functions go through their profile."""
    return spectrum_eigs(phi.source, as_profile(phi.source, f), eval_spectrum(phi, z))


def identity_pattern(P: Presentation) -> PatternHom:
    """The identity of A as a pattern on the full spectrum."""
    vertex = {j: FiniteSpectrum(tuple(int(jj == j) for jj in range(P.p))) for j in range(P.p)}
    segments = tuple((Segment(0, 1, (IntervalTrack(i, PLMap.identity()),)),) for i in range(P.l))
    return PatternHom(P, P, full_spectrum(P), vertex, segments, name="id")


def zero_pattern(source: Presentation, target: Presentation,
                 domain: Optional[ClosedSubset] = None) -> PatternHom:
    """The zero homomorphism: nothing but zero summands."""
    domain = domain or full_spectrum(target)
    vertex = {j: FiniteSpectrum((0,) * source.p, (), target.k[j]) for j in domain.thetas}
    segments = tuple(
        tuple(Segment(p.lo, p.hi, (), target.dims[i]) for p in domain.pieces[i])
        for i in range(target.l)
    )
    return PatternHom(source, target, domain, vertex, segments, name="zero")


def validate_pattern(phi: PatternHom) -> ValidationReport:
    """
    Check every structural invariant of a pattern.

    Features:
    - Presentations and domain closedness
    - Vertex spectra: one per domain theta, canonical, of size k'_j
    - Segments tile each domain piece; track domains match their segment
    - Track values stay inside [0,1]
    - Size identity on every segment
    - Continuity at segment junctions after boundary rewriting
    - Gluing compatibility at coordinates 0 and 1 of the target
    """
    report = ValidationReport()
    A, B = phi.source, phi.target
    report.extend(validate_presentation(A))
    report.extend(validate_presentation(B))
    if not report.ok:
        return report
    if phi.domain.l != B.l or len(phi.segments) != B.l:
        report.add('shape', (), f"pattern has {len(phi.segments)} blocks, target has {B.l}")
        return report
    if not is_closed(B, phi.domain):
        report.add('domain_closed', (), f"domain {phi.domain} is not closed")

    if set(phi.vertex_spec) != set(phi.domain.thetas):
        report.add('vertex_keys', (), "vertex spectra do not match the thetas of the domain")
    for j, spec in sorted(phi.vertex_spec.items()):
        if not 0 <= j < B.p:
            report.add('vertex_keys', (j,), f"theta{j} out of range")
            continue
        if len(spec.theta_mult) != A.p:
            report.add('vertex_shape', (j,), f"vertex spectrum of theta{j} has wrong shape")
            continue
        if not spec.is_canonical:
            report.add('vertex_canonical', (j,), f"vertex spectrum of theta{j} has endpoint coordinates")
        if spec.size(A) != B.k[j]:
            report.add('vertex_size', (j,), f"theta{j}: spectrum size {spec.size(A)} != k'={B.k[j]}")
    if not report.ok:
        return report

    vertex_list = [phi.vertex_spec.get(j, FiniteSpectrum.empty(A)) for j in range(B.p)]

    for i in range(B.l):
        segments = phi.segments[i]
        _check_tiling(report, i, phi.domain.pieces[i], segments)
        for seg in segments:
            _check_segment(report, A, B, i, seg)
        if not report.ok:
            continue

        for left, right in zip(segments, segments[1:]):
            if left.hi == right.lo and left.spectrum_at(A, left.hi) != right.spectrum_at(A, right.lo):
                report.add('continuity', (i,), f"block {i}: spectra disagree at junction {left.hi}")

        for seg in segments:
            if seg.lo == 0:
                expected = gluing_expansion(A, B.alpha[i], vertex_list, B.dims[i] - B.alpha_weight(i))
                if seg.spectrum_at(A, 0) != boundary_rewrite(A, expected):
                    report.add('vertex_alpha', (i,), f"block {i}: spectrum at 0 differs from the alpha gluing")
            if seg.hi == 1:
                expected = gluing_expansion(A, B.beta[i], vertex_list, B.dims[i] - B.beta_weight(i))
                if seg.spectrum_at(A, 1) != boundary_rewrite(A, expected):
                    report.add('vertex_beta', (i,), f"block {i}: spectrum at 1 differs from the beta gluing")
    return report


def _check_tiling(report: ValidationReport, i: int, pieces, segments) -> None:
    cursor = 0
    for piece in pieces:
        if piece.is_point:
            if cursor < len(segments) and segments[cursor].lo == piece.lo == segments[cursor].hi:
                cursor += 1
            else:
                report.add('tiling', (i,), f"block {i}: point {piece.lo} has no segment")
            continue
        position = piece.lo
        while cursor < len(segments) and segments[cursor].lo == position and position < piece.hi:
            if segments[cursor].hi <= position:
                break
            position = segments[cursor].hi
            cursor += 1
        if position != piece.hi:
            report.add('tiling', (i,), f"block {i}: segments do not tile [{piece.lo}, {piece.hi}]")
    if cursor != len(segments):
        report.add('tiling', (i,), f"block {i}: segments outside the domain")


def _check_segment(report: ValidationReport, A: Presentation, B: Presentation, i: int, seg: Segment) -> None:
    if seg.pad < 0:
        report.add('pad', (i,), f"block {i}: negative zero summand on [{seg.lo}, {seg.hi}]")
    for tr in seg.tracks:
        if isinstance(tr, ThetaTrack):
            if not 0 <= tr.j < A.p:
                report.add('track_range', (i,), f"theta track {tr.j} out of range")
            continue
        if not 0 <= tr.i < A.l:
            report.add('track_range', (i,), f"interval track into block {tr.i} out of range")
            continue
        if tr.f.lo != seg.lo or tr.f.hi != seg.hi:
            report.add('track_domain', (i,), f"track on [{tr.f.lo}, {tr.f.hi}] in segment [{seg.lo}, {seg.hi}]")
        lo, hi = tr.f.image()
        if lo < 0 or hi > 1:
            report.add('track_range', (i,), f"track values [{lo}, {hi}] leave [0,1]")
    if report.ok and seg.size(A) != B.dims[i]:
        report.add('size', (i,), f"block {i} on [{seg.lo}, {seg.hi}]: size {seg.size(A)} != {B.dims[i]}")
