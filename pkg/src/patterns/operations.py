"""
Operations on patterns: composition, spectral image, injectivity, distance,
pushing elements forward, and domain restriction.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..errors import DomainError, SizeMismatchError
from ..spectrum.closed_sets import (
    ClosedSubset,
    Piece,
    closure,
    complement_gaps,
    is_subset,
)
from ..spectrum.elements import ProfileElement
from ..spectrum.piecewise import PLMap, crossing_points
from ..spectrum.points import Interior, Theta
from .homs import (
    IntervalTrack,
    PatternHom,
    Segment,
    ThetaTrack,
    endpoint_spectrum,
    eval_element,
    eval_spectrum,
)
from .spectra import FiniteSpectrum

logger = logging.getLogger(__name__)


# composition

def _pull_spectrum(phi: PatternHom, spec: FiniteSpectrum) -> FiniteSpectrum:
    total = FiniteSpectrum((0,) * phi.source.p, (), spec.zero_pad)
    for j, mult in enumerate(spec.theta_mult):
        if mult:
            total = total + eval_spectrum(phi, Theta(j)).scaled(mult)
    for y in spec.interior:
        total = total + eval_spectrum(phi, y)
    return total


def _covering_segment(phi: PatternHom, i: int, g: PLMap) -> Optional[Segment]:
    """Segment of phi holding all values of g; None for a constant block end outside every segment."""
    lo, hi = g.image()
    for seg in phi.segments[i]:
        if seg.lo <= lo and hi <= seg.hi:
            return seg
    if lo == hi and lo in (0, 1):
        return None
    raise DomainError(f"track values [{lo}, {hi}] in block {i} leave the domain {phi.domain}")


def _vertex_tracks(spec: FiniteSpectrum, u: Fraction, v: Fraction) -> List:
    tracks: List = []
    for j, mult in enumerate(spec.theta_mult):
        tracks.extend([ThetaTrack(j)] * mult)
    for y in spec.interior:
        tracks.append(IntervalTrack(y.i, PLMap.constant(u, v, y.t)))
    return tracks


def _compose_segment(phi: PatternHom, seg: Segment) -> List[Segment]:
    cuts = {seg.lo, seg.hi}
    for tr in seg.tracks:
        if isinstance(tr, IntervalTrack):
            for phi_seg in phi.segments[tr.i]:
                for boundary in (phi_seg.lo, phi_seg.hi):
                    cuts.update(tr.f.preimages(boundary))
    grid = sorted(cuts)
    spans = [(seg.lo, seg.hi)] if seg.is_point else list(zip(grid, grid[1:]))

    out = []
    for u, v in spans:
        tracks: List = []
        pad = seg.pad
        for tr in seg.tracks:
            if isinstance(tr, ThetaTrack):
                spec = eval_spectrum(phi, Theta(tr.j))
                tracks.extend(_vertex_tracks(spec, u, v))
                pad += spec.zero_pad
                continue
            g = tr.f.restrict(u, v)
            inner = _covering_segment(phi, tr.i, g)
            if inner is None:
                spec = endpoint_spectrum(phi, tr.i, g.image()[0])
                tracks.extend(_vertex_tracks(spec, u, v))
                pad += spec.zero_pad
                continue
            for ptr in inner.tracks:
                if isinstance(ptr, ThetaTrack):
                    tracks.append(ptr)
                else:
                    tracks.append(IntervalTrack(ptr.i, ptr.f.compose(g)))
            pad += inner.pad
        out.append(Segment(u, v, tuple(tracks), pad))
    return out


def compose(phi: PatternHom, psi: PatternHom) -> PatternHom:
    """
    psi after phi, for phi: A -> B|_Y and psi: B -> C|_W.

    Every track of psi must stay inside Y; psi's theta tracks pull in the
    vertex spectra of phi.

    Raises:
        DomainError: if psi reaches outside the domain of phi, or the
            presentations do not chain
    """
    if psi.source != phi.target:
        raise DomainError("patterns do not chain: source of the second is not the target of the first")
    vertex = {j: _pull_spectrum(phi, spec) for j, spec in psi.vertex_spec.items()}
    segments = []
    for i in range(psi.target.l):
        blk: List[Segment] = []
        for seg in psi.segments[i]:
            blk.extend(_compose_segment(phi, seg))
        segments.append(tuple(blk))
    name = f"{psi.name}.{phi.name}" if phi.name and psi.name else ""
    return PatternHom(phi.source, psi.target, psi.domain, vertex, tuple(segments), name=name)


def compose_all(maps: List[PatternHom]) -> PatternHom:
    """maps[-1] after ... after maps[0]."""
    total = maps[0]
    for nxt in maps[1:]:
        total = compose(total, nxt)
    return total


# image and injectivity

def sp_image(phi: PatternHom) -> ClosedSubset:
    """Closure of the union of all spectra of phi, inside Sp(source)."""
    A = phi.source
    thetas = set()
    blocks: List[List[Piece]] = [[] for _ in range(A.l)]
    for spec in phi.vertex_spec.values():
        thetas.update(j for j, t in enumerate(spec.theta_mult) if t)
        for y in spec.interior:
            blocks[y.i].append(Piece(y.t, y.t))
    for _, seg in phi.all_segments():
        for tr in seg.tracks:
            if isinstance(tr, ThetaTrack):
                thetas.add(tr.j)
            else:
                blocks[tr.i].append(Piece(*tr.f.image()))
    return closure(A, ClosedSubset.build(thetas, blocks))


@dataclass(frozen=True)
class InjectivityWitness:
    """missing_thetas and gaps describe the part of Sp(source) the image misses."""

    injective: bool
    missing_thetas: Tuple[int, ...] = ()
    gaps: Tuple[Tuple[int, Fraction, Fraction, bool, bool], ...] = ()
    image: Optional[ClosedSubset] = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.injective

    def to_dict(self) -> Dict[str, Any]:
        return {
            'injective': self.injective,
            'missing_thetas': list(self.missing_thetas),
            'gaps': [
                {'block': i, 'lo': lo, 'hi': hi, 'lo_closed': lc, 'hi_closed': hc}
                for i, lo, hi, lc, hc in self.gaps
            ],
        }


def is_injective(phi: PatternHom) -> InjectivityWitness:
    """Injective exactly when the spectral image is all of Sp(source)."""
    A = phi.source
    image = sp_image(phi)
    missing = tuple(sorted(set(range(A.p)) - image.thetas))
    gaps = tuple((i,) + gap for i in range(A.l) for gap in complement_gaps(image, i))
    injective = not missing and not gaps
    return InjectivityWitness(injective, missing, gaps, image)


# distance

@dataclass
class SamplePlan:
    """Evaluation points per target block, plus the domain thetas."""

    thetas: List[int]
    points: Dict[int, List[Fraction]]

    def size(self) -> int:
        return len(self.thetas) + sum(len(v) for v in self.points.values())


def _value_maps(phi: PatternHom, f: ProfileElement, i: int, u: Fraction, v: Fraction) -> List[PLMap]:
    """Every eigenvalue branch of phi(f) on [u, v] inside one segment of block i."""
    seg = phi.segment_at(i, (u + v) / 2)
    maps = [PLMap.constant(u, v, 0)] * seg.pad
    for tr in seg.tracks:
        if isinstance(tr, ThetaTrack):
            maps.extend(PLMap.constant(u, v, value) for value in f.theta_eigs[tr.j])
        else:
            g = tr.f.restrict(u, v)
            maps.extend(branch.compose(g) for branch in f.branches[tr.i])
    return maps


def _piece_points(patterns: List[PatternHom], f: ProfileElement, i: int, piece: Piece) -> List[Fraction]:
    if piece.is_point:
        return [piece.lo]
    bounds = {piece.lo, piece.hi}
    for phi in patterns:
        for seg in phi.segments[i]:
            bounds.update(x for x in seg.breakpoints() if piece.lo <= x <= piece.hi)
    grid = sorted(bounds)
    out = set(grid)
    for u, v in zip(grid, grid[1:]):
        for phi in patterns:
            out.update(crossing_points(_value_maps(phi, f, i, u, v), u, v))
        out.add((u + v) / 2)
    return sorted(out)


def sample_plan(patterns: List[PatternHom], f: ProfileElement) -> SamplePlan:
    """
    Breakpoints of every track and branch, pairwise crossings of the branches
    of each pattern, and midpoints. Sorted eigenvalues are linear between
    consecutive plan points, so sup distances are attained on the plan.
    """
    domain = patterns[0].domain
    points = {
        i: sorted({x for piece in domain.pieces[i] for x in _piece_points(patterns, f, i, piece)})
        for i in range(len(domain.pieces))
    }
    return SamplePlan(sorted(domain.thetas), points)


def spec_distance(phi: PatternHom, psi: PatternHom, f: ProfileElement,
                  plan: Optional[SamplePlan] = None) -> Fraction:
    """
    Sup over the domain of the sorted-eigenvalue distance between phi(f) and psi(f).

    Raises:
        SizeMismatchError: if the patterns differ in target or domain
    """
    if phi.target != psi.target or phi.domain != psi.domain:
        raise SizeMismatchError("patterns have different targets or domains")
    plan = plan or sample_plan([phi, psi], f)
    worst = Fraction(0)
    for j in plan.thetas:
        worst = max(worst, eval_element(phi, f, Theta(j)).distance(eval_element(psi, f, Theta(j))))
    for i, xs in plan.points.items():
        for t in xs:
            z = Interior(i, t)
            worst = max(worst, eval_element(phi, f, z).distance(eval_element(psi, f, z)))
    return worst


# pushing elements forward

def push_element(phi: PatternHom, f: ProfileElement) -> ProfileElement:
    """
    The element phi(f) of the target, as a profile.

    Raises:
        DomainError: unless phi is defined on the whole target spectrum
    """
    if not phi.is_global():
        raise DomainError("push_element needs a pattern defined on the whole target spectrum")
    B = phi.target
    theta = tuple(eval_element(phi, f, Theta(j)).values for j in range(B.p))
    branches = []
    for i in range(B.l):
        xs = sorted({x for seg in phi.segments[i]
                     for x in _piece_points([phi], f, i, Piece(seg.lo, seg.hi))})
        columns = [eval_element(phi, f, Interior(i, t)).values for t in xs]
        branches.append(tuple(PLMap((t, col[r]) for t, col in zip(xs, columns))
                              for r in range(B.dims[i])))
    return ProfileElement(theta, tuple(branches), name=f"{phi.name}({f.name})" if f.name else "")


# domains and supports

def restrict_domain(phi: PatternHom, Y: ClosedSubset) -> PatternHom:
    """
    phi with its domain cut down to Y.

    Raises:
        DomainError: if Y is not inside the domain of phi
    """
    if not is_subset(Y, phi.domain):
        raise DomainError(f"{Y} is not inside the domain {phi.domain}")
    vertex = {j: phi.vertex_spec[j] for j in Y.thetas}
    segments = []
    for i, block in enumerate(Y.pieces):
        blk = []
        for piece in block:
            if piece.is_point:
                blk.append(phi.segment_at(i, piece.lo).restrict(piece.lo, piece.lo))
                continue
            for seg in phi.segments[i]:
                lo, hi = max(seg.lo, piece.lo), min(seg.hi, piece.hi)
                if lo < hi:
                    blk.append(seg.restrict(lo, hi))
        segments.append(tuple(blk))
    return PatternHom(phi.source, phi.target, Y, vertex, tuple(segments), name=phi.name)


def support(phi: PatternHom) -> ClosedSubset:
    """Closure of the points of the target where phi is not a pure zero summand."""
    thetas = {j for j, spec in phi.vertex_spec.items() if any(spec.theta_mult) or spec.interior}
    blocks: List[List[Piece]] = [[] for _ in range(phi.target.l)]
    for i, seg in phi.all_segments():
        if seg.tracks:
            blocks[i].append(Piece(seg.lo, seg.hi))
    return closure(phi.target, ClosedSubset.build(thetas, blocks))
