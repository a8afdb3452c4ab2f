"""
Spectral homotopies between two finite spectra.

The homotopy runs on [0,1] in three parts. On [0, 1/3] every interior point
x of the first spectrum makes an excursion over the ball of radius 4 eta1
around x and settles at its partner (or, if it sits unpaired in a collar,
at the nearer end of its interval). On [1/3, 2/3] the spectrum is constant.
On [2/3, 1] the second spectrum's points do the same in reverse.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from ..algebra.presentation import Presentation, ValidationReport
from ..errors import PreconditionError
from ..patterns.homs import IntervalTrack, Segment, ThetaTrack
from ..patterns.pairing import PairingResult
from ..patterns.spectra import FiniteSpectrum, boundary_rewrite
from ..spectrum.piecewise import PLMap, interval_union_range
from ..spectrum.points import Interior, Number, SpectrumPoint, as_fraction
from .constants import ConstantBundle

logger = logging.getLogger(__name__)

LEFT_END = Fraction(1, 3)
RIGHT_START = Fraction(2, 3)


@dataclass(frozen=True)
class SpectralPath:
    """One moving eigenvalue: starts at `start`, sweeps `window`, ends at `target`."""

    i: int
    start: Fraction
    target: Fraction
    window: Tuple[Fraction, Fraction]
    track: PLMap

    @property
    def swept(self) -> bool:
        """True when the point is pushed into a vertex."""
        return self.target == 0 or self.target == 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'block': self.i,
            'start': self.start,
            'target': self.target,
            'window': list(self.window),
            'track': [[x, y] for x, y in self.track.points],
        }


def ball(x: Fraction, radius: Fraction) -> Tuple[Fraction, Fraction]:
    """Closed ball around x clipped to [0,1]."""
    return max(Fraction(0), x - radius), min(Fraction(1), x + radius)


def excursion(x: Fraction, target: Fraction, radius: Fraction) -> PLMap:
    """
    PL track on [0, 1/3] from x over the whole clipped ball to target.

    Goes first to the window edge away from the target, then to the far edge,
    then back to the target.
    """
    lo, hi = ball(x, radius)
    near, far = (lo, hi) if target >= x else (hi, lo)
    step = LEFT_END / 4
    return PLMap([(0, x), (step, near), (2 * step, far), (LEFT_END, target)])


def mirrored(track: PLMap) -> PLMap:
    """The track run backwards on [2/3, 1]."""
    return PLMap((1 - t, y) for t, y in track.points)


@dataclass
class PathFamily:
    """
    A homotopy of spectra from phi (time 0) to psi (time 1).

    left holds the paths of phi on [0, 1/3], right those of psi on [2/3, 1],
    and middle the common spectrum on [1/3, 2/3].
    """

    P: Presentation
    phi: FiniteSpectrum
    psi: FiniteSpectrum
    left: Tuple[SpectralPath, ...]
    middle: FiniteSpectrum
    right: Tuple[SpectralPath, ...]
    radius: Fraction

    def spectrum_at(self, t: Number) -> FiniteSpectrum:
        t = as_fraction(t)
        if t < 0 or t > 1:
            raise ValueError(f"time {t} outside [0,1]")
        if t <= LEFT_END:
            base, paths = self.phi, self.left
        elif t >= RIGHT_START:
            base, paths = self.psi, self.right
        else:
            return self.middle
        interior = tuple(Interior(p.i, p.track(t)) for p in paths)
        return boundary_rewrite(self.P, FiniteSpectrum(base.theta_mult, interior, base.zero_pad))

    def tracks(self, i: int) -> List[PLMap]:
        """Every position map in block i, the constant middle points included."""
        maps = [p.track for p in self.left + self.right if p.i == i]
        maps += [PLMap.constant(LEFT_END, RIGHT_START, y) for y in self.middle.coordinates(i)]
        return maps

    def as_segments(self, lo: Number, hi: Number) -> List[Segment]:
        """
        The homotopy as pattern segments over [lo, hi], time running with the
        coordinate: thirds of [lo, hi] carry the three parts.
        """
        lo, hi = as_fraction(lo), as_fraction(hi)
        a = lo + (hi - lo) / 3
        b = lo + 2 * (hi - lo) / 3

        def theta_tracks(spec: FiniteSpectrum) -> List[ThetaTrack]:
            return [ThetaTrack(j) for j, mult in enumerate(spec.theta_mult) for _ in range(mult)]

        first = theta_tracks(self.phi) + [IntervalTrack(p.i, p.track.reparametrize(lo, a)) for p in self.left]
        middle = theta_tracks(self.middle) + [
            IntervalTrack(y.i, PLMap.constant(a, b, y.t)) for y in self.middle.interior
        ]
        last = theta_tracks(self.psi) + [IntervalTrack(p.i, p.track.reparametrize(b, hi)) for p in self.right]
        return [
            Segment(lo, a, tuple(first), self.phi.zero_pad),
            Segment(a, b, tuple(middle), self.middle.zero_pad),
            Segment(b, hi, tuple(last), self.psi.zero_pad),
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'phi': self.phi.to_dict(),
            'psi': self.psi.to_dict(),
            'radius': self.radius,
            'left': [p.to_dict() for p in self.left],
            'middle': self.middle.to_dict(),
            'right': [p.to_dict() for p in self.right],
        }


def _check_pairing(S: FiniteSpectrum, i: int, matched: Sequence[Fraction],
                   unmatched: Sequence[Fraction], eta1: Fraction, side: str) -> None:
    if sorted(list(matched) + list(unmatched)) != S.coordinates(i):
        raise PreconditionError(f"pairing does not cover the {side} spectrum in block {i}")
    for x in unmatched:
        if eta1 <= x <= 1 - eta1:
            raise PreconditionError(f"{side} point ({x},{i}) lies outside the collars but has no partner",
                                    block=i, point=x)


def spectral_paths(P: Presentation, S_phi: FiniteSpectrum, S_psi: FiniteSpectrum,
                   pairing: PairingResult, bundle: ConstantBundle) -> PathFamily:
    """
    Build the homotopy from S_phi to S_psi along a pairing at scale eta1.

    Args:
        P: Presentation of the source algebra
        S_phi: Canonical spectrum at time 0
        S_psi: Canonical spectrum at time 1
        pairing: Pairing of the interior points of the two spectra
        bundle: Constants; the excursion radius is 4 eta1

    Returns:
        PathFamily

    Raises:
        PreconditionError: if the pairing misses a non-collar point, moves a
            point by more than 2 eta1, or the swept spectra disagree
    """
    radius = bundle.window
    left: List[SpectralPath] = []
    right: List[SpectralPath] = []
    for i in range(P.l):
        blk = pairing.block(i)
        _check_pairing(S_phi, i, blk.matched_x, blk.unmatched_x, bundle.eta1, 'first')
        _check_pairing(S_psi, i, blk.matched_y, blk.unmatched_y, bundle.eta1, 'second')
        for x, y in zip(blk.matched_x, blk.matched_y):
            if abs(x - y) > 2 * bundle.eta1:
                raise PreconditionError(f"pair ({x}, {y}) in block {i} is more than 2 eta1 apart", block=i)
            left.append(SpectralPath(i, x, y, ball(x, radius), excursion(x, y, radius)))
            right.append(SpectralPath(i, y, y, ball(y, radius), mirrored(excursion(y, y, radius))))
        for x in blk.unmatched_x:
            end = Fraction(0) if x < Fraction(1, 2) else Fraction(1)
            left.append(SpectralPath(i, x, end, ball(x, radius), excursion(x, end, radius)))
        for y in blk.unmatched_y:
            end = Fraction(0) if y < Fraction(1, 2) else Fraction(1)
            right.append(SpectralPath(i, y, end, ball(y, radius), mirrored(excursion(y, end, radius))))

    family = PathFamily(P, S_phi, S_psi, tuple(left), FiniteSpectrum.empty(P), tuple(right), radius)
    swept_phi = family.spectrum_at(LEFT_END)
    swept_psi = family.spectrum_at(RIGHT_START)
    if swept_phi != swept_psi:
        raise PreconditionError(f"spectra after sweeping differ: {swept_phi} vs {swept_psi}")
    family.middle = swept_phi
    logger.debug(f"spectral_paths: {len(left)} + {len(right)} tracks, radius {radius}")
    return family


def coverage_check(family: PathFamily, y: SpectrumPoint, bundle: ConstantBundle) -> bool:
    """
    Whether the 4 eta1 ball around y lies inside the union over t of the spectra.

    Raises:
        PreconditionError: if y is not an interior point of either end spectrum
    """
    if not isinstance(y, Interior) or (y not in family.phi.interior and y not in family.psi.interior):
        raise PreconditionError(f"{y} is not an interior point of either spectrum")
    lo, hi = ball(y.t, bundle.window)
    covered = interval_union_range(family.tracks(y.i))
    return any(a <= lo and hi <= b for a, b in covered)


def audit_paths(family: PathFamily, bundle: ConstantBundle) -> ValidationReport:
    """
    Exact audit of a homotopy.

    Features:
    - End spectra reproduce phi and psi
    - Each track sweeps exactly its clipped ball
    - The spectrum is continuous at 1/3 and 2/3
    - Every interior point of either end spectrum is covered
    """
    report = ValidationReport()
    P = family.P
    if family.spectrum_at(0) != boundary_rewrite(P, family.phi):
        report.add('endpoint', (0,), "time 0 does not reproduce the first spectrum")
    if family.spectrum_at(1) != boundary_rewrite(P, family.psi):
        report.add('endpoint', (1,), "time 1 does not reproduce the second spectrum")
    for path in family.left + family.right:
        if path.track.image() != path.window:
            report.add('window', (path.i,), f"track from {path.start} sweeps {path.track.image()}, "
                                            f"expected {path.window}")
    if family.spectrum_at(LEFT_END) != family.middle:
        report.add('continuity', (), "spectrum jumps at 1/3")
    if family.spectrum_at(RIGHT_START) != family.middle:
        report.add('continuity', (), "spectrum jumps at 2/3")
    for y in sorted(set(family.phi.interior) | set(family.psi.interior)):
        if not coverage_check(family, y, bundle):
            report.add('coverage', (y.i,), f"ball around {y} is not swept")
    return report
