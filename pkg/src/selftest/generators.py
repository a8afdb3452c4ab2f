"""Seeded random inputs for the property suites."""

from fractions import Fraction
from typing import List, Tuple

import numpy as np

from ..algebra.catalog import interval_algebra, loop_algebra
from ..algebra.presentation import Presentation
from ..patterns.homs import IntervalTrack, PatternHom, Segment, ThetaTrack
from ..patterns.spectra import FiniteSpectrum, boundary_rewrite
from ..rewriter.chain import ChainSpec
from ..spectrum.closed_sets import ClosedSubset, Piece, closure, full_spectrum, merge_pieces
from ..spectrum.elements import ProfileElement
from ..spectrum.piecewise import PLMap
from ..spectrum.points import Interior


def _int(rng: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi]."""
    return int(rng.integers(lo, hi + 1))


def random_presentation(rng: np.random.Generator, max_p: int = 4, max_l: int = 4,
                        max_entry: int = 3, max_k: int = 3) -> Presentation:
    """Non-unital presentation with dims just large enough for both gluing rows."""
    p, l = _int(rng, 1, max_p), _int(rng, 1, max_l)
    k = tuple(_int(rng, 1, max_k) for _ in range(p))
    alpha = [[_int(rng, 0, max_entry) for _ in range(p)] for _ in range(l)]
    beta = [[_int(rng, 0, max_entry) for _ in range(p)] for _ in range(l)]
    dims = []
    for i in range(l):
        weight = max(sum(a * kj for a, kj in zip(alpha[i], k)), sum(b * kj for b, kj in zip(beta[i], k)))
        dims.append(max(weight, 1) + _int(rng, 0, 1))
    return Presentation(k, tuple(dims), alpha, beta, unital=False)


def random_pieces(rng: np.random.Generator, denominator: int = 12, max_pieces: int = 3,
                  positive: bool = False) -> List[Piece]:
    """Random grid-aligned pieces of [0,1]; with positive=True at least one has positive length."""
    pieces = []
    for _ in range(_int(rng, 0, max_pieces)):
        a, b = sorted((_int(rng, 0, denominator), _int(rng, 0, denominator)))
        if rng.random() < 0.3:
            b = a
        pieces.append(Piece(Fraction(a, denominator), Fraction(b, denominator)))
    if positive and not any(not p.is_point for p in merge_pieces(pieces)):
        a = _int(rng, 0, denominator - 1)
        pieces.append(Piece(Fraction(a, denominator), Fraction(a + 1, denominator)))
    return pieces


def random_closed_set(rng: np.random.Generator, P: Presentation, denominator: int = 12) -> ClosedSubset:
    """The closure of random thetas and pieces; never empty."""
    thetas = [j for j in range(P.p) if rng.random() < 0.3]
    blocks = [random_pieces(rng, denominator) for _ in range(P.l)]
    S = closure(P, ClosedSubset.build(thetas, blocks))
    if S.is_empty():
        blocks[0] = [Piece(Fraction(1, 3), Fraction(2, 3))]
        S = closure(P, ClosedSubset.build(thetas, blocks))
    return S


def perturbed_spectra(rng: np.random.Generator, m: int, shift: int, margin: int,
                      count: int) -> Tuple[FiniteSpectrum, FiniteSpectrum]:
    """
    Two interior spectra on C[0,1] on the grid 1/(4m): points at least
    margin/(4m) from the ends, each partner moved by at most shift/(4m).
    """
    grid = 4 * m
    xs, ys = [], []
    for _ in range(count):
        x = _int(rng, margin, grid - margin)
        y = x + _int(rng, -shift, shift)
        if not 0 < y < grid:
            y = x
        xs.append(Interior(0, Fraction(x, grid)))
        ys.append(Interior(0, Fraction(y, grid)))
    return FiniteSpectrum((0, 0), tuple(xs)), FiniteSpectrum((0, 0), tuple(ys))


def interval_pullback(g: PLMap, name: str = "") -> PatternHom:
    """f -> f o g on C[0,1]; g must start at 0."""
    P = interval_algebra()
    if g(0) != 0:
        raise ValueError("pullback map must send 0 to 0")
    vertex = {
        0: boundary_rewrite(P, FiniteSpectrum((0, 0), (Interior(0, g(0)),))),
        1: boundary_rewrite(P, FiniteSpectrum((0, 0), (Interior(0, g(1)),))),
    }
    segments = ((Segment(0, 1, (IntervalTrack(0, g),)),),)
    return PatternHom(P, P, full_spectrum(P), vertex, segments, name=name)


def identity_element(P: Presentation) -> ProfileElement:
    return ProfileElement.scalar(P, [0, 1], [PLMap.identity()], name="id")


def half_interval_chain() -> ChainSpec:
    """C[0,1] -> C[0,1], f -> f(z/2), with eps = (1/2, 1/4)."""
    P = interval_algebra()
    phi = interval_pullback(PLMap([(0, 0), (1, Fraction(1, 2))]), name="half")
    return ChainSpec([P, P], [phi], [[identity_element(P)], [identity_element(P)]],
                     [Fraction(1, 2), Fraction(1, 4)])


def held_pullback(g: PLMap, name: str = "") -> PatternHom:
    """f -> f(0) on [0, g.lo], then f o g; g runs on [g.lo, 1] and starts at 0."""
    P = interval_algebra()
    if g(g.lo) != 0 or g.hi != 1 or not 0 < g.lo < 1:
        raise ValueError("held map must start at 0 inside (0,1) and end at 1")
    vertex = {
        0: boundary_rewrite(P, FiniteSpectrum((0, 0), (Interior(0, Fraction(0)),))),
        1: boundary_rewrite(P, FiniteSpectrum((0, 0), (Interior(0, g(1)),))),
    }
    segments = ((Segment(0, g.lo, (ThetaTrack(0),)), Segment(g.lo, 1, (IntervalTrack(0, g),))),)
    return PatternHom(P, P, full_spectrum(P), vertex, segments, name=name)


def loop_pullback(g1: PLMap, g2: PLMap, name: str = "") -> PatternHom:
    """C[0,1] -> loop algebra, f -> diag(f o g1, f o g2); each g_r ends where it starts."""
    A, B = interval_algebra(), loop_algebra()
    if g1(0) != g1(1) or g2(0) != g2(1):
        raise ValueError("loop tracks must return to their starting value")
    vertex = {
        0: boundary_rewrite(A, FiniteSpectrum((0, 0), (Interior(0, g1(0)),))),
        1: boundary_rewrite(A, FiniteSpectrum((0, 0), (Interior(0, g2(0)),))),
    }
    segments = ((Segment(0, 1, (IntervalTrack(0, g1), IntervalTrack(0, g2))),),)
    return PatternHom(A, B, full_spectrum(B), vertex, segments, name=name)


def loop_element() -> ProfileElement:
    """0 at theta0, 1 at theta1, and the two branches crossing over the loop block."""
    return ProfileElement(
        theta_eigs=((Fraction(0),), (Fraction(1),)),
        branches=((PLMap([(0, 0), (1, 1)]), PLMap([(0, 1), (1, 0)])),),
        name="cross",
    )


def _path(lo: Fraction, values: List[Fraction]) -> PLMap:
    """PL map on [lo, 1] through the given values at evenly spaced knots."""
    step = (1 - lo) / (len(values) - 1)
    return PLMap([(lo + q * step, v) for q, v in enumerate(values)])


def random_interval_chain(rng: np.random.Generator, stages: int = 3) -> ChainSpec:
    """
    C[0,1] stages joined by random pullbacks, sometimes closed by a loop stage.

    Each interval map is either f -> f o g along a PL map g with g(0) = 0,
    or holds f(0) on a theta track before following g. With probability
    1/2 the last stage is the loop algebra, reached along two tracks kept
    in [0, 3/8] and [5/8, 1], so the images of the earlier stages have gaps.
    """
    P = interval_algebra()
    loop = stages > 1 and rng.random() < 0.5
    maps = []
    for n in range(stages - 1 - int(loop)):
        knots = [Fraction(_int(rng, 0, 8), 8), Fraction(_int(rng, 2, 8), 8)]
        if rng.random() < 0.5:
            maps.append(interval_pullback(_path(Fraction(0), [Fraction(0)] + knots), name=f"g{n}"))
        else:
            hold = Fraction(_int(rng, 1, 3), 8)
            maps.append(held_pullback(_path(hold, [Fraction(0)] + knots), name=f"h{n}"))
    if loop:
        low = [Fraction(_int(rng, 0, 3), 8) for _ in range(2)]
        high = [Fraction(_int(rng, 5, 8), 8) for _ in range(2)]
        maps.append(loop_pullback(_path(Fraction(0), low + low[:1]),
                                  _path(Fraction(0), high + high[:1]), name="loop"))
    staged = [P] * (stages - int(loop)) + [loop_algebra()] * int(loop)
    dense = [[identity_element(A) if A == P else loop_element()] for A in staged]
    return ChainSpec(staged, maps, dense)
