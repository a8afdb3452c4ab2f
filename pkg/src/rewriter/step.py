"""
One injectivity-repair step.

Given an injective phi: A -> B|_Y, discretize Y into Z and build psi:
A -> B|_Z that agrees with phi after pulling back along the collapse
rho: Y -> Z, while B|_Z is again an algebra of class C and G is almost
inside it. psi is assembled per component of rho:

- identity stretches copy phi;
- edges through Y with gaps run phi over the rho-image of each part of Y;
  where the spectra on the two sides of a junction differ, a short window
  cut from the neighbouring parts carries a spectral homotopy between them;
- vertices carry phi at that vertex.

delta is searched downwards from the largest value the modulus bounds
allow, halving whenever an audit fails.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..algebra.presentation import Presentation
from ..config import load_settings
from ..discretization.collapse import (
    CollapseMap,
    EdgeMap,
    FullSpan,
    collapse_defect,
    collapse_pattern,
    collapse_summary,
    discretize,
)
from ..errors import DeltaSearchError, EtalgError, NotInjectiveError, ZeroMapError
from ..patterns.homs import IntervalTrack, PatternHom, Segment, ThetaTrack, eval_spectrum, validate_pattern
from ..patterns.operations import (
    InjectivityWitness,
    compose,
    is_injective,
    restrict_domain,
    spec_distance,
    support,
)
from ..patterns.pairing import pair_spectra
from ..patterns.spectra import FiniteSpectrum
from ..perturbation.constants import ConstantBundle, choose_constants
from ..perturbation.paths import spectral_paths
from ..restriction.restrict import RestrictionResult, restrict_algebra
from ..spectrum.closed_sets import ClosedSubset, Piece
from ..spectrum.elements import ProfileElement
from ..spectrum.points import Interior, Number, as_fraction

logger = logging.getLogger(__name__)


def element_name(f: ProfileElement, q: int, prefix: str = "f") -> str:
    return f.name or f"{prefix}{q}"


def image_restrict(phi: PatternHom) -> Tuple[ClosedSubset, PatternHom]:
    """
    Cut phi down to its support in the target.

    Raises:
        ZeroMapError: if phi is identically zero
    """
    Y = support(phi)
    if Y.is_empty():
        raise ZeroMapError(f"pattern {phi.name or '?'} is identically zero")
    return Y, restrict_domain(phi, Y)


@dataclass
class StepReport:
    """What one repair step chose and measured."""

    delta: Fraction
    initial_delta: Fraction
    binding: str
    halvings: int
    bundle: ConstantBundle
    injectivity: InjectivityWitness
    commutation: Dict[str, Fraction]
    approximation: Dict[str, Fraction]
    eps: Fraction
    g_eps: Fraction
    components: Dict[str, int]
    bridges: int
    failures: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'delta': self.delta,
            'initial_delta': self.initial_delta,
            'binding_constraint': self.binding,
            'halvings': self.halvings,
            'constants': self.bundle.to_dict(),
            'injectivity': self.injectivity.to_dict(),
            'commutation': {'bound': self.eps, 'entries': self.commutation},
            'approximation': {'bound': self.g_eps, 'entries': self.approximation},
            'components': self.components,
            'bridges': self.bridges,
            'failures': self.failures,
        }


@dataclass
class StepResult:
    Z: ClosedSubset
    rho: CollapseMap
    restriction: RestrictionResult
    psi: PatternHom
    report: StepReport


def initial_delta(phi: PatternHom, G: Sequence[ProfileElement],
                  bundle: ConstantBundle, g_eps: Fraction) -> Tuple[Fraction, str]:
    """
    Largest delta the modulus bounds allow, and which bound binds.

    phi moves at most `slope` per unit, so delta <= eta1/slope keeps test
    functions of H(eta1) within 1 and delta <= eps' eta/(8 slope) keeps H(eta)
    within eps'/8; delta <= g_eps/slope(G) keeps G within g_eps.
    """
    candidates = {'unit': Fraction(1)}
    slope = phi.max_track_slope()
    if slope > 0:
        candidates['h_eta1'] = bundle.eta1 / slope
        candidates['h_eta'] = bundle.eps_prime * bundle.eta / (8 * slope)
    g_slope = max((g.max_slope() for g in G), default=Fraction(0))
    if g_slope > 0:
        candidates['g_modulus'] = g_eps / g_slope
    binding = min(candidates, key=lambda name: (candidates[name], name))
    return candidates[binding], binding


def _transport(phi: PatternHom, i: int, part: Piece, u: Fraction, v: Fraction) -> List[Segment]:
    """phi on the part [a, b] of Y, run over [u, v] instead."""
    scale = (v - u) / part.length
    out = []
    for seg in phi.segments[i]:
        a, b = max(seg.lo, part.lo), min(seg.hi, part.hi)
        if a >= b:
            continue
        lo, hi = u + (a - part.lo) * scale, u + (b - part.lo) * scale
        tracks = [tr if isinstance(tr, ThetaTrack) else IntervalTrack(tr.i, tr.f.restrict(a, b).reparametrize(lo, hi))
                  for tr in seg.tracks]
        out.append(Segment(lo, hi, tuple(tracks), seg.pad))
    return out


def _bridge_chain(P: Presentation, chain: Sequence[FiniteSpectrum], u: Fraction, v: Fraction,
                  bundle: ConstantBundle) -> List[Segment]:
    """Spectral homotopies through consecutive spectra of `chain`, in equal slices of [u, v]."""
    width = (v - u) / (len(chain) - 1)
    out: List[Segment] = []
    for q, (left, right) in enumerate(zip(chain, chain[1:])):
        pairing = pair_spectra(P, left, right, None, bundle.m1)
        family = spectral_paths(P, left, right, pairing, bundle)
        out.extend(family.as_segments(u + q * width, u + (q + 1) * width))
    return out


def _junction_chains(phi: PatternHom, i: int, comp: EdgeMap) -> List[List[FiniteSpectrum]]:
    """
    Spectra met at each junction of an edge, repeats dropped.

    Junction q sits just before the q-th part of positive length; the last
    junction follows the final one. Isolated points of Y join the junction
    they collapse onto.
    """
    runs: List[List[FiniteSpectrum]] = [[]]
    for part in comp.parts:
        runs[-1].append(eval_spectrum(phi, Interior(i, part.lo)))
        if not part.is_point:
            runs.append([eval_spectrum(phi, Interior(i, part.hi))])
    return [[s for q, s in enumerate(run) if q == 0 or s != run[q - 1]] for run in runs]


def _edge_segments(phi: PatternHom, i: int, comp: EdgeMap,
                   bundle: ConstantBundle) -> Tuple[List[Segment], int]:
    """
    psi over an edge, following rho: each part runs phi over its rho-image.

    Where the spectra change across a junction, the parts beside it give up
    a quarter of their image to a window carrying the homotopies.
    """
    rho = comp.rho()
    solid = [p for p in comp.parts if not p.is_point]
    chains = _junction_chains(phi, i, comp)
    moving = [len(chain) > 1 for chain in chains]
    out: List[Segment] = []
    bridges = 0
    cursor = comp.lo
    for q, part in enumerate(solid):
        x, y = rho(part.lo), rho(part.hi)
        quarter = (y - x) / 4
        start = x + quarter if moving[q] else x
        end = y - quarter if moving[q + 1] else y
        if moving[q]:
            out.extend(_bridge_chain(phi.source, chains[q], cursor, start, bundle))
            bridges += len(chains[q]) - 1
        out.extend(_transport(phi, i, part, start, end))
        cursor = end
    if moving[-1]:
        out.extend(_bridge_chain(phi.source, chains[-1], cursor, comp.hi, bundle))
        bridges += len(chains[-1]) - 1
    return out, bridges


def build_replacement(phi: PatternHom, Z: ClosedSubset, rho: CollapseMap,
                      bundle: ConstantBundle) -> Tuple[PatternHom, int]:
    """
    psi: A -> B|_Z from phi: A -> B|_Y and the collapse rho.

    Returns:
        (psi, number of spectral bridges used)
    """
    B = phi.target
    vertex = {j: phi.vertex_spec[j] for j in Z.thetas}
    segments = []
    bridges = 0
    for i in range(B.l):
        blk: List[Segment] = []
        for comp in rho.components[i]:
            if isinstance(comp, FullSpan):
                blk.extend(seg.restrict(max(seg.lo, comp.lo), min(seg.hi, comp.hi))
                           for seg in phi.segments[i] if max(seg.lo, comp.lo) < min(seg.hi, comp.hi))
            elif isinstance(comp, EdgeMap):
                segs, used = _edge_segments(phi, i, comp, bundle)
                blk.extend(segs)
                bridges += used
        for piece in Z.pieces[i]:
            if piece.is_point:
                blk.append(phi.segment_at(i, piece.lo).restrict(piece.lo, piece.lo))
        segments.append(tuple(sorted(blk, key=lambda s: (s.lo, s.hi))))
    name = f"{phi.name}~" if phi.name else "psi"
    return PatternHom(phi.source, B, Z, vertex, tuple(segments), name=name), bridges


def _attempt(phi: PatternHom, F: Sequence[ProfileElement], G: Sequence[ProfileElement],
             delta: Fraction, bundle: ConstantBundle, eps: Fraction, g_eps: Fraction):
    Z, rho = discretize(phi.target, phi.domain, delta)
    psi, bridges = build_replacement(phi, Z, rho, bundle)
    report = validate_pattern(psi)
    if not report.ok:
        return None, f"validation: {report.violations[0].message}"
    witness = is_injective(psi)
    if not witness:
        return None, "injectivity"
    pulled = compose(psi, collapse_pattern(rho))
    commutation = {element_name(f, q): spec_distance(phi, pulled, f) for q, f in enumerate(F)}
    worst = [name for name, d in commutation.items() if d >= eps]
    if worst:
        return None, f"commutation: {worst[0]}"
    approximation = {element_name(g, q, "g"): collapse_defect(rho, g) for q, g in enumerate(G)}
    worst = [name for name, d in approximation.items() if d >= g_eps]
    if worst:
        return None, f"approximation: {worst[0]}"
    return (Z, rho, psi, bridges, witness, commutation, approximation), ""


def injective_step(phi: PatternHom, F: Sequence[ProfileElement], G: Sequence[ProfileElement],
                   eps: Number, g_eps: Optional[Number] = None,
                   max_halvings: Optional[int] = None) -> StepResult:
    """
    Replace an injective phi: A -> B|_Y by psi: A -> B|_Z with B|_Z of class C.

    Args:
        phi: Pattern whose spectral image is all of Sp(A)
        F: Elements of A on which psi must follow phi within eps
        G: Elements of B that must lie within g_eps of B|_Z
        eps: Commutation tolerance
        g_eps: Approximation tolerance (defaults to eps)
        max_halvings: Cap on delta halvings (defaults to the configured 20)

    Returns:
        StepResult with Z, rho, the restriction of B to Z, psi and the report

    Raises:
        NotInjectiveError: if phi is not injective
        DeltaSearchError: if no delta passes the audits, naming the last failure
    """
    eps = as_fraction(eps)
    g_eps = eps if g_eps is None else as_fraction(g_eps)
    max_halvings = load_settings().delta_halvings if max_halvings is None else max_halvings
    A, B = phi.source, phi.target

    witness = is_injective(phi)
    if not witness:
        raise NotInjectiveError(f"pattern {phi.name or '?'} is not injective", witness=witness.to_dict())

    bundle = choose_constants(A, max(B.max_fiber(), 1), eps, list(F) or [ProfileElement.zero(A)])
    delta, binding = initial_delta(phi, G, bundle, g_eps)
    start = delta
    failures: List[str] = []
    for halvings in range(max_halvings + 1):
        try:
            outcome, reason = _attempt(phi, F, G, delta, bundle, eps, g_eps)
        except EtalgError as exc:
            outcome, reason = None, f"{type(exc).__name__}: {exc.message}"
        if outcome is not None:
            Z, rho, psi, bridges, psi_witness, commutation, approximation = outcome
            restriction = restrict_algebra(B, Z)
            report = StepReport(delta, start, binding, halvings, bundle, psi_witness, commutation,
                                approximation, eps, g_eps, collapse_summary(rho), bridges, failures)
            logger.info(f"injective_step: delta={delta} after {halvings} halvings, "
                        f"Z={Z}, {bridges} bridges")
            return StepResult(Z, rho, restriction, psi, report)
        logger.debug(f"injective_step: delta={delta} rejected ({reason})")
        failures.append(f"delta={delta}: {reason}")
        delta /= 2
    raise DeltaSearchError(f"no delta passed after {max_halvings} halvings; last failure {failures[-1]}",
                           binding=binding, failures=failures)
