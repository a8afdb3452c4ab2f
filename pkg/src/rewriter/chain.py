"""
Rewriting a finite chain A_1 -> ... -> A_N into one with injective maps.

Every stage is first replaced by its image: A~_n is A_n restricted to the
spectral image X_n of the composite map into A_N, and the induced maps
A~_n -> A~_{n+1} are injective. B_1 is a discretized restriction of A~_1;
each further B_{k+1} comes from an injective_step applied to
B_k -> A~_k -> A~_{k+1}. The certificate records, per step, the exact
injectivity witness, the commutation table on F_k and the approximation
table for G_{k+1}.
"""

import logging
from contextlib import nullcontext
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

import structlog

from ..algebra.presentation import Presentation, ValidationReport
from ..discretization.collapse import collapse_defect, collapse_pattern, discretize
from ..errors import EtalgError, PreconditionError, StageError
from ..logging.correlation import CorrelationContext
from ..logging.progress import ProgressTracker
from ..patterns.homs import PatternHom, validate_pattern
from ..patterns.operations import (
    InjectivityWitness,
    compose,
    compose_all,
    is_injective,
    push_element,
    restrict_domain,
    sp_image,
    spec_distance,
)
from ..restriction.restrict import RestrictionResult, restrict_algebra
from ..spectrum.closed_sets import ClosedSubset, full_spectrum
from ..spectrum.elements import ProfileElement, validate_profile
from .step import StepReport, element_name, injective_step

logger = logging.getLogger(__name__)


@dataclass
class ChainSpec:
    """
    Stages, connecting maps, finite dense lists per stage and tolerances.

    eps_schedule defaults to 1/2, 1/4, ..., 1/2^N.
    """

    stages: List[Presentation]
    maps: List[PatternHom]
    dense_sets: List[List[ProfileElement]]
    eps_schedule: Optional[List[Fraction]] = None

    def __post_init__(self):
        if self.eps_schedule is None:
            self.eps_schedule = [Fraction(1, 2 ** (n + 1)) for n in range(len(self.stages))]

    @property
    def N(self) -> int:
        return len(self.stages)

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        if self.N < 2:
            report.add('length', (), f"a chain needs at least 2 stages, got {self.N}")
            return report
        if len(self.maps) != self.N - 1:
            report.add('maps', (), f"{self.N} stages need {self.N - 1} maps, got {len(self.maps)}")
        if len(self.dense_sets) != self.N:
            report.add('dense_sets', (), f"{self.N} stages need {self.N} dense lists, got {len(self.dense_sets)}")
        if len(self.eps_schedule) != self.N:
            report.add('eps_schedule', (), f"{self.N} stages need {self.N} tolerances")
        if not report.ok:
            return report
        for n, eps in enumerate(self.eps_schedule):
            if eps <= 0 or (n and eps >= self.eps_schedule[n - 1]):
                report.add('eps_schedule', (n,), "tolerances must be positive and decreasing")
        for n, phi in enumerate(self.maps):
            if phi.source != self.stages[n] or phi.target != self.stages[n + 1]:
                report.add('maps', (n,), f"map {n} does not go from stage {n} to stage {n + 1}")
                continue
            if not phi.is_global():
                report.add('maps', (n,), f"map {n} is not defined on the whole spectrum")
            report.extend(validate_pattern(phi))
        for n, elements in enumerate(self.dense_sets):
            for f in elements:
                report.extend(validate_profile(self.stages[n], f))
        return report


@dataclass
class StageReport:
    """Tables of one step B_k -> B_{k+1}."""

    stage: int
    witness: InjectivityWitness
    commutation: Dict[str, Fraction]
    approximation: Dict[str, Fraction]
    eps: Fraction
    g_eps: Fraction
    step: StepReport

    def to_dict(self) -> Dict[str, Any]:
        return {
            'stage': self.stage,
            'injectivity': self.witness.to_dict(),
            'commutation': {'bound': self.eps, 'entries': self.commutation},
            'approximation': {'bound': self.g_eps, 'entries': self.approximation},
            'step': self.step.to_dict(),
        }


@dataclass
class RewriteCertificate:
    """
    The rewritten chain B_1 -> ... -> B_N with embeddings B_k -> A~_k.

    images[n] is X_n inside Sp(A_n), image_stages[n] the restriction A~_n.
    """

    spec: ChainSpec
    images: List[ClosedSubset]
    image_stages: List[RestrictionResult]
    induced: List[PatternHom]
    new_stages: List[Presentation]
    maps: List[PatternHom]
    embeddings: List[PatternHom]
    seed_delta: Fraction
    seed_approximation: Dict[str, Fraction]
    reports: List[StageReport] = field(default_factory=list)

    def tables(self) -> Dict[str, Any]:
        return {
            'eps_schedule': list(self.spec.eps_schedule),
            'seed': {'delta': self.seed_delta, 'approximation': self.seed_approximation},
            'stages': [r.to_dict() for r in self.reports],
        }


def image_sets(spec: ChainSpec) -> List[ClosedSubset]:
    """X_n: spectral image of A_n in A_N, computed backwards from X_N = Sp(A_N)."""
    images = [full_spectrum(spec.stages[-1])]
    for phi in reversed(spec.maps):
        images.insert(0, sp_image(restrict_domain(phi, images[0])))
    return images


def induced_map(phi: PatternHom, here: RestrictionResult, there: RestrictionResult) -> PatternHom:
    """A~_n -> A~_{n+1}: lift through the section, apply phi, restrict by the quotient."""
    through = compose(phi, there.quotient)
    return compose(here.section, through)


def _transported(spec: ChainSpec, quotients: List[PatternHom], induced: List[PatternHom]) -> List[List[List[ProfileElement]]]:
    """moved[n][k]: dense elements of A_n pushed into A~_k, for k >= n."""
    moved = []
    for n, elements in enumerate(spec.dense_sets):
        row: List[List[ProfileElement]] = [[] for _ in range(spec.N)]
        row[n] = [push_element(quotients[n], f) for f in elements]
        for k in range(n, spec.N - 1):
            row[k + 1] = [push_element(induced[k], f) for f in row[k]]
        moved.append(row)
    return moved


def prefix_set(moved: List[List[List[ProfileElement]]], k: int) -> List[ProfileElement]:
    """The first k+1 elements of the lists of stages 0..k, living in A~_k."""
    return [f for n in range(k + 1) for f in moved[n][k][:k + 1]]


def rewrite_chain(spec: ChainSpec, context: Optional[CorrelationContext] = None,
                  progress: Optional[ProgressTracker] = None) -> RewriteCertificate:
    """
    Rewrite a chain so that every connecting map is injective.

    Args:
        spec: Valid chain with at least two stages
        context: Run context; each step logs under its stage index
        progress: Advanced once per finished step

    Returns:
        RewriteCertificate

    Raises:
        PreconditionError: if the chain is invalid
        StageError: wrapping the failure of a step, with its stage index
    """
    report = spec.validate()
    if not report.ok:
        raise PreconditionError("invalid chain", violations=[v.to_dict() for v in report.violations])
    log = structlog.get_logger(__name__)
    eps = spec.eps_schedule

    images = image_sets(spec)
    image_stages = [restrict_algebra(A, X) for A, X in zip(spec.stages, images)]
    induced = [induced_map(phi, image_stages[n], image_stages[n + 1]) for n, phi in enumerate(spec.maps)]
    moved = _transported(spec, [r.quotient for r in image_stages], induced)

    try:
        G0 = prefix_set(moved, 0)
        g_slope = max((g.max_slope() for g in G0), default=Fraction(0))
        seed_delta = min(eps[0] / (2 * g_slope), Fraction(1)) if g_slope else Fraction(1)
        A0 = image_stages[0].B
        Z, rho = discretize(A0, full_spectrum(A0), seed_delta)
        restriction = restrict_algebra(A0, Z)
        seed_approximation = {element_name(g, q, "g"): collapse_defect(rho, g) for q, g in enumerate(G0)}
    except EtalgError as exc:
        raise StageError(0, exc) from exc

    new_stages = [restriction.B]
    embeddings = [compose(restriction.section, collapse_pattern(rho))]
    restrictions = [restriction]
    maps: List[PatternHom] = []
    reports: List[StageReport] = []

    for k in range(spec.N - 1):
        with context.stage(k + 1) if context else nullcontext():
            try:
                chi = compose(embeddings[k], induced[k])
                F = [push_element(restrictions[k].quotient, g) for g in prefix_set(moved, k)]
                G = prefix_set(moved, k + 1)
                result = injective_step(chi, F, G, eps[k], eps[k + 1] / 2)
                psi = compose(result.psi, result.restriction.quotient)
                embedding = compose(result.restriction.section, collapse_pattern(result.rho))
                witness = is_injective(psi)
                around = compose(psi, embedding)
                commutation = {element_name(f, q): spec_distance(chi, around, f) for q, f in enumerate(F)}
            except EtalgError as exc:
                if progress:
                    progress.advance(ok=False)
                raise StageError(k + 1, exc) from exc
            log.info("chain_step", stage=k + 1, delta=str(result.report.delta), injective=bool(witness),
                     blocks=(result.restriction.B.p, result.restriction.B.l))

        new_stages.append(result.restriction.B)
        embeddings.append(embedding)
        restrictions.append(result.restriction)
        maps.append(psi)
        reports.append(StageReport(k + 1, witness, commutation, result.report.approximation,
                                   eps[k], eps[k + 1] / 2, result.report))
        if progress:
            progress.advance()

    logger.info(f"rewrite_chain: {spec.N} stages rewritten")
    return RewriteCertificate(spec, images, image_stages, induced, new_stages, maps, embeddings,
                              seed_delta, seed_approximation, reports)


def audit_certificate(cert: RewriteCertificate) -> ValidationReport:
    """
    Re-check a certificate.

    Features:
    - Every map is a valid pattern and injective (exact witness)
    - Every commutation entry is below its tolerance
    - Every approximation entry is below its tolerance
    - The composite B_1 -> B_N is injective
    """
    report = ValidationReport()
    for k, (psi, stage) in enumerate(zip(cert.maps, cert.reports), start=1):
        report.extend(validate_pattern(psi))
        if not is_injective(psi):
            report.add('injective', (k,), f"map {k} -> {k + 1} is not injective")
        for name, d in stage.commutation.items():
            if d >= stage.eps:
                report.add('commutation', (k,), f"{name}: {d} >= {stage.eps}")
        for name, d in stage.approximation.items():
            if d >= stage.g_eps:
                report.add('approximation', (k,), f"{name}: {d} >= {stage.g_eps}")
    for name, d in cert.seed_approximation.items():
        if d >= cert.spec.eps_schedule[0]:
            report.add('approximation', (0,), f"{name}: {d} >= {cert.spec.eps_schedule[0]}")
    if cert.maps and report.ok and not is_injective(compose_all(cert.maps)):
        report.add('injective', (), "the composite of all maps is not injective")
    return report
