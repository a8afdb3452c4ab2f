"""
Seeded property suites behind `etalg selftest`.

Each suite draws its cases from its own generator, seeded by (seed, suite
index), so any suite can be rerun alone with the same cases.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import structlog

from ..algebra.catalog import dimension_drop_example, interval_algebra
from ..algebra.ktheory import k_theory
from ..config import Settings, load_settings
from ..discretization.collapse import discretize, verify_collapse
from ..discretization.surjection import monotone_surjection
from ..errors import EtalgError
from ..logging.progress import ProgressTracker
from ..patterns.operations import is_injective
from ..patterns.pairing import pair_spectra
from ..patterns.spectra import FiniteSpectrum
from ..perturbation.bridge import random_bridge_instance, unitary_bridge
from ..perturbation.constants import ConstantBundle
from ..perturbation.paths import audit_paths, spectral_paths
from ..restriction.restrict import audit_restriction, restrict_algebra
from ..rewriter.chain import audit_certificate, rewrite_chain
from ..spectrum.closed_sets import ClosedSubset, merge_pieces
from ..spectrum.points import Interior
from .generators import (
    half_interval_chain,
    perturbed_spectra,
    random_closed_set,
    random_interval_chain,
    random_pieces,
    random_presentation,
)
from .oracles import check_ktheory

logger = logging.getLogger(__name__)

MAX_FAILURES = 10


@dataclass
class SuiteResult:
    """Outcome of one suite."""

    name: str
    cases: int = 0
    passed: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.passed == self.cases

    def record(self, ok: bool, message: str = "") -> None:
        self.cases += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < MAX_FAILURES:
            self.failures.append(message)

    def to_dict(self) -> Dict[str, Any]:
        return {'suite': self.name, 'cases': self.cases, 'passed': self.passed,
                'ok': self.ok, 'seconds': round(self.seconds, 3), 'failures': self.failures}


Check = Callable[[], Optional[str]]


def _run(result: SuiteResult, tracker: ProgressTracker, label: str, check: Check) -> None:
    """Run one case; a returned string or a library error is a failure."""
    try:
        problem = check()
    except EtalgError as exc:
        problem = f"{type(exc).__name__}: {exc.message}"
    result.record(problem is None, f"{label}: {problem}")
    tracker.advance(ok=problem is None)


# ------------------------------------------------------------------ suites

def ktheory_suite(rng: np.random.Generator, cases: int, tracker: ProgressTracker) -> SuiteResult:
    result = SuiteResult('ktheory')

    def worked_example() -> Optional[str]:
        k = k_theory(dimension_drop_example())
        if (k.k0_rank, [list(v) for v in k.k0_basis], list(k.k1_invariant_factors)) != (1, [[1, 1]], []):
            return f"P_DD gave {k.to_dict()}"
        return None

    _run(result, tracker, "P_DD", worked_example)
    for q in range(cases):
        P = random_presentation(rng)
        _run(result, tracker, f"case {q} {P}", lambda: "; ".join(check_ktheory(P, k_theory(P))) or None)
    return result


def restriction_suite(rng: np.random.Generator, cases: int, tracker: ProgressTracker,
                      samples: int = 10) -> SuiteResult:
    result = SuiteResult('restriction')

    def worked_example() -> Optional[str]:
        P = dimension_drop_example()
        Z = ClosedSubset.build([0], [[(Fraction(1, 3), 1)]])
        B = restrict_algebra(P, Z).B
        if B.alpha != ((0, 1),) or B.beta != ((2, 0),):
            return f"alpha'={B.alpha}, beta'={B.beta}"
        return None

    _run(result, tracker, "P_DD", worked_example)
    for q in range(cases):
        P = random_presentation(rng, max_p=3, max_l=3)
        Z = random_closed_set(rng, P)

        def check() -> Optional[str]:
            report = audit_restriction(restrict_algebra(P, Z), samples=samples)
            return None if report.ok else report.violations[0].message

        _run(result, tracker, f"case {q} Z={Z}", check)
    return result


def discretization_suite(rng: np.random.Generator, cases: int, tracker: ProgressTracker) -> SuiteResult:
    result = SuiteResult('discretization')
    for q in range(cases):
        P = random_presentation(rng, max_p=3, max_l=3)
        Y = random_closed_set(rng, P)
        for delta in (Fraction(1), Fraction(1, 3), Fraction(1, 10)):
            def check() -> Optional[str]:
                _, rho = discretize(P, Y, delta)
                report = verify_collapse(rho)
                return None if report.ok else report.violations[0].message

            _run(result, tracker, f"case {q} Y={Y} delta={delta}", check)
    return result


def surjection_suite(rng: np.random.Generator, cases: int, tracker: ProgressTracker) -> SuiteResult:
    result = SuiteResult('surjection')
    for q in range(cases):
        pieces = merge_pieces(random_pieces(rng, denominator=24, max_pieces=4, positive=True))
        a, b = sorted(Fraction(int(x), 8) for x in rng.integers(0, 9, size=2))

        def check() -> Optional[str]:
            f = monotone_surjection(pieces, a, b)
            if (f.lo, f.hi) != (pieces[0].lo, pieces[-1].hi):
                return f"defined on [{f.lo}, {f.hi}]"
            if f(f.lo) != a or f(f.hi) != b:
                return f"ends at {f(f.lo)}, {f(f.hi)}"
            if not f.is_nondecreasing():
                return "decreasing"
            for left, right in zip(pieces, pieces[1:]):
                if f(left.hi) != f(right.lo):
                    return f"no plateau over ({left.hi}, {right.lo})"
            return None

        _run(result, tracker, f"case {q} {[str(p) for p in pieces]}", check)
    return result


def pairing_suite(rng: np.random.Generator, cases: int, adversarial: int,
                  tracker: ProgressTracker) -> SuiteResult:
    result = SuiteResult('pairing')
    P = interval_algebra()
    for q in range(cases):
        m = int(rng.integers(4, 17))
        S_phi, S_psi = perturbed_spectra(rng, m, shift=8, margin=1, count=int(rng.integers(1, 7)))

        def check() -> Optional[str]:
            pairing = pair_spectra(P, S_phi, S_psi, None, m)
            return None if pairing.ok else f"max_gap {pairing.max_gap} > 2/{m}"

        _run(result, tracker, f"case {q}", check)

    for q in range(adversarial):
        m = int(rng.integers(8, 17))
        eta = Fraction(1, m)
        filler = [Interior(0, Fraction(int(x), 4 * m)) for x in rng.integers(4, m + 1, size=int(rng.integers(0, 4)))]
        S_phi = FiniteSpectrum((0, 0), tuple(filler) + (Interior(0, Fraction(1, 2)),))
        S_psi = FiniteSpectrum((0, 0), tuple(filler) + (Interior(0, Fraction(1, 2) + 3 * eta),))

        def forced() -> Optional[str]:
            pairing = pair_spectra(P, S_phi, S_psi, None, m)
            if pairing.ok:
                return "forced gap accepted"
            return None if pairing.max_gap == 3 * eta else f"reported gap {pairing.max_gap}, expected {3 * eta}"

        _run(result, tracker, f"adversarial {q}", forced)
    return result


def coverage_suite(rng: np.random.Generator, cases: int, tracker: ProgressTracker) -> SuiteResult:
    result = SuiteResult('coverage')
    P = interval_algebra()
    for q in range(cases):
        m1 = int(rng.integers(20, 61))
        bundle = ConstantBundle(1, Fraction(1), Fraction(0), 1, Fraction(1, 2), Fraction(1, 40), m1, Fraction(1, m1))
        S_phi, S_psi = perturbed_spectra(rng, m1, shift=8, margin=12, count=int(rng.integers(1, 6)))

        def check() -> Optional[str]:
            family = spectral_paths(P, S_phi, S_psi, pair_spectra(P, S_phi, S_psi, None, m1), bundle)
            report = audit_paths(family, bundle)
            return None if report.ok else report.violations[0].message

        _run(result, tracker, f"case {q} m1={m1}", check)
    return result


def bridge_suite(seed: int, cases: int, tracker: ProgressTracker, settings: Settings,
                 sizes: Sequence[int] = (2, 4, 8)) -> SuiteResult:
    result = SuiteResult('bridge')
    for n in sizes:
        for q in range(cases):
            instance_seed = seed * 1000 + n * 100 + q

            def check() -> Optional[str]:
                instance, H, F = random_bridge_instance(n, instance_seed, 1)
                trace = unitary_bridge(instance, H, F, 1, samples=settings.bridge_samples, strict=False)
                if trace.endpoint_error >= settings.float_tolerance:
                    return f"endpoint error {trace.endpoint_error:.3e}"
                if not trace.ok:
                    bad = [c.name for c in trace.checks if not c.ok]
                    return f"defect {trace.defect:.3e}, failed checks {bad}"
                return None

            _run(result, tracker, f"n={n} seed={instance_seed}", check)
    return result


def chain_suite(rng: np.random.Generator, cases: int, tracker: ProgressTracker) -> SuiteResult:
    result = SuiteResult('chain')

    def half_interval() -> Optional[str]:
        cert = rewrite_chain(half_interval_chain())
        if cert.new_stages[0] != interval_algebra():
            return f"B_1 is {cert.new_stages[0]}"
        if not is_injective(cert.maps[0]):
            return "psi is not injective"
        worst = max(cert.reports[0].commutation.values(), default=Fraction(0))
        return None if worst == 0 else f"commutation defect {worst}"

    _run(result, tracker, "half-interval", half_interval)
    for q in range(cases):
        spec = random_interval_chain(rng, stages=3)

        def check() -> Optional[str]:
            report = audit_certificate(rewrite_chain(spec))
            return None if report.ok else report.violations[0].message

        _run(result, tracker, f"chain {q}", check)
    return result


SUITES = ('ktheory', 'restriction', 'discretization', 'surjection', 'pairing', 'coverage', 'bridge', 'chain')


@dataclass
class SelftestReport:
    seed: int
    results: List[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def summary(self) -> pd.DataFrame:
        return pd.DataFrame([
            {'suite': r.name, 'cases': r.cases, 'passed': r.passed, 'failed': r.cases - r.passed,
             'seconds': round(r.seconds, 3)}
            for r in self.results
        ])

    def to_dict(self) -> Dict[str, Any]:
        return {'schema': 'selftest/v1', 'seed': self.seed, 'ok': self.ok,
                'suites': [r.to_dict() for r in self.results]}


def run_selftest(seed: int, suites: Optional[Sequence[str]] = None,
                 counts: Optional[Dict[str, int]] = None,
                 settings: Optional[Settings] = None) -> SelftestReport:
    """
    Run the property suites.

    Args:
        seed: Master seed; every suite derives its generator from it
        suites: Names to run (all by default)
        counts: Case counts overriding the configured ones
        settings: Settings (loaded when omitted)

    Returns:
        SelftestReport
    """
    settings = settings or load_settings()
    wanted = list(suites or SUITES)
    unknown = [s for s in wanted if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites {unknown}; choose from {list(SUITES)}")
    n = dict(settings.selftest)
    n.update(counts or {})
    log = structlog.get_logger(__name__)

    plans: Dict[str, Any] = {
        'ktheory': (n.get('ktheory_cases', 500) + 1,
                    lambda rng, t: ktheory_suite(rng, n.get('ktheory_cases', 500), t)),
        'restriction': (n.get('restriction_cases', 100) + 1,
                        lambda rng, t: restriction_suite(rng, n.get('restriction_cases', 100), t,
                                                         settings.restriction_samples)),
        'discretization': (3 * n.get('discretization_cases', 200),
                           lambda rng, t: discretization_suite(rng, n.get('discretization_cases', 200), t)),
        'surjection': (n.get('surjection_cases', 100),
                       lambda rng, t: surjection_suite(rng, n.get('surjection_cases', 100), t)),
        'pairing': (n.get('pairing_cases', 100) + n.get('pairing_adversarial_cases', 20),
                    lambda rng, t: pairing_suite(rng, n.get('pairing_cases', 100),
                                                 n.get('pairing_adversarial_cases', 20), t)),
        'coverage': (n.get('coverage_cases', 100),
                     lambda rng, t: coverage_suite(rng, n.get('coverage_cases', 100), t)),
        'bridge': (3 * n.get('bridge_cases', 20),
                   lambda rng, t: bridge_suite(seed, n.get('bridge_cases', 20), t, settings)),
        'chain': (n.get('chain_cases', 20) + 1,
                  lambda rng, t: chain_suite(rng, n.get('chain_cases', 20), t)),
    }

    results = []
    for name in wanted:
        total, suite = plans[name]
        rng = np.random.default_rng([seed, SUITES.index(name)])
        tracker = ProgressTracker(total, description=name, logger=log, log_every=max(1, total // 10))
        started = time.monotonic()
        with tracker:
            outcome = suite(rng, tracker)
        outcome.seconds = time.monotonic() - started
        results.append(outcome)
        logger.info(f"selftest {name}: {outcome.passed}/{outcome.cases} passed in {outcome.seconds:.2f}s")
    return SelftestReport(seed, results)
