"""
Numerical unitary bridge between two homomorphisms with equal spectra.

phi(f) = U diag(f) U* and psi(f) = V diag(f) V* share the spectrum S. The
cluster functions h_j, h_k^i of scale eta = 1/(2mn) take the values 0 and 1 on
S, so their images are projections P_r; W = Pi U*, Pi ordering positions by
cluster, makes every P_r a diagonal block. In that frame the unitary taking
phi to psi is M = Pi U* V Pi*. Its P_r-block part T is nearly unitary; S is
the unitary polar factor of T, D averages S over the copies of each point,
and O is the unitary polar factor of D. O commutes with phi, and

    r_t = exp(t log(M S*)) exp(t log(S O*)) exp(t log(O))

runs from I to M, so u_t = U Pi* r_t Pi joins U to V with phi_t close to phi.

The hypothesis is checked on H and on every matrix-unit lift of it.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import expm, logm, polar
from scipy.stats import unitary_group

from ..algebra.catalog import interval_algebra
from ..algebra.presentation import Presentation
from ..config import load_settings
from ..errors import (
    BridgeHypothesisError,
    InternalAssertionError,
    PreconditionError,
    SingularPolarError,
)
from ..patterns.spectra import FiniteSpectrum
from ..spectrum.elements import ProfileElement
from ..spectrum.piecewise import PLMap
from ..spectrum.points import Interior, Number, as_fraction
from ..testfns.enumeration import enumerate_H, sample_H
from ..testfns.functions import (
    TYPE2,
    Element,
    TestFunction,
    as_profile,
    kappa,
    lift_to_Htilde,
    make_type1,
    make_type2,
)
from .constants import choose_constants

logger = logging.getLogger(__name__)

Label = Tuple


def position_labels(P: Presentation, S: FiniteSpectrum) -> List[Label]:
    """Label of every diagonal position; equal labels carry equal values for every element."""
    labels: List[Label] = []
    for j, mult in enumerate(S.theta_mult):
        for _ in range(mult):
            labels.extend(('theta', j, r) for r in range(P.k[j]))
    for y in S.interior:
        labels.extend(('interior', y.i, y.t, r) for r in range(P.dims[y.i]))
    labels.extend([('pad', 0)] * S.zero_pad)
    return labels


def diagonal_values(P: Presentation, S: FiniteSpectrum, f: ProfileElement) -> np.ndarray:
    values: List[float] = []
    for j, mult in enumerate(S.theta_mult):
        values.extend(float(v) for v in f.theta_eigs[j] * mult)
    for y in S.interior:
        values.extend(float(b(y.t)) for b in f.branches[y.i])
    values.extend([0.0] * S.zero_pad)
    return np.array(values)


def tagged_matrix(P: Presentation, S: FiniteSpectrum, h: TestFunction) -> np.ndarray:
    """
    Image of a matrix-unit tagged test function in the diagonal frame.

    Copy c of M_{k_j} inside block i sits on rows c k_j .. c k_j + k_j - 1,
    matching the rows the untagged branches fill.
    """
    s, s2 = h.lift
    plain = kappa(h)
    n = S.size(P)
    out = np.zeros((n, n))
    cursor = 0
    for j, mult in enumerate(S.theta_mult):
        for _ in range(mult):
            if plain.kind != TYPE2 and j == plain.j:
                out[cursor + s, cursor + s2] = 1.0
            cursor += P.k[j]
    for y in S.interior:
        if plain.kind == TYPE2:
            if y.i == plain.i:
                out[cursor + s, cursor + s2] = float(plain.tent()(y.t))
        else:
            k = P.k[plain.j]
            ramps = ((P.alpha[y.i][plain.j], float(plain.left_ramp(y.i)(y.t))),
                     (P.beta[y.i][plain.j], float(plain.right_ramp(y.i)(y.t))))
            for copies, value in ramps:
                for c in range(copies):
                    out[cursor + c * k + s, cursor + c * k + s2] += value
        cursor += P.dims[y.i]
    return out


def realize(P: Presentation, S: FiniteSpectrum, h: Element) -> np.ndarray:
    """phi'(h): the image of h in the frame where phi is diagonal."""
    if isinstance(h, TestFunction) and h.is_tagged:
        return tagged_matrix(P, S, h)
    return np.diag(diagonal_values(P, S, as_profile(P, h)))


def element_key(h: Element) -> str:
    return h.key() if isinstance(h, TestFunction) else h.name or '?'


def with_lifts(P: Presentation, H: Sequence[Element]) -> List[Element]:
    """H followed by the matrix-unit lifts of its test functions."""
    tagged = [lifted for h in H if isinstance(h, TestFunction) and not h.is_tagged
              for lifted in lift_to_Htilde(P, h)]
    return list(H) + tagged


def _windows_at(P: Presentation, S: FiniteSpectrum, m: int, per: int) -> Optional[List[List[int]]]:
    eta = Fraction(1, m * per)
    out = []
    for i in range(P.l):
        xs = S.coordinates(i)
        row = []
        for k in range(1, m + 1):
            free = [a for a in range((k - 1) * per, k * per - 1)
                    if not any(a * eta < x < (a + 2) * eta for x in xs)]
            if not free:
                return None
            row.append(free[0])
        out.append(row)
    return out


def free_windows(P: Presentation, S: FiniteSpectrum, m: int, n: int) -> Tuple[int, List[List[int]]]:
    """
    Per block i and cell ((k-1)/m, k/m), the first a with (a eta, a eta + 2 eta)
    inside the cell and free of S.

    eta = 1/(m per) with per = 2n, refined until every cell has such a window.

    Returns:
        (per, windows)

    Raises:
        PreconditionError: if no per up to 64 n works
    """
    for per in range(2 * n, 64 * n + 1):
        windows = _windows_at(P, S, m, per)
        if windows is not None:
            return per, windows
    raise PreconditionError(f"spectrum points too close to separate at mesh 1/{64 * n * m}")


def cluster_functions(P: Presentation, S: FiniteSpectrum, m: int, n: int) -> List[TestFunction]:
    """
    h_j for theta_j with the ends of the blocks glued to it, and h_k^i for the
    stretch of block i between the free windows of cells k and k+1.
    """
    per, windows = free_windows(P, S, m, n)
    grid = m * per
    G = [make_type1(P, grid, j, [w[0] for w in windows], [w[-1] + 2 for w in windows]) for j in range(P.p)]
    G += [make_type2(P, grid, i, [(Fraction(w[k] + 2, grid), Fraction(w[k + 1], grid))])
          for i, w in enumerate(windows) for k in range(m - 1)]
    return G


def cluster_projections(P: Presentation, S: FiniteSpectrum, G: Sequence[TestFunction]) -> List[np.ndarray]:
    """
    The nonzero projections phi'(h) for h in G.

    Raises:
        PreconditionError: unless they are projections summing to I
    """
    projections = []
    for h in G:
        Pr = realize(P, S, h)
        if not np.allclose(Pr @ Pr, Pr):
            raise PreconditionError(f"{h.key()} is not a projection on the spectrum")
        if Pr.any():
            projections.append(Pr)
    n = S.size(P)
    if not np.allclose(sum(projections, np.zeros((n, n))), np.eye(n)):
        raise PreconditionError("cluster projections do not partition the spectrum")
    return projections


def cluster_order(projections: Sequence[np.ndarray]) -> Tuple[np.ndarray, Dict[Label, List[int]]]:
    """Permutation Pi listing positions cluster by cluster, and the clusters in the new order."""
    order: List[int] = []
    groups: Dict[Label, List[int]] = {}
    for r, Pr in enumerate(projections):
        members = [int(q) for q in np.flatnonzero(np.diag(Pr) > 0.5)]
        groups[('cluster', r)] = list(range(len(order), len(order) + len(members)))
        order.extend(members)
    return np.eye(len(order))[order], groups


def _groups(labels: Sequence[Label]) -> Dict[Label, List[int]]:
    groups: Dict[Label, List[int]] = defaultdict(list)
    for q, label in enumerate(labels):
        groups[label].append(q)
    return groups


def _norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A, 2))


@dataclass
class BridgeInstance:
    """Two unitaries implementing homomorphisms with spectrum S."""

    P: Presentation
    spectrum: FiniteSpectrum
    U: np.ndarray
    V: np.ndarray
    seed: Optional[int] = None

    @property
    def n(self) -> int:
        return self.spectrum.size(self.P)

    def phi(self, f: Element) -> np.ndarray:
        return self.U @ realize(self.P, self.spectrum, f) @ self.U.conj().T

    def psi(self, f: Element) -> np.ndarray:
        return self.V @ realize(self.P, self.spectrum, f) @ self.V.conj().T


@dataclass
class BoundCheck:
    name: str
    measured: float
    bound: float
    slack: float

    @property
    def ok(self) -> bool:
        return self.measured <= self.slack * self.bound


@dataclass
class BridgeTrace:
    """
    The matrices of the construction, the sampled path and its defects.

    Features:
    - Intermediate bound chain with slack
    - Endpoint reconstruction error of the sampled path
    - Largest deviation of phi_t(f) from phi(f) over F and the samples
    """

    n: int
    eps: Fraction
    eps_prime: Fraction
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray
    S: np.ndarray
    D: np.ndarray
    O: np.ndarray
    times: np.ndarray
    path: List[np.ndarray] = field(repr=False)
    checks: List[BoundCheck] = field(default_factory=list)
    hypothesis: float = 0.0
    endpoint_error: float = 0.0
    defect: float = 0.0
    seed: Optional[int] = None
    clusters: int = 0
    tested: int = 0
    tagged: int = 0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and self.defect < float(self.eps)

    def defect_table(self) -> pd.DataFrame:
        rows = [
            {'check': c.name, 'measured': c.measured, 'bound': c.bound,
             'allowed': c.slack * c.bound, 'ok': c.ok}
            for c in self.checks
        ]
        rows.append({'check': 'F_defect', 'measured': self.defect, 'bound': float(self.eps),
                     'allowed': float(self.eps), 'ok': self.defect < float(self.eps)})
        return pd.DataFrame(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'seed': self.seed,
            'eps': self.eps,
            'eps_prime': self.eps_prime,
            'hypothesis': self.hypothesis,
            'endpoint_error': self.endpoint_error,
            'defect': self.defect,
            'clusters': self.clusters,
            'hypothesis_checked': {'untagged': self.tested - self.tagged, 'tagged': self.tagged},
            'samples': len(self.times),
            'ok': self.ok,
            'checks': self.defect_table().to_dict(orient='records'),
        }


def block_part(M: np.ndarray, groups: Dict[Label, List[int]]) -> np.ndarray:
    T = np.zeros_like(M)
    for idx in groups.values():
        T[np.ix_(idx, idx)] = M[np.ix_(idx, idx)]
    return T


def copy_average(S: np.ndarray, groups: Dict[Label, List[int]]) -> np.ndarray:
    """Average the blocks of S over the fiber copies (the last label entry) of each point."""
    by_point: Dict[Label, List[List[int]]] = defaultdict(list)
    for label, idx in groups.items():
        key = label if label[0] == 'pad' else label[:-1]
        by_point[key].append(idx)
    D = np.zeros_like(S)
    for copies in by_point.values():
        mean = sum(S[np.ix_(idx, idx)] for idx in copies) / len(copies)
        for idx in copies:
            D[np.ix_(idx, idx)] = mean
    return D


def unitary_bridge(instance: BridgeInstance, H: Sequence[Element], F: Sequence[ProfileElement],
                   eps: Number, samples: Optional[int] = None, strict: bool = True,
                   eps_prime: Optional[Number] = None) -> BridgeTrace:
    """
    Join phi to psi by a path of unitaries and measure the defects.

    Args:
        instance: U, V and the common spectrum
        H: Test elements on which phi and psi must agree within eps' = eps/(40 n^6);
            test functions among them are also checked through their matrix-unit lifts
        F: Elements whose images must stay within eps along the path
        eps: Positive rational tolerance
        samples: Number of sampled times (defaults to the configured 32)
        strict: Raise when a bound or the final defect fails
        eps_prime: Override of the hypothesis tolerance eps/(40 n^6)

    Returns:
        BridgeTrace

    Raises:
        PreconditionError: if n exceeds the configured maximum, or the spectrum
            points are too close to separate into clusters
        BridgeHypothesisError: naming the first h with |phi(h) - psi(h)| >= eps'
        SingularPolarError: if n^2 eps' >= 1
        InternalAssertionError: if strict and a check fails
    """
    settings = load_settings()
    samples = samples or settings.bridge_samples
    eps = as_fraction(eps)
    n = instance.n
    P, spectrum = instance.P, instance.spectrum
    if n > settings.bridge_max_n:
        raise PreconditionError(f"bridge supports n <= {settings.bridge_max_n}, got {n}")
    eps_prime = eps / (40 * n ** 6) if eps_prime is None else as_fraction(eps_prime)
    if n * n * eps_prime >= 1:
        raise SingularPolarError(f"T possibly singular: n^2 eps' = {n * n * eps_prime} >= 1")

    bundle = choose_constants(P, n, eps, list(F) or [ProfileElement.zero(P)])
    G = cluster_functions(P, spectrum, bundle.m, n)
    projections = cluster_projections(P, spectrum, G)
    family = with_lifts(P, list(G) + list(H))
    tagged = sum(1 for h in family if isinstance(h, TestFunction) and h.is_tagged)

    hypothesis = 0.0
    for h in family:
        gap = _norm(instance.phi(h) - instance.psi(h))
        hypothesis = max(hypothesis, gap)
        if gap >= float(eps_prime):
            raise BridgeHypothesisError(f"|phi(h) - psi(h)| = {gap:.3e} >= eps' for h={element_key(h)}",
                                        h=element_key(h), gap=gap)

    U, V = instance.U, instance.V
    Pi, clusters = cluster_order(projections)
    W = Pi @ U.conj().T
    labels = position_labels(P, spectrum)
    points = _groups([labels[q] for q in np.argmax(Pi, axis=1)])
    M = W @ V @ Pi.T
    T = block_part(M, clusters)
    S = polar(T, side='left')[0]
    D = copy_average(S, points)
    O = polar(D, side='left')[0]
    identity = np.eye(n)

    logs = [logm(M @ S.conj().T), logm(S @ O.conj().T), logm(O)]

    def r(t: float) -> np.ndarray:
        return expm(t * logs[0]) @ expm(t * logs[1]) @ expm(t * logs[2])

    times = np.linspace(0.0, 1.0, samples)
    path = [U @ Pi.T @ r(t) @ Pi for t in times]

    ep = float(eps_prime)
    slack = settings.bound_slack
    checks = [
        BoundCheck('off_block', _norm(M - T), 2 * n ** 2 * ep, slack),
        BoundCheck('left_factor', _norm(M @ S.conj().T - identity), 5 * n ** 2 * ep, slack),
        BoundCheck('copy_spread', _norm(S - D), 5 * n ** 4 * ep, slack),
        BoundCheck('polar_D', _norm(D - O), 5 * n ** 6 * ep, slack),
        BoundCheck('middle_factor', _norm(S @ O.conj().T - identity), 10 * n ** 6 * ep, slack),
    ]

    def deviation(elements: Sequence[Element]) -> float:
        worst = 0.0
        for f in elements:
            base = instance.phi(f)
            d = realize(P, spectrum, f)
            for u in path:
                worst = max(worst, _norm(u @ d @ u.conj().T - base))
        return worst

    checks.append(BoundCheck('path_H', deviation(family), 12 * n ** 6 * ep, slack))
    endpoint_error = max(_norm(path[0] - U), _norm(path[-1] - V))
    defect = deviation(F)

    trace = BridgeTrace(n, eps, eps_prime, U, V, W, S, D, O, times, path, checks,
                        hypothesis, endpoint_error, defect, instance.seed,
                        clusters=len(projections), tested=len(family), tagged=tagged)
    logger.info(f"unitary_bridge: n={n}, {len(projections)} clusters, {len(family)} elements "
                f"({tagged} tagged), endpoint_error={endpoint_error:.2e}, defect={defect:.2e}")

    if strict:
        if endpoint_error >= settings.float_tolerance:
            raise InternalAssertionError(f"path endpoints off by {endpoint_error:.3e}")
        failed = [c.name for c in checks if not c.ok]
        if failed:
            raise InternalAssertionError(f"bound chain fails at {', '.join(failed)}", failed=failed)
        if defect >= float(eps):
            raise InternalAssertionError(f"path moves F by {defect:.3e} >= eps={eps}")
    return trace


def commutant_unitary(P: Presentation, S: FiniteSpectrum, rng: np.random.Generator) -> np.ndarray:
    """A random unitary commuting with phi: one random block per point, repeated over its copies."""
    groups = _groups(position_labels(P, S))
    n = S.size(P)
    Q = np.zeros((n, n), dtype=complex)
    blocks: Dict[Label, np.ndarray] = {}
    for label, idx in groups.items():
        key = label if label[0] == 'pad' else label[:-1]
        if key not in blocks:
            size = len(idx)
            blocks[key] = unitary_group.rvs(size, random_state=rng) if size > 1 else np.array([[1.0 + 0j]])
        Q[np.ix_(idx, idx)] = blocks[key]
    return Q


def random_bridge_instance(n: int, seed: int, eps: Number,
                           P: Optional[Presentation] = None,
                           budget: int = 32) -> Tuple[BridgeInstance, List[Element], List[ProfileElement]]:
    """
    A seeded instance satisfying the bridge hypothesis.

    The spectrum has n interior points of C[0,1] on the grid of mesh 1/20,
    with repeats. V = exp(i c K) U Q, Q in the commutant of phi, K Hermitian of
    norm 1 and c = eps'/4, so |phi(h) - psi(h)| <= eps'/2 for every h.

    Returns:
        (instance, H, F) with H the first `budget` test functions at
        eta = 1/(2 m n) followed by `budget` seeded draws with gapped type-2
        sets, and F = [t -> t]
    """
    P = P or interval_algebra()
    eps = as_fraction(eps)
    rng = np.random.default_rng(seed)
    coords = sorted(Fraction(int(c), 20) for c in rng.integers(1, 20, size=n))
    spectrum = FiniteSpectrum((0,) * P.p, tuple(Interior(0, c) for c in coords))

    U = unitary_group.rvs(n, random_state=rng) if n > 1 else np.array([[1.0 + 0j]])
    Q = commutant_unitary(P, spectrum, rng)
    K = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    K = (K + K.conj().T) / 2
    K = K / _norm(K)
    c = float(eps / (40 * n ** 6)) / 4
    V = expm(1j * c * K) @ U @ Q

    identity = ProfileElement.scalar(P, [0, 1], [PLMap.identity()], name="id")
    bundle = choose_constants(P, n, eps, [identity])
    grid = 2 * bundle.m * n
    H: List[Element] = list(enumerate_H(P, grid, budget=budget))
    H += sample_H(P, grid, budget, rng)
    return BridgeInstance(P, spectrum, U, V, seed), H, [identity]
