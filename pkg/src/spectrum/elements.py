"""
Eigenvalue lists and self-adjoint elements given by eigenvalue-branch profiles.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from ..algebra.presentation import Presentation, ValidationReport
from ..errors import SizeMismatchError
from .piecewise import PLMap
from .points import Number, SpectrumPoint, Theta, as_fraction


@dataclass(frozen=True)
class EigList:
    """Sorted multiset of eigenvalues."""

    values: Tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Iterable[Number]) -> 'EigList':
        return cls(tuple(sorted(as_fraction(v) for v in values)))

    @classmethod
    def from_multiplicities(cls, pairs: Iterable[Tuple[Number, int]]) -> 'EigList':
        out: List[Fraction] = []
        for value, mult in pairs:
            out.extend([as_fraction(value)] * int(mult))
        return cls.of(out)

    @property
    def total(self) -> int:
        return len(self.values)

    def __add__(self, other: 'EigList') -> 'EigList':
        return EigList.of(self.values + other.values)

    def distance(self, other: 'EigList') -> Fraction:
        """Sup distance between the sorted lists."""
        if self.total != other.total:
            raise SizeMismatchError(f"eigenvalue lists of size {self.total} and {other.total}")
        return max((abs(a - b) for a, b in zip(self.values, other.values)), default=Fraction(0))

    def multiplicities(self) -> List[Tuple[Fraction, int]]:
        out: List[Tuple[Fraction, int]] = []
        for v in self.values:
            if out and out[-1][0] == v:
                out[-1] = (v, out[-1][1] + 1)
            else:
                out.append((v, 1))
        return out

    def to_dict(self) -> dict:
        return {'values': list(self.values), 'total': self.total}


def alpha_expansion(P: Presentation, i: int, theta_values: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """Values at coordinate 0 of block i forced by theta values; non-unital rows pad with zeros."""
    out: List[Fraction] = []
    for j, mult in enumerate(P.alpha[i]):
        out.extend(list(theta_values[j]) * mult)
    out.extend([Fraction(0)] * (P.dims[i] - P.alpha_weight(i)))
    return sorted(out)


def beta_expansion(P: Presentation, i: int, theta_values: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    out: List[Fraction] = []
    for j, mult in enumerate(P.beta[i]):
        out.extend(list(theta_values[j]) * mult)
    out.extend([Fraction(0)] * (P.dims[i] - P.beta_weight(i)))
    return sorted(out)


@dataclass(frozen=True)
class ProfileElement:
    """
    A self-adjoint element of A given by its eigenvalues.

    theta_eigs[j] lists the k_j eigenvalues at theta_j; branches[i] holds
    dims[i] PL maps on [0,1] whose values at t are the eigenvalues at (t, i).
    """

    theta_eigs: Tuple[Tuple[Fraction, ...], ...]
    branches: Tuple[Tuple[PLMap, ...], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, 'theta_eigs',
                           tuple(tuple(sorted(as_fraction(v) for v in vs)) for vs in self.theta_eigs))
        object.__setattr__(self, 'branches', tuple(tuple(bs) for bs in self.branches))

    @classmethod
    def scalar(cls, P: Presentation, theta_values: Sequence[Number],
               block_maps: Sequence[PLMap], name: str = "") -> 'ProfileElement':
        """Scalar on every block: theta_values[j] * 1_{k_j} and block_maps[i] * 1_{dims_i}."""
        return cls(
            theta_eigs=tuple((as_fraction(v),) * P.k[j] for j, v in enumerate(theta_values)),
            branches=tuple((g,) * P.dims[i] for i, g in enumerate(block_maps)),
            name=name,
        )

    @classmethod
    def zero(cls, P: Presentation) -> 'ProfileElement':
        return cls.scalar(P, [0] * P.p, [PLMap.constant(0, 1, 0)] * P.l, name="zero")

    def eig_at(self, x: SpectrumPoint) -> EigList:
        if isinstance(x, Theta):
            return EigList(self.theta_eigs[x.j])
        return EigList.of(b(x.t) for b in self.branches[x.i])

    def block_breakpoints(self, i: int) -> List[Fraction]:
        xs = set()
        for b in self.branches[i]:
            xs.update(b.breakpoints)
        return sorted(xs)

    def max_slope(self) -> Fraction:
        """Largest branch slope; sorted eigenvalues inherit this Lipschitz bound."""
        slopes = [b.max_abs_slope() for bs in self.branches for b in bs]
        return max(slopes, default=Fraction(0))


def validate_profile(P: Presentation, f: ProfileElement) -> ValidationReport:
    """Shape and endpoint gluing of a profile element."""
    report = ValidationReport()
    if len(f.theta_eigs) != P.p or len(f.branches) != P.l:
        report.add('shape', (), f"profile has {len(f.theta_eigs)} thetas, {len(f.branches)} blocks")
        return report
    for j, vs in enumerate(f.theta_eigs):
        if len(vs) != P.k[j]:
            report.add('shape', (j,), f"theta {j} has {len(vs)} eigenvalues, expected {P.k[j]}")
    for i, bs in enumerate(f.branches):
        if len(bs) != P.dims[i]:
            report.add('shape', (i,), f"block {i} has {len(bs)} branches, expected {P.dims[i]}")
            continue
        for b in bs:
            if b.lo != 0 or b.hi != 1:
                report.add('branch_domain', (i,), f"branch on [{b.lo}, {b.hi}], expected [0,1]")
    if not report.ok:
        return report

    for i in range(P.l):
        at0 = sorted(b(0) for b in f.branches[i])
        at1 = sorted(b(1) for b in f.branches[i])
        if at0 != alpha_expansion(P, i, f.theta_eigs):
            report.add('endpoint_alpha', (i,), f"block {i} at 0 does not match the alpha expansion")
        if at1 != beta_expansion(P, i, f.theta_eigs):
            report.add('endpoint_beta', (i,), f"block {i} at 1 does not match the beta expansion")
    return report
