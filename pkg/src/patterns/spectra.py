"""
Finite spectra of homomorphisms into matrix algebras.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from ..algebra.presentation import Presentation
from ..spectrum.elements import EigList, ProfileElement
from ..spectrum.points import Interior, SpectrumPoint, Theta


@dataclass(frozen=True)
class FiniteSpectrum:
    """
    theta_mult[j] copies of theta_j, a sorted multiset of interior points and
    a zero summand of rank zero_pad.

    Interior points at coordinate 0 or 1 are allowed on construction;
    boundary_rewrite() turns them into thetas.
    """

    theta_mult: Tuple[int, ...]
    interior: Tuple[Interior, ...] = ()
    zero_pad: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'theta_mult', tuple(int(x) for x in self.theta_mult))
        object.__setattr__(self, 'interior', tuple(sorted(self.interior)))
        object.__setattr__(self, 'zero_pad', int(self.zero_pad))

    @classmethod
    def empty(cls, P: Presentation) -> 'FiniteSpectrum':
        return cls((0,) * P.p)

    @classmethod
    def of_points(cls, P: Presentation, points: Iterable[SpectrumPoint], zero_pad: int = 0) -> 'FiniteSpectrum':
        """Collect points (thetas and raw interior points) and rewrite endpoints."""
        mult = [0] * P.p
        interior: List[Interior] = []
        for x in points:
            if isinstance(x, Theta):
                mult[x.j] += 1
            else:
                interior.append(x)
        return boundary_rewrite(P, cls(tuple(mult), tuple(interior), zero_pad))

    def size(self, P: Presentation) -> int:
        return (sum(t * k for t, k in zip(self.theta_mult, P.k))
                + sum(P.dims[y.i] for y in self.interior) + self.zero_pad)

    @property
    def is_canonical(self) -> bool:
        return not any(y.is_endpoint for y in self.interior)

    def coordinates(self, i: int) -> List[Fraction]:
        """Sorted interior coordinates in block i, with multiplicity."""
        return [y.t for y in self.interior if y.i == i]

    def __add__(self, other: 'FiniteSpectrum') -> 'FiniteSpectrum':
        return FiniteSpectrum(
            tuple(a + b for a, b in zip(self.theta_mult, other.theta_mult)),
            self.interior + other.interior,
            self.zero_pad + other.zero_pad,
        )

    def scaled(self, factor: int) -> 'FiniteSpectrum':
        return FiniteSpectrum(
            tuple(t * factor for t in self.theta_mult),
            self.interior * factor,
            self.zero_pad * factor,
        )

    def to_dict(self) -> dict:
        return {
            'schema': 'spectrum/v1',
            'theta_mult': list(self.theta_mult),
            'interior': [{'i': y.i, 't': y.t} for y in self.interior],
            'zero_pad': self.zero_pad,
        }

    def __str__(self) -> str:
        parts = [f"theta{j}^{t}" for j, t in enumerate(self.theta_mult) if t]
        parts += [str(y) for y in self.interior]
        if self.zero_pad:
            parts.append(f"0^{self.zero_pad}")
        return "{" + ", ".join(parts) + "}"


def boundary_rewrite(P: Presentation, S: FiniteSpectrum) -> FiniteSpectrum:
    """
    Replace every point at coordinate 0 (resp. 1) of block i by the
    alpha (resp. beta) row of i, padding non-unital rows with zeros.
    """
    mult = list(S.theta_mult)
    kept: List[Interior] = []
    pad = S.zero_pad
    for y in S.interior:
        if y.t == 0:
            row, weight = P.alpha[y.i], P.alpha_weight(y.i)
        elif y.t == 1:
            row, weight = P.beta[y.i], P.beta_weight(y.i)
        else:
            kept.append(y)
            continue
        for j, mult_j in enumerate(row):
            mult[j] += mult_j
        pad += P.dims[y.i] - weight
    return FiniteSpectrum(tuple(mult), tuple(kept), pad)


def gluing_expansion(P: Presentation, row: Sequence[int], vertex_specs: Sequence[FiniteSpectrum],
                     pad: int) -> FiniteSpectrum:
    """Sum of row[j] copies of vertex_specs[j] plus a zero summand."""
    total = FiniteSpectrum((0,) * P.p, (), pad)
    for j, mult in enumerate(row):
        if mult:
            total = total + vertex_specs[j].scaled(mult)
    return total


def spectrum_eigs(P: Presentation, f: ProfileElement, S: FiniteSpectrum) -> EigList:
    """Eigenvalues of f under a homomorphism with spectrum S."""
    values: List[Fraction] = []
    for j, mult in enumerate(S.theta_mult):
        values.extend(list(f.theta_eigs[j]) * mult)
    for y in S.interior:
        values.extend(f.eig_at(y).values)
    values.extend([Fraction(0)] * S.zero_pad)
    return EigList.of(values)
