"""K-theory of Elliott-Thomsen algebras from the gluing matrices."""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Tuple

from .presentation import Presentation, require_valid
from .smith import invariant_factors, kernel_from_form, smith_form, to_object_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KTheoryResult:
    """
    K0 = Ker(alpha - beta) and K1 = Z^l / Im(alpha - beta).

    k1_invariant_factors lists only the nontrivial factors (d > 1 or the
    free factors 0); unit_factors counts the dropped 1s, so
    len(k1_invariant_factors) + unit_factors == l.
    """

    k0_rank: int
    k0_basis: Tuple[Tuple[int, ...], ...]
    k1_invariant_factors: Tuple[int, ...]
    rank: int
    unit_factors: int

    @property
    def k1_free_rank(self) -> int:
        return sum(1 for d in self.k1_invariant_factors if d == 0)

    @property
    def k1_torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.k1_invariant_factors if d > 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k0_rank': self.k0_rank,
            'k0_basis': [list(v) for v in self.k0_basis],
            'k1': list(self.k1_invariant_factors),
        }


def k_theory(P: Presentation) -> KTheoryResult:
    """
    Compute K0 and K1 through the Smith normal form of alpha - beta.

    Args:
        P: Valid presentation

    Returns:
        KTheoryResult with a saturated kernel basis and K1 invariant factors
    """
    require_valid(P)
    A = to_object_matrix(P.difference(), P.l, P.p)
    form = smith_form(A)
    diag = form.diagonal()
    r = sum(1 for d in diag if d != 0)

    basis = [tuple(v) for v in kernel_from_form(form, P.p)]

    # zero rows of the diagonal beyond min(l, p) are free factors of the cokernel
    padded = list(diag) + [0] * (P.l - len(diag))
    factors = invariant_factors(padded)
    nontrivial = tuple(d for d in factors if d != 1)

    logger.debug(f"k_theory: rank={r}, k0_rank={P.p - r}, k1={nontrivial}")
    return KTheoryResult(
        k0_rank=P.p - r,
        k0_basis=tuple(basis),
        k1_invariant_factors=nontrivial,
        rank=r,
        unit_factors=len(factors) - len(nontrivial),
    )
