"""Grid sizes and tolerances of the spectral perturbation step."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Sequence

from ..algebra.presentation import Presentation
from ..errors import PreconditionError
from ..spectrum.elements import ProfileElement
from ..spectrum.points import Number, as_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstantBundle:
    """
    Constants for one perturbation step into M_n.

    m controls the oscillation of F; eta = 1/(2mn) is the test-function
    scale, eps_prime = eps/(40 n^6) the tolerance on H(eta), and
    eta1 = 1/m1 < eta/2 the finer scale at which test functions of H(eta)
    move by less than eps_prime/8.
    """

    n: int
    eps: Fraction
    lipschitz: Fraction
    m: int
    eta: Fraction
    eps_prime: Fraction
    m1: int
    eta1: Fraction

    @property
    def window(self) -> Fraction:
        """Radius 4 eta1 of the balls the spectral paths must sweep."""
        return 4 * self.eta1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'eps': self.eps,
            'lipschitz': self.lipschitz,
            'm': self.m,
            'eta': self.eta,
            'eps_prime': self.eps_prime,
            'm1': self.m1,
            'eta1': self.eta1,
        }


def grid_for_modulus(lipschitz: Fraction, eps: Fraction) -> int:
    """Least m >= 1 with 4 L / m <= eps, so f moves by at most eps/2 over any 2/m-ball."""
    if lipschitz == 0:
        return 1
    return max(1, math.ceil(4 * lipschitz / eps))


def choose_constants(P: Presentation, n: int, eps: Number, F: Sequence[ProfileElement]) -> ConstantBundle:
    """
    Derive m, eta, eps', m1 and eta1 from the slopes of F.

    Args:
        P: Presentation of the source algebra
        n: Size of the target matrix algebra
        eps: Positive rational tolerance
        F: Nonempty list of PL elements

    Returns:
        ConstantBundle

    Raises:
        PreconditionError: if F is empty, n < 1 or eps <= 0
    """
    eps = as_fraction(eps)
    if not F:
        raise PreconditionError("choose_constants needs a nonempty F")
    if n < 1 or eps <= 0:
        raise PreconditionError(f"need n >= 1 and eps > 0, got n={n}, eps={eps}")

    lipschitz = max(f.max_slope() for f in F)
    m = grid_for_modulus(lipschitz, eps)
    eta = Fraction(1, 2 * m * n)
    eps_prime = eps / (40 * n ** 6)
    # test functions of H(eta) have slope 1/eta: 4 eta1 / eta < eps'/8 and eta1 < eta/2
    m1 = max(4 * m * n, math.floor(32 / (eta * eps_prime))) + 1
    bundle = ConstantBundle(n, eps, lipschitz, m, eta, eps_prime, m1, Fraction(1, m1))
    logger.debug(f"choose_constants: p={P.p}, l={P.l}, {bundle.to_dict()}")
    return bundle
