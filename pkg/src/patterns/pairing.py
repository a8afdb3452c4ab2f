"""
Pairing of two finite spectra by monotone matching of interior coordinates.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..algebra.presentation import Presentation
from ..errors import PairingError, SizeMismatchError
from ..spectrum.points import Number, as_fraction
from .spectra import FiniteSpectrum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockPairing:
    """Order-paired coordinates of one interval block; leftovers lie in the collars."""

    i: int
    matched_x: Tuple[Fraction, ...]
    matched_y: Tuple[Fraction, ...]
    unmatched_x: Tuple[Fraction, ...]
    unmatched_y: Tuple[Fraction, ...]

    @property
    def max_gap(self) -> Fraction:
        return max((abs(x - y) for x, y in zip(self.matched_x, self.matched_y)), default=Fraction(0))

    def partner_of_x(self, x: Fraction) -> Optional[Fraction]:
        for a, b in zip(self.matched_x, self.matched_y):
            if a == x:
                return b
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'block': self.i,
            'pairs': [[x, y] for x, y in zip(self.matched_x, self.matched_y)],
            'unmatched_x': list(self.unmatched_x),
            'unmatched_y': list(self.unmatched_y),
            'max_gap': self.max_gap,
        }


@dataclass(frozen=True)
class PairingResult:
    """
    Per-block matchings; ok when every pair is within 2 eta.

    eps records the test-function bound the caller verified; it is not
    re-checked here.
    """

    blocks: Tuple[BlockPairing, ...]
    eta: Fraction
    eps: Optional[Fraction]
    max_gap: Fraction

    @property
    def ok(self) -> bool:
        return self.max_gap <= 2 * self.eta

    def block(self, i: int) -> BlockPairing:
        return self.blocks[i]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'eta': self.eta,
            'eps': self.eps,
            'max_gap': self.max_gap,
            'blocks': [b.to_dict() for b in self.blocks],
        }


def _feasible(xs: Sequence[Fraction], ys: Sequence[Fraction], x_core: Sequence[bool],
              y_core: Sequence[bool], gap: Fraction) -> Optional[List[Tuple[int, int]]]:
    """
    Monotone matching in which every core point is matched within gap, or None.

    Preference order while backtracking: match, skip x, skip y.
    """
    n, m = len(xs), len(ys)

    @lru_cache(maxsize=None)
    def ok(a: int, b: int) -> bool:
        if a == n:
            return all(not y_core[q] for q in range(b, m))
        if b == m:
            return all(not x_core[q] for q in range(a, n))
        if abs(xs[a] - ys[b]) <= gap and ok(a + 1, b + 1):
            return True
        if not x_core[a] and ok(a + 1, b):
            return True
        return not y_core[b] and ok(a, b + 1)

    if not ok(0, 0):
        return None
    pairs = []
    a = b = 0
    while a < n and b < m:
        if abs(xs[a] - ys[b]) <= gap and ok(a + 1, b + 1):
            pairs.append((a, b))
            a, b = a + 1, b + 1
        elif not x_core[a] and ok(a + 1, b):
            a += 1
        else:
            b += 1
    return pairs


def pair_block(i: int, xs: Sequence[Fraction], ys: Sequence[Fraction], eta: Fraction) -> BlockPairing:
    """
    Minimal-bottleneck monotone matching of sorted coordinates in one block.

    Points in [eta, 1 - eta] must be matched; collar points may stay single.

    Raises:
        PairingError: if the core points cannot all be matched
    """
    xs, ys = sorted(xs), sorted(ys)
    x_core = [eta <= x <= 1 - eta for x in xs]
    y_core = [eta <= y <= 1 - eta for y in ys]
    candidates = sorted({Fraction(0)} | {abs(x - y) for x in xs for y in ys})

    lo, hi = 0, len(candidates) - 1
    if _feasible(xs, ys, x_core, y_core, candidates[hi]) is None:
        raise PairingError(f"block {i}: core points cannot be matched "
                           f"({sum(x_core)} core x against {len(ys)} y, {sum(y_core)} core y against {len(xs)} x)")
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(xs, ys, x_core, y_core, candidates[mid]) is None:
            lo = mid + 1
        else:
            hi = mid
    pairs = _feasible(xs, ys, x_core, y_core, candidates[lo])
    used_x = {a for a, _ in pairs}
    used_y = {b for _, b in pairs}
    return BlockPairing(
        i=i,
        matched_x=tuple(xs[a] for a, _ in pairs),
        matched_y=tuple(ys[b] for _, b in pairs),
        unmatched_x=tuple(x for q, x in enumerate(xs) if q not in used_x),
        unmatched_y=tuple(y for q, y in enumerate(ys) if q not in used_y),
    )


def pair_spectra(P: Presentation, S_phi: FiniteSpectrum, S_psi: FiniteSpectrum,
                 eps: Optional[Number], m: int) -> PairingResult:
    """
    Pair the interior spectra of two homomorphisms block by block.

    Args:
        P: Presentation of the source algebra
        S_phi: Spectrum of the first homomorphism
        S_psi: Spectrum of the second homomorphism
        eps: Test-function bound verified by the caller (recorded only)
        m: Grid size, eta = 1/m

    Returns:
        PairingResult with the exact largest gap

    Raises:
        SizeMismatchError: if the spectra have different sizes
        PairingError: if some core point cannot be matched
    """
    if S_phi.size(P) != S_psi.size(P):
        raise SizeMismatchError(f"spectra of size {S_phi.size(P)} and {S_psi.size(P)}")
    eta = Fraction(1, m)
    blocks = tuple(pair_block(i, S_phi.coordinates(i), S_psi.coordinates(i), eta) for i in range(P.l))
    max_gap = max((b.max_gap for b in blocks), default=Fraction(0))
    result = PairingResult(blocks, eta, None if eps is None else as_fraction(eps), max_gap)
    logger.debug(f"pair_spectra: eta={eta}, max_gap={max_gap}, ok={result.ok}")
    return result
