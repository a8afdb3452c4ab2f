"""
Budgeted enumeration of the finite test-function family H(eta).
"""

import itertools
import logging
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

import numpy as np

from ..algebra.presentation import Presentation
from ..spectrum.closed_sets import Piece, merge_pieces
from .functions import TYPE1, TYPE2, TestFunction

logger = logging.getLogger(__name__)


def type1_pairs(m: int) -> List[Tuple[int, int]]:
    """All (a, b) with 0 <= a < a + 2 <= b <= m, lexicographic."""
    return [(a, b) for a in range(m + 1) for b in range(a + 2, m + 1)]


def grid_sets(m: int, max_components: Optional[int] = None) -> Iterator[Tuple[Piece, ...]]:
    """
    Nonempty grid-aligned closed subsets of [1/m, 1 - 1/m].

    Each set is chosen as a mask of unit cells followed by a mask of the grid
    points those cells leave uncovered, so every set appears exactly once.
    """
    eta = Fraction(1, m)
    cells = list(range(1, m - 1))
    points = list(range(1, m))
    for cell_mask in itertools.product((0, 1), repeat=len(cells)):
        chosen = [r for r, bit in zip(cells, cell_mask) if bit]
        covered = {r for c in chosen for r in (c, c + 1)}
        free = [r for r in points if r not in covered]
        for point_mask in itertools.product((0, 1), repeat=len(free)):
            isolated = [r for r, bit in zip(free, point_mask) if bit]
            pieces = [Piece(c * eta, (c + 1) * eta) for c in chosen]
            pieces += [Piece(r * eta, r * eta) for r in isolated]
            merged = merge_pieces(pieces)
            if not merged:
                continue
            if max_components is not None and len(merged) > max_components:
                continue
            yield merged


class HEnumeration:
    """
    Iterable over H(eta): type 1 in (j, a, b) order, then type 2 in (i, X) order.

    Iteration stops after `budget` functions; `truncated` then reports
    whether anything was left out.
    """

    def __init__(self, P: Presentation, m: int, budget: int,
                 max_components: Optional[int] = None):
        self.P = P
        self.m = m
        self.budget = budget
        self.max_components = max_components
        self.truncated = False
        self.yielded = 0

    def _all(self) -> Iterator[TestFunction]:
        P, m = self.P, self.m
        pairs = type1_pairs(m)
        for j in range(P.p):
            for combo in itertools.product(pairs, repeat=P.l):
                yield TestFunction(kind=TYPE1, m=m, j=j,
                                   a=tuple(a for a, _ in combo), b=tuple(b for _, b in combo))
        if m < 2:
            return
        for i in range(P.l):
            for X in grid_sets(m, self.max_components):
                yield TestFunction(kind=TYPE2, m=m, i=i, X=X)

    def __iter__(self) -> Iterator[TestFunction]:
        self.truncated = False
        self.yielded = 0
        for h in self._all():
            if self.yielded >= self.budget:
                self.truncated = True
                logger.warning(f"H({self.m}) enumeration truncated at budget {self.budget}")
                return
            self.yielded += 1
            yield h


def enumerate_H(P: Presentation, m: int, budget: Optional[int] = None,
                max_components: Optional[int] = None) -> HEnumeration:
    """
    Enumerate H(1/m) deterministically.

    Args:
        P: Presentation
        m: Grid size (eta = 1/m)
        budget: Maximum number of functions; defaults to ETALG_MAX_BUDGET
        max_components: Optional cap on the number of pieces of a type-2 set

    Returns:
        HEnumeration; check its `truncated` flag after iterating
    """
    if budget is None:
        from ..config import load_settings
        budget = load_settings().max_budget
    return HEnumeration(P, m, budget, max_components)


def sample_H(P: Presentation, m: int, count: int, rng: np.random.Generator) -> List[TestFunction]:
    """
    `count` seeded draws from H(1/m), alternating type 1 and type 2.

    Type-2 sets take one to three grid intervals or points, so gapped sets
    appear long before an exhaustive enumeration would reach them.
    """
    pairs = type1_pairs(m)
    out: List[TestFunction] = []
    for q in range(count):
        if q % 2 == 0:
            combo = [pairs[int(rng.integers(len(pairs)))] for _ in range(P.l)]
            out.append(TestFunction(kind=TYPE1, m=m, j=int(rng.integers(P.p)),
                                    a=tuple(a for a, _ in combo), b=tuple(b for _, b in combo)))
            continue
        ends = rng.integers(1, m, size=(int(rng.integers(1, 4)), 2))
        X = merge_pieces(Piece(Fraction(int(min(e)), m), Fraction(int(max(e)), m)) for e in ends)
        out.append(TestFunction(kind=TYPE2, m=m, i=int(rng.integers(P.l)), X=X))
    return out
