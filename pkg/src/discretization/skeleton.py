"""
The vertex skeleton of a closed set on a grid of mesh 1/m.

Every grid cell [(r-1)/m, r/m] meeting Y contributes the min and the max of
Y inside it. Cells lying wholly inside one piece of Y contribute their two
grid points; long stretches of those are kept as GridRun ranges so that
tiny meshes stay cheap.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from ..algebra.presentation import Presentation
from ..spectrum.closed_sets import ClosedSubset, Piece, is_closed
from ..spectrum.points import Number, as_fraction
from ..errors import NotClosedError


def grid_size(delta: Number) -> int:
    """Smallest m with 1/m < delta/2."""
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValueError(f"delta={delta} must be positive")
    return math.floor(2 / delta) + 1


@dataclass(frozen=True)
class GridRun:
    """Grid points start/m, ..., stop/m, each consecutive pair a full cell of Y."""

    start: int
    stop: int
    m: int

    @property
    def lo(self) -> Fraction:
        return Fraction(self.start, self.m)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.stop, self.m)

    def points(self) -> List[Fraction]:
        return [Fraction(g, self.m) for g in range(self.start, self.stop + 1)]


SkeletonItem = Union[Fraction, GridRun]


def _item_lo(item: SkeletonItem) -> Fraction:
    return item.lo if isinstance(item, GridRun) else item


def _item_hi(item: SkeletonItem) -> Fraction:
    return item.hi if isinstance(item, GridRun) else item


def _cells_of(x: Fraction, m: int) -> List[int]:
    """Cells (1..m) containing x; a grid point lies in two."""
    scaled = x * m
    if scaled.denominator == 1:
        g = int(scaled)
        return [r for r in (g, g + 1) if 1 <= r <= m]
    return [math.ceil(scaled)]


def _cell_extremes(block: Tuple[Piece, ...], r: int, m: int) -> List[Fraction]:
    lo, hi = Fraction(r - 1, m), Fraction(r, m)
    inside = [(max(p.lo, lo), min(p.hi, hi)) for p in block if p.lo <= hi and p.hi >= lo]
    if not inside:
        return []
    return [min(a for a, _ in inside), max(b for _, b in inside)]


@dataclass(frozen=True)
class Skeleton:
    """Per-block sorted items: explicit vertices and grid runs."""

    m: int
    items: Tuple[Tuple[SkeletonItem, ...], ...]

    def vertices(self, i: int) -> List[Fraction]:
        """Materialized sorted vertex list of block i."""
        out: List[Fraction] = []
        for item in self.items[i]:
            out.extend(item.points() if isinstance(item, GridRun) else [item])
        return out

    def vertex_count(self, i: int) -> int:
        return sum(item.stop - item.start + 1 if isinstance(item, GridRun) else 1
                   for item in self.items[i])

    def to_dict(self, materialize_limit: int = 1000) -> Dict:
        blocks = []
        for i, items in enumerate(self.items):
            if self.vertex_count(i) <= materialize_limit:
                blocks.append({'vertices': self.vertices(i)})
            else:
                blocks.append({'items': [
                    {'run': [item.lo, item.hi]} if isinstance(item, GridRun) else {'vertex': item}
                    for item in items
                ]})
        return {'m': self.m, 'blocks': blocks}


def block_items(block: Tuple[Piece, ...], m: int) -> Tuple[SkeletonItem, ...]:
    runs: List[GridRun] = []
    special = set()
    for p in block:
        if not p.is_point:
            first, last = math.ceil(p.lo * m), math.floor(p.hi * m)
            if last - first >= 1:
                runs.append(GridRun(first, last, m))
        for end in (p.lo, p.hi):
            special.update(_cells_of(end, m))

    explicit = set()
    for r in special:
        explicit.update(_cell_extremes(block, r, m))
    loose = [v for v in explicit if not any(run.lo <= v <= run.hi for run in runs)]

    items: List[SkeletonItem] = list(runs) + loose
    items.sort(key=_item_lo)
    return tuple(items)


def build_skeleton(P: Presentation, Y: ClosedSubset, delta: Number) -> Skeleton:
    """
    Vertex skeleton of Y for mesh 1/m, m the smallest integer with 1/m < delta/2.

    Raises:
        NotClosedError: if Y is not closed
    """
    if not is_closed(P, Y):
        raise NotClosedError(f"set {Y} is not closed")
    m = grid_size(delta)
    return Skeleton(m, tuple(block_items(block, m) for block in Y.pieces))


def item_gaps(skeleton: Skeleton, i: int) -> List[Tuple[Fraction, Fraction]]:
    """Pairs (hi of one item, lo of the next); pairs inside a run are full cells."""
    items = skeleton.items[i]
    return [(_item_hi(a), _item_lo(b)) for a, b in zip(items, items[1:])]
