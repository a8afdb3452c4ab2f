"""
Continuous piecewise-linear maps with exact rational breakpoints.
"""

from bisect import bisect_left
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .points import Number, as_fraction

PLPoint = Tuple[Fraction, Fraction]


class PLMap:
    """
    A continuous PL map on the closed interval [lo, hi], stored as its
    breakpoints (x, y) with strictly increasing x.

    Collinear interior breakpoints are dropped on construction, so two maps
    are equal exactly when they agree as functions. A single breakpoint
    describes a map on a degenerate interval [x, x].
    """

    __slots__ = ('points', '_xs')

    def __init__(self, points: Iterable[Tuple[Number, Number]]):
        raw = [(as_fraction(x), as_fraction(y)) for x, y in points]
        if not raw:
            raise ValueError("a PL map needs at least one breakpoint")
        raw.sort(key=lambda p: p[0])

        cleaned: List[PLPoint] = []
        for x, y in raw:
            if cleaned and cleaned[-1][0] == x:
                if cleaned[-1][1] != y:
                    raise ValueError(f"inconsistent definition at {x}")
                continue
            cleaned.append((x, y))

        # drop collinear interior points
        reduced: List[PLPoint] = [cleaned[0]]
        for q in range(1, len(cleaned) - 1):
            (x0, y0), (x1, y1), (x2, y2) = reduced[-1], cleaned[q], cleaned[q + 1]
            if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
                reduced.append(cleaned[q])
        if len(cleaned) > 1:
            reduced.append(cleaned[-1])

        self.points: Tuple[PLPoint, ...] = tuple(reduced)
        self._xs = tuple(x for x, _ in self.points)

    # constructors

    @classmethod
    def identity(cls, lo: Number = 0, hi: Number = 1) -> 'PLMap':
        return cls([(lo, lo), (hi, hi)])

    @classmethod
    def constant(cls, lo: Number, hi: Number, value: Number) -> 'PLMap':
        return cls([(lo, value), (hi, value)])

    @classmethod
    def affine(cls, lo: Number, hi: Number, y_lo: Number, y_hi: Number) -> 'PLMap':
        """The affine map sending lo to y_lo and hi to y_hi."""
        if as_fraction(lo) == as_fraction(hi) and as_fraction(y_lo) != as_fraction(y_hi):
            raise ValueError("degenerate domain needs a single value")
        return cls([(lo, y_lo), (hi, y_hi)])

    # basic accessors

    @property
    def lo(self) -> Fraction:
        return self._xs[0]

    @property
    def hi(self) -> Fraction:
        return self._xs[-1]

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        return self._xs

    @property
    def is_degenerate(self) -> bool:
        return len(self.points) == 1

    def __call__(self, x: Number) -> Fraction:
        x = as_fraction(x)
        if x < self.lo or x > self.hi:
            raise ValueError(f"{x} outside [{self.lo}, {self.hi}]")
        q = bisect_left(self._xs, x)
        if self._xs[q] == x:
            return self.points[q][1]
        (x0, y0), (x1, y1) = self.points[q - 1], self.points[q]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PLMap) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        body = ", ".join(f"({x}, {y})" for x, y in self.points)
        return f"PLMap([{body}])"

    def pieces(self) -> Iterator[Tuple[PLPoint, PLPoint]]:
        """Consecutive breakpoint pairs; each spans one linear piece."""
        return zip(self.points, self.points[1:])

    def slopes(self) -> List[Fraction]:
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in self.pieces()]

    def max_abs_slope(self) -> Fraction:
        return max((abs(s) for s in self.slopes()), default=Fraction(0))

    def is_nondecreasing(self) -> bool:
        return all(s >= 0 for s in self.slopes())

    def image(self) -> Tuple[Fraction, Fraction]:
        values = [y for _, y in self.points]
        return min(values), max(values)

    # structural operations

    def restrict(self, a: Number, b: Number) -> 'PLMap':
        a, b = as_fraction(a), as_fraction(b)
        if a > b or a < self.lo or b > self.hi:
            raise ValueError(f"[{a}, {b}] not inside [{self.lo}, {self.hi}]")
        inner = [p for p in self.points if a < p[0] < b]
        if a == b:
            return PLMap([(a, self(a))])
        return PLMap([(a, self(a))] + inner + [(b, self(b))])

    def preimages(self, y: Number) -> List[Fraction]:
        """
        Points x with f(x) == y, one per crossing; a piece constant at y
        contributes both of its endpoints.
        """
        y = as_fraction(y)
        found = set()
        if self.is_degenerate:
            return [self.lo] if self.points[0][1] == y else []
        for (x0, y0), (x1, y1) in self.pieces():
            if y0 == y1:
                if y0 == y:
                    found.update((x0, x1))
                continue
            if min(y0, y1) <= y <= max(y0, y1):
                found.add(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
        return sorted(found)

    def first_preimage(self, y: Number) -> Optional[Fraction]:
        roots = self.preimages(y)
        return roots[0] if roots else None

    def compose(self, inner: 'PLMap') -> 'PLMap':
        """
        self after inner, on inner's domain.

        Requires inner's image to lie in self's domain.
        """
        lo, hi = inner.image()
        if lo < self.lo or hi > self.hi:
            raise ValueError(f"image [{lo}, {hi}] leaves domain [{self.lo}, {self.hi}]")
        xs = set(inner.breakpoints)
        for b in self.breakpoints:
            xs.update(inner.preimages(b))
        return PLMap((x, self(inner(x))) for x in sorted(xs))

    def reparametrize(self, a: Number, b: Number) -> 'PLMap':
        """self composed with the increasing affine map [a, b] -> [lo, hi]."""
        a, b = as_fraction(a), as_fraction(b)
        if self.is_degenerate:
            if a != b:
                return PLMap([(a, self.points[0][1]), (b, self.points[0][1])])
            return PLMap([(a, self.points[0][1])])
        if a >= b:
            raise ValueError("reparametrization needs a < b")
        scale = (b - a) / (self.hi - self.lo)
        return PLMap((a + (x - self.lo) * scale, y) for x, y in self.points)


def crossing_points(maps: Sequence[PLMap], lo: Fraction, hi: Fraction) -> List[Fraction]:
    """
    Sample points on [lo, hi] at which order statistics of the given maps
    may bend: all breakpoints, plus every pairwise crossing strictly inside a
    common linear piece. Between consecutive returned points every map is
    linear and no two maps cross.
    """
    xs = {lo, hi}
    for f in maps:
        xs.update(x for x in f.breakpoints if lo < x < hi)
    grid = sorted(xs)
    if lo == hi:
        return grid

    extra = set()
    for u, v in zip(grid, grid[1:]):
        at_u = [f(u) for f in maps]
        at_v = [f(v) for f in maps]
        for a in range(len(maps)):
            for b in range(a + 1, len(maps)):
                du = at_u[a] - at_u[b]
                dv = at_v[a] - at_v[b]
                if du * dv < 0:
                    extra.add(u + (v - u) * du / (du - dv))
    return sorted(xs | extra)


def interval_union_range(maps: Sequence[PLMap]) -> List[Tuple[Fraction, Fraction]]:
    """Sorted, merged union of the images of the given maps."""
    spans = sorted(f.image() for f in maps)
    merged: List[Tuple[Fraction, Fraction]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged
