"""Length-proportional monotone surjections from interval unions onto intervals."""

from fractions import Fraction
from typing import Sequence

from ..errors import ZeroLengthError
from ..spectrum.closed_sets import Piece, merge_pieces
from ..spectrum.piecewise import PLMap
from ..spectrum.points import Number, as_fraction


def monotone_surjection(parts: Sequence[Piece], z_start: Number, z_end: Number) -> PLMap:
    """
    Non-decreasing continuous map from the hull of `parts` onto [z_start, z_end].

    Each part is stretched affinely in proportion to its length; the map is
    constant across the gaps between parts, and isolated points only mark
    where a plateau sits.

    Raises:
        ZeroLengthError: if the parts have total length zero
    """
    pieces = merge_pieces(parts)
    z_start, z_end = as_fraction(z_start), as_fraction(z_end)
    total = sum((p.length for p in pieces), Fraction(0))
    if total == 0:
        raise ZeroLengthError("monotone surjection needs a set of positive length")

    scale = (z_end - z_start) / total
    points = []
    covered = Fraction(0)
    for p in pieces:
        points.append((p.lo, z_start + scale * covered))
        covered += p.length
        points.append((p.hi, z_start + scale * covered))
    return PLMap(points)
