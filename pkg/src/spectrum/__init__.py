"""
Spectrum module: points of Sp(A), PL maps, closed subsets and element profiles.
"""

from .closed_sets import (
    ClosedSubset,
    Piece,
    closure,
    complement_gaps,
    contains,
    empty_set,
    full_spectrum,
    intersection,
    is_closed,
    is_subset,
    merge_pieces,
    union,
)
from .elements import EigList, ProfileElement, alpha_expansion, beta_expansion, validate_profile
from .index_sets import IndexSets, index_sets, normalized_index_sets
from .piecewise import PLMap
from .points import Interior, SpectrumPoint, Theta, as_fraction, dist

__all__ = [
    'ClosedSubset', 'Piece', 'closure', 'complement_gaps', 'contains', 'empty_set',
    'full_spectrum', 'intersection', 'is_closed', 'is_subset', 'merge_pieces', 'union',
    'EigList', 'ProfileElement', 'alpha_expansion', 'beta_expansion', 'validate_profile',
    'IndexSets', 'index_sets', 'normalized_index_sets',
    'PLMap',
    'Interior', 'SpectrumPoint', 'Theta', 'as_fraction', 'dist',
]
