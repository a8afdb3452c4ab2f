"""
Test functions: type 1 and type 2 elements, lifts and budgeted enumeration.
"""

from .enumeration import HEnumeration, enumerate_H, grid_sets, sample_H, type1_pairs
from .functions import (
    TYPE1,
    TYPE2,
    TestFunction,
    as_profile,
    eig_at,
    kappa,
    lift_to_Htilde,
    make_type1,
    make_type2,
    profile_samples,
)

__all__ = [
    'HEnumeration', 'enumerate_H', 'grid_sets', 'sample_H', 'type1_pairs',
    'TYPE1', 'TYPE2', 'TestFunction', 'as_profile', 'eig_at', 'kappa',
    'lift_to_Htilde', 'make_type1', 'make_type2', 'profile_samples',
]
