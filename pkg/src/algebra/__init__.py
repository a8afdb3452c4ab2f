"""
Presentations of Elliott-Thomsen algebras and their K-theory.
"""

from .presentation import (
    Presentation,
    ValidationReport,
    Violation,
    BlockMapping,
    validate_presentation,
    require_valid,
    decompose_minimal,
    direct_sum,
    direct_sum_all,
    permute,
    equivalent_up_to_permutation,
    gluing_graph,
)
from .ktheory import KTheoryResult, k_theory
from .catalog import CATALOG, dimension_drop_example, interval_algebra, loop_algebra, matrix_algebra

__all__ = [
    'Presentation', 'ValidationReport', 'Violation', 'BlockMapping',
    'validate_presentation', 'require_valid', 'decompose_minimal', 'direct_sum',
    'direct_sum_all', 'permute', 'equivalent_up_to_permutation', 'gluing_graph',
    'KTheoryResult', 'k_theory',
    'CATALOG', 'dimension_drop_example', 'interval_algebra', 'loop_algebra', 'matrix_algebra',
]
