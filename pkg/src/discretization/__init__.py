"""
Discretization: vertex skeletons, collapse maps and monotone surjections.
"""

from .collapse import (
    CollapseMap,
    EdgeMap,
    FullSpan,
    SplitMap,
    collapse_defect,
    collapse_pattern,
    collapse_summary,
    discretize,
    verify_collapse,
)
from .skeleton import GridRun, Skeleton, build_skeleton, grid_size
from .surjection import monotone_surjection

__all__ = [
    'CollapseMap', 'EdgeMap', 'FullSpan', 'SplitMap', 'collapse_defect', 'collapse_pattern',
    'collapse_summary', 'discretize', 'verify_collapse',
    'GridRun', 'Skeleton', 'build_skeleton', 'grid_size',
    'monotone_surjection',
]
