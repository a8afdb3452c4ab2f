"""
Restriction of an algebra to a closed subset of its spectrum.
"""

from .restrict import (
    BlockInfo,
    RestrictionResult,
    audit_restriction,
    dimension_at,
    restrict_algebra,
)

__all__ = ['BlockInfo', 'RestrictionResult', 'audit_restriction', 'dimension_at', 'restrict_algebra']
