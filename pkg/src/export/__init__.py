"""
JSON interchange and DOT rendering.
"""

from .codec import (
    certificate_to_dict,
    chain_to_dict,
    closedset_to_dict,
    decode_rational,
    dumps,
    encode,
    encode_rational,
    loads,
    parse_chain,
    parse_closedset,
    parse_document,
    parse_pattern,
    parse_presentation,
    parse_profile,
    parse_spectrum,
    parse_testfn,
    pattern_to_dict,
    presentation_to_dict,
    profile_to_dict,
)
from .dot import presentation_dot, stages_dot

__all__ = [
    'certificate_to_dict',
    'chain_to_dict',
    'closedset_to_dict',
    'decode_rational',
    'dumps',
    'encode',
    'encode_rational',
    'loads',
    'parse_chain',
    'parse_closedset',
    'parse_document',
    'parse_pattern',
    'parse_presentation',
    'parse_profile',
    'parse_spectrum',
    'parse_testfn',
    'pattern_to_dict',
    'presentation_dot',
    'presentation_to_dict',
    'profile_to_dict',
    'stages_dot',
]
