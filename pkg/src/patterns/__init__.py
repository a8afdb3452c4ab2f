"""
Pattern homomorphisms: finite spectra, tracks, composition, images and pairing.
"""

from .homs import (
    IntervalTrack,
    PatternHom,
    Segment,
    ThetaTrack,
    endpoint_spectrum,
    eval_element,
    eval_spectrum,
    identity_pattern,
    validate_pattern,
    zero_pattern,
)
from .operations import (
    InjectivityWitness,
    SamplePlan,
    compose,
    compose_all,
    is_injective,
    push_element,
    restrict_domain,
    sample_plan,
    sp_image,
    spec_distance,
    support,
)
from .pairing import BlockPairing, PairingResult, pair_block, pair_spectra
from .spectra import FiniteSpectrum, boundary_rewrite, gluing_expansion, spectrum_eigs

__all__ = [
    'IntervalTrack', 'PatternHom', 'Segment', 'ThetaTrack', 'endpoint_spectrum', 'eval_element',
    'eval_spectrum', 'identity_pattern', 'validate_pattern', 'zero_pattern',
    'InjectivityWitness', 'SamplePlan', 'compose', 'compose_all', 'is_injective',
    'push_element', 'restrict_domain', 'sample_plan', 'sp_image', 'spec_distance', 'support',
    'BlockPairing', 'PairingResult', 'pair_block', 'pair_spectra',
    'FiniteSpectrum', 'boundary_rewrite', 'gluing_expansion', 'spectrum_eigs',
]
