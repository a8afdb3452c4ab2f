"""
Spectral perturbation: constants, exact spectral homotopies and the
numerical unitary bridge.
"""

from .bridge import (
    BoundCheck,
    BridgeInstance,
    BridgeTrace,
    random_bridge_instance,
    unitary_bridge,
)
from .constants import ConstantBundle, choose_constants
from .paths import (
    PathFamily,
    SpectralPath,
    audit_paths,
    coverage_check,
    spectral_paths,
)

__all__ = [
    'BoundCheck', 'BridgeInstance', 'BridgeTrace', 'random_bridge_instance', 'unitary_bridge',
    'ConstantBundle', 'choose_constants',
    'PathFamily', 'SpectralPath', 'audit_paths', 'coverage_check', 'spectral_paths',
]
