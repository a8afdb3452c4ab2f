"""
Injectivity rewriting: one repair step and the chain driver.
"""

from .chain import ChainSpec, RewriteCertificate, StageReport, audit_certificate, image_sets, rewrite_chain
from .step import StepReport, StepResult, build_replacement, image_restrict, initial_delta, injective_step

__all__ = [
    'ChainSpec',
    'RewriteCertificate',
    'StageReport',
    'StepReport',
    'StepResult',
    'audit_certificate',
    'build_replacement',
    'image_restrict',
    'image_sets',
    'initial_delta',
    'injective_step',
    'rewrite_chain',
]
