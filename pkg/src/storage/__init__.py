"""
Run and certificate persistence.
"""

from .database import CertificateStore, DocumentRecord, RunRecord

__all__ = ['CertificateStore', 'DocumentRecord', 'RunRecord']
