"""
Seeded property suites with brute-force oracles.
"""

from .suites import SUITES, SelftestReport, SuiteResult, run_selftest

__all__ = ['SUITES', 'SelftestReport', 'SuiteResult', 'run_selftest']
