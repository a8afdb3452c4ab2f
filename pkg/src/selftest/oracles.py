"""Brute-force oracles for the K-theory suite."""

import itertools
import math
from typing import List, Sequence, Tuple

import numpy as np

from ..algebra.ktheory import KTheoryResult
from ..algebra.presentation import Presentation


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    M = [list(r) for r in rows]
    n = len(M)
    sign, prev = 1, 1
    for c in range(n - 1):
        if M[c][c] == 0:
            swap = next((r for r in range(c + 1, n) if M[r][c] != 0), None)
            if swap is None:
                return 0
            M[c], M[swap] = M[swap], M[c]
            sign = -sign
        for r in range(c + 1, n):
            for q in range(c + 1, n):
                M[r][q] = (M[r][q] * M[c][c] - M[r][c] * M[c][q]) // prev
        prev = M[c][c]
    return sign * M[-1][-1] if n else 1


def determinantal_divisors(rows: Sequence[Sequence[int]]) -> List[int]:
    """D_k = gcd of all k x k minors, for k = 1 .. while nonzero."""
    n_rows, n_cols = len(rows), len(rows[0]) if rows else 0
    out = []
    for size in range(1, min(n_rows, n_cols) + 1):
        g = 0
        for rs in itertools.combinations(range(n_rows), size):
            for cs in itertools.combinations(range(n_cols), size):
                g = math.gcd(g, determinant([[rows[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_by_minors(P: Presentation) -> Tuple[int, List[int]]:
    """(rank, invariant factors d_1 | d_2 | ...) of alpha - beta."""
    divisors = determinantal_divisors(P.difference())
    factors = [d // prev for prev, d in zip([1] + divisors, divisors)]
    return len(divisors), factors


def check_ktheory(P: Presentation, result: KTheoryResult, radius: int = 5) -> List[str]:
    """
    Compare a K-theory result with the minors oracle and a kernel enumeration.

    Returns:
        List of disagreements (empty when everything matches)
    """
    problems = []
    rank, factors = invariant_factors_by_minors(P)
    expected = sorted([d for d in factors if d > 1] + [0] * (P.l - rank))
    if sorted(result.k1_invariant_factors) != expected:
        problems.append(f"K1 factors {sorted(result.k1_invariant_factors)} != {expected}")
    if result.unit_factors != sum(1 for d in factors if d == 1):
        problems.append(f"unit factors {result.unit_factors} != {sum(1 for d in factors if d == 1)}")
    if result.k0_rank != P.p - rank:
        problems.append(f"K0 rank {result.k0_rank} != {P.p - rank}")

    D = np.array(P.difference(), dtype=np.int64).reshape(P.l, P.p)
    basis = np.array(result.k0_basis, dtype=np.int64).reshape(len(result.k0_basis), P.p)
    if basis.size and np.any(D @ basis.T):
        problems.append("a K0 basis vector is not in the kernel")

    grid = np.array(list(itertools.product(range(-radius, radius + 1), repeat=P.p)), dtype=np.int64)
    kernel = grid[~np.any(D @ grid.T, axis=0)]
    if basis.size:
        coeffs, *_ = np.linalg.lstsq(basis.T.astype(float), kernel.T.astype(float), rcond=None)
        rounded = np.rint(coeffs).astype(np.int64)
        if np.any(basis.T @ rounded != kernel.T):
            problems.append("kernel vector outside the integer span of the K0 basis")
    elif np.any(kernel):
        problems.append("nonzero kernel vector but empty K0 basis")
    return problems
