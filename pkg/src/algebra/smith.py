"""
Smith normal form over the integers with unimodular transforms.

Matrices are numpy arrays of dtype=object so that entries stay Python ints
of arbitrary size.
"""

from math import gcd
from typing import List, NamedTuple, Sequence

import numpy as np


def exgcd(a: int, b: int) -> np.ndarray:
    """
    2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0].

    If a divides b, M[0, 1] is 0.
    """
    if a == 0 and b == 0:
        return np.identity(2, dtype=object)
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign

    M = np.array([[b, 0, 1],
                  [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] = M[0] - q * M[1]
        M = M[::-1].copy()

    g = M[0, 0]
    M = M[:, 1:].copy()
    M[:, 0] *= a_sign
    M[:, 1] *= b_sign
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def _inv_2x2_det1(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


class SmithForm(NamedTuple):
    """A == S @ D @ T with S, T unimodular; Sinv, Tinv their exact inverses."""

    S: np.ndarray
    D: np.ndarray
    T: np.ndarray
    Sinv: np.ndarray
    Tinv: np.ndarray

    def diagonal(self) -> List[int]:
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]


def to_object_matrix(rows: Sequence[Sequence[int]], n_rows: int, n_cols: int) -> np.ndarray:
    A = np.zeros((n_rows, n_cols), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            A[i, j] = int(x)
    return A


def smith_form(A: np.ndarray) -> SmithForm:
    """
    Diagonalize A by alternating row and column clearing.

    The diagonal is not yet in divisibility order; invariant_factors() fixes
    that without touching the transforms.
    """
    D = A.copy().astype(object)
    n_rows, n_cols = D.shape
    S = np.identity(n_rows, dtype=object)
    T = np.identity(n_cols, dtype=object)
    Sinv, Tinv = S.copy(), T.copy()

    def clear_row(i: int) -> bool:
        if all(D[i, j] == 0 for j in range(i + 1, n_cols)):
            return False
        for j in range(i + 1, n_cols):
            M = exgcd(D[i, i], D[i, j]).T
            D[:, [i, j]] = D[:, [i, j]].dot(M)
            T[[i, j]] = _inv_2x2_det1(M).dot(T[[i, j]])
            Tinv[:, [i, j]] = Tinv[:, [i, j]].dot(M)
        return True

    def clear_col(i: int) -> bool:
        if all(D[r, i] == 0 for r in range(i + 1, n_rows)):
            return False
        for r in range(i + 1, n_rows):
            M = exgcd(D[i, i], D[r, i])
            D[[i, r]] = M.dot(D[[i, r]])
            S[:, [i, r]] = S[:, [i, r]].dot(_inv_2x2_det1(M))
            Sinv[[i, r]] = M.dot(Sinv[[i, r]])
        return True

    for i in range(min(n_rows, n_cols)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass

    # signs live in S so that the diagonal is nonnegative
    for i in range(min(n_rows, n_cols)):
        if D[i, i] < 0:
            D[i, i] = -D[i, i]
            S[:, i] = -S[:, i]
            Sinv[i] = -Sinv[i]

    return SmithForm(S, D, T, Sinv, Tinv)


def invariant_factors(diagonal: Sequence[int]) -> List[int]:
    """Turn a diagonal into divisibility order d1 | d2 | ... with zeros last."""
    values = [abs(int(d)) for d in diagonal if d != 0]
    n = len(values)
    for a in range(n):
        for b in range(a + 1, n):
            x, y = values[a], values[b]
            g = gcd(x, y)
            values[a], values[b] = g, x // g * y
    zeros = sum(1 for d in diagonal if d == 0)
    return values + [0] * zeros


def rank(A: np.ndarray) -> int:
    form = smith_form(A)
    return sum(1 for d in form.diagonal() if d != 0)


def kernel_basis(A: np.ndarray) -> List[List[int]]:
    """
    Saturated integer basis of {v : A v = 0}.

    Columns of Tinv at zero diagonal positions; each vector is sign-normalized
    so its first nonzero entry is positive.
    """
    if A.shape[1] == 0:
        return []
    return kernel_from_form(smith_form(A), A.shape[1])


def kernel_from_form(form: SmithForm, n_cols: int) -> List[List[int]]:
    diag = form.diagonal()
    basis = []
    for c in range(n_cols):
        if c < len(diag) and diag[c] != 0:
            continue
        vector = [int(x) for x in form.Tinv[:, c]]
        lead = next((x for x in vector if x != 0), 0)
        if lead < 0:
            vector = [-x for x in vector]
        basis.append(vector)
    return basis
