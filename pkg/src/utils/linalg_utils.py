import logging
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.utils.constants import FLOAT_RANK_TOL

logger = logging.getLogger(__name__)


def to_exact_array(rows: Sequence[Sequence], columns: Optional[int] = None) -> np.ndarray:
    """Object array of Fractions; `columns` fixes the width of an empty matrix"""
    data = [[Fraction(x) for x in row] for row in rows]
    if not data:
        return np.empty((0, columns or 0), dtype=object)
    return np.array(data, dtype=object)


def to_float_array(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=float)


def _integer_rows(m: np.ndarray) -> np.ndarray:
    """Scale each row by the lcm of its denominators; rank is unchanged"""
    exact = np.asarray(m, dtype=object)
    out = np.empty(exact.shape, dtype=object)
    for i, row in enumerate(exact):
        fractions = [Fraction(x) for x in row]
        scale = lcm(*(f.denominator for f in fractions)) if fractions else 1
        out[i] = [int(f * scale) for f in fractions]
    return out


def rank_exact(m: np.ndarray) -> int:
    """Fraction-free (Bareiss) elimination on integer-scaled rows"""
    a = _integer_rows(m)
    if a.ndim != 2 or a.size == 0:
        return 0
    rows, cols = a.shape
    rank = 0
    previous = 1
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        for r in range(rank + 1, rows):
            # exact division: every entry is a minor of the original matrix
            a[r, col + 1:] = (a[rank, col] * a[r, col + 1:] - a[r, col] * a[rank, col + 1:]) // previous
            a[r, col] = 0
        previous = a[rank, col]
        rank += 1
        if rank == rows:
            break
    return rank


def rref_exact(m: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over the rationals and its pivot columns"""
    a = np.array([[Fraction(x) for x in row] for row in np.asarray(m, dtype=object)], dtype=object)
    if a.size == 0:
        return a, []
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if a[i, col] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        a[r, :] = a[r, :] / a[r, col]
        for i in range(rows):
            if i != r and a[i, col] != 0:
                a[i, :] = a[i, :] - a[i, col] * a[r, :]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    return a, pivots


def kernel_exact(m: np.ndarray, columns: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of the right kernel, one rational vector per free column"""
    exact = np.asarray(m, dtype=object)
    cols = exact.shape[1] if exact.ndim == 2 else (columns or 0)
    if exact.size == 0:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    reduced, pivots = rref_exact(exact)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        vector = [Fraction(0)] * cols
        vector[free] = Fraction(1)
        for row, pivot in enumerate(pivots):
            vector[pivot] = -reduced[row, free]
        basis.append(vector)
    return basis


def singular_values(m: np.ndarray) -> np.ndarray:
    values = to_float_array(m)
    if values.size == 0:
        return np.zeros(0)
    return np.linalg.svd(values, compute_uv=False)


def rank_float(m: np.ndarray, tol_rel: float = FLOAT_RANK_TOL) -> int:
    """Singular values above tol_rel times the largest"""
    s = singular_values(m)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol_rel * s[0]))


def kernel_float(m: np.ndarray, tol_rel: float = FLOAT_RANK_TOL) -> np.ndarray:
    """Orthonormal kernel basis as the columns of the returned array"""
    values = to_float_array(m)
    cols = values.shape[1]
    if values.size == 0:
        return np.eye(cols)
    _, s, vh = np.linalg.svd(values, full_matrices=True)
    rank = int(np.sum(s > tol_rel * s[0])) if s.size and s[0] > 0 else 0
    return vh[rank:].T.copy()
