"""Small matrix helpers shared by the operator modules.

Two scalar regimes run through the same numpy containers: complex128 arrays
for floating work and dtype=object arrays over Fraction/RationalComplex for
exact-rational work.  Helpers here dispatch on the dtype.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .scalars import conj_scalar, exact_magnitude


def is_exact_matrix(M: np.ndarray) -> bool:
    return M.dtype == object


def zeros(dim: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty((dim, dim), dtype=object)
        out[:] = Fraction(0)
        return out
    return np.zeros((dim, dim), dtype=complex)


def eye(dim: int, exact: bool) -> np.ndarray:
    out = zeros(dim, exact)
    for i in range(dim):
        out[i, i] = Fraction(1) if exact else 1.0 + 0j
    return out


def diagonal(values, exact: bool) -> np.ndarray:
    values = list(values)
    out = zeros(len(values), exact)
    for i, v in enumerate(values):
        out[i, i] = v if exact else complex(v)
    return out


def adjoint(M: np.ndarray) -> np.ndarray:
    if is_exact_matrix(M):
        out = np.empty((M.shape[1], M.shape[0]), dtype=object)
        for i in range(M.shape[0]):
            for j in range(M.shape[1]):
                out[j, i] = conj_scalar(M[i, j])
        return out
    return M.conj().T


def scale(M: np.ndarray, s) -> np.ndarray:
    if is_exact_matrix(M):
        out = np.empty(M.shape, dtype=object)
        for i in range(M.shape[0]):
            for j in range(M.shape[1]):
                out[i, j] = s * M[i, j]
        return out
    return complex(s) * M


def matpow(M: np.ndarray, k: int) -> np.ndarray:
    """Nonnegative matrix power; use shift_power for signed shift powers."""
    if k < 0:
        raise ValueError("negative power not defined here")
    out = eye(M.shape[0], is_exact_matrix(M))
    for _ in range(k):
        out = out @ M
    return out


def shift_power(u: np.ndarray, k: int) -> np.ndarray:
    """u**k for k >= 0, (u*)**|k| for k < 0."""
    return matpow(u, k) if k >= 0 else matpow(adjoint(u), -k)


def compress(M: np.ndarray, indices) -> np.ndarray:
    idx = np.asarray(list(indices), dtype=int)
    if idx.size == 0:
        return M[:0, :0]
    return M[np.ix_(idx, idx)]


def defect_norm(M: np.ndarray):
    """Exact matrices: max entry magnitude (a Fraction); floats: 2-norm."""
    if M.size == 0:
        return Fraction(0) if is_exact_matrix(M) else 0.0
    if is_exact_matrix(M):
        return max(exact_magnitude(v) for v in M.flat)
    return float(np.linalg.norm(M, 2))


def to_float(M: np.ndarray) -> np.ndarray:
    if is_exact_matrix(M):
        out = np.zeros(M.shape, dtype=complex)
        for i in range(M.shape[0]):
            for j in range(M.shape[1]):
                out[i, j] = complex(M[i, j])
        return out
    return np.array(M, dtype=complex)


def max_entry_gap(A: np.ndarray, B: np.ndarray):
    """Entrywise max |A - B|, exact when both operands are exact."""
    D = A - B
    if is_exact_matrix(D):
        return max((exact_magnitude(v) for v in D.flat), default=Fraction(0))
    return float(np.max(np.abs(D))) if D.size else 0.0
