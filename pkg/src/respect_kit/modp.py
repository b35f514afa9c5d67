"""Batched rank computations over GF(p) used to pre-screen search candidates.

Nothing decided here is trusted on its own: candidates that pass the
modular screen are re-verified with exact rational arithmetic.  The prime
is below 2**30 so that every product of two residues fits in int64.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

P = 1_000_000_007


def residue(x) -> int:
    x = Fraction(x)
    den = x.denominator % P
    if den == 0:
        raise ZeroDivisionError("denominator divisible by the screening prime")
    return x.numerator % P * pow(den, P - 2, P) % P


def structure_tensor(table) -> np.ndarray:
    """``table[i][j]`` is the bracket vector [e_i, e_j]; returns C[i, j, k] mod P."""
    n = len(table)
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k, x in enumerate(table[i][j]):
                if x:
                    c[i, j, k] = residue(x)
    return c


def batched_rank(m: np.ndarray) -> np.ndarray:
    """Rank mod P of each matrix in a stack of shape (N, rows, cols).

    Fraction-free elimination: row r becomes piv * r - r[c] * pivot_row,
    which needs no modular inverse and keeps products below 2**63.
    """
    m = np.array(m, dtype=np.int64) % P
    n_batch, _, ncols = m.shape
    rank = np.zeros(n_batch, dtype=np.int64)
    idx = np.arange(n_batch)
    for c in range(ncols):
        col = m[:, :, c]
        nz = col != 0
        has = nz.any(axis=1)
        if not has.any():
            continue
        prow = m[idx, nz.argmax(axis=1)]
        pval = np.where(has, prow[:, c], 1)
        # the pivot row itself becomes zero, which is how used rows drop out
        m = (m * pval[:, None, None] - col[:, :, None] * prow[:, None, :]) % P
        rank += has
    return rank


def integer_tensor(table) -> np.ndarray | None:
    """Signed structure constants as int64, or None when some constant is not an integer."""
    n = len(table)
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k, x in enumerate(table[i][j]):
                x = Fraction(x)
                if x.denominator != 1:
                    return None
                c[i, j, k] = x.numerator
    return c


def exact_brackets(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """[a_s, b_t] over the integers for small integer inputs; shape (N, s*t, n)."""
    n_batch, s, n = a.shape
    left = np.tensordot(a, c, axes=([2], [0]))
    out = np.einsum("nsjk,ntj->nstk", left, b)
    return out.reshape(n_batch, s * b.shape[1], n)


def batched_brackets(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """All brackets [a_s, b_t] for stacks a (N, s, n), b (N, t, n) -> (N, s*t, n)."""
    n_batch, s, n = a.shape
    t = b.shape[1]
    left = np.zeros((n_batch, s, n, n), dtype=np.int64)
    for i in range(n):
        left = (left + a[:, :, i, None, None] * c[i][None, None, :, :]) % P
    out = np.zeros((n_batch, s, t, n), dtype=np.int64)
    for j in range(n):
        out = (out + left[:, :, None, j, :] * b[:, None, :, j, None]) % P
    return out.reshape(n_batch, s * t, n)
