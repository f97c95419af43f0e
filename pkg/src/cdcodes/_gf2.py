"""Vectorised GF(2) kernels on bit-packed rows (numpy uint64, column j at bit j)."""

from __future__ import annotations

import numpy as np

_ONE = np.uint64(1)


def batch_rank(rows: np.ndarray) -> np.ndarray:
    """Rank of each matrix in a ``(B, r)`` array of packed rows."""
    rows = np.array(rows, dtype=np.uint64, copy=True)
    if rows.ndim != 2:
        raise ValueError("expected a (batch, rows) array")
    rank = np.zeros(rows.shape[0], dtype=np.int64)
    r = rows.shape[1]
    for i in range(r):
        piv = rows[:, i]
        rank += piv != 0
        low = piv & (~piv + _ONE)
        for j in range(i + 1, r):
            hit = (rows[:, j] & low) != 0
            rows[hit, j] ^= piv[hit]
    return rank


def reduce_against(rows: np.ndarray, basis: list[int], pivots: list[int]) -> np.ndarray:
    """Clear the pivot columns of an rref ``basis`` from every packed row.

    After this, ``rank(vstack(basis, W)) == len(basis) + rank(reduced W)``.
    """
    out = np.array(rows, dtype=np.uint64, copy=True)
    for b, p in zip(basis, pivots):
        bit = np.uint64(1 << p)
        hit = (out & bit) != 0
        out ^= np.where(hit, np.uint64(b), np.uint64(0))
    return out


def span_by_doubling(basis: list[int]) -> np.ndarray:
    """All XOR combinations of ``basis``; index bit i selects ``basis[i]``."""
    words = np.zeros(1, dtype=np.uint64)
    for b in basis:
        words = np.concatenate([words, words ^ np.uint64(b)])
    return words


def unpack_columns(words: np.ndarray, m: int, n: int) -> np.ndarray:
    """Split column-packed m x n words into a ``(B, n)`` array of m-bit columns."""
    mask = np.uint64((1 << m) - 1)
    return np.stack([(words >> np.uint64(j * m)) & mask for j in range(n)], axis=1)
