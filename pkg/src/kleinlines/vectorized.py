"""Batched F_p[i] arithmetic on numpy arrays.

Elements are stored with a trailing axis of length 2 holding (re, im).  For
moduli below 2**28 int64 is used and every intermediate sum stays below
2**63; larger moduli fall back to object arrays of Python ints.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import FieldElement, PrimeField

INT64_MODULUS_LIMIT = 1 << 28


def dtype_for(p: int):
    return np.int64 if p < INT64_MODULUS_LIMIT else object


def pack(rows: Sequence[Sequence[FieldElement]], p: int) -> np.ndarray:
    """Nested sequences of FieldElements -> array of shape (..., 2)."""
    arr = np.array([[(e.re, e.im) for e in row] for row in rows], dtype=dtype_for(p))
    if arr.size == 0:
        arr = arr.reshape(len(rows), 0, 2)
    return arr


def unpack_row(row: np.ndarray, F: PrimeField) -> tuple[FieldElement, ...]:
    return tuple(F(int(re), int(im)) for re, im in row)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    re = (a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1]) % p
    im = (a[..., 0] * b[..., 1] + a[..., 1] * b[..., 0]) % p
    return np.stack([re, im], axis=-1)


def pair_form(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """All pairwise dot products: (n, k, 2) x (m, k, 2) -> (n, m, 2)."""
    ar, ai = A[..., 0], A[..., 1]
    br, bi = B[..., 0].T, B[..., 1].T
    re = ((ar @ br) % p - (ai @ bi) % p) % p
    im = ((ar @ bi) % p + (ai @ br) % p) % p
    return np.stack([re, im], axis=-1)


def batched_matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """(K, a, b, 2) @ (K, b, c, 2) -> (K, a, c, 2)."""
    ar, ai, br, bi = A[..., 0], A[..., 1], B[..., 0], B[..., 1]
    re = (np.matmul(ar, br) % p - np.matmul(ai, bi) % p) % p
    im = (np.matmul(ar, bi) % p + np.matmul(ai, br) % p) % p
    return np.stack([re, im], axis=-1)


def is_zero(a: np.ndarray) -> np.ndarray:
    return (a[..., 0] == 0) & (a[..., 1] == 0)


def _modpow(base: np.ndarray, exponent: int, p: int) -> np.ndarray:
    result = np.ones_like(base)
    base = base % p
    while exponent:
        if exponent & 1:
            result = result * base % p
        base = base * base % p
        exponent >>= 1
    return result


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse; zero maps to zero."""
    norm = (a[..., 0] * a[..., 0] + a[..., 1] * a[..., 1]) % p
    n_inv = _modpow(norm, p - 2, p)
    return np.stack([a[..., 0] * n_inv % p, (-a[..., 1] * n_inv) % p], axis=-1)


def canonicalize_rows(rows: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Scale each row (K, d, 2) so its first nonzero entry is 1.

    Returns the scaled rows and a mask of rows that were entirely zero.
    """
    nz = ~is_zero(rows)
    any_nz = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    pivot = rows[np.arange(rows.shape[0]), first]
    inv = inverse(pivot, p)
    scaled = mul(rows, inv[:, None, :], p)
    return scaled, ~any_nz


def row_keys(rows: np.ndarray) -> list[tuple[int, ...]]:
    """Hashable keys for canonical rows."""
    flat = rows.reshape(rows.shape[0], int(np.prod(rows.shape[1:])))
    return [tuple(int(v) for v in r) for r in flat.tolist()]


def skew_from_six(six: np.ndarray, p: int) -> np.ndarray:
    """(K, 6, 2) Plücker-ordered tuples -> (K, 4, 4, 2) antisymmetric matrices."""
    from .klein import PLUCKER_PAIRS

    m = np.zeros((six.shape[0], 4, 4, 2), dtype=six.dtype)
    for slot, (i, j) in enumerate(PLUCKER_PAIRS):
        m[:, i, j] = six[:, slot]
        m[:, j, i] = (-six[:, slot]) % p
    return m


def involution(six: np.ndarray) -> np.ndarray:
    return np.concatenate([six[:, 3:], six[:, :3]], axis=1)


def partition(n: int, parts: int) -> list[tuple[int, int]]:
    """Split range(n) into at most ``parts`` contiguous, nonempty blocks."""
    parts = max(1, min(parts, n)) if n else 1
    base, extra = divmod(n, parts)
    out = []
    start = 0
    for k in range(parts):
        stop = start + base + (1 if k < extra else 0)
        out.append((start, stop))
        start = stop
    return out
