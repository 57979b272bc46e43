"""Dense linear algebra over Z_p on int64 arrays.

Residues stay below 2**21 by default, so a product fits in 42 bits and a
dot product of length < 2**21 fits in int64 without intermediate reduction.
"""

from __future__ import annotations

import numpy as np

from ..errors import NotInvertible

MAX_P = 1 << 31  # p**2 * n must stay below 2**63


def reduce(m, p: int) -> np.ndarray:
    return np.asarray(m, dtype=np.int64) % p


def mm(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    return (a @ b) % p


def inv_mod(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise NotInvertible(p, "scalar")
    return pow(x, -1, p)


def invert_gauss(m, p: int, where: str = "invert") -> np.ndarray:
    """Gauss-Jordan inverse mod p; NotInvertible iff det(m) = 0 mod p."""
    a = reduce(m, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        nz = np.nonzero(aug[col:, col])[0]
        if nz.size == 0:
            raise NotInvertible(p, where)
        r = col + int(nz[0])
        if r != col:
            aug[[col, r]] = aug[[r, col]]
        aug[col] = aug[col] * inv_mod(int(aug[col, col]), p) % p
        f = aug[:, col].copy()
        f[col] = 0
        aug = (aug - np.outer(f, aug[col])) % p
    return aug[:, n:]


def det_mod(m, p: int) -> int:
    a = reduce(m, p)
    n = a.shape[0]
    det = 1
    for col in range(n):
        nz = np.nonzero(a[col:, col])[0]
        if nz.size == 0:
            return 0
        r = col + int(nz[0])
        if r != col:
            a[[col, r]] = a[[r, col]]
            det = -det
        piv = int(a[col, col])
        det = det * piv % p
        inv = inv_mod(piv, p)
        f = a[col + 1 :, col] * inv % p
        a[col + 1 :] = (a[col + 1 :] - np.outer(f, a[col])) % p
    return det % p
