"""Pure-Python (numpy) kernels for GF(p) dense linear algebra.

Fallback used when the compiled extension `sumnets._core` is unavailable.
Both implementations expose the same two entry points and must agree
bit-for-bit; a cross-check lives in the test suite.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two int64 matrices with entries reduced mod p.

    Partial sums are reduced often enough that no intermediate exceeds
    the int64 range even at the modulus ceiling.
    """
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # Largest run of products that cannot overflow a signed 64-bit sum.
    chunk = max(1, (2**63 - 1) // max(1, (p - 1) * (p - 1)))
    if inner <= chunk:
        return (a @ b) % p
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for lo in range(0, inner, chunk):
        hi = min(lo + chunk, inner)
        acc = (acc + a[:, lo:hi] @ b[lo:hi, :]) % p
    return acc


def rref_mod(m: np.ndarray, p: int) -> tuple[int, list[int]]:
    """Reduced row echelon form in place, over GF(p).

    Pivots are the first nonzero entry per column in deterministic
    column order.  Returns (rank, pivot column list).
    """
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        m -= np.outer(col, m[r])
        m %= p
        pivots.append(c)
        r += 1
    return r, pivots
