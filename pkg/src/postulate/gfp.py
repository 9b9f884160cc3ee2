"""Exact linear algebra over GF(p) and over the rationals.

Matrices are plain 2-D numpy integer arrays, reduced into ``[0, p)`` on
entry.
The rational routines take nested sequences of ``int``/``Fraction`` and use
Python's unbounded integers throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

DEFAULT_PRIME = 31991

_INT64_MAX = np.iinfo(np.int64).max


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, valid for all ``p < 3.3e24``."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= 2**31:
            # entries are multiplied pairwise inside int64
            raise ValueError(f"prime {self.p} too large for int64 elimination")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, self.p - 2, self.p)

    def reduce(self, value: int | Fraction) -> int:
        """Image of an integer or rational in GF(p)."""
        if isinstance(value, Fraction):
            return value.numerator % self.p * self.inv(value.denominator) % self.p
        return int(value) % self.p

    def array(self, entries) -> np.ndarray:
        return np.asarray(entries, dtype=np.int64) % self.p


# float64 holds integers exactly below 2**53; a blocked update sums up to
# ``block`` products of two residues, so p**2 * block must stay below that
_FLOAT_EXACT = 2**53
DEFAULT_BLOCK = 64


def rank(matrix, p: int = DEFAULT_PRIME, block: int = DEFAULT_BLOCK) -> int:
    """Rank of ``matrix`` over GF(p) by row reduction.

    The input is not modified.  Columns are eliminated in panels of
    ``block``: inside a panel pivots are found one column at a time, and
    the rest of the matrix is then updated with a single float64 matrix
    product, which is exact while ``block * p**2 < 2**53``.  Larger primes
    fall back to column-at-a-time elimination in int64.
    """
    A = np.array(matrix, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    if block < 1:
        raise ValueError(f"block must be >= 1, got {block}")
    A %= p
    if block * p * p >= _FLOAT_EXACT:
        return _rank_int64(A, p)
    return _rank_blocked(A.astype(np.float64), p, block)


def _reduce(x: np.ndarray, p: int) -> np.ndarray:
    """``x mod p`` for exact integers held in float64; faster than ``%`` on floats.

    The floor of ``x / p`` may be off by one after rounding, which the two
    corrections absorb.
    """
    x = x - np.floor(x * (1.0 / p)) * p
    x[x < 0] += p
    x[x >= p] -= p
    return x


def _rank_blocked(A: np.ndarray, p: int, block: int) -> int:
    rows, cols = A.shape
    r = c = 0
    while r < rows and c < cols:
        cb = min(cols, c + block)
        below = rows - r
        mult = np.zeros((below, cb - c))  # mult[i, q]: multiple of pivot q taken from row r + i
        scales = []
        k = 0
        for j in range(c, cb):
            if k == below:
                break
            nz = np.flatnonzero(A[r + k:, j])
            if nz.size == 0:
                continue
            i = k + int(nz[0])
            if i != k:
                A[[r + k, r + i], c:] = A[[r + i, r + k], c:]
                mult[[k, i]] = mult[[i, k]]
            inv = pow(int(A[r + k, j]), p - 2, p)
            scales.append(inv)
            pivot = A[r + k, j:cb] * inv % p
            A[r + k, j:cb] = pivot
            m = A[r + k + 1:, j].copy()
            mult[k + 1:, k] = m
            A[r + k + 1:, j:cb] = _reduce(A[r + k + 1:, j:cb] - np.outer(m, pivot), p)
            k += 1
        if k and cb < cols:
            # replay the panel's row operations on the trailing columns
            B = A[r:, cb:]
            for q in range(k):
                if q:
                    B[q] = _reduce(B[q] - mult[q, :q] @ B[:q], p)
                B[q] = B[q] * scales[q] % p
            if below > k:
                B[k:] = _reduce(B[k:] - mult[k:, :k] @ B[:k], p)
        r += k
        c = cb
    return r


def _rank_int64(A: np.ndarray, p: int) -> int:
    """Column-at-a-time elimination with deferred reduction.

    Entries below the pivot row are updated without reduction and only the
    pivot column is reduced each step; a full reduction is forced before
    the accumulated ``p**2`` terms could overflow ``int64``.
    """
    rows, cols = A.shape
    budget = _INT64_MAX // (p * p) - 2
    steps = 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = A[r:, c] % p
        A[r:, c] = col
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        pivot = A[r, c:] % p
        pivot = pivot * pow(int(pivot[0]), p - 2, p) % p
        A[r, c:] = pivot
        if r + 1 < rows:
            A[r + 1:, c:] -= np.outer(A[r + 1:, c], pivot)
        r += 1
        steps += 1
        if steps >= budget:
            A[r:, c:] %= p
            steps = 0
    return r


def _integer_rows(matrix: Sequence[Sequence[int | Fraction]]) -> list[list[int]]:
    rows = []
    for row in matrix:
        row = [Fraction(v) for v in row]
        scale = lcm(1, *(v.denominator for v in row))
        rows.append([int(v * scale) for v in row])
    return rows


def rational_rank(matrix: Sequence[Sequence[int | Fraction]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers, which does not change the rank.
    """
    M = _integer_rows(matrix)
    rows = len(M)
    cols = len(M[0]) if rows else 0
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        piv_row = M[r]
        piv = piv_row[c]
        for i in range(r + 1, rows):
            row = M[i]
            a = row[c]
            if a == 0:
                for j in range(c + 1, cols):
                    row[j] = row[j] * piv // prev
            else:
                for j in range(c + 1, cols):
                    row[j] = (row[j] * piv - a * piv_row[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r
