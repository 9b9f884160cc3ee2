"""Hermite interpolation matrices at fat points and the postulation check.

Rows are derivative conditions, columns are the degree-``d`` monomials.
An ``m``-point contributes every partial derivative of order exactly
``m - 1``; for a form of degree ``d >= m - 1`` the lower orders follow from
the Euler relation, so each component contributes exactly its length.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm
from typing import Sequence

import numpy as np

from postulate.gfp import DEFAULT_PRIME, PrimeField, rank, rational_rank
from postulate.schemes import (
    FatPointComponent,
    FatPointScheme,
    Support,
    fat_point_length,
)

DEFAULT_TRIALS = 3
ORACLE_MAX_COLUMNS = 120


def exponent_tuples(nvars: int, total: int) -> list[tuple[int, ...]]:
    """All exponent vectors of ``nvars`` variables summing to ``total``, lex-descending."""
    if nvars == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        out.extend((first,) + rest for rest in exponent_tuples(nvars - 1, total - first))
    return out


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    d: int

    @property
    def exponents(self) -> list[tuple[int, ...]]:
        return exponent_tuples(self.n + 1, self.d)

    def __len__(self) -> int:
        return comb(self.d + self.n, self.n)


@dataclass(frozen=True)
class ConditionIndex:
    component: int
    alpha: tuple[int, ...]


def condition_indices(scheme: FatPointScheme) -> list[ConditionIndex]:
    """Row labels of :func:`build_matrix`, in row order."""
    n = scheme.ambient_dim
    return [
        ConditionIndex(i, alpha)
        for i, comp in enumerate(scheme.components)
        for alpha in exponent_tuples(n + 1, comp.multiplicity - 1)
    ]


def falling_factorial(b: int, a: int) -> int:
    out = 1
    for k in range(a):
        out *= b - k
    return out


def derivative_value(beta: Sequence[int], alpha: Sequence[int], point: Sequence, p: int | None = None):
    """Value at ``point`` of the ``alpha``-th partial derivative of ``x**beta``.

    Exact over the integers/rationals when ``p`` is None, otherwise reduced
    mod ``p``.
    """
    if any(a > b for a, b in zip(alpha, beta)):
        return 0
    value = 1
    for b, a, x in zip(beta, alpha, point):
        value *= falling_factorial(b, a) * x ** (b - a)
    if p is not None:
        return PrimeField(p).reduce(value)
    return value


@lru_cache(maxsize=64)
def _derivative_tables(n: int, d: int, order: int):
    """Coefficients and reduced exponents of all order-``order`` derivatives.

    Returns ``(coef, expo)`` with shapes ``(L, N)`` (python ints, object
    dtype) and ``(L, N, n+1)``; entries where the derivative kills the
    monomial have ``coef == 0``.
    """
    betas = np.array(exponent_tuples(n + 1, d), dtype=np.int64).reshape(-1, n + 1)
    alphas = np.array(exponent_tuples(n + 1, order), dtype=np.int64).reshape(-1, n + 1)
    expo = betas[None, :, :] - alphas[:, None, :]
    valid = (expo >= 0).all(axis=2)
    coef = np.zeros(valid.shape, dtype=object)
    for i, alpha in enumerate(alphas):
        for j, beta in enumerate(betas):
            if valid[i, j]:
                c = 1
                for b, a in zip(beta, alpha):
                    c *= falling_factorial(int(b), int(a))
                coef[i, j] = c
    expo = np.where(valid[:, :, None], expo, 0)
    expo.setflags(write=False)
    coef.setflags(write=False)
    return coef, expo


@lru_cache(maxsize=64)
def _modular_tables(n: int, d: int, order: int, p: int):
    coef, expo = _derivative_tables(n, d, order)
    coef_p = np.array([[int(c) % p for c in row] for row in coef], dtype=np.int64)
    coef_p = coef_p.reshape(coef.shape)
    coef_p.setflags(write=False)
    return coef_p, expo


def _block_order(n: int, d: int, m: int) -> tuple[int, int]:
    """Derivative order used for an ``m``-point, and zero rows to pad with.

    When ``m - 1 > d`` every form of degree ``d`` is killed by the point;
    all order-``d`` derivatives express that and the block is padded to the
    component length.
    """
    length = fat_point_length(n, m)
    if m - 1 <= d:
        return m - 1, 0
    return d, length - comb(n + d, n)


def _component_rows_mod_p(n: int, d: int, m: int, point: np.ndarray, p: int) -> np.ndarray:
    order, pad = _block_order(n, d, m)
    coef, expo = _modular_tables(n, d, order, p)
    powers = np.ones((n + 1, d + 1), dtype=np.int64)
    for e in range(1, d + 1):
        powers[:, e] = powers[:, e - 1] * point % p
    rows = coef.copy()
    for j in range(n + 1):
        rows = rows * powers[j][expo[:, :, j]] % p
    if pad:
        rows = np.vstack([rows, np.zeros((pad, rows.shape[1]), dtype=np.int64)])
    return rows


def _draw_point(rng: np.random.Generator, n: int, p: int, on_hyperplane: bool) -> np.ndarray:
    while True:
        point = rng.integers(0, p, size=n + 1, dtype=np.int64)
        if on_hyperplane:
            point[n] = 0
        if point.any():
            return point


def _check_field(scheme: FatPointScheme, d: int, p: int):
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    if p <= d:
        raise ValueError(f"prime {p} must exceed the degree {d}")
    if p <= scheme.max_multiplicity:
        raise ValueError(f"prime {p} must exceed the multiplicity {scheme.max_multiplicity}")


def build_matrix(scheme: FatPointScheme, d: int, p: int = DEFAULT_PRIME,
                 rng: np.random.Generator | int | None = None) -> np.ndarray:
    """Interpolation matrix of ``scheme`` in degree ``d`` over GF(p).

    Generic supports are drawn uniformly from ``GF(p)^(n+1)`` using ``rng``
    (a generator or a seed); explicit supports are reduced mod ``p``.
    """
    _check_field(scheme, d, p)
    field = PrimeField(p)
    rng = np.random.default_rng(rng)
    n = scheme.ambient_dim
    N = comb(d + n, n)
    blocks = [np.zeros((0, N), dtype=np.int64)]
    for comp in scheme.components:
        if comp.is_explicit:
            point = np.array([field.reduce(c) for c in comp.support], dtype=np.int64)
            if not point.any():
                raise ValueError(f"support {comp.support} vanishes mod {p}")
        else:
            point = _draw_point(rng, n, p, comp.support is Support.ON_HYPERPLANE)
        blocks.append(_component_rows_mod_p(n, d, comp.multiplicity, point, p))
    return np.vstack(blocks)


def _integer_point(coords: Sequence) -> list[int]:
    coords = [Fraction(c) for c in coords]
    scale = lcm(1, *(c.denominator for c in coords))
    return [int(c * scale) for c in coords]


def build_rational_matrix(scheme: FatPointScheme, d: int) -> list[list[int]]:
    """Exact integer interpolation matrix; every support must be explicit.

    Rational coordinates are cleared to integers first, which rescales each
    row block by a nonzero constant.
    """
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    n = scheme.ambient_dim
    N = comb(d + n, n)
    out: list[list[int]] = []
    for comp in scheme.components:
        if not comp.is_explicit:
            raise ValueError("rational matrices need explicit supports")
        point = _integer_point(comp.support)
        order, pad = _block_order(n, d, comp.multiplicity)
        coef, expo = _derivative_tables(n, d, order)
        for i in range(coef.shape[0]):
            row = []
            for j in range(N):
                c = int(coef[i, j])
                if c:
                    for x, e in zip(point, expo[i, j]):
                        c *= x ** int(e)
                row.append(c)
            out.append(row)
        out.extend([0] * N for _ in range(pad))
    return out


class Verdict(str, enum.Enum):
    GOOD = "Good"
    DEFECTIVE = "Defective"


@dataclass(frozen=True)
class PostulationReport:
    n: int
    signature: tuple[tuple[int, int], ...]
    d: int
    N: int
    scheme_degree: int
    rank: int
    trials_used: int
    base_seed: int | None
    prime: int | None  # None for the exact rational oracle

    @property
    def defect(self) -> int:
        return min(self.N, self.scheme_degree) - self.rank

    @property
    def verdict(self) -> Verdict:
        return Verdict.GOOD if self.defect == 0 else Verdict.DEFECTIVE

    @property
    def h0(self) -> int:
        return self.N - self.rank

    @property
    def h1(self) -> int:
        return self.scheme_degree - self.rank


def trial_seed(base_seed: int, trial: int, scheme: FatPointScheme, d: int) -> int:
    """Seed of one random support draw, independent of evaluation order."""
    kinds = tuple(
        (c.multiplicity, "explicit" if c.is_explicit else c.support.value) for c in scheme.components
    )
    key = repr((base_seed, trial, scheme.ambient_dim, kinds, d)).encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


def check_postulation(scheme: FatPointScheme, d: int, *, prime: int = DEFAULT_PRIME,
                      trials: int = DEFAULT_TRIALS, seed: int = 0) -> PostulationReport:
    """Decide good postulation of a general scheme in degree ``d``.

    The generic rank is the maximum over specializations, so up to
    ``trials`` independent support draws are made and the best rank kept;
    drawing stops as soon as the rank is maximal.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    _check_field(scheme, d, prime)
    n = scheme.ambient_dim
    N = comb(d + n, n)
    target = min(N, scheme.degree)
    all_explicit = all(c.is_explicit for c in scheme.components)
    best = -1
    used = 0
    for trial in range(trials):
        used += 1
        matrix = build_matrix(scheme, d, prime, trial_seed(seed, trial, scheme, d))
        best = max(best, rank(matrix, prime))
        if best == target or all_explicit:
            break
    return PostulationReport(n, scheme.signature, d, N, scheme.degree, best, used, seed, prime)


def oracle_check(scheme: FatPointScheme, d: int, max_columns: int = ORACLE_MAX_COLUMNS) -> PostulationReport:
    """Exact characteristic-zero verdict for a scheme with explicit supports."""
    n = scheme.ambient_dim
    N = comb(d + n, n)
    if N > max_columns:
        raise ValueError(f"{N} monomials exceeds the oracle bound {max_columns}")
    r = rational_rank(build_rational_matrix(scheme, d)) if scheme.components else 0
    return PostulationReport(n, scheme.signature, d, N, scheme.degree, r, 1, None, None)


def assign_integer_supports(scheme: FatPointScheme, seed: int = 0, bound: int = 10**4) -> FatPointScheme:
    """Replace non-explicit supports by random integer points in ``[-bound, bound]``.

    Components flagged on the hyperplane get last coordinate 0.
    """
    rng = np.random.default_rng(seed)
    n = scheme.ambient_dim
    comps = []
    for comp in scheme.components:
        if comp.is_explicit:
            comps.append(comp)
            continue
        while True:
            point = [int(v) for v in rng.integers(-bound, bound + 1, size=n + 1)]
            if comp.support is Support.ON_HYPERPLANE:
                point[n] = 0
            if any(point):
                break
        comps.append(FatPointComponent(comp.multiplicity, tuple(point)))
    return FatPointScheme(n, tuple(comps))
