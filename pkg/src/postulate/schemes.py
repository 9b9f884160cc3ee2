"""Combinatorial model of fat point schemes in projective space.

A fat point scheme is stored as plain data: the ambient dimension plus a
multiset of (multiplicity, support) components.  Nothing here touches
coordinates beyond carrying them around; lengths, degrees and expected
cohomology are pure integer arithmetic.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence, Union


class Support(enum.Enum):
    """Placement of a component whose coordinates are not given explicitly."""

    GENERIC = "generic"
    ON_HYPERPLANE = "on_hyperplane"  # general point of {x_n = 0}


Coordinate = Union[int, Fraction]
SupportSpec = Union[Support, tuple]


def fat_point_length(n: int, m: int) -> int:
    """Number of linear conditions imposed by an ``m``-point of ``P^n``."""
    if n < 1:
        raise ValueError(f"ambient dimension must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"multiplicity must be >= 1, got {m}")
    return comb(n + m - 1, n)


@dataclass(frozen=True)
class FatPointComponent:
    multiplicity: int
    support: SupportSpec = Support.GENERIC

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError(f"multiplicity must be >= 1, got {self.multiplicity}")
        if not isinstance(self.support, Support):
            coords = tuple(self.support)
            if not coords or all(c == 0 for c in coords):
                raise ValueError("explicit support must have a nonzero coordinate")
            object.__setattr__(self, "support", coords)

    @property
    def is_explicit(self) -> bool:
        return not isinstance(self.support, Support)


@dataclass(frozen=True)
class FatPointScheme:
    """A union ``m_1 P_1 + ... + m_k P_k`` in ``P^n``.

    Components are kept sorted by decreasing multiplicity; the sort is
    stable, so explicit supports keep their relative order.
    """

    ambient_dim: int
    components: tuple[FatPointComponent, ...] = ()

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError(f"ambient dimension must be >= 1, got {self.ambient_dim}")
        comps = tuple(sorted(self.components, key=lambda c: -c.multiplicity))
        for c in comps:
            if c.is_explicit and len(c.support) != self.ambient_dim + 1:
                raise ValueError(
                    f"support {c.support} has {len(c.support)} coordinates, "
                    f"expected {self.ambient_dim + 1}"
                )
        object.__setattr__(self, "components", comps)

    @classmethod
    def general(cls, n: int, counts: dict[int, int] | Iterable[tuple[int, int]],
                support: Support = Support.GENERIC) -> "FatPointScheme":
        """Scheme of general points, ``counts`` mapping multiplicity to how many."""
        items = counts.items() if isinstance(counts, dict) else counts
        comps = []
        for m, k in items:
            if k < 0:
                raise ValueError(f"negative count {k} for multiplicity {m}")
            comps.extend(FatPointComponent(m, support) for _ in range(k))
        return cls(n, tuple(comps))

    @classmethod
    def quartic_type(cls, x: int, y: int, z: int) -> "FatPointScheme":
        """``x`` 4-points, ``y`` 3-points and ``z`` 2-points of ``P^3``."""
        return cls.general(3, {4: x, 3: y, 2: z})

    @property
    def degree(self) -> int:
        return sum(fat_point_length(self.ambient_dim, c.multiplicity) for c in self.components)

    @property
    def max_multiplicity(self) -> int:
        return max((c.multiplicity for c in self.components), default=0)

    @property
    def signature(self) -> tuple[tuple[int, int], ...]:
        """``((m, count), ...)`` by decreasing ``m``."""
        counts = Counter(c.multiplicity for c in self.components)
        return tuple(sorted(counts.items(), reverse=True))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[FatPointComponent]:
        return iter(self.components)

    def union(self, other: "FatPointScheme | Iterable[FatPointComponent]") -> "FatPointScheme":
        extra = other.components if isinstance(other, FatPointScheme) else tuple(other)
        if isinstance(other, FatPointScheme) and other.ambient_dim != self.ambient_dim:
            raise ValueError("cannot unite schemes in different ambient spaces")
        return FatPointScheme(self.ambient_dim, self.components + tuple(extra))


def format_signature(signature: Sequence[tuple[int, int]]) -> str:
    """Render a signature in the ``m:count,...`` grammar used on the command line."""
    return ",".join(f"{m}:{k}" for m, k in signature if k)


def parse_signature(text: str) -> tuple[tuple[int, int], ...]:
    """Parse ``"4:9"`` or ``"5:3,4:7"``; the empty string is the empty scheme."""
    out: Counter[int] = Counter()
    text = text.strip()
    if not text:
        return ()
    for item in text.split(","):
        try:
            m_text, k_text = item.split(":")
            m, k = int(m_text), int(k_text)
        except ValueError:
            raise ValueError(f"bad point spec {item!r}, expected m:count") from None
        if m < 1:
            raise ValueError(f"multiplicity must be >= 1 in {item!r}")
        if k < 0:
            raise ValueError(f"negative count in {item!r}")
        out[m] += k
    return tuple(sorted(((m, k) for m, k in out.items() if k), reverse=True))


@dataclass(frozen=True)
class PostulationExpectation:
    degree_d: int
    N: int
    scheme_degree: int
    expected_h0: int = field(init=False)
    expected_h1: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "expected_h0", max(0, self.N - self.scheme_degree))
        object.__setattr__(self, "expected_h1", max(0, self.scheme_degree - self.N))


def expected_cohomology(scheme: FatPointScheme, d: int) -> PostulationExpectation:
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    return PostulationExpectation(d, comb(d + scheme.ambient_dim, scheme.ambient_dim), scheme.degree)


def epsilon(d: int, x: int, y: int, z: int) -> int:
    """Slack ``binom(d+3, 3) - 20x - 10y - 4z`` of ``x`` 4-, ``y`` 3-, ``z`` 2-points."""
    return comb(d + 3, 3) - 20 * x - 10 * y - 4 * z


EPSILON_MIN = -19
EPSILON_MAX = 3


def boundary_triples(d: int) -> list[tuple[int, int, int]]:
    """Triples ``(x, y, z)`` with ``-19 <= epsilon(d, x, y, z) <= 3``.

    Loop bounds are ``x <= ceil(N/20)``, ``y <= ceil(N/10)``,
    ``z <= ceil(N/4)`` with ``N = binom(d+3, 3)``, as in the original sweep
    script; output is in lexicographic order.
    """
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    N = comb(d + 3, 3)
    x_max, y_max, z_max = -(-N // 20), -(-N // 10), -(-N // 4)
    lo, hi = N - EPSILON_MAX, N - EPSILON_MIN  # window for 20x + 10y + 4z
    out = []
    for x in range(x_max + 1):
        for y in range(y_max + 1):
            used = 20 * x + 10 * y
            if used > hi:
                break
            z_lo = max(0, -(-(lo - used) // 4))
            z_hi = min(z_max, (hi - used) // 4)
            out.extend((x, y, z) for z in range(z_lo, z_hi + 1))
    return out


def _on_hyperplane(comp: FatPointComponent) -> bool:
    if comp.is_explicit:
        return comp.support[-1] == 0
    return comp.support is Support.ON_HYPERPLANE


def hyperplane_trace(scheme: FatPointScheme) -> FatPointScheme:
    """Intersection with ``H = {x_n = 0}`` as a scheme of ``H = P^(n-1)``.

    An ``m``-point supported on ``H`` traces to an ``m``-point of ``H``;
    components off ``H`` have empty trace.
    """
    n = scheme.ambient_dim
    if n < 2:
        raise ValueError("the hyperplane of P^1 is a point")
    comps = []
    for c in scheme.components:
        if _on_hyperplane(c):
            support = c.support[:n] if c.is_explicit else Support.GENERIC
            comps.append(FatPointComponent(c.multiplicity, support))
    return FatPointScheme(n - 1, tuple(comps))


def hyperplane_residual(scheme: FatPointScheme) -> FatPointScheme:
    """Residual with respect to ``H = {x_n = 0}``: ``m``-points on ``H`` drop to ``(m-1)``-points."""
    comps = []
    for c in scheme.components:
        if not _on_hyperplane(c):
            comps.append(c)
        elif c.multiplicity > 1:
            comps.append(FatPointComponent(c.multiplicity - 1, c.support))
    return FatPointScheme(scheme.ambient_dim, tuple(comps))
