"""Layer bookkeeping for the differential Horace method in ``P^3``.

Everything lives in ``P^3`` with a fixed plane ``H``.  A component supported
on ``H`` is described by its layers: the fat points of ``H`` obtained by
repeatedly intersecting with ``H`` and taking the residual.  A plain
``m``-point on ``H`` has layers ``(m, m-1, ..., 1)``; the differential
splitting of an ``m``-point reorders them so that a chosen layer comes
first, e.g. a 4-point can be made to show only a simple point on ``H``
(lengths ``1, 10, 6, 3``).

Off-plane components are only counted (``c2``, ``c3``, ``c4``): they are
general fat points of ``P^3`` and do not meet ``H``.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

from postulate.schemes import fat_point_length


def layer_length(mult: int) -> int:
    """Length of an ``mult``-point of the plane: 1, 3, 6, 10 for ``mult`` = 1..4."""
    return fat_point_length(2, mult)


# (multiplicity of the split point, layer multiplicities), keyed by case label
DIFFERENTIAL_CASES: dict[str, tuple[int, tuple[int, ...]]] = {
    "i": (2, (1, 2)),
    "ii": (3, (1, 3, 2)),
    "iii": (3, (2, 3, 1)),
    "iv": (4, (1, 4, 3, 2)),
    "v": (4, (2, 4, 3, 1)),
    "vi": (4, (3, 4, 2, 1)),
}

PLAIN = "plain"


@dataclass(frozen=True)
class VirtualComponent:
    """Ordered layers of a component supported on ``H``; the first is its trace."""

    layers: tuple[int, ...]
    origin: str = PLAIN

    @classmethod
    def plain(cls, m: int) -> "VirtualComponent":
        if m < 1:
            raise ValueError(f"multiplicity must be >= 1, got {m}")
        return cls(tuple(range(m, 0, -1)))

    @classmethod
    def differential(cls, case: str) -> "VirtualComponent":
        _, layers = DIFFERENTIAL_CASES[case]
        return cls(layers, case)

    @property
    def lengths(self) -> tuple[int, ...]:
        return _lengths(self.layers)

    @property
    def degree(self) -> int:
        return sum(self.lengths)

    @property
    def is_simple_point(self) -> bool:
        return self.layers == (1,)


@lru_cache(maxsize=None)
def _lengths(layers: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(layer_length(m) for m in layers)


def differential_lengths(case: str) -> tuple[int, ...]:
    """Layer lengths of a case, e.g. ``(1, 10, 6, 3)`` for ``"iv"``."""
    return _lengths(DIFFERENTIAL_CASES[case][1])


# sequence of lengths -> case label, as the sequences are usually quoted
CASE_BY_LENGTHS = {differential_lengths(c): c for c in DIFFERENTIAL_CASES}

# cases whose trace is a single simple point of H
SIMPLE_TRACE_CASES = frozenset(c for c in DIFFERENTIAL_CASES if differential_lengths(c)[0] == 1)


def trace_and_residual(component: VirtualComponent | int) -> tuple[int, VirtualComponent | None]:
    """Trace length on ``H`` and the residual component (None once exhausted).

    An ``int`` stands for a plain point of that multiplicity on ``H``.
    """
    if isinstance(component, int):
        component = VirtualComponent.plain(component)
    if not component.layers:
        raise ValueError("component has no layers left")
    rest = component.layers[1:]
    return component.lengths[0], (VirtualComponent(rest, component.origin) if rest else None)


class LemmaVerdict(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    HYPOTHESIS_NOT_MET = "HypothesisNotMet"


ADMISSIBLE_EFG = (
    (0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 0), (0, 1, 1),
    (0, 1, 2), (1, 0, 0), (1, 0, 1), (1, 0, 2), (1, 1, 0),
)
_EFG_BY_BETA = {6 * e + 3 * f + g: (e, f, g) for e, f, g in ADMISSIBLE_EFG}


def decompose_beta(beta: int) -> tuple[int, int, int]:
    """The admissible ``(e, f, g)`` with ``6e + 3f + g == beta``, for ``0 <= beta <= 9``."""
    try:
        return _EFG_BY_BETA[beta]
    except KeyError:
        raise ValueError(f"beta must lie in [0, 9], got {beta}") from None


def lemma_threshold(e: int, f: int, g: int) -> int:
    if e == f == g == 0:
        return 3
    if e + f + g <= 2:
        return 12
    return 14


def lemma_c1_check(t: int, a: int, b: int, c: int, u: int, e: int, f: int, g: int) -> LemmaVerdict:
    """Numeric residual-trace lemma for plane traces.

    Hypothesis: ``10a + 6b + 3c + u + 6e + 3f + g <= binom(t+2, 2)`` and
    ``t`` at least the threshold of ``(e, f, g)``.  Conclusion:
    ``6a + 3b + c + 10(e + f + g) <= binom(t+1, 2)``.
    """
    if (e, f, g) not in ADMISSIBLE_EFG:
        raise ValueError(f"(e, f, g) = {(e, f, g)} is not an admissible triple")
    if min(t, a, b, c, u) < 0:
        raise ValueError("arguments must be non-negative")
    if 10 * a + 6 * b + 3 * c + u + 6 * e + 3 * f + g > comb(t + 2, 2):
        return LemmaVerdict.HYPOTHESIS_NOT_MET
    if t < lemma_threshold(e, f, g):
        return LemmaVerdict.HYPOTHESIS_NOT_MET
    if 6 * a + 3 * b + c + 10 * (e + f + g) <= comb(t + 1, 2):
        return LemmaVerdict.HOLDS
    return LemmaVerdict.FAILS


def lemma_2_4_bound(h0_Y: int, h0_res: int, gamma: int, z: int) -> int | None:
    """Bound on ``h0`` after adding ``z`` general simple points of ``H``.

    Returns ``gamma`` when ``h0_Y <= gamma + z`` and ``h0_res <= gamma``
    (``h0_res`` being the residual in degree one less), else None.
    """
    if min(h0_Y, h0_res, gamma, z) < 0:
        raise ValueError("arguments must be non-negative")
    if h0_Y <= gamma + z and h0_res <= gamma:
        return gamma
    return None


# trace lengths of a plain 4-, 3-, 2-point moved onto H
PLAIN_TRACE = {4: 10, 3: 6, 2: 3}


def max_specialized_trace(beta: int, c4: int, c3: int, c2: int) -> tuple[int, int, int]:
    """How many off-plane 4-, 3-, 2-points to move onto ``H``.

    Maximizes ``10*k4 + 6*k3 + 3*k2 <= beta`` with ``k_i <= c_i``; among
    optimal choices the lexicographically largest ``(k4, k3)`` is returned.
    Some optimum has ``k4`` within 2 of its cap (three 4-points can replace
    any 30 units of 3- and 6-traces without losing value), and for fixed
    ``k4`` the 6/3 part is solved greedily since 3 divides 6.
    """
    if min(beta, c4, c3, c2) < 0:
        raise ValueError("arguments must be non-negative")
    cap = min(c4, beta // 10)
    best = None
    for k4 in range(cap, max(-1, cap - 3), -1):
        room = beta - 10 * k4
        k3 = min(c3, room // 6)
        k2 = min(c2, (room - 6 * k3) // 3)
        value = 10 * k4 + 6 * k3 + 3 * k2
        if best is None or value > best[0]:
            best = (value, (k4, k3, k2))
    return best[1]


# one-component options when everything must go onto H, in preference order
_SPECIALIZATION_OPTIONS = {
    2: (PLAIN, "i"),
    3: (PLAIN, "iii", "ii"),
    4: (PLAIN, "vi", "v", "iv"),
}


class _ShapeTable:
    """Integer ids for virtual components, with their layer data precomputed.

    The descent touches a few dozen distinct components millions of times;
    working on ``{id: count}`` dicts keeps each step to a handful of list
    lookups.
    """

    def __init__(self):
        self.ids: dict[VirtualComponent, int] = {}
        self.components: list[VirtualComponent] = []
        self.lengths: list[tuple[int, ...]] = []
        self.trace: list[int] = []
        self.second: list[int] = []
        self.degree: list[int] = []
        self.below_second: list[int] = []  # degree left after two residuals
        self.rest: list[int] = []  # id of the residual, -1 once exhausted
        self.simple: list[bool] = []
        self.lemma_slot: list[int] = []  # index into (a, b, c, u, e, f, g)

    def id_of(self, comp: VirtualComponent) -> int:
        i = self.ids.get(comp)
        if i is not None:
            return i
        rest = comp.layers[1:]
        rest_id = self.id_of(VirtualComponent(rest, comp.origin)) if rest else -1
        i = len(self.components)
        lengths = comp.lengths
        first = lengths[0]
        nxt = lengths[1] if len(lengths) > 1 else 0
        if first == 10:
            slot = 0
        elif first == 6:
            slot = 4 if nxt > 3 else 1
        elif first == 3:
            slot = 5 if nxt > 1 else 2
        else:
            slot = 6 if nxt > 0 else 3
        self.ids[comp] = i
        self.components.append(comp)
        self.lengths.append(lengths)
        self.trace.append(first)
        self.second.append(nxt)
        self.degree.append(sum(lengths))
        self.below_second.append(sum(lengths[2:]))
        self.rest.append(rest_id)
        self.simple.append(comp.is_simple_point)
        self.lemma_slot.append(slot)
        return i


SHAPES = _ShapeTable()
_PLAIN_ID = {m: SHAPES.id_of(VirtualComponent.plain(m)) for m in (1, 2, 3, 4)}
_CASE_ID = {case: SHAPES.id_of(VirtualComponent.differential(case)) for case in DIFFERENTIAL_CASES}
_CASE_MULT = {case: m for case, (m, _) in DIFFERENTIAL_CASES.items()}
_SPECIALIZATION_IDS = {
    m: tuple((case, _PLAIN_ID[m] if case == PLAIN else _CASE_ID[case]) for case in cases)
    for m, cases in _SPECIALIZATION_OPTIONS.items()
}


@dataclass(frozen=True)
class StarScheme:
    """A scheme of type (star) in degree ``t``.

    ``on_h`` holds ``(component, count)`` pairs in canonical order;
    ``c2``, ``c3``, ``c4`` count plain fat points off ``H``; ``simple_on_h``
    counts reduced points of ``H`` kept apart from ``on_h``.
    """

    t: int
    on_h: tuple[tuple[VirtualComponent, int], ...] = ()
    c2: int = 0
    c3: int = 0
    c4: int = 0
    simple_on_h: int = 0

    def __post_init__(self):
        if min(self.c2, self.c3, self.c4, self.simple_on_h) < 0:
            raise ValueError("component counts must be non-negative")
        merged: Counter[VirtualComponent] = Counter()
        for comp, k in self.on_h:
            if k < 0:
                raise ValueError("component counts must be non-negative")
            if comp.layers and k:
                merged[comp] += k
        object.__setattr__(self, "on_h", _canonical(merged))

    @classmethod
    def from_counts(cls, t: int, on_h: Mapping[VirtualComponent, int] | Iterable = (), **kw) -> "StarScheme":
        items = on_h.items() if isinstance(on_h, Mapping) else on_h
        return cls(t, tuple(items), **kw)

    @property
    def off_h_degree(self) -> int:
        return 4 * self.c2 + 10 * self.c3 + 20 * self.c4

    @property
    def degree(self) -> int:
        return sum(comp.degree * k for comp, k in self.on_h) + self.off_h_degree + self.simple_on_h

    @property
    def trace_degree(self) -> int:
        """``deg(Y ∩ H)``."""
        return layer_sum(self.on_h, 0) + self.simple_on_h

    @property
    def off_h_count(self) -> int:
        return self.c2 + self.c3 + self.c4

    def _id_counts(self) -> dict[int, int]:
        return {SHAPES.id_of(comp): k for comp, k in self.on_h}


def _canonical(counts: Mapping[VirtualComponent, int]) -> tuple[tuple[VirtualComponent, int], ...]:
    return tuple(sorted(((c, k) for c, k in counts.items() if k),
                        key=lambda item: (item[0].layers, item[0].origin)))


def _from_ids(t: int, on: Mapping[int, int], c2: int, c3: int, c4: int, simple: int = 0) -> StarScheme:
    comps = SHAPES.components
    return StarScheme(t, tuple((comps[i], k) for i, k in on.items()), c2, c3, c4, simple)


def layer_sum(on_h: Iterable[tuple[VirtualComponent, int]], depth: int) -> int:
    """Total length of the ``depth``-th layers (0 = trace)."""
    total = 0
    for comp, k in on_h:
        lengths = comp.lengths
        if depth < len(lengths):
            total += lengths[depth] * k
    return total


class Outcome(str, enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"


@dataclass(frozen=True)
class Degeneration:
    """Result of specializing a star scheme toward a filled trace on ``H``."""

    outcome: Outcome
    scheme: StarScheme  # the degenerate scheme X, same degree t
    beta_initial: int
    beta: int  # after moving plain components onto H
    efg: tuple[int, int, int] | None
    moved: tuple[int, int, int]  # plain (k4, k3, k2) moved onto H
    applications: tuple[tuple[str, int], ...]  # differential case -> count
    off_h_at_decision: tuple[int, int, int]  # (c2, c3, c4) after the move

    @property
    def simple_trace_applications(self) -> int:
        return sum(k for case, k in self.applications if case in SIMPLE_TRACE_CASES)


def degenerate(scheme: StarScheme) -> Degeneration:
    """Specialize ``scheme`` so its trace on ``H`` is filled (type I) or everything lies on ``H`` (type II).

    First as many plain off-plane points as possible are moved onto ``H``
    without exceeding ``binom(t+2, 2)``; the remaining gap ``beta < 10`` is
    then closed with differential splittings, preferring the lowest
    multiplicity that can serve.
    """
    step = _degenerate_ids(scheme.t, scheme._id_counts(), scheme.c2, scheme.c3, scheme.c4,
                           scheme.simple_on_h)
    outcome, on, (c2, c3, c4), beta0, beta, efg, moved, apps, decision = step
    x = _from_ids(scheme.t, on, c2, c3, c4, scheme.simple_on_h)
    return Degeneration(outcome, x, beta0, beta, efg, moved, tuple(sorted(apps.items())), decision)


def _degenerate_ids(t: int, on: Mapping[int, int], c2: int, c3: int, c4: int, simple: int = 0):
    trace = SHAPES.trace
    beta0 = comb(t + 2, 2) - simple - sum(trace[i] * k for i, k in on.items())
    if beta0 < 0:
        raise ValueError(f"trace degree exceeds binom({t}+2, 2) by {-beta0}")
    on = dict(on)
    k4, k3, k2 = moved = max_specialized_trace(beta0, c4, c3, c2)
    for m, k in ((4, k4), (3, k3), (2, k2)):
        if k:
            i = _PLAIN_ID[m]
            on[i] = on.get(i, 0) + k
    c4, c3, c2 = c4 - k4, c3 - k3, c2 - k2
    decision = (c2, c3, c4)
    beta = beta0 - 10 * k4 - 6 * k3 - 3 * k2
    apps: dict[str, int] = {}
    off = {2: c2, 3: c3, 4: c4}

    def split(case: str, k: int = 1):
        if k > 0:
            i = _CASE_ID[case]
            on[i] = on.get(i, 0) + k
            apps[case] = apps.get(case, 0) + k
            off[_CASE_MULT[case]] -= k

    def done(outcome: Outcome, efg):
        return outcome, on, (off[2], off[3], off[4]), beta0, beta, efg, moved, apps, decision

    if beta == 0:
        return done(Outcome.TYPE_I, (0, 0, 0))
    if c2 == c3 == c4 == 0:
        return done(Outcome.TYPE_II, None)

    e, f, g = efg = decompose_beta(beta)
    if c2 > 0:
        if c2 >= g:
            split("i", g)
            return done(Outcome.TYPE_I, efg)
        # one double point, g == 2: pair it with a 3- or 4-point if there is one
        split("i")
        if c3:
            split("ii")
        elif c4:
            split("iv")
        else:
            return done(Outcome.TYPE_II, efg)
        return done(Outcome.TYPE_I, efg)

    if c3 > 0:
        if c3 >= f + g:
            split("iii", f)
            split("ii", g)
            return done(Outcome.TYPE_I, efg)
        if c4 >= f + g - c3:
            carriers = [3] * c3 + [4] * (f + g - c3)
            for slot, m in enumerate(carriers):
                big = slot < f
                split(("iii" if big else "ii") if m == 3 else ("v" if big else "iv"))
            return done(Outcome.TYPE_I, efg)
        _fill_plane(on, apps, beta, {3: c3, 4: c4})
        off[3] = off[4] = 0
        return done(Outcome.TYPE_II, efg)

    if c4 >= e + f + g:
        split("vi", e)
        split("v", f)
        split("iv", g)
        return done(Outcome.TYPE_I, efg)
    _fill_plane(on, apps, beta, {4: c4})
    off[4] = 0
    return done(Outcome.TYPE_II, efg)


def _fill_plane(on: dict[int, int], apps: dict[str, int], beta: int, remaining: dict[int, int]):
    """Put every remaining off-plane point on ``H`` with the largest total trace ``<= beta``."""
    points = [m for m, k in sorted(remaining.items()) for _ in range(k)]
    trace = SHAPES.trace
    best = None
    for choice in itertools.product(*(_SPECIALIZATION_IDS[m] for m in points)):
        total = sum(trace[i] for _, i in choice)
        if total <= beta and (best is None or total > best[0]):
            best = (total, choice)
    if best is None:
        raise ValueError(f"cannot place {points} on H within beta = {beta}")
    for case, i in best[1]:
        on[i] = on.get(i, 0) + 1
        if case != PLAIN:
            apps[case] = apps.get(case, 0) + 1


@dataclass(frozen=True)
class Residual:
    """``Res_H(X)`` split into its unreduced part and its simple points of ``H``."""

    scheme: StarScheme  # Y_{t-1}, in degree t - 1
    simple_points: int  # z_{t-1}


def residual(x: StarScheme) -> Residual:
    """Residual of ``x`` with respect to ``H``; simple points of ``H`` are split off."""
    out, simple = _residual_ids(x._id_counts())
    return Residual(_from_ids(x.t - 1, out, x.c2, x.c3, x.c4), simple)


def _residual_ids(on: Mapping[int, int]) -> tuple[dict[int, int], int]:
    rest, is_simple = SHAPES.rest, SHAPES.simple
    out: dict[int, int] = {}
    simple = 0
    for i, k in on.items():
        r = rest[i]
        if r < 0:
            continue
        if is_simple[r]:
            simple += k
        else:
            out[r] = out.get(r, 0) + k
    return out, simple


def lemma_inputs(x: StarScheme) -> tuple[int, int, int, int, int, int, int]:
    """Classify the on-plane part of ``x`` as ``(a, b, c, u, e, f, g)``.

    A component with trace 10, 6, 3 or 1 whose next layer is at most 6, 3,
    1 or 0 respectively counts toward ``a``, ``b``, ``c``, ``u``; a trace
    6, 3 or 1 followed by anything larger counts toward ``e``, ``f``, ``g``.
    Off-plane points do not enter.
    """
    out = _lemma_inputs_ids(x._id_counts())
    out[3] += x.simple_on_h
    return tuple(out)


def _lemma_inputs_ids(on: Mapping[int, int]) -> list[int]:
    out = [0] * 7
    slot = SHAPES.lemma_slot
    for i, k in on.items():
        out[slot[i]] += k
    return out
