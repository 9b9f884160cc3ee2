"""Step-by-step verification of the Horace descent for quartuple schemes.

Starting from ``x`` 4-points, ``y`` 3-points and ``z`` 2-points in degree
``d``, each step specializes the current scheme toward ``H`` (see
:func:`postulate.horace.degenerate`), takes the residual and splits off
the simple points of ``H``.  The descent stops at the first scheme whose
specialization leaves everything on ``H`` with slack in the trace.  Along
the way every numeric inequality the argument relies on is evaluated on
the actual ledger; cohomology is never computed here.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass
from functools import lru_cache
from math import comb

from postulate.horace import (
    ADMISSIBLE_EFG,
    SHAPES,
    SIMPLE_TRACE_CASES,
    LemmaVerdict,
    Outcome,
    _degenerate_ids,
    _lemma_inputs_ids,
    _residual_ids,
    lemma_c1_check,
)
from postulate.schemes import EPSILON_MAX, EPSILON_MIN, epsilon

MIN_DEGREE = 41
# plane postulation results used as black boxes, with their degree thresholds
PLANE_QUARTIC_MIN_DEGREE = 12  # general plane schemes of multiplicity <= 4
PLANE_TRIPLE_MIN_DEGREE = 9  # multiplicity <= 3
PLANE_DOUBLE_MIN_DEGREE = 5  # double and simple points
SLACK_MIN_DEGREE = 13  # the all-on-H case needs four plane steps from here


class Status(str, enum.Enum):
    VERIFIED = "Verified"
    FAILED = "Failed"


_TYPE_I = Outcome.TYPE_I.value


@dataclass(frozen=True)
class StepRecord:
    """Ledger of one step ``Y_t -> X_t -> Res_H(X_t) = Y_{t-1} + Z_{t-1}``.

    ``z`` is the number of simple points of ``H`` split off by this step
    (``z_{t-1}``); ``delta`` is set only for filled (type I) steps.
    """

    t: int
    alpha: int
    beta_initial: int
    beta: int
    efg: tuple[int, int, int] | None
    outcome: str
    moved: tuple[int, int, int]
    applications: tuple[tuple[str, int], ...]
    trace_degree: int
    residual_trace_degree: int
    z: int
    delta: int | None
    gamma: int
    checks: tuple[tuple[str, bool], ...]
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    @property
    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]


@dataclass(frozen=True)
class InductionTrace:
    d: int
    x: int
    y: int
    z: int
    epsilon: int
    steps: tuple[StepRecord, ...]
    status: Status
    global_checks: tuple[tuple[str, bool], ...] = ()
    failure: tuple[int | None, str] | None = None  # (t or None for global, check name)

    @property
    def filled_steps(self) -> int:
        """Number of type I steps before the all-on-``H`` step (``w``)."""
        return sum(1 for s in self.steps if s.outcome == Outcome.TYPE_I.value)

    @property
    def final_degree(self) -> int | None:
        last = self.steps[-1] if self.steps else None
        if last is not None and last.outcome == Outcome.TYPE_II.value:
            return last.t
        return None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["status"] = self.status.value
        out["filled_steps"] = self.filled_steps
        out["final_degree"] = self.final_degree
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_text(self) -> str:
        """One line per step, then a status line."""
        lines = [f"# d={self.d} x={self.x} y={self.y} z={self.z} epsilon={self.epsilon}"]
        for s in self.steps:
            efg = ",".join(map(str, s.efg)) if s.efg is not None else "-"
            bad = s.failed_checks
            checks = "ok" if not bad else "FAIL:" + ",".join(bad)
            lines.append(
                f"t={s.t} alpha={s.alpha} z={s.z} beta={s.beta} efg={efg} "
                f"type={s.outcome} checks={checks}"
            )
        bad = [name for name, ok in self.global_checks if not ok]
        lines.append(
            f"status={self.status.value} w={self.filled_steps} "
            f"final_t={self.final_degree if self.final_degree is not None else '-'} "
            f"global={'ok' if not bad else 'FAIL:' + ','.join(bad)}"
        )
        return "\n".join(lines) + "\n"


def _binom2(t: int) -> int:
    return comb(t + 2, 2)


def _slack_layer_checks(t: int, on: dict[int, int], degree: int) -> list[tuple[str, bool]]:
    """Four successive plane traces of an all-on-``H`` scheme in degree ``t``."""
    sums = [0] * 5
    tops = [0] * 5
    for i, k in on.items():
        for depth, length in enumerate(SHAPES.lengths[i][:5]):
            sums[depth] += length * k
            tops[depth] = max(tops[depth], length)
    return [
        ("slack_degree", t >= SLACK_MIN_DEGREE),
        ("slack_trace_0", sums[0] <= comb(t + 2, 2) and t >= PLANE_QUARTIC_MIN_DEGREE),
        ("slack_trace_1", sums[1] <= comb(t + 1, 2) and t - 1 >= PLANE_QUARTIC_MIN_DEGREE),
        ("slack_trace_2", sums[2] <= comb(t, 2) and tops[2] <= 6
         and t - 2 >= PLANE_TRIPLE_MIN_DEGREE),
        ("slack_trace_3", tops[3] <= 3 and t - 3 >= PLANE_DOUBLE_MIN_DEGREE),
        ("slack_exhausted", sums[4] == 0),
        ("slack_total_degree",
         degree <= comb(t + 2, 2) + comb(t + 1, 2) + comb(t, 2) + comb(t - 1, 2) <= comb(t + 3, 3)),
    ]


def _lemma_check(t: int, on: dict[int, int]) -> bool:
    """The numeric lemma, when applicable, must not contradict the observed residual trace."""
    a, b, c, u, e, f, g = _lemma_inputs_ids(on)
    if (e, f, g) not in ADMISSIBLE_EFG:
        return True
    return lemma_c1_check(t, a, b, c, u, e, f, g) is not LemmaVerdict.FAILS


def _weighted(table: list[int], on: dict[int, int]) -> int:
    return sum(table[i] * k for i, k in on.items())


def descent_bound(d: int, s: int) -> int:
    """``binom(s+3, 3) + 2(13 - s) - binom(16, 3)`` with ``s = d - v``; vanishes at 13."""
    return comb(s + 3, 3) + 2 * (SLACK_MIN_DEGREE - s) - comb(16, 3)


@lru_cache(maxsize=None)
def _descent_bound_shape(d: int) -> bool:
    return descent_bound(d, SLACK_MIN_DEGREE) == 0 and all(
        descent_bound(d, r) <= descent_bound(d, r + 1) for r in range(d))


def global_checks(d: int, x: int, y: int, z: int, steps: list[StepRecord]) -> list[tuple[str, bool]]:
    """Counting inequalities over the whole descent, in exact arithmetic.

    Every quantity is scaled by 120 so that halves, thirds and twentieths
    stay integral.
    """
    S = 120
    N = comb(d + 3, 3)
    eps = epsilon(d, x, y, z)
    k = x + y + z
    w = 0
    z_sum = 0
    for s in steps:
        if s.outcome == _TYPE_I:
            w += 1
            z_sum += s.z
    gamma = steps[-1].gamma if steps else 0
    alpha_end = steps[-1].alpha  # deg Y_{d-w}
    top = comb(d + 3 - w, 3)
    f20 = 6 * N - 18  # (N - 3) / 20, scaled

    # the yield inequality evaluated for a hypothetical full descent of d steps
    full_yield = 180 * k - S * 3 * d - 60 + 60 * eps
    full_bound = 9 * N - S * 3 * d - S * 10 - 27

    chain_0 = S * alpha_end
    chain_1 = S * (-eps + top + 2 * w) - f20 + 40 * alpha_end
    chain_2 = S * (-eps + top + 2 * w) - f20 - 80 * alpha_end
    chain_3 = S * (19 + top + 2 * w) - f20
    s = d - w
    k_min = -(-(N - 3) // 20)
    return [
        ("component_count", k >= k_min and S * k_min >= f20),
        ("simple_trace_budget", gamma <= 2 * w),
        ("simple_point_yield", S * z_sum >= S * (k - 2 * w) - 40 * alpha_end),
        ("degree_ledger", alpha_end == top - eps - z_sum),
        ("yield_closed_form", 2 * z_sum >= 3 * k - 6 * w - top + eps),
        ("full_descent_yield", full_yield >= full_bound and full_bound > S * 17),
        ("degree_margin", f20 - S * 19 >= S * (2 * (d - 13) + comb(16, 3))),
        ("descent_chain",
         chain_0 <= chain_1 and 0 <= chain_2 <= chain_3 <= S * descent_bound(d, s)),
        ("descent_bound_shape", _descent_bound_shape(d)),
        ("descent_depth", s >= SLACK_MIN_DEGREE and descent_bound(d, s) >= 0),
    ]


def run_induction(d: int, x: int, y: int, z: int) -> InductionTrace:
    """Trace the descent for ``x`` 4-, ``y`` 3-, ``z`` 2-points in degree ``d``.

    Requires ``d >= 41`` and ``-19 <= epsilon(d, x, y, z) <= 3``.  The
    trace is Verified when the all-on-``H`` case is reached in degree at
    least 13 with every step and global check passing; the first failed
    check is reported otherwise.
    """
    if min(x, y, z) < 0:
        raise ValueError("point counts must be non-negative")
    if d < MIN_DEGREE:
        raise ValueError(f"degree must be >= {MIN_DEGREE}, got {d}")
    eps = epsilon(d, x, y, z)
    if not EPSILON_MIN <= eps <= EPSILON_MAX:
        raise ValueError(f"epsilon = {eps} outside [{EPSILON_MIN}, {EPSILON_MAX}]")

    t, on, c2, c3, c4 = d, {}, z, y, x
    degree_of, trace_of = SHAPES.degree, SHAPES.trace
    second_of, below_second_of = SHAPES.second, SHAPES.below_second
    steps: list[StepRecord] = []
    gamma = 0

    def failed(t, name):
        return InductionTrace(d, x, y, z, eps, tuple(steps), Status.FAILED, failure=(t, name))

    while t >= 0:
        off_degree = 4 * c2 + 10 * c3 + 20 * c4
        alpha = _weighted(SHAPES.degree, on) + off_degree
        beta_initial = _binom2(t) - _weighted(SHAPES.trace, on)
        if beta_initial < 0:
            return failed(t, "trace_capacity")
        outcome, xs, off, _, beta, efg, moved, apps, decision = _degenerate_ids(t, on, c2, c3, c4)
        xs_degree = 4 * off[0] + 10 * off[1] + 20 * off[2]
        trace_deg = res_trace = below = 0
        for i, k in xs.items():
            xs_degree += degree_of[i] * k
            trace_deg += trace_of[i] * k
            res_trace += second_of[i] * k
            below += below_second_of[i] * k
        d2, d3, d4 = decision
        minimal = (
            (d2 == 0 or beta < 3)
            and (d2 > 0 or d3 == 0 or beta < 6)
            and (d2 + d3 > 0 or d4 == 0 or beta < 10)
        )
        simple_apps = sum(k for case, k in apps.items() if case in SIMPLE_TRACE_CASES)
        checks = [
            ("trace_capacity", True),
            ("degree_preserved", xs_degree == alpha),
            ("minimal_beta", minimal),
            ("residual_trace_bound", res_trace <= comb(t + 1, 2)),
            ("numeric_lemma", _lemma_check(t, xs)),
        ]
        notes: list[str] = []

        if outcome is Outcome.TYPE_II:
            checks += [
                ("all_on_plane", sum(off) == 0),
                ("slack_counts", d2 + d3 + d4 <= 2 and d2 + d3 + d4 < beta),
                ("slack_trace", trace_deg < _binom2(t)),
            ]
            checks += _slack_layer_checks(t, xs, xs_degree)
            # the residual should again leave slack one degree lower
            if res_trace == comb(t + 1, 2):
                notes.append("residual trace filled exactly in degree t-1")
            gamma_out = gamma
            z_out, delta = 0, None
        else:
            gamma_out = gamma + simple_apps
            y_on, z_out = _residual_ids(xs)
            c2, c3, c4 = off
            off_degree = 4 * c2 + 10 * c3 + 20 * c4
            y_degree = _weighted(SHAPES.degree, y_on) + off_degree
            delta = max(0, comb(t + 2, 3) - (y_degree + z_out))
            # Res_H of Y_{t-1} as it stands, before any specialization
            res_res = below + off_degree
            checks += [
                ("trace_filled", trace_deg == _binom2(t)),
                ("plane_degree", t >= PLANE_QUARTIC_MIN_DEGREE),
                ("simple_trace_per_step", simple_apps <= 2),
                ("delta_identity", delta == max(0, comb(t + 3, 3) - alpha)),
                ("residual_degree_floor", res_res >= comb(t + 1, 3) - delta),
            ]
        record = StepRecord(
            t, alpha, beta_initial, beta, efg, outcome.value, moved,
            tuple(sorted(apps.items())), trace_deg, res_trace, z_out, delta,
            gamma_out, tuple(checks), tuple(notes),
        )
        steps.append(record)
        if not record.passed:
            return failed(t, record.failed_checks[0])
        gamma = gamma_out
        if outcome is Outcome.TYPE_II:
            break
        t, on = t - 1, y_on
    else:
        return failed(None, "no_slack_step")

    glob = global_checks(d, x, y, z, steps)
    bad = [name for name, ok in glob if not ok]
    if bad:
        return InductionTrace(d, x, y, z, eps, tuple(steps), Status.FAILED, tuple(glob), (None, bad[0]))
    return InductionTrace(d, x, y, z, eps, tuple(steps), Status.VERIFIED, tuple(glob))
