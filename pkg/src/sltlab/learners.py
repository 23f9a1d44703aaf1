"""Inductive principles: empirical risk minimization, its penalized variant
over a weighted class sequence, and a memorizing baseline.

Both learners are deterministic: ties are broken by canonical enumeration
order (and by lower class position first for the penalized variant), so any
output is reproducible bit for bit.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

from .core import (
    DEFAULT_ENUMERATION_BUDGET,
    GridSpec,
    Hypothesis,
    HypothesisClass,
    LabeledSample,
    LookupTable,
    WeightedClassSequence,
    empirical_error_count,
    enumerate_class,
)

DEFAULT_SRM_C = 2.0


@dataclass(frozen=True)
class LearnerOutput:
    """A selected hypothesis with its empirical error and, for the penalized
    learner, the 1-based class position and penalized objective value."""

    hypothesis: Hypothesis
    empirical_error: float
    class_index: int | None = None
    objective: float | None = None
    penalty_config: dict | None = None

    def to_json(self) -> dict:
        out = {
            "hypothesis": self.hypothesis.to_json(),
            "empirical_error": self.empirical_error,
        }
        if self.class_index is not None:
            out["class_index"] = self.class_index
        if self.objective is not None:
            out["objective"] = self.objective
        if self.penalty_config is not None:
            out["penalty_config"] = self.penalty_config
        return out


def erm(
    H: HypothesisClass,
    S: LabeledSample,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> LearnerOutput:
    """First member of the enumerated class with minimal error on S.

    Mismatches are compared as integer counts, so ties are exact and the
    returned member is the earliest minimizer in canonical order.
    """
    if S.m == 0:
        raise ValueError("empirical risk minimization needs a nonempty sample")
    best_h: Hypothesis | None = None
    best_count = S.m + 1
    for h in enumerate_class(H, grid=grid, budget=budget):
        count = empirical_error_count(h, S)
        if count < best_count:
            best_h, best_count = h, count
            if count == 0:
                break
    assert best_h is not None
    return LearnerOutput(best_h, best_count / S.m)


def srm_penalty(d: int, weight: float, delta: float, m: int, C: float = DEFAULT_SRM_C) -> float:
    """Class-dependent accuracy penalty C * sqrt((d - ln(w * delta)) / m).

    Natural logarithm throughout.  The weighted confidence split w * delta
    must land strictly inside (0, 1).
    """
    wd = weight * delta
    if not (0.0 < wd < 1.0):
        raise ValueError(f"weight * delta must lie in (0, 1), got {wd}")
    if m < 1:
        raise ValueError("sample size must be at least 1")
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    return C * math.sqrt((d - math.log(wd)) / m)


def srm(
    seq: WeightedClassSequence,
    S: LabeledSample,
    delta: float,
    C: float = DEFAULT_SRM_C,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    vc_dims: tuple[int, ...] | None = None,
) -> LearnerOutput:
    """Minimize empirical error plus the class penalty over the whole sequence.

    Each class position n (1-based) contributes its best-fitting member at
    objective  L_S(h) + penalty(d_n, w_n) ; ties go to the lower position and
    then to canonical order inside the class.  Dimensions come from
    ``vc_dims`` when given, else from each class's ``vc_dim_hint``.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if S.m == 0:
        raise ValueError("the sample must be nonempty")
    if vc_dims is not None and len(vc_dims) != len(seq):
        raise ValueError("vc_dims must match the number of classes")

    dims: list[int] = []
    for pos, cls in enumerate(seq.classes, start=1):
        d = vc_dims[pos - 1] if vc_dims is not None else cls.vc_dim_hint
        if d is None:
            raise ValueError(
                f"class at position {pos} has no known finite dimension; pass vc_dims"
            )
        dims.append(int(d))

    penalties = [
        srm_penalty(d, w, delta, S.m, C=C) for d, w in zip(dims, seq.weights)
    ]

    best: LearnerOutput | None = None
    best_obj = math.inf
    for pos, (cls, pen) in enumerate(zip(seq.classes, penalties), start=1):
        inner = erm(cls, S, grid=grid, budget=budget)
        obj = inner.empirical_error + pen
        if obj < best_obj:
            best_obj = obj
            best = LearnerOutput(
                inner.hypothesis,
                inner.empirical_error,
                class_index=pos,
                objective=obj,
            )
    assert best is not None
    config = {
        "C": C,
        "delta": delta,
        "weights": list(seq.weights),
        "vc_dims": dims,
        "penalties": penalties,
    }
    return LearnerOutput(
        best.hypothesis, best.empirical_error, best.class_index, best.objective, config
    )


def memorizer(S: LabeledSample, default: int = 0) -> LookupTable:
    """Majority label at each sampled instance, the default elsewhere.

    An instance seen equally often with both labels also gets the default.
    Intended for finite domains where exact instance matches recur.
    """
    if default not in (0, 1):
        raise ValueError("default label must be 0 or 1")
    counts: dict[tuple, list[int]] = defaultdict(lambda: [0, 0])
    order: list[tuple] = []
    for x, y in S.pairs():
        key = tuple(float(v) for v in x)
        if key not in counts:
            order.append(key)
        counts[key][y] += 1
    points = []
    labels = []
    for key in order:
        zeros, ones = counts[key]
        label = default if zeros == ones else int(ones > zeros)
        points.append(key)
        labels.append(label)
    if not points:
        raise ValueError("the sample must be nonempty")
    return LookupTable(tuple(points), tuple(labels), default)
