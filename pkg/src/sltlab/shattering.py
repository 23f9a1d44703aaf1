"""Restrictions, shattering tests, exact VC dimension search, sine witnesses.

The dimension search is exact over a finite point pool: it enumerates the
class on a grid, walks subset sizes in increasing order, and stops at the
first size with no shattered subset (shattering is downward closed, so this
is sound).  A grid can only under-approximate a continuous family, so pool
and grid presets are tuned so the lower bounds are tight for the shipped
families.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_ENUMERATION_BUDGET,
    GridSpec,
    Hypothesis,
    HypothesisClass,
    SineSign,
    enumerate_class,
    hypothesis_from_json,
)

DEFAULT_SUBSET_BUDGET = 2_000_000
MAX_SINE_POINTS = 8


@dataclass(frozen=True)
class Dichotomy:
    """A finite ordered point set together with one realized labeling of it."""

    points: tuple[tuple[float, ...], ...]
    labeling: tuple[int, ...]

    def __post_init__(self):
        if len(self.points) != len(self.labeling):
            raise ValueError("points and labeling must have equal length")
        if len(set(self.points)) != len(self.points):
            raise ValueError("dichotomy points must be pairwise distinct")
        if any(b not in (0, 1) for b in self.labeling):
            raise ValueError("labeling bits must be 0 or 1")


@dataclass(frozen=True)
class VcReport:
    """Result of a dimension search over a finite pool.

    ``value`` is the largest shattered-subset size found; it is exact when
    ``exact`` is true, otherwise only a lower bound (the subset budget ran
    out).  ``witness`` is a shattered set of that size and ``certificate``
    maps each of its 2^k labelings to a realizing hypothesis; replaying every
    certificate hypothesis on the witness must reproduce its labeling.
    """

    value: int
    exact: bool
    witness: tuple[tuple[float, ...], ...]
    certificate: tuple[tuple[Dichotomy, Hypothesis], ...]
    pool_size: int
    subsets_tested: int

    def marker(self) -> str:
        return str(self.value) if self.exact else f">= {self.value} (budget exhausted)"

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "exact": self.exact,
            "marker": self.marker(),
            "witness": [list(p) for p in self.witness],
            "certificate": [
                {"labeling": list(d.labeling), "hypothesis": h.to_json()}
                for d, h in self.certificate
            ],
            "pool_size": self.pool_size,
            "subsets_tested": self.subsets_tested,
        }

    @classmethod
    def from_json(cls, data: dict) -> "VcReport":
        witness = tuple(tuple(float(c) for c in p) for p in data["witness"])
        cert = tuple(
            (Dichotomy(witness, tuple(int(b) for b in e["labeling"])),
             hypothesis_from_json(e["hypothesis"]))
            for e in data["certificate"]
        )
        return cls(int(data["value"]), bool(data["exact"]), witness, cert,
                   int(data["pool_size"]), int(data["subsets_tested"]))


def _points_matrix(X, dim_expected: int | None = None) -> np.ndarray:
    pts = np.asarray(X, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise ValueError(f"point set must be an (n, d) matrix, got shape {pts.shape}")
    if len(np.unique(pts, axis=0)) != len(pts):
        raise ValueError("point set must have pairwise distinct points")
    return pts


def _label_matrix(H: HypothesisClass, pts: np.ndarray, grid, budget) -> tuple[list[Hypothesis], np.ndarray]:
    members = enumerate_class(H, grid=grid, budget=budget)
    L = np.empty((len(members), len(pts)), dtype=np.uint8)
    for i, h in enumerate(members):
        L[i] = h.labels(pts)
    return members, L


def restriction(
    H: HypothesisClass,
    X,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> set[tuple[int, ...]]:
    """The set of labelings of X realized by the enumerated class.

    Always a set of |X|-bit vectors of size at most 2^|X|.
    """
    pts = _points_matrix(X)
    if len(pts) == 0:
        raise ValueError("restriction needs a nonempty point set")
    _, L = _label_matrix(H, pts, grid, budget)
    return {tuple(int(v) for v in row) for row in np.unique(L, axis=0)}


def shatters(
    H: HypothesisClass,
    X,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> bool:
    """True iff every labeling of X is realized (trivially true for empty X)."""
    pts = np.asarray(X, dtype=float)
    if pts.size == 0:
        return True
    return len(restriction(H, X, grid=grid, budget=budget)) == 2 ** len(_points_matrix(X))


def vc_dimension(
    H: HypothesisClass,
    pool,
    grid: GridSpec | None = None,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
    enum_budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> VcReport:
    """Largest size of a pool subset shattered by the enumerated class.

    Searches subset sizes in increasing order and certifies the best witness.
    If the subset budget runs out mid-search the reported value is a lower
    bound and ``exact`` is false.
    """
    pts = _points_matrix(pool)
    if len(pts) == 0:
        raise ValueError("the point pool must be nonempty")
    members, L = _label_matrix(H, pts, grid, enum_budget)

    # |restriction| <= |enumerated H| caps the reachable subset size.
    max_k = min(len(pts), int(math.floor(math.log2(len(members)))) if len(members) > 1 else 0)

    best_combo: tuple[int, ...] = ()
    best_first: dict[tuple[int, ...], int] = {}
    tested = 0
    exact = True

    k = 1
    while k <= max_k:
        found = None
        for combo in itertools.combinations(range(len(pts)), k):
            if tested >= subset_budget:
                exact = False
                break
            tested += 1
            sub = L[:, combo]
            patterns, first_idx = np.unique(sub, axis=0, return_index=True)
            if len(patterns) == 2 ** k:
                found = (combo, {tuple(int(b) for b in p): int(i)
                                 for p, i in zip(patterns, first_idx)})
                break
        if found is None:
            break
        best_combo, best_first = found
        k += 1

    witness = tuple(tuple(float(c) for c in pts[i]) for i in best_combo)
    certificate = tuple(
        (Dichotomy(witness, labeling), members[hyp_idx])
        for labeling, hyp_idx in sorted(best_first.items())
    )
    return VcReport(
        value=len(best_combo),
        exact=exact,
        witness=witness,
        certificate=certificate,
        pool_size=len(pts),
        subsets_tested=tested,
    )


def verify_certificate(report: VcReport) -> bool:
    """Replay every certificate hypothesis on the witness points."""
    if report.value == 0:
        return not report.witness
    pts = np.asarray(report.witness, dtype=float)
    if len(report.certificate) != 2 ** report.value:
        return False
    seen = set()
    for dichotomy, h in report.certificate:
        realized = tuple(int(v) for v in h.labels(pts))
        if realized != dichotomy.labeling:
            return False
        seen.add(realized)
    return len(seen) == 2 ** report.value


# ---------------------------------------------------------------------------
# Sign-of-sine shattering witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SineWitnessReport:
    """Shattering witness for the sign-of-sine family on k geometric points.

    Reports "shatters k points" for the tested k only; no claim is made
    beyond the verified labelings.  ``failed`` lists labelings the search
    could not realize within budget (empty on success).
    """

    points: tuple[float, ...]
    entries: tuple[tuple[tuple[int, ...], float], ...]
    failed: tuple[tuple[int, ...], ...]

    @property
    def complete(self) -> bool:
        return not self.failed

    def to_json(self) -> dict:
        return {
            "k": len(self.points),
            "points": list(self.points),
            "complete": self.complete,
            "entries": [{"labeling": list(lab), "alpha": alpha} for lab, alpha in self.entries],
            "failed": [list(lab) for lab in self.failed],
        }


def _sine_alpha_candidate(points_pow10: tuple[int, ...], labeling: tuple[int, ...]) -> float:
    # For x_i = 10^-i the frequency pi * (1 + sum_{i: y_i=0} 10^i) places
    # sin(alpha x_i) strictly on the requested side of zero for every i.
    total = 1 + sum(10 ** i for i, y in zip(points_pow10, labeling) if y == 0)
    return math.pi * total


def _realizes(alpha: float, xs: np.ndarray, labeling: tuple[int, ...]) -> bool:
    got = SineSign(alpha).labels(xs)
    return tuple(int(v) for v in got) == labeling


def sine_shatter_witness(
    k: int,
    points: tuple[float, ...] | None = None,
    budget: int = 20_000,
    max_k: int = MAX_SINE_POINTS,
    rng_seed: int = 0,
) -> SineWitnessReport:
    """Realize all 2^k labelings of k points by sign-of-sine hypotheses.

    Default points are geometric, x_i = 10^-i.  Every returned frequency is
    verified by evaluation under the boundary convention.  For the default
    points a closed-form frequency is tried first; a seeded random search
    covers custom point sets, spending at most ``budget`` evaluations overall.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > max_k:
        raise ValueError(f"k={k} exceeds the configured maximum {max_k}")
    geometric = points is None
    pts = tuple(points) if points is not None else tuple(10.0 ** -(i + 1) for i in range(k))
    if len(pts) != k:
        raise ValueError(f"expected {k} points, got {len(pts)}")
    xs = np.asarray(pts, dtype=float)[:, None]

    rng = np.random.default_rng(rng_seed)
    entries: list[tuple[tuple[int, ...], float]] = []
    failed: list[tuple[int, ...]] = []
    evals = 0
    for labeling in itertools.product((0, 1), repeat=k):
        alpha = None
        if geometric:
            cand = _sine_alpha_candidate(tuple(range(1, k + 1)), labeling)
            evals += 1
            if _realizes(cand, xs, labeling):
                alpha = cand
        if alpha is None:
            span = 10.0 ** (k + 1)
            while evals < budget:
                cand = float(rng.uniform(0.0, math.pi * span))
                evals += 1
                if _realizes(cand, xs, labeling):
                    alpha = cand
                    break
        if alpha is None:
            failed.append(labeling)
        else:
            entries.append((labeling, alpha))
    return SineWitnessReport(points=pts, entries=tuple(entries), failed=tuple(failed))
