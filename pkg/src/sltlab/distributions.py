"""Seeded generative distributions over instance-label pairs.

A distribution couples an instance marginal, a labeling mechanism (a target
hypothesis or an explicit conditional table on a finite support), and a
symmetric label-flip noise rate below one half.  Sampling is i.i.d. and fully
determined by a SeedSpec; per-trial generators are derived by hashing, so no
generator state is ever shared between trials and parallel execution matches
serial execution exactly.

Exact risk is implemented where the disagreement region is cheap to measure:
any finite-support marginal, interval-decomposable hypotheses on a 1-d
uniform box, and convex (box/halfplane) hypotheses on a 2-d uniform box.
Everything else must go through the Monte Carlo estimator, which is an
explicit, distinct code path.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_ENUMERATION_BUDGET,
    GridSpec,
    Halfspace,
    Hypothesis,
    HypothesisClass,
    Interval,
    IntervalUnion,
    LabeledSample,
    Rectangle,
    Threshold,
    enumerate_class,
    hypothesis_from_json,
)

HOEFFDING_CONF = 0.95


class AnalyticRiskUnavailable(RuntimeError):
    """No closed-form risk for this marginal/labeler/hypothesis combination."""


# ---------------------------------------------------------------------------
# Seed derivation
# ---------------------------------------------------------------------------


def _stream_hash(label: str) -> int:
    return int.from_bytes(hashlib.sha256(label.encode("utf-8")).digest()[:8], "little")


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus a named sub-stream and trial index.

    The generator is a pure function of (master_seed, stream, trial); deriving
    the same triple twice yields identical draws.
    """

    master_seed: int
    stream: str = "root"
    trial: int = 0

    def __post_init__(self):
        if not (0 <= self.master_seed < 2 ** 64):
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.trial < 0:
            raise ValueError("trial index must be nonnegative")

    def derive(self, stream: str, trial: int = 0) -> "SeedSpec":
        return SeedSpec(self.master_seed, stream, trial)

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence([self.master_seed, _stream_hash(self.stream), self.trial])
        return np.random.default_rng(seq)


# ---------------------------------------------------------------------------
# Instance marginals
# ---------------------------------------------------------------------------


class Marginal:
    @property
    def dim(self) -> int:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, m: int) -> np.ndarray:
        raise NotImplementedError

    def support(self) -> tuple[np.ndarray, np.ndarray] | None:
        """(points, probabilities) for finite marginals, else None."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class UniformBox(Marginal):
    """Uniform distribution on an axis-aligned box."""

    bounds: tuple[tuple[float, float], ...] = ((0.0, 1.0),)

    def __post_init__(self):
        for lo, hi in self.bounds:
            if not (lo < hi):
                raise ValueError(f"box side [{lo}, {hi}] must have positive length")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def sample(self, rng, m):
        lows = np.array([b[0] for b in self.bounds])
        highs = np.array([b[1] for b in self.bounds])
        return rng.uniform(lows, highs, size=(m, self.dim))

    def to_json(self) -> dict:
        return {"type": "uniform_box", "bounds": [list(b) for b in self.bounds]}


@dataclass(frozen=True)
class FiniteUniform(Marginal):
    """Uniform distribution over an explicit finite point list."""

    points: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("need at least one support point")
        if len({len(p) for p in self.points}) != 1:
            raise ValueError("support points must share one dimension")
        if len(set(self.points)) != len(self.points):
            raise ValueError("support points must be distinct")

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def sample(self, rng, m):
        idx = rng.integers(0, len(self.points), size=m)
        return np.asarray(self.points, dtype=float)[idx]

    def support(self):
        n = len(self.points)
        return np.asarray(self.points, dtype=float), np.full(n, 1.0 / n)

    def to_json(self) -> dict:
        return {"type": "finite_uniform", "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class PointMasses(Marginal):
    """Mixture of point masses with explicit probabilities summing to 1."""

    points: tuple[tuple[float, ...], ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) != len(self.probs):
            raise ValueError("points and probs must have equal length")
        if not self.points:
            raise ValueError("need at least one support point")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(self.probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {sum(self.probs)}")
        if len({len(p) for p in self.points}) != 1:
            raise ValueError("support points must share one dimension")
        if len(set(self.points)) != len(self.points):
            raise ValueError("support points must be distinct")

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def sample(self, rng, m):
        idx = rng.choice(len(self.points), size=m, p=np.asarray(self.probs))
        return np.asarray(self.points, dtype=float)[idx]

    def support(self):
        return np.asarray(self.points, dtype=float), np.asarray(self.probs, dtype=float)

    def to_json(self) -> dict:
        return {"type": "point_masses", "points": [list(p) for p in self.points],
                "probs": list(self.probs)}


_MARGINAL_TYPES = {
    "uniform_box": lambda d: UniformBox(tuple((float(a), float(b)) for a, b in d["bounds"])),
    "finite_uniform": lambda d: FiniteUniform(
        tuple(tuple(float(c) for c in p) for p in d["points"])
    ),
    "point_masses": lambda d: PointMasses(
        tuple(tuple(float(c) for c in p) for p in d["points"]),
        tuple(float(v) for v in d["probs"]),
    ),
}


def marginal_from_json(data: dict) -> Marginal:
    t = data.get("type")
    if t not in _MARGINAL_TYPES:
        raise ValueError(f"unknown marginal type {t!r}")
    return _MARGINAL_TYPES[t](data)


# ---------------------------------------------------------------------------
# Labelers and the distribution itself
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionalTable:
    """Explicit P(label=1 | x) on a finite list of points."""

    points: tuple[tuple[float, ...], ...]
    p1: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) != len(self.p1):
            raise ValueError("points and p1 must have equal length")
        if any(not (0.0 <= q <= 1.0) for q in self.p1):
            raise ValueError("conditional probabilities must lie in [0, 1]")
        object.__setattr__(self, "_map", dict(zip(self.points, self.p1)))

    def prob1(self, X: np.ndarray) -> np.ndarray:
        table = self._map
        out = np.empty(len(X), dtype=float)
        for i, row in enumerate(X):
            key = tuple(row)
            if key not in table:
                raise ValueError(f"conditional table has no entry for instance {key}")
            out[i] = table[key]
        return out

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.points], "p1": list(self.p1)}


@dataclass(frozen=True)
class DataDistribution:
    """Instance marginal + labeling mechanism + symmetric flip noise < 1/2."""

    marginal: Marginal
    labeler: Hypothesis | ConditionalTable
    noise: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.noise < 0.5):
            raise ValueError(f"noise rate must lie in [0, 0.5), got {self.noise}")
        if isinstance(self.labeler, Hypothesis):
            if self.labeler.dim != self.marginal.dim:
                raise ValueError(
                    f"labeler dimension {self.labeler.dim} does not match "
                    f"marginal dimension {self.marginal.dim}"
                )
        else:
            sup = self.marginal.support()
            if sup is None:
                raise ValueError("a conditional-table labeler needs a finite marginal")
            pts, _ = sup
            have = set(self.labeler.points)
            missing = [tuple(p) for p in pts.tolist() if tuple(p) not in have]
            if missing:
                raise ValueError(f"conditional table is missing support points {missing[:3]}")

    @property
    def dim(self) -> int:
        return self.marginal.dim

    def to_json(self) -> dict:
        if isinstance(self.labeler, Hypothesis):
            labeler = {"hypothesis": self.labeler.to_json()}
        else:
            labeler = {"table": self.labeler.to_json()}
        return {"marginal": self.marginal.to_json(), "labeler": labeler, "noise": self.noise}

    @classmethod
    def from_json(cls, data: dict) -> "DataDistribution":
        marginal = marginal_from_json(data["marginal"])
        lab = data["labeler"]
        if "hypothesis" in lab:
            labeler: Hypothesis | ConditionalTable = hypothesis_from_json(lab["hypothesis"])
        elif "table" in lab:
            t = lab["table"]
            labeler = ConditionalTable(
                tuple(tuple(float(c) for c in p) for p in t["points"]),
                tuple(float(v) for v in t["p1"]),
            )
        else:
            raise ValueError("labeler must contain 'hypothesis' or 'table'")
        return cls(marginal, labeler, float(data.get("noise", 0.0)))


def draw_sample(D: DataDistribution, m: int, seed: SeedSpec) -> LabeledSample:
    """m i.i.d. pairs in draw order, fully determined by the seed.

    Generator call order is fixed: instances, then base labels (table
    labelers only), then noise flips.
    """
    if m < 1:
        raise ValueError(f"sample size must be at least 1, got {m}")
    rng = seed.generator()
    X = D.marginal.sample(rng, m)
    if isinstance(D.labeler, Hypothesis):
        y = D.labeler.labels(X)
    else:
        y = (rng.random(m) < D.labeler.prob1(X)).astype(np.uint8)
    if D.noise > 0.0:
        flips = rng.random(m) < D.noise
        y = np.where(flips, 1 - y, y).astype(np.uint8)
    return LabeledSample(X, y)


# ---------------------------------------------------------------------------
# Exact risk: 1-d interval algebra
# ---------------------------------------------------------------------------


def _positive_intervals_1d(h: Hypothesis, lo: float, hi: float) -> list[tuple[float, float]]:
    """The region labeled 1 inside [lo, hi], as sorted disjoint intervals."""
    if isinstance(h, Threshold):
        if h.direction == "ge":
            a, b = max(h.theta, lo), hi
        else:
            a, b = lo, min(h.theta, hi)
        return [(a, b)] if a <= b else []
    if isinstance(h, Interval):
        a, b = max(h.lo, lo), min(h.hi, hi)
        return [(a, b)] if a <= b else []
    if isinstance(h, IntervalUnion):
        out = []
        for ilo, ihi in h.intervals:
            a, b = max(ilo, lo), min(ihi, hi)
            if a <= b:
                out.append((a, b))
        return out
    raise AnalyticRiskUnavailable(
        f"no interval decomposition for hypothesis kind {type(h).__name__}"
    )


def _measure(ivs: list[tuple[float, float]]) -> float:
    return sum(b - a for a, b in ivs)


def _intersect_unions(A: list[tuple[float, float]], B: list[tuple[float, float]]):
    out = []
    for a1, b1 in A:
        for a2, b2 in B:
            lo, hi = max(a1, a2), min(b1, b2)
            if lo < hi:
                out.append((lo, hi))
    return out


def _symdiff_measure_1d(A, B) -> float:
    return _measure(A) + _measure(B) - 2.0 * _measure(_intersect_unions(A, B))


# ---------------------------------------------------------------------------
# Exact risk: 2-d convex geometry
# ---------------------------------------------------------------------------


def _clip_halfplane(poly: list[tuple[float, float]], w, b) -> list[tuple[float, float]]:
    """Clip a convex polygon to {p : w . p + b >= 0} (Sutherland-Hodgman)."""
    if not poly:
        return []
    out: list[tuple[float, float]] = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        g_cur = w[0] * cur[0] + w[1] * cur[1] + b
        g_nxt = w[0] * nxt[0] + w[1] * nxt[1] + b
        if g_cur >= 0.0:
            out.append(cur)
            if g_nxt < 0.0:
                t = g_cur / (g_cur - g_nxt)
                out.append((cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])))
        elif g_nxt >= 0.0:
            t = g_cur / (g_cur - g_nxt)
            out.append((cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])))
    return out


def _poly_area(poly: list[tuple[float, float]]) -> float:
    if len(poly) < 3:
        return 0.0
    s = 0.0
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2.0


def _positive_polygon_2d(h: Hypothesis, box: list[tuple[float, float]]):
    """The region labeled 1 inside the box, as a convex polygon."""
    if isinstance(h, Rectangle):
        poly = box
        for j, (lo, hi) in enumerate(h.bounds):
            axis = (1.0, 0.0) if j == 0 else (0.0, 1.0)
            poly = _clip_halfplane(poly, axis, -lo)
            poly = _clip_halfplane(poly, (-axis[0], -axis[1]), hi)
        return poly
    if isinstance(h, Halfspace):
        return _clip_halfplane(box, h.weights, h.bias)
    raise AnalyticRiskUnavailable(
        f"no convex region for hypothesis kind {type(h).__name__} in 2d"
    )


def _convex_intersection_area(P, Q) -> float:
    if not P or not Q:
        return 0.0
    poly = P
    n = len(Q)
    for i in range(n):
        x1, y1 = Q[i]
        x2, y2 = Q[(i + 1) % n]
        # inside of a CCW edge: cross((v2 - v1), (p - v1)) >= 0
        w = (-(y2 - y1), x2 - x1)
        b = -(w[0] * x1 + w[1] * y1)
        poly = _clip_halfplane(poly, w, b)
        if not poly:
            return 0.0
    return _poly_area(poly)


# ---------------------------------------------------------------------------
# Risk operations
# ---------------------------------------------------------------------------


def _noiseless_disagreement(D: DataDistribution, h: Hypothesis) -> float:
    """Probability mass of {x : h(x) != labeler(x)} with the noise turned off."""
    if not isinstance(D.labeler, Hypothesis):
        raise AnalyticRiskUnavailable("disagreement measure needs a hypothesis labeler")
    sup = D.marginal.support()
    if sup is not None:
        pts, probs = sup
        disagree = h.labels(pts) != D.labeler.labels(pts)
        return float(np.sum(probs[disagree]))
    if isinstance(D.marginal, UniformBox):
        if D.marginal.dim == 1:
            lo, hi = D.marginal.bounds[0]
            A = _positive_intervals_1d(h, lo, hi)
            B = _positive_intervals_1d(D.labeler, lo, hi)
            return _symdiff_measure_1d(A, B) / (hi - lo)
        if D.marginal.dim == 2:
            (x0, x1), (y0, y1) = D.marginal.bounds
            box = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
            P = _positive_polygon_2d(h, box)
            Q = _positive_polygon_2d(D.labeler, box)
            total = (x1 - x0) * (y1 - y0)
            inter = _convex_intersection_area(P, Q)
            return (_poly_area(P) + _poly_area(Q) - 2.0 * inter) / total
        raise AnalyticRiskUnavailable(
            f"uniform-box geometry is implemented for 1 and 2 dimensions, not {D.marginal.dim}"
        )
    raise AnalyticRiskUnavailable(
        f"no analytic route for marginal type {type(D.marginal).__name__}"
    )


def true_risk(D: DataDistribution, h: Hypothesis) -> float:
    """Exact probability that h mislabels a fresh draw from D.

    Raises AnalyticRiskUnavailable (never a numeric stand-in) when the
    combination has no closed form; callers must then use mc_risk.
    """
    if h.dim != D.dim:
        raise ValueError(f"hypothesis dimension {h.dim} does not match distribution {D.dim}")
    if isinstance(D.labeler, ConditionalTable):
        pts, probs = D.marginal.support()  # validated finite at construction
        q = D.labeler.prob1(pts)
        q_eff = q * (1.0 - D.noise) + (1.0 - q) * D.noise
        pred = h.labels(pts).astype(float)
        per_point = np.where(pred == 1.0, 1.0 - q_eff, q_eff)
        return float(np.dot(probs, per_point))
    rho = _noiseless_disagreement(D, h)
    return D.noise + (1.0 - 2.0 * D.noise) * rho


def hoeffding_band(n: int, confidence: float = HOEFFDING_CONF) -> float:
    """Half-width of the two-sided Hoeffding band for a mean of n 0/1 draws."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n))


def mc_risk(
    D: DataDistribution, h: Hypothesis, n: int, seed: SeedSpec
) -> tuple[float, float]:
    """Monte Carlo risk estimate over n fresh draws, with its Hoeffding band."""
    S = draw_sample(D, n, seed)
    est = float(np.count_nonzero(h.labels(S.X) != S.y)) / n
    return est, hoeffding_band(n)


def min_risk_in_class(
    D: DataDistribution,
    H: HypothesisClass,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    mc_n: int | None = None,
    seed: SeedSpec | None = None,
) -> tuple[Hypothesis, float]:
    """Risk minimizer over the enumerated class, ties broken by canonical order.

    Uses exact risk when available; members without an analytic route fall
    back to Monte Carlo with the declared sample count ``mc_n`` (a seed is
    then required and each member gets an independently derived stream).
    """
    best_h = None
    best_risk = math.inf
    for idx, h in enumerate(enumerate_class(H, grid=grid, budget=budget)):
        try:
            risk = true_risk(D, h)
        except AnalyticRiskUnavailable:
            if mc_n is None or seed is None:
                raise
            risk, _ = mc_risk(D, h, mc_n, seed.derive("min-risk-member", idx))
        if risk < best_risk:
            best_h, best_risk = h, risk
    assert best_h is not None
    return best_h, best_risk
