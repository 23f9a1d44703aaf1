"""Monte Carlo and exact-enumeration harnesses for the core guarantees:
learnability of a class by its empirical-error minimizer, uniform convergence
of empirical errors, the exact average-case failure of data-only learners on
a tiny domain, and the approximation/estimation trade-off sweep.

Trials are independent units keyed by trial index with independently derived
generators, so any worker count and any scheduling produce identical
summaries.  All aggregation happens over arrays laid out in trial order.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.stats import beta as _beta_dist

from .core import (
    DEFAULT_ENUMERATION_BUDGET,
    FiniteClass,
    GridSpec,
    HypothesisClass,
    LabeledSample,
    LookupTable,
    WeightedClassSequence,
    empirical_error,
    enumerate_class,
)
from .distributions import (
    AnalyticRiskUnavailable,
    DataDistribution,
    SeedSpec,
    draw_sample,
    mc_risk,
    min_risk_in_class,
    true_risk,
)
from .learners import DEFAULT_SRM_C, erm, memorizer, srm_penalty

VERDICT_SLACK = 0.02
CONFIDENCE = 0.95

SUMMARY_CSV_COLUMNS = [
    "kind", "m", "eps", "delta", "trials", "successes", "success_frequency",
    "threshold", "ci_lower", "ci_upper", "verdict",
    "mean", "median", "q05", "q95",
]

RECORD_CSV_COLUMNS = [
    "trial", "risk", "estimation", "empirical_error", "success",
    "sup_deviation", "class_index", "hypothesis",
]

TRADEOFF_CSV_COLUMNS = [
    "learner", "class_index", "vc_dim", "m", "approximation_error",
    "mean_estimation_error", "mean_total_risk", "mean_objective", "pick_freqs", "trials",
]


def _run_indexed(fn: Callable[[int], object], count: int, workers: int) -> list:
    """Evaluate fn(0..count-1); results always come back in index order."""
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def binomial_bounds(successes: int, trials: int, confidence: float = CONFIDENCE):
    """Exact one-sided Clopper-Pearson bounds on a binomial proportion."""
    if not (0 <= successes <= trials) or trials < 1:
        raise ValueError("need 0 <= successes <= trials with trials >= 1")
    alpha = 1.0 - confidence
    lower = 0.0 if successes == 0 else float(
        _beta_dist.ppf(alpha, successes, trials - successes + 1)
    )
    upper = 1.0 if successes == trials else float(
        _beta_dist.ppf(confidence, successes + 1, trials - successes)
    )
    return lower, upper


def binomial_verdict(successes: int, trials: int, threshold: float):
    """(verdict, lower, upper): pass when confidently above the threshold,
    fail when confidently below, indeterminate when the bounds straddle it."""
    lower, upper = binomial_bounds(successes, trials)
    if lower >= threshold:
        return "pass", lower, upper
    if upper < threshold:
        return "fail", lower, upper
    return "indeterminate", lower, upper


@dataclass(frozen=True)
class TrialRecord:
    """One independent draw; reconstructable from (config, master seed, trial)."""

    trial: int
    risk: float
    estimation: float
    empirical_error: float
    success: bool | None = None
    sup_deviation: float | None = None
    class_index: int | None = None
    hypothesis: dict | None = None

    def csv_row(self) -> dict:
        import json

        return {
            "trial": self.trial,
            "risk": self.risk,
            "estimation": self.estimation,
            "empirical_error": self.empirical_error,
            "success": self.success,
            "sup_deviation": self.sup_deviation,
            "class_index": self.class_index,
            "hypothesis": json.dumps(self.hypothesis, separators=(",", ":"))
            if self.hypothesis is not None else "",
        }


@dataclass(frozen=True)
class ExperimentSummary:
    """Aggregate of one harness run plus the decision it reached."""

    kind: str
    config: dict
    trials: int
    successes: int
    threshold: float
    ci_lower: float
    ci_upper: float
    verdict: str
    stats: dict
    extra: dict
    records: tuple[TrialRecord, ...] | None = None

    @property
    def success_frequency(self) -> float:
        return self.successes / self.trials

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "config": self.config,
            "trials": self.trials,
            "successes": self.successes,
            "success_frequency": self.success_frequency,
            "threshold": self.threshold,
            "ci_lower": self.ci_lower,
            "ci_upper": self.ci_upper,
            "verdict": self.verdict,
            "stats": self.stats,
            "extra": self.extra,
        }
        if self.records is not None:
            out["records"] = [r.csv_row() for r in self.records]
        return out

    def csv_row(self) -> dict:
        row = {
            "kind": self.kind,
            "m": self.config.get("m"),
            "eps": self.config.get("eps"),
            "delta": self.config.get("delta"),
            "trials": self.trials,
            "successes": self.successes,
            "success_frequency": self.success_frequency,
            "threshold": self.threshold,
            "ci_lower": self.ci_lower,
            "ci_upper": self.ci_upper,
            "verdict": self.verdict,
        }
        row.update({k: self.stats.get(k) for k in ("mean", "median", "q05", "q95")})
        return row


def _stats(values: np.ndarray) -> dict:
    return {
        "mean": float(np.mean(values)),
        "median": float(np.median(values)),
        "q05": float(np.quantile(values, 0.05)),
        "q95": float(np.quantile(values, 0.95)),
    }


# ---------------------------------------------------------------------------
# Learnability
# ---------------------------------------------------------------------------


def learnability_trial(
    H: HypothesisClass,
    D: DataDistribution,
    m: int,
    eps: float,
    seed: SeedSpec,
    trial: int,
    min_risk: float,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    mc_n: int | None = None,
) -> TrialRecord:
    """One independent draw-train-evaluate step of the learnability harness."""
    S = draw_sample(D, m, seed.derive("pac-trial", trial))
    out = erm(H, S, grid=grid, budget=budget)
    try:
        risk = true_risk(D, out.hypothesis)
    except AnalyticRiskUnavailable:
        if mc_n is None:
            raise
        risk, _ = mc_risk(D, out.hypothesis, mc_n, seed.derive("pac-risk", trial))
    return TrialRecord(
        trial=trial,
        risk=risk,
        estimation=risk - min_risk,
        empirical_error=out.empirical_error,
        success=bool(risk <= min_risk + eps),
        hypothesis=out.hypothesis.to_json(),
    )


def verify_learnability(
    H: HypothesisClass,
    D: DataDistribution,
    m: int,
    eps: float,
    delta: float,
    trials: int,
    seed: SeedSpec,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    mc_n: int | None = None,
    workers: int = 1,
    keep_records: bool = False,
) -> ExperimentSummary:
    """Frequency of the selected member's risk landing within eps of the best
    risk in the class, judged against 1 - delta by an exact binomial rule.

    The decision threshold is 1 - delta - 0.02; the slack absorbs Monte Carlo
    noise at the boundary, and the verdict is "indeterminate" whenever the
    one-sided confidence bounds straddle the threshold.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not (0.0 < eps):
        raise ValueError("eps must be positive")
    _, min_risk = min_risk_in_class(
        D, H, grid=grid, budget=budget, mc_n=mc_n, seed=seed.derive("pac-min-risk")
    )

    def one(t: int) -> TrialRecord:
        return learnability_trial(
            H, D, m, eps, seed, t, min_risk, grid=grid, budget=budget, mc_n=mc_n
        )

    records = _run_indexed(one, trials, workers)
    successes = sum(1 for r in records if r.success)
    threshold = 1.0 - delta - VERDICT_SLACK
    verdict, lower, upper = binomial_verdict(successes, trials, threshold)
    estimations = np.array([r.risk - min_risk for r in records])
    return ExperimentSummary(
        kind="learnability",
        config={
            "class": H.to_json(), "distribution": D.to_json(),
            "m": m, "eps": eps, "delta": delta, "trials": trials,
            "master_seed": seed.master_seed,
        },
        trials=trials,
        successes=successes,
        threshold=threshold,
        ci_lower=lower,
        ci_upper=upper,
        verdict=verdict,
        stats=_stats(estimations),
        extra={"min_risk_in_class": min_risk, "statistic": "estimation_error"},
        records=tuple(records) if keep_records else None,
    )


def success_frequency_at(records: Sequence[TrialRecord], min_risk: float, eps: float) -> float:
    """Re-threshold stored trial risks at a different eps (monotone in eps)."""
    if not records:
        raise ValueError("no records to re-threshold")
    return sum(1 for r in records if r.risk <= min_risk + eps) / len(records)


# ---------------------------------------------------------------------------
# Uniform convergence
# ---------------------------------------------------------------------------


def uniform_convergence_trial(
    members_risks: tuple[list, np.ndarray],
    D: DataDistribution,
    m: int,
    seed: SeedSpec,
    trial: int,
) -> float:
    """Sup over the class of |empirical error - true risk| on one fresh sample."""
    members, risks = members_risks
    S = draw_sample(D, m, seed.derive(f"uc-trial-m{m}", trial))
    emp = np.empty(len(members))
    for i, h in enumerate(members):
        emp[i] = np.count_nonzero(h.labels(S.X) != S.y) / m
    return float(np.max(np.abs(emp - risks)))


@dataclass(frozen=True)
class UcReport:
    """Per-sample-size summaries plus the observed scaling of median sup
    deviation (expected to shrink like one over the square root of m)."""

    summaries: tuple[ExperimentSummary, ...]
    scaling: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "summaries": [s.to_json() for s in self.summaries],
            "scaling": list(self.scaling),
        }


def verify_uniform_convergence(
    H: HypothesisClass,
    D: DataDistribution,
    m_values: Sequence[int],
    eps: float,
    delta: float,
    trials: int,
    seed: SeedSpec,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    mc_n: int | None = None,
    workers: int = 1,
    keep_records: bool = False,
) -> UcReport:
    """Frequency of eps-representative samples and median sup deviation per m.

    The same binomial verdict rule as the learnability harness applies at
    each m; consecutive m pairs additionally report the ratio of median
    deviations next to the square-root prediction.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    members = enumerate_class(H, grid=grid, budget=budget)
    risks = np.empty(len(members))
    for i, h in enumerate(members):
        try:
            risks[i] = true_risk(D, h)
        except AnalyticRiskUnavailable:
            if mc_n is None:
                raise
            risks[i], _ = mc_risk(D, h, mc_n, seed.derive("uc-member-risk", i))

    summaries = []
    for m in m_values:
        def one(t: int, _m=m) -> float:
            return uniform_convergence_trial((members, risks), D, _m, seed, t)

        devs = np.array(_run_indexed(one, trials, workers))
        successes = int(np.count_nonzero(devs <= eps))
        threshold = 1.0 - delta - VERDICT_SLACK
        verdict, lower, upper = binomial_verdict(successes, trials, threshold)
        records = tuple(
            TrialRecord(trial=t, risk=math.nan, estimation=math.nan,
                        empirical_error=math.nan, success=bool(devs[t] <= eps),
                        sup_deviation=float(devs[t]))
            for t in range(trials)
        ) if keep_records else None
        summaries.append(ExperimentSummary(
            kind="uniform_convergence",
            config={
                "class": H.to_json(), "distribution": D.to_json(),
                "m": m, "eps": eps, "delta": delta, "trials": trials,
                "master_seed": seed.master_seed,
            },
            trials=trials,
            successes=successes,
            threshold=threshold,
            ci_lower=lower,
            ci_upper=upper,
            verdict=verdict,
            stats=_stats(devs),
            extra={"statistic": "sup_deviation", "n_hypotheses": len(members)},
            records=records,
        ))

    scaling = []
    for a, b in itertools.pairwise(range(len(m_values))):
        ma, mb = m_values[a], m_values[b]
        med_a = summaries[a].stats["median"]
        med_b = summaries[b].stats["median"]
        scaling.append({
            "m_small": ma,
            "m_large": mb,
            "median_ratio": med_a / med_b if med_b > 0 else math.inf,
            "sqrt_prediction": math.sqrt(mb / ma),
        })
    return UcReport(tuple(summaries), tuple(scaling))


# ---------------------------------------------------------------------------
# Exact no-free-lunch enumeration
# ---------------------------------------------------------------------------

NFL_MAX_M = 4
NFL_LEARNERS = ("memorizer", "erm_all_functions")


@dataclass(frozen=True)
class NflReport:
    """Exact rational average (over all labelings) of the expected risk of a
    data-only learner on a uniform 2m-point domain, with per-labeling extremes.

    Enumeration is exhaustive and exactly weighted; no sampling is involved,
    so every value is a deterministic equality.
    """

    m: int
    domain_size: int
    learner: str
    default_label: int
    average: Fraction
    worst: Fraction
    worst_labeling: tuple[int, ...]
    best: Fraction
    best_labeling: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "domain_size": self.domain_size,
            "n_labelings": 2 ** self.domain_size,
            "learner": self.learner,
            "default_label": self.default_label,
            "average_expected_error": str(self.average),
            "average_expected_error_float": float(self.average),
            "worst_expected_error": str(self.worst),
            "worst_expected_error_float": float(self.worst),
            "worst_labeling": list(self.worst_labeling),
            "best_expected_error": str(self.best),
            "best_expected_error_float": float(self.best),
            "best_labeling": list(self.best_labeling),
        }


def all_functions_class(domain: np.ndarray) -> FiniteClass:
    """Every labeling of the domain as a lookup table, in integer order:
    member r labels point j with bit j of r."""
    n = len(domain)
    points = tuple(tuple(float(c) for c in row) for row in domain)
    members = tuple(
        LookupTable(points, tuple((r >> j) & 1 for j in range(n)), default=0)
        for r in range(2 ** n)
    )
    return FiniteClass(members, domain=points)


def _prediction_mask(
    learner: str, domain: np.ndarray, table_matrix: np.ndarray | None,
    idx: tuple[int, ...], labels: tuple[int, ...], default_label: int,
) -> int:
    """The learner's full-domain predictions, packed little-endian into an int."""
    n = len(domain)
    if learner == "erm_all_functions":
        # First row of the all-functions table matrix with minimal mismatch
        # count: identical to running the canonical-ties minimizer over the
        # explicit class (integer enumeration order).
        y = np.asarray(labels, dtype=np.uint8)
        errs = (table_matrix[:, list(idx)] != y).sum(axis=1)
        return int(np.argmin(errs))
    if learner == "memorizer":
        S = LabeledSample(domain[list(idx)], np.asarray(labels, dtype=np.uint8))
        h = memorizer(S, default=default_label)
        bits = h.labels(domain)
        return int(sum(int(b) << j for j, b in enumerate(bits)))
    raise ValueError(f"unknown learner {learner!r}; expected one of {NFL_LEARNERS}")


def nfl_exact(m: int, learner: str = "memorizer", default_label: int = 0) -> NflReport:
    """Exact average expected risk of a data-only learner over every noiseless
    labeling of a uniform 2m-point domain.

    Enumerates all 2^(2m) labeling functions and all (2m)^m ordered instance
    tuples with exact rational weights.  Requires m <= 4 so the table above
    stays enumerable.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > NFL_MAX_M:
        raise ValueError(
            f"m={m} needs {2 ** (2 * m)} labelings over {(2 * m) ** m} tuples; "
            f"the exact enumeration is capped at m={NFL_MAX_M}"
        )
    if learner not in NFL_LEARNERS:
        raise ValueError(f"unknown learner {learner!r}; expected one of {NFL_LEARNERS}")
    n = 2 * m
    domain = np.arange(n, dtype=float)[:, None]
    table_matrix = None
    if learner == "erm_all_functions":
        table_matrix = np.array(
            [[(r >> j) & 1 for j in range(n)] for r in range(2 ** n)], dtype=np.uint8
        )

    # err_totals[f] = sum over instance tuples of |{j : prediction_j != f_j}|
    err_totals = [0] * (2 ** n)
    cache: dict[tuple, int] = {}
    tuples = list(itertools.product(range(n), repeat=m))
    for idx in tuples:
        distinct = sorted(set(idx))
        for assignment in itertools.product((0, 1), repeat=len(distinct)):
            point_label = dict(zip(distinct, assignment))
            labels = tuple(point_label[j] for j in idx)
            pred = _prediction_mask(learner, domain, table_matrix, idx, labels, default_label)
            cache[(idx, labels)] = pred
        for f in range(2 ** n):
            labels = tuple((f >> j) & 1 for j in idx)
            err_totals[f] += bin(cache[(idx, labels)] ^ f).count("1")

    denom = len(tuples) * n
    per_f = [Fraction(e, denom) for e in err_totals]
    total = Fraction(sum(err_totals), denom * 2 ** n)
    worst_f = max(range(2 ** n), key=lambda f: (per_f[f], f))
    best_f = min(range(2 ** n), key=lambda f: (per_f[f], f))

    def bits(f: int) -> tuple[int, ...]:
        return tuple((f >> j) & 1 for j in range(n))

    return NflReport(
        m=m,
        domain_size=n,
        learner=learner,
        default_label=default_label,
        average=total,
        worst=per_f[worst_f],
        worst_labeling=bits(worst_f),
        best=per_f[best_f],
        best_labeling=bits(best_f),
    )


# ---------------------------------------------------------------------------
# Bias-complexity trade-off sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TradeoffReport:
    """Tidy per-(learner, class, m) table of mean decomposed risks."""

    rows: tuple[dict, ...]
    config: dict
    records: tuple[dict, ...] | None = None

    def to_json(self) -> dict:
        out = {"config": self.config, "rows": list(self.rows)}
        if self.records is not None:
            out["records"] = list(self.records)
        return out


def tradeoff_sweep(
    seq: WeightedClassSequence,
    D: DataDistribution,
    m_values: Sequence[int],
    trials: int,
    delta: float,
    master_seeds: Sequence[int],
    C: float = DEFAULT_SRM_C,
    grid: GridSpec | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    vc_dims: tuple[int, ...] | None = None,
    workers: int = 1,
    keep_records: bool = False,
) -> TradeoffReport:
    """Mean approximation/estimation/total risk of the per-class minimizer for
    each (class, m), pooled over master seeds, plus one penalized-selection
    row per m over the full sequence.

    The penalized row reuses the per-class fits: its objective is the class's
    empirical minimum plus the class penalty, with ties to the lower position,
    which is exactly the penalized learner's selection rule.
    """
    if trials < 1 or not master_seeds:
        raise ValueError("need at least one trial and one master seed")
    n_classes = len(seq)
    dims = []
    for pos, cls in enumerate(seq.classes, start=1):
        d = vc_dims[pos - 1] if vc_dims is not None else cls.vc_dim_hint
        if d is None:
            raise ValueError(f"class at position {pos} has no known finite dimension")
        dims.append(int(d))
    approx = np.empty(n_classes)
    for c, cls in enumerate(seq.classes):
        _, approx[c] = min_risk_in_class(D, cls, grid=grid, budget=budget)

    units = [
        (seed, m, t)
        for seed in master_seeds
        for m in m_values
        for t in range(trials)
    ]

    def one(u: int) -> dict:
        master, m, t = units[u]
        spec = SeedSpec(master).derive(f"tradeoff-m{m}", t)
        S = draw_sample(D, m, spec)
        risks = np.empty(n_classes)
        emp = np.empty(n_classes)
        hyps = []
        for c, cls in enumerate(seq.classes):
            out = erm(cls, S, grid=grid, budget=budget)
            risks[c] = true_risk(D, out.hypothesis)
            emp[c] = out.empirical_error
            hyps.append(out.hypothesis)
        pens = np.array([
            srm_penalty(d, w, delta, m, C=C) for d, w in zip(dims, seq.weights)
        ])
        objectives = emp + pens
        pick = int(np.argmin(objectives))  # first minimum: lower position wins ties
        return {
            "master_seed": master, "m": m, "trial": t,
            "risks": risks, "emp": emp,
            "pick": pick, "objective": float(objectives[pick]),
            "pick_risk": float(risks[pick]),
        }

    results = _run_indexed(one, len(units), workers)

    rows: list[dict] = []
    for m in m_values:
        sel = [r for r in results if r["m"] == m]
        for c in range(n_classes):
            totals = np.array([r["risks"][c] for r in sel])
            rows.append({
                "learner": "erm",
                "class_index": c + 1,
                "vc_dim": dims[c],
                "m": m,
                "approximation_error": float(approx[c]),
                "mean_estimation_error": float(np.mean(totals - approx[c])),
                "mean_total_risk": float(np.mean(totals)),
                "mean_objective": None,
                "pick_freqs": None,
                "trials": len(sel),
            })
        pick_risks = np.array([r["pick_risk"] for r in sel])
        objectives = np.array([r["objective"] for r in sel])
        picks = [r["pick"] for r in sel]
        freqs = {str(c + 1): picks.count(c) / len(sel) for c in range(n_classes)}
        rows.append({
            "learner": "srm",
            "class_index": None,
            "vc_dim": None,
            "m": m,
            "approximation_error": None,
            "mean_estimation_error": None,
            "mean_total_risk": float(np.mean(pick_risks)),
            "mean_objective": float(np.mean(objectives)),
            "pick_freqs": ";".join(f"{k}:{v:.6f}" for k, v in sorted(freqs.items())),
            "trials": len(sel),
        })

    records = None
    if keep_records:
        records = tuple(
            {
                "master_seed": r["master_seed"], "m": r["m"], "trial": r["trial"],
                **{f"risk_class_{c + 1}": float(r["risks"][c]) for c in range(n_classes)},
                "srm_pick": r["pick"] + 1,
                "srm_risk": r["pick_risk"],
                "srm_objective": r["objective"],
            }
            for r in results
        )
    config = {
        "sequence": seq.to_json(),
        "distribution": D.to_json(),
        "m_values": list(m_values),
        "trials": trials,
        "delta": delta,
        "C": C,
        "master_seeds": list(master_seeds),
        "vc_dims": dims,
    }
    return TradeoffReport(tuple(rows), config, records)
