"""Threshold-independent performance measures for anomaly detection.

Decision rule used everywhere: a sample is anomalous iff ``score > threshold``.
Under this rule the confusion counts only change when the threshold crosses a
score value, so every threshold-dependent quantity is a step function that is
constant on ``[t_n, t_{n+1})`` between consecutive distinct scores ``t_n``.
The Riemann sums below use left endpoints and are therefore exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from f1ev import stats
from f1ev.data import EvaluationSet, Label
from f1ev.errors import (
    DegenerateScores,
    EmptySet,
    InsufficientNormals,
    InvalidInput,
    InvalidParameter,
    SingleClass,
)

DEFAULT_ALPHA = 0.2
DEFAULT_PAUC_P = 0.1

SIGMA_ZERO = "sigma_zero"
EMPTY_BOUNDED_RANGE = "empty_bounded_range"


# ---------------------------------------------------------------------------
# decision rule and confusion statistics
# ---------------------------------------------------------------------------


def classify(score: float, threshold: float) -> Label:
    if not (math.isfinite(score) and math.isfinite(threshold)):
        raise InvalidInput(f"classify needs finite inputs, got score={score!r}, threshold={threshold!r}")
    return Label.ANOMALOUS if score > threshold else Label.NORMAL


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def _positive_counts(eset: EvaluationSet, thresholds: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(tp, fp) for each threshold: how many anomalous / normal scores exceed it."""
    normal, anomalous = eset.normal_scores, eset.anomalous_scores
    tp = len(anomalous) - np.searchsorted(anomalous, thresholds, side="right")
    fp = len(normal) - np.searchsorted(normal, thresholds, side="right")
    return tp, fp


def _f1_from_counts(tp: np.ndarray, fp: np.ndarray, fn: np.ndarray) -> np.ndarray:
    # 2tp / (2tp + fp + fn) equals 2PR / (P + R); one rounding step keeps equal
    # ratios bit-identical, which the arg-max search in optimal_interval relies on.
    tp = np.asarray(tp, dtype=np.float64)
    denom = 2.0 * tp + np.asarray(fp, dtype=np.float64) + np.asarray(fn, dtype=np.float64)
    return np.divide(2.0 * tp, denom, out=np.zeros_like(denom), where=denom > 0)


def confusion_at(eset: EvaluationSet, threshold: float) -> ConfusionCounts:
    if eset.n == 0:
        raise EmptySet(f"evaluation set {eset.machine!r} is empty")
    if not math.isfinite(threshold):
        raise InvalidInput(f"threshold must be finite, got {threshold!r}")
    tp, fp = _positive_counts(eset, np.asarray([threshold], dtype=np.float64))
    n_anom, n_norm = len(eset.anomalous_scores), len(eset.normal_scores)
    tp, fp = int(tp[0]), int(fp[0])
    return ConfusionCounts(tp=tp, fp=fp, fn=n_anom - tp, tn=n_norm - fp)


def precision_recall_f1(c: ConfusionCounts) -> tuple[float, float, float]:
    """Precision, recall and F1; any 0/0 is reported as 0."""
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    f1 = float(_f1_from_counts(np.array(c.tp), np.array(c.fp), np.array(c.fn)))
    return float(precision), float(recall), f1


def f1_at(eset: EvaluationSet, threshold: float) -> float:
    return precision_recall_f1(confusion_at(eset, threshold))[2]


def _require_both_classes(eset: EvaluationSet) -> None:
    if eset.n == 0:
        raise EmptySet(f"evaluation set {eset.machine!r} is empty")
    if len(eset.normal_scores) == 0 or len(eset.anomalous_scores) == 0:
        raise SingleClass(
            f"evaluation set {eset.machine!r} needs normal and anomalous samples "
            f"(normal={len(eset.normal_scores)}, anomalous={len(eset.anomalous_scores)})"
        )


def _f1_at_many(eset: EvaluationSet, thresholds: np.ndarray) -> np.ndarray:
    tp, fp = _positive_counts(eset, thresholds)
    fn = len(eset.anomalous_scores) - tp
    return _f1_from_counts(tp, fp, fn)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# ROC
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RocCurve:
    """ROC points ordered by increasing (fpr, tpr).

    ``thresholds[i]`` produced ``(fpr[i], tpr[i])``. The first point is the
    largest score (nothing exceeds it, so it is (0, 0)); the last point is
    the synthetic (1, 1) endpoint with threshold ``-inf``.
    """

    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return [(float(t), float(x), float(y)) for t, x, y in zip(self.thresholds, self.fpr, self.tpr)]

    def __len__(self) -> int:
        return len(self.fpr)


def roc_curve(eset: EvaluationSet) -> RocCurve:
    _require_both_classes(eset)
    desc = eset.thresholds[::-1]
    tp, fp = _positive_counts(eset, desc)
    fpr = fp / len(eset.normal_scores)
    tpr = tp / len(eset.anomalous_scores)
    return RocCurve(
        thresholds=_readonly(np.append(desc, -np.inf)),
        fpr=_readonly(np.append(fpr, 1.0)),
        tpr=_readonly(np.append(tpr, 1.0)),
    )


def auc_roc(curve: RocCurve) -> float:
    """Trapezoidal area under the ROC curve."""
    x, y = curve.fpr, curve.tpr
    area = float(np.sum((y[1:] + y[:-1]) / 2.0 * np.diff(x)))
    return min(1.0, max(0.0, area))


def pauc(curve: RocCurve, p: float = DEFAULT_PAUC_P) -> float:
    """McClish-standardized partial AUC over FPR in [0, p].

    The raw trapezoidal area up to ``fpr = p`` (with an interpolated point at
    ``p``) is mapped so that a diagonal ROC scores 0.5 and a perfect one 1.
    ``p = 1`` gives the plain AUC.
    """
    if not (0.0 < p <= 1.0) or math.isnan(p):
        raise InvalidParameter(f"pAUC limit p must lie in (0, 1], got {p!r}")
    x, y = curve.fpr, curve.tpr
    area = 0.0
    for i in range(len(x) - 1):
        x0, x1, y0, y1 = x[i], x[i + 1], y[i], y[i + 1]
        if x0 >= p:
            break
        if x1 == x0:
            continue
        if x1 > p:
            y1 = y0 + (y1 - y0) * (p - x0) / (x1 - x0)
            x1 = p
        area += (y0 + y1) / 2.0 * (x1 - x0)
    floor = p * p / 2.0
    value = 0.5 * (1.0 + (area - floor) / (p - floor))
    return min(1.0, max(0.0, float(value)))


# ---------------------------------------------------------------------------
# F1 curve and F1-EV
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class F1Curve:
    """Piecewise-constant F1 as a function of the decision threshold.

    ``f1_values[n]`` holds on ``[thresholds[n], thresholds[n + 1])``; below
    the smallest threshold every sample is flagged anomalous.
    """

    thresholds: np.ndarray
    f1_values: np.ndarray

    def __len__(self) -> int:
        return len(self.thresholds)

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(t), float(f)) for t, f in zip(self.thresholds, self.f1_values)]


def f1_curve(eset: EvaluationSet) -> F1Curve:
    _require_both_classes(eset)
    thresholds = eset.thresholds
    return F1Curve(thresholds=thresholds, f1_values=_readonly(_f1_at_many(eset, thresholds)))


def _normalized_step_sum(values: np.ndarray, knots: np.ndarray) -> float:
    """sum_n values[n] * (knots[n+1] - knots[n]) / (knots[-1] - knots[0])."""
    width = knots[-1] - knots[0]
    total = float(np.sum(values[:-1] * (np.diff(knots) / width)))
    return min(1.0, max(0.0, total))


def f1_ev(eset: EvaluationSet) -> float:
    """Expected F1 for a threshold drawn uniformly from [min score, max score]."""
    curve = f1_curve(eset)
    if len(curve) < 2:
        raise DegenerateScores(
            f"all scores of {eset.machine!r} are equal; the threshold range has zero width"
        )
    return _normalized_step_sum(curve.f1_values, curve.thresholds)


# ---------------------------------------------------------------------------
# optimal threshold
# ---------------------------------------------------------------------------


class OptimalInterval(NamedTuple):
    low: float
    high: float
    f1: float

    @property
    def width(self) -> float:
        return self.high - self.low

    @property
    def center(self) -> float:
        return (self.low + self.high) / 2.0


def optimal_interval(eset: EvaluationSet) -> OptimalInterval:
    """First (lowest) contiguous threshold interval ``[low, high)`` with maximal F1.

    Restricted to [min score, max score]. When the maximal run reaches the
    largest score the interval collapses to that single point; since nothing
    exceeds the largest score this only happens when F1 is 0 everywhere.
    """
    curve = f1_curve(eset)
    f1, t = curve.f1_values, curve.thresholds
    best = float(f1.max())
    start = int(np.argmax(f1 == best))
    off = np.nonzero(f1[start:] != best)[0]
    if len(off) == 0:
        return OptimalInterval(float(t[-1]), float(t[-1]), best)
    stop = start + int(off[0])
    return OptimalInterval(float(t[start]), float(t[stop]), best)


def optimal_threshold(eset: EvaluationSet) -> tuple[float, float]:
    """(theta_opt, f1_opt): center of the optimal interval and the F1 reached there."""
    interval = optimal_interval(eset)
    return interval.center, interval.f1


# ---------------------------------------------------------------------------
# bounded F1-EV
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundedRange:
    mu: float
    sigma: float
    alpha: float
    theta_opt: float
    f1_opt: float
    theta_min: float = field(init=False)
    theta_max: float = field(init=False)
    flags: frozenset[str] = field(init=False)

    def __post_init__(self) -> None:
        theta_min = self.mu - self.alpha * self.sigma
        theta_max = self.theta_opt + self.alpha * self.sigma
        flags = set()
        if self.sigma == 0:
            flags.add(SIGMA_ZERO)
        if theta_min >= theta_max:
            flags.add(EMPTY_BOUNDED_RANGE)
        object.__setattr__(self, "theta_min", theta_min)
        object.__setattr__(self, "theta_max", theta_max)
        object.__setattr__(self, "flags", frozenset(flags))

    @property
    def degenerate(self) -> bool:
        return bool(self.flags)


def bounds(eset: EvaluationSet, alpha: float = DEFAULT_ALPHA) -> BoundedRange:
    """Threshold range [mu - alpha*sigma, theta_opt + alpha*sigma].

    mu and sigma (N-1 denominator) come from the normal samples only.
    """
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InvalidParameter(f"alpha must be a finite positive number, got {alpha!r}")
    _require_both_classes(eset)
    normal = eset.normal_scores
    if len(normal) < 2:
        raise InsufficientNormals(
            f"bounded F1-EV needs at least two normal samples, {eset.machine!r} has {len(normal)}"
        )
    theta_opt, f1_opt = optimal_threshold(eset)
    return BoundedRange(
        mu=stats.mean(normal),
        sigma=stats.sample_std(normal),
        alpha=float(alpha),
        theta_opt=theta_opt,
        f1_opt=f1_opt,
    )


def bounded_thresholds(eset: EvaluationSet, rng: BoundedRange) -> np.ndarray:
    """theta_min, the distinct scores strictly inside (theta_min, theta_max), theta_max."""
    t = eset.thresholds
    interior = t[(t > rng.theta_min) & (t < rng.theta_max)]
    return _readonly(np.concatenate([[rng.theta_min], interior, [rng.theta_max]]))


class BoundedF1EV(NamedTuple):
    value: float
    degenerate: bool


def bounded_f1_ev(eset: EvaluationSet, alpha: float = DEFAULT_ALPHA) -> BoundedF1EV:
    """F1-EV restricted to the bounded threshold range.

    A degenerate range (sigma = 0 or theta_min >= theta_max) yields F1 at the
    midpoint of the two bounds, flagged as degenerate.
    """
    rng = bounds(eset, alpha)
    return _bounded_value(eset, rng)


def _bounded_value(eset: EvaluationSet, rng: BoundedRange) -> BoundedF1EV:
    if rng.degenerate:
        midpoint = (rng.theta_min + rng.theta_max) / 2.0
        return BoundedF1EV(f1_at(eset, midpoint), True)
    knots = bounded_thresholds(eset, rng)
    return BoundedF1EV(_normalized_step_sum(_f1_at_many(eset, knots), knots), False)


# ---------------------------------------------------------------------------
# per-machine report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricReport:
    machine: str
    auc: float
    pauc: float
    f1_ev: float
    bounded_f1_ev: float
    optimal_f1: float
    theta_opt: float
    f1_at_submitted: float | None = None
    degenerate_flags: frozenset[str] = frozenset()

    @property
    def hmean_auc_pauc(self) -> float:
        return stats.harmonic_mean([self.auc, self.pauc])

    def as_dict(self) -> dict:
        return {
            "machine": self.machine,
            "auc": self.auc,
            "pauc": self.pauc,
            "hmean_auc_pauc": self.hmean_auc_pauc,
            "f1_ev": self.f1_ev,
            "bounded_f1_ev": self.bounded_f1_ev,
            "optimal_f1": self.optimal_f1,
            "theta_opt": self.theta_opt,
            "f1_at_submitted": self.f1_at_submitted,
            "flags": sorted(self.degenerate_flags),
        }


def evaluate(
    eset: EvaluationSet,
    alpha: float = DEFAULT_ALPHA,
    p: float = DEFAULT_PAUC_P,
    submitted_threshold: float | None = None,
) -> MetricReport:
    """All measures for one machine type. Errors of the parts propagate."""
    curve = roc_curve(eset)
    rng = bounds(eset, alpha)
    bounded = _bounded_value(eset, rng)
    submitted = None if submitted_threshold is None else f1_at(eset, submitted_threshold)
    return MetricReport(
        machine=eset.machine,
        auc=auc_roc(curve),
        pauc=pauc(curve, p),
        f1_ev=f1_ev(eset),
        bounded_f1_ev=bounded.value,
        optimal_f1=rng.f1_opt,
        theta_opt=rng.theta_opt,
        f1_at_submitted=submitted,
        degenerate_flags=rng.flags,
    )
