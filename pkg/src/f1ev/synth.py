"""Synthetic score data and brute-force reference oracles.

Random numbers come from numpy's PCG64 bit generator, and only through
``Generator.random()`` (uniform doubles in [0, 1)). Normal variates are built
with the Box-Muller transform here instead of numpy's ziggurat sampler, so
generated files depend on nothing but PCG64's documented output stream.

The oracles are deliberately naive. They re-derive every quantity from raw
(score, label) pairs and share no code with :mod:`f1ev.metrics`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from f1ev.data import Domain, EvaluationSet, Label, ScoreSample
from f1ev.dataset_io import GroundTruth, SystemSubmission, TruthEntry
from f1ev.errors import InvalidParameter


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def standard_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Box-Muller normals from 2n uniforms."""
    u = rng.random((2, n))
    radius = np.sqrt(-2.0 * np.log1p(-u[0]))  # 1 - u in (0, 1]
    return radius * np.cos(2.0 * np.pi * u[1])


# ---------------------------------------------------------------------------
# toy scenarios
# ---------------------------------------------------------------------------


class ToyKind(str, Enum):
    SMALL_MARGIN = "small-margin"
    LARGE_MARGIN = "large-margin"
    POINT_THRESHOLD = "point-threshold"


TOY_MARGINS = {ToyKind.SMALL_MARGIN: 0.05, ToyKind.LARGE_MARGIN: 5.0, ToyKind.POINT_THRESHOLD: 0.0}


@dataclass(frozen=True)
class ToyScenario:
    """Perfectly separable score distributions with a chosen gap.

    Normal scores are uniform on [1, 2). Anomalous scores are uniform on
    [2 + m, 3 + m) with m = 0.05 (small margin) or m = 5 (large margin). For
    the point-threshold case they are uniform on (2, 3], so both supports
    touch at 2 and the optimal threshold interval shrinks to that point as
    the sample grows.
    """

    kind: ToyKind
    n_normal: int = 100
    n_anomalous: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ToyKind(self.kind))
        if self.n_normal < 1 or self.n_anomalous < 1:
            raise InvalidParameter(
                f"toy scenarios need at least one sample per class, got {self.n_normal}/{self.n_anomalous}"
            )


def gen_toy(scenario: ToyScenario) -> EvaluationSet:
    rng = make_rng(scenario.seed)
    normal = 1.0 + rng.random(scenario.n_normal)
    u = rng.random(scenario.n_anomalous)
    if scenario.kind is ToyKind.POINT_THRESHOLD:
        anomalous = 3.0 - u
    else:
        anomalous = 2.0 + TOY_MARGINS[scenario.kind] + u
    return EvaluationSet.from_scores(normal.tolist(), anomalous.tolist(), machine=scenario.kind.value)


def random_sets(
    count: int,
    seed: int,
    min_size: int = 2,
    max_size: int = 100,
    tie_prob: float = 0.3,
) -> list[EvaluationSet]:
    """Random labeled sets with both classes and at least two distinct scores.

    Each sample, with probability ``tie_prob``, copies the score of an
    earlier sample, so ties within and across classes are common.
    """
    rng = make_rng(seed)
    out: list[EvaluationSet] = []
    while len(out) < count:
        n = min_size + int(rng.random() * (max_size - min_size + 1))
        n_anom = 1 + int(rng.random() * (n - 1))
        scores = 10.0 * rng.random(n)
        copy = rng.random(n) < tie_prob
        source = (rng.random(n) * np.arange(n)).astype(np.int64)
        for i in range(1, n):
            if copy[i]:
                scores[i] = scores[source[i]]
        if len(np.unique(scores)) < 2:
            continue
        labels = [Label.ANOMALOUS] * n_anom + [Label.NORMAL] * (n - n_anom)
        order = np.argsort(rng.random(n), kind="stable")
        samples = tuple(
            ScoreSample(f"clip_{i:03d}", float(scores[i]), labels[j]) for i, j in enumerate(order)
        )
        out.append(EvaluationSet(f"random_{len(out):03d}", samples))
    return out


# ---------------------------------------------------------------------------
# synthetic system cohort
# ---------------------------------------------------------------------------

COHORT_MACHINES = ("fan", "valve")
COHORT_CLIPS_PER_CELL = 50  # per (machine, domain, label)
COHORT_TRAIN_SOURCE = 990
COHORT_TRAIN_TARGET = 10
ABSTAIN_THRESHOLD = 1e6


@dataclass(frozen=True)
class Cohort:
    truth: GroundTruth
    submissions: list[SystemSubmission]


def _cohort_truth(rng: np.random.Generator) -> GroundTruth:
    entries: dict[str, TruthEntry] = {}
    for machine in COHORT_MACHINES:
        cells = [
            (domain, label)
            for domain in (Domain.SOURCE, Domain.TARGET)
            for label in (Label.NORMAL, Label.ANOMALOUS)
            for _ in range(COHORT_CLIPS_PER_CELL)
        ]
        order = np.argsort(rng.random(len(cells)), kind="stable")
        for idx, cell in enumerate(order):
            domain, label = cells[cell]
            entries[f"{machine}_{domain.value}_test_{idx:04d}.wav"] = TruthEntry(label, domain, machine)
    return GroundTruth(entries)


def gen_cohort(n_systems: int, seed: int) -> Cohort:
    """A family of simulated detectors scored on one shared test set.

    Per system, in log-score space: normal clips are standard normal;
    a random fraction (30-100 %) of anomalous clips is shifted by a random
    separation and widened by a random spread, the rest look normal; the
    target domain drifts upward by a random amount; some systems emit rare
    high-scoring normal clips (noise bursts). The submitted threshold is a
    random percentile (80-99 %) of the system's own normal training scores
    (990 source + 10 target clips). About one system in ten abstains and
    submits a threshold that flags nothing. Scores are ``exp(scale * x)``,
    so positive, with a per-system scale.
    """
    if n_systems < 3:
        raise InvalidParameter(f"a cohort needs at least three systems, got {n_systems}")
    rng = make_rng(seed)
    truth = _cohort_truth(rng)
    clip_ids = list(truth.entries)
    n = len(clip_ids)
    anomalous = np.array([truth.entries[c].label is Label.ANOMALOUS for c in clip_ids])
    target = np.array([truth.entries[c].domain is Domain.TARGET for c in clip_ids])

    submissions = []
    for k in range(n_systems):
        separation = 0.3 + 2.7 * rng.random()
        drift = 1.5 * rng.random()
        spread = 1.0 + 2.0 * rng.random()
        detectable = 0.3 + 0.7 * rng.random()
        burst_rate = 0.03 * rng.random() if rng.random() < 0.5 else 0.0
        percentile = 0.80 + 0.19 * rng.random()
        abstains = rng.random() < 0.1
        scale = 0.3 + 0.4 * rng.random()

        z = standard_normal(rng, n)
        burst = rng.random(n) < burst_rate
        burst_size = 2.0 + 3.0 * rng.random(n)
        shifted = anomalous & (rng.random(n) < detectable)
        x = np.where(shifted, separation + spread * z, z) + drift * target
        x = x + np.where(burst & ~anomalous, burst_size, 0.0)
        scores = {c: float(v) for c, v in zip(clip_ids, np.exp(scale * x))}

        thresholds = {}
        for machine in COHORT_MACHINES:
            train = np.concatenate(
                [standard_normal(rng, COHORT_TRAIN_SOURCE), standard_normal(rng, COHORT_TRAIN_TARGET) + drift]
            )
            cut = float(np.exp(scale * np.quantile(train, percentile)))
            thresholds[machine] = ABSTAIN_THRESHOLD if abstains else cut
        submissions.append(SystemSubmission(f"system_{k:03d}", scores, thresholds))
    return Cohort(truth, submissions)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def _split(eset: EvaluationSet) -> tuple[list[float], list[float]]:
    normal = [s.score for s in eset.samples if s.label is Label.NORMAL]
    anomalous = [s.score for s in eset.samples if s.label is Label.ANOMALOUS]
    return normal, anomalous


def oracle_auc_pairwise(eset: EvaluationSet) -> float:
    """P(normal < anomalous) + P(tie)/2 over all (normal, anomalous) pairs, exactly."""
    normal, anomalous = _split(eset)
    if not normal or not anomalous:
        raise ValueError("pairwise AUC needs both classes")
    wins = Fraction(0)
    for a in normal:
        for b in anomalous:
            if a < b:
                wins += 1
            elif a == b:
                wins += Fraction(1, 2)
    return float(wins / (len(normal) * len(anomalous)))


def oracle_f1(eset: EvaluationSet, threshold: float) -> float:
    """F1 by looping over every sample."""
    tp = fp = fn = 0
    for s in eset.samples:
        flagged = s.score > threshold
        if s.label is Label.ANOMALOUS:
            tp += flagged
            fn += not flagged
        else:
            fp += flagged
    return 2 * tp / (2 * tp + fp + fn) if tp else 0.0


def _grid_f1(normal: np.ndarray, anomalous: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """F1 at every point of an ascending grid, by sweeping samples over the grid.

    A sample with score s is flagged at grid point g iff s > g, i.e. for the
    first ``searchsorted(grid, s, 'left')`` grid points.
    """
    g = len(grid)

    def flagged_counts(scores: np.ndarray) -> np.ndarray:
        reach = np.searchsorted(grid, scores, side="left")
        hits = np.bincount(reach, minlength=g + 1)
        # count of samples whose reach exceeds i
        return hits[::-1].cumsum()[::-1][1:]

    tp = flagged_counts(anomalous).astype(np.float64)
    fp = flagged_counts(normal).astype(np.float64)
    fn = len(anomalous) - tp
    denom = 2 * tp + fp + fn
    return np.where(tp > 0, 2 * tp / np.where(denom > 0, denom, 1.0), 0.0)


def _uniform_left_grid(low: float, high: float, points: int) -> np.ndarray:
    return low + (high - low) * (np.arange(points, dtype=np.float64) / points)


def oracle_f1_ev_grid(eset: EvaluationSet, points: int = 1_000_000) -> float:
    """Left Riemann sum of F1 on a uniform grid over [min score, max score]."""
    if points < 1000:
        raise InvalidParameter("grid oracle needs at least 1000 points")
    normal, anomalous = (np.asarray(v, dtype=np.float64) for v in _split(eset))
    low = min(normal.min(), anomalous.min())
    high = max(normal.max(), anomalous.max())
    if low == high:
        raise ValueError("zero-width score range")
    return float(np.mean(_grid_f1(normal, anomalous, _uniform_left_grid(low, high, points))))


def oracle_f1_ev_events(eset: EvaluationSet, extra_points: int = 64, seed: int = 0) -> float:
    """Left Riemann sum on an irregular grid that contains every score as a knot.

    Extra knots are scattered inside the range; because F1 only changes at
    scores, the sum must equal F1-EV up to rounding.
    """
    scores = sorted({s.score for s in eset.samples})
    low, high = scores[0], scores[-1]
    if low == high:
        raise ValueError("zero-width score range")
    rng = make_rng(seed)
    knots = sorted(set(scores) | set((low + (high - low) * rng.random(extra_points)).tolist()))
    total = 0.0
    for left, right in zip(knots[:-1], knots[1:]):
        total += oracle_f1(eset, left) * (right - left)
    return total / (high - low)


def _brute_bounds(eset: EvaluationSet, alpha: float) -> tuple[float, float]:
    normal, _ = _split(eset)
    arr = np.asarray(normal, dtype=np.float64)
    mu, sigma = float(arr.mean()), float(arr.std(ddof=1))
    scores = sorted({s.score for s in eset.samples})
    f1 = [oracle_f1(eset, t) for t in scores]
    best = max(f1)
    i = f1.index(best)
    j = i
    while j < len(f1) and f1[j] == best:
        j += 1
    theta_opt = scores[-1] if j == len(f1) else (scores[i] + scores[j]) / 2
    return mu - alpha * sigma, theta_opt + alpha * sigma


def oracle_bounded_grid(eset: EvaluationSet, alpha: float = 0.2, points: int = 1_000_000) -> float:
    """Left Riemann sum of F1 on a uniform grid over [theta_min, theta_max].

    The bounds are recomputed here with numpy (mean, ddof=1 std) and a
    brute-force arg-max of F1.
    """
    if points < 1000:
        raise InvalidParameter("grid oracle needs at least 1000 points")
    theta_min, theta_max = _brute_bounds(eset, alpha)
    if theta_min >= theta_max:
        return oracle_f1(eset, (theta_min + theta_max) / 2)
    normal, anomalous = (np.asarray(v, dtype=np.float64) for v in _split(eset))
    grid = _uniform_left_grid(theta_min, theta_max, points)
    return float(np.mean(_grid_f1(normal, anomalous, grid)))


def oracle_pauc_grid(eset: EvaluationSet, p: float = 0.1, points: int = 1_000_000) -> float:
    """Standardized partial AUC by midpoint integration of the ROC over FPR in [0, p].

    The ROC height at false-positive rate u is rebuilt from the sorted normal
    scores: u lies in the block of normals tied at the k-th largest value s,
    and across that block TPR rises linearly from #(anomalous > s) to
    #(anomalous >= s).
    """
    normal, anomalous = _split(eset)
    nn, na = len(normal), len(anomalous)
    desc = sorted(normal, reverse=True)
    u = (np.arange(points, dtype=np.float64) + 0.5) * (p / points)
    rank = np.minimum((u * nn).astype(np.int64), nn - 1)  # 0-based index into desc
    block_start = np.array([desc.index(v) for v in desc], dtype=np.float64)
    block_size = np.array([desc.count(v) for v in desc], dtype=np.float64)
    above = np.array([sum(a > v for a in anomalous) for v in desc], dtype=np.float64)
    ties = np.array([sum(a == v for a in anomalous) for v in desc], dtype=np.float64)
    g, m = block_start[rank], block_size[rank]
    above, ties = above[rank], ties[rank]
    tpr = (above + ties * (u * nn - g) / m) / na
    area = float(tpr.mean() * p)
    floor = p * p / 2
    return 0.5 * (1 + (area - floor) / (p - floor))
