"""Cross-system comparison of performance measures.

Every (system, machine) pair contributes one point carrying all measures;
Pearson correlations between measures are computed over those points. A
system whose submitted thresholds give F1 = 0 on every machine (or that
submitted no thresholds) is left out, the same way challenge entries that
never tried to estimate a threshold would be.
"""

from __future__ import annotations

import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from f1ev import metrics, stats
from f1ev.dataset_io import GroundTruth, SystemSubmission, join
from f1ev.errors import F1EVError, InsufficientData

MEASURES = ("auc", "f1_ev", "bounded_f1_ev", "f1_submitted", "f1_optimal")
MIN_SYSTEMS = 3


@dataclass(frozen=True)
class CohortPoint:
    system: str
    machine: str
    auc: float
    pauc: float
    f1_ev: float
    bounded_f1_ev: float
    f1_submitted: float
    f1_optimal: float
    flags: frozenset[str] = frozenset()

    def measure(self, name: str) -> float:
        return getattr(self, name)


@dataclass(frozen=True)
class CohortEvaluation:
    points: list[CohortPoint]
    excluded: list[tuple[str, str]] = field(default_factory=list)
    skipped: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def systems(self) -> list[str]:
        return sorted({p.system for p in self.points})


def evaluate_cohort(
    submissions: Sequence[SystemSubmission],
    truth: GroundTruth,
    alpha: float = metrics.DEFAULT_ALPHA,
    p: float = metrics.DEFAULT_PAUC_P,
) -> CohortEvaluation:
    points: list[CohortPoint] = []
    excluded: list[tuple[str, str]] = []
    skipped: list[tuple[str, str, str]] = []
    for sub in sorted(submissions, key=lambda s: s.system_id):
        if not sub.thresholds:
            excluded.append((sub.system_id, "no submitted thresholds"))
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sets = join(sub.scores, truth)
        mine = []
        for eset in sets:
            threshold = sub.thresholds.get(eset.machine)
            if threshold is None:
                skipped.append((sub.system_id, eset.machine, "no threshold for machine"))
                continue
            try:
                report = metrics.evaluate(eset, alpha, p, threshold)
            except F1EVError as exc:
                skipped.append((sub.system_id, eset.machine, f"{type(exc).__name__}: {exc}"))
                continue
            mine.append(
                CohortPoint(
                    system=sub.system_id,
                    machine=eset.machine,
                    auc=report.auc,
                    pauc=report.pauc,
                    f1_ev=report.f1_ev,
                    bounded_f1_ev=report.bounded_f1_ev,
                    f1_submitted=report.f1_at_submitted,
                    f1_optimal=report.optimal_f1,
                    flags=report.degenerate_flags,
                )
            )
        if mine and all(pt.f1_submitted == 0 for pt in mine):
            excluded.append((sub.system_id, "F1 = 0 at submitted thresholds"))
            continue
        points.extend(mine)
    return CohortEvaluation(points, excluded, skipped)


def _require_systems(evaluation: CohortEvaluation) -> None:
    if len(evaluation.systems) < MIN_SYSTEMS:
        raise InsufficientData(
            f"need at least {MIN_SYSTEMS} usable systems for correlations, got {len(evaluation.systems)}"
        )


def correlation(points: Iterable[CohortPoint], a: str, b: str) -> float:
    pts = list(points)
    return stats.pearson([pt.measure(a) for pt in pts], [pt.measure(b) for pt in pts])


def pcc_matrix(evaluation: CohortEvaluation, measures: Sequence[str] = MEASURES) -> dict[tuple[str, str], float]:
    """Symmetric matrix of Pearson correlations, keyed by (row, column)."""
    _require_systems(evaluation)
    matrix: dict[tuple[str, str], float] = {}
    for i, a in enumerate(measures):
        matrix[a, a] = 1.0
        for b in measures[i + 1 :]:
            r = correlation(evaluation.points, a, b)
            matrix[a, b] = matrix[b, a] = r
    return matrix


@dataclass(frozen=True)
class AblationRow:
    alpha: float
    pcc_auc: float
    pcc_f1_submitted: float
    pcc_f1_optimal: float
    n_points: int


def alpha_sweep(
    submissions: Sequence[SystemSubmission],
    truth: GroundTruth,
    alphas: Iterable[float],
    p: float = metrics.DEFAULT_PAUC_P,
) -> list[AblationRow]:
    """Correlation of bounded F1-EV with AUC and both F1 scores, per alpha."""
    rows = []
    for alpha in alphas:
        evaluation = evaluate_cohort(submissions, truth, alpha, p)
        matrix = pcc_matrix(evaluation)
        rows.append(
            AblationRow(
                alpha=float(alpha),
                pcc_auc=matrix["bounded_f1_ev", "auc"],
                pcc_f1_submitted=matrix["bounded_f1_ev", "f1_submitted"],
                pcc_f1_optimal=matrix["bounded_f1_ev", "f1_optimal"],
                n_points=len(evaluation.points),
            )
        )
    return rows
