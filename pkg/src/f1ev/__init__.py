"""AUC-ROC, partial AUC, F1-EV and bounded F1-EV for anomaly detection scores."""

from f1ev.data import Domain, EvaluationSet, Label, ScoreSample
from f1ev.metrics import (
    BoundedRange,
    ConfusionCounts,
    F1Curve,
    MetricReport,
    RocCurve,
    auc_roc,
    bounded_f1_ev,
    bounds,
    classify,
    confusion_at,
    evaluate,
    f1_curve,
    f1_ev,
    optimal_threshold,
    pauc,
    precision_recall_f1,
    roc_curve,
)

__all__ = [
    "BoundedRange",
    "ConfusionCounts",
    "Domain",
    "EvaluationSet",
    "F1Curve",
    "Label",
    "MetricReport",
    "RocCurve",
    "ScoreSample",
    "auc_roc",
    "bounded_f1_ev",
    "bounds",
    "classify",
    "confusion_at",
    "evaluate",
    "f1_curve",
    "f1_ev",
    "optimal_threshold",
    "pauc",
    "precision_recall_f1",
    "roc_curve",
]
