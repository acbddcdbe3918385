"""Command-line interface.

    f1ev evaluate --scores S.csv --truth GT.csv [--thresholds T.csv]
    f1ev compare  --cohort DIR [--truth GT.csv] [--out DIR]
    f1ev ablate   --cohort DIR [--truth GT.csv] [--alphas 0.05,0.1,0.2,0.5,1,2]
    f1ev curves   --scores S.csv --truth GT.csv --machine NAME
    f1ev synth toy    --scenario large-margin --n-normal 100 --n-anomalous 100 --seed 42 --out DIR
    f1ev synth cohort --n-systems 50 --seed 7 --out DIR

Exit status is 0 on success (per-machine problems are reported as warnings
and marked rows) and 2 for unusable input or arguments.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from f1ev import compare, metrics, stats, synth
from f1ev.dataset_io import (
    format_float,
    join,
    load_cohort,
    parse_ground_truth,
    parse_scores,
    parse_thresholds,
    write_cohort,
    write_ground_truth,
    write_scores,
    GroundTruth,
    TruthEntry,
)
from f1ev.data import Domain
from f1ev.errors import F1EVError

EXIT_OK = 0
EXIT_USAGE = 2
DEFAULT_ALPHAS = (0.05, 0.1, 0.2, 0.5, 1.0, 2.0)
FORMATS = ("table", "csv", "jsonl")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    alpha: float = metrics.DEFAULT_ALPHA
    pauc_p: float = metrics.DEFAULT_PAUC_P
    fmt: str = "table"

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise UsageError(f"--alpha must be positive, got {self.alpha}")
        if not (0 < self.pauc_p <= 1):
            raise UsageError(f"--pauc-p must lie in (0, 1], got {self.pauc_p}")
        if self.fmt not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        return cls(
            alpha=getattr(args, "alpha", metrics.DEFAULT_ALPHA),
            pauc_p=getattr(args, "pauc_p", metrics.DEFAULT_PAUC_P),
            fmt=getattr(args, "format", "table"),
        )


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _cell(value, machine_readable: bool) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value) if machine_readable else f"{value:.4f}"
    if isinstance(value, (list, tuple, set, frozenset)):
        return ";".join(sorted(str(v) for v in value))
    return str(value)


def render(rows: list[dict], columns: Sequence[str], fmt: str, out: TextIO) -> None:
    """Write rows as an aligned table, CSV, or JSON lines.

    CSV and JSON carry floats at full precision (shortest round-trip repr);
    the table rounds to four decimals.
    """
    if fmt == "jsonl":
        for row in rows:
            out.write(json.dumps({c: _json_value(row.get(c)) for c in columns}) + "\n")
        return
    machine_readable = fmt == "csv"
    body = [[_cell(row.get(c), machine_readable) for c in columns] for row in rows]
    if fmt == "csv":
        import csv

        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(body)
        return
    widths = [max(len(c), *(len(r[i]) for r in body)) if body else len(c) for i, c in enumerate(columns)]
    out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for r in body:
        out.write("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() + "\n")


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return value


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    return target.open("w", encoding="utf-8", newline=""), True


def _emit(rows: list[dict], columns: Sequence[str], fmt: str, path: str | None) -> None:
    out, close = _open_out(path)
    try:
        render(rows, columns, fmt, out)
    finally:
        if close:
            out.close()


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------

EVALUATE_COLUMNS = (
    "machine",
    "auc",
    "pauc",
    "hmean_auc_pauc",
    "f1_ev",
    "bounded_f1_ev",
    "optimal_f1",
    "theta_opt",
    "f1_at_submitted",
    "flags",
    "error",
)


def _load_sets(scores_path: str, truth_path: str):
    truth = parse_ground_truth(truth_path)
    scores = parse_scores(scores_path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sets = join(scores, truth)
    for w in caught:
        _warn(str(w.message))
    return sets


def overall_row(reports: Sequence[metrics.MetricReport]) -> dict:
    """Aggregate per-machine reports: harmonic mean for AUC and pAUC, arithmetic mean otherwise."""
    row: dict = {"machine": "overall"}
    if not reports:
        return row
    aucs = [r.auc for r in reports]
    paucs = [r.pauc for r in reports]
    row["auc"] = stats.harmonic_mean(aucs)
    row["pauc"] = stats.harmonic_mean(paucs)
    row["hmean_auc_pauc"] = stats.harmonic_mean(aucs + paucs)
    for name in ("f1_ev", "bounded_f1_ev", "optimal_f1"):
        row[name] = stats.mean([getattr(r, name) for r in reports])
    submitted = [r.f1_at_submitted for r in reports]
    if all(v is not None for v in submitted):
        row["f1_at_submitted"] = stats.mean(submitted)
    return row


def evaluate_rows(sets, thresholds: dict[str, float] | None, config: RunConfig) -> list[dict]:
    rows = []
    reports = []
    for eset in sets:
        submitted = None if thresholds is None else thresholds.get(eset.machine)
        if thresholds is not None and submitted is None:
            _warn(f"no submitted threshold for machine {eset.machine!r}")
        try:
            report = metrics.evaluate(eset, config.alpha, config.pauc_p, submitted)
        except F1EVError as exc:
            _warn(f"machine {eset.machine!r}: {type(exc).__name__}: {exc}")
            rows.append({"machine": eset.machine, "error": type(exc).__name__})
            continue
        if report.degenerate_flags:
            _warn(f"machine {eset.machine!r}: degenerate bounded range ({', '.join(sorted(report.degenerate_flags))})")
        reports.append(report)
        row = report.as_dict()
        row["flags"] = report.degenerate_flags
        rows.append(row)
    rows.append(overall_row(reports))
    return rows


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    sets = _load_sets(args.scores, args.truth)
    thresholds = parse_thresholds(args.thresholds) if args.thresholds else None
    rows = evaluate_rows(sets, thresholds, config)
    _emit(rows, EVALUATE_COLUMNS, config.fmt, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# compare / ablate
# ---------------------------------------------------------------------------

SCATTER_COLUMNS = ("system", "machine", "auc", "pauc", *compare.MEASURES[1:], "flags")


def _load_cohort(args: argparse.Namespace):
    truth_path = args.truth or str(Path(args.cohort) / "ground_truth.csv")
    truth = parse_ground_truth(truth_path)
    submissions = load_cohort(args.cohort)
    return submissions, truth


def _cohort_evaluation(submissions, truth, config: RunConfig) -> compare.CohortEvaluation:
    evaluation = compare.evaluate_cohort(submissions, truth, config.alpha, config.pauc_p)
    for system, reason in evaluation.excluded:
        _warn(f"excluded {system}: {reason}")
    for system, machine, reason in evaluation.skipped:
        _warn(f"skipped {system}/{machine}: {reason}")
    return evaluation


def cmd_compare(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    submissions, truth = _load_cohort(args)
    evaluation = _cohort_evaluation(submissions, truth, config)
    matrix = compare.pcc_matrix(evaluation)
    rows = [{"measure": a, **{b: matrix[a, b] for b in compare.MEASURES}} for a in compare.MEASURES]
    columns = ("measure", *compare.MEASURES)
    if args.out:
        out_dir = Path(args.out)
        _emit(rows, columns, "csv", str(out_dir / "pcc_matrix.csv"))
        scatter = [
            {
                "system": pt.system,
                "machine": pt.machine,
                **{name: pt.measure(name) for name in SCATTER_COLUMNS[2:-1]},
                "flags": pt.flags,
            }
            for pt in evaluation.points
        ]
        _emit(scatter, SCATTER_COLUMNS, "csv", str(out_dir / "scatter.csv"))
    _emit(rows, columns, config.fmt, None)
    return EXIT_OK


ABLATE_COLUMNS = ("alpha", "pcc_auc", "pcc_f1_submitted", "pcc_f1_optimal", "n_points")


def _parse_alphas(text: str) -> list[float]:
    try:
        alphas = [float(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise UsageError(f"--alphas must be a comma-separated list of numbers, got {text!r}") from None
    if not alphas or any(not (a > 0 and math.isfinite(a)) for a in alphas):
        raise UsageError(f"--alphas must be positive numbers, got {text!r}")
    return alphas


def cmd_ablate(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    alphas = _parse_alphas(args.alphas)
    submissions, truth = _load_cohort(args)
    rows = []
    for alpha in alphas:
        evaluation = _cohort_evaluation(submissions, truth, RunConfig(alpha, config.pauc_p, config.fmt))
        matrix = compare.pcc_matrix(evaluation)
        rows.append(
            {
                "alpha": alpha,
                "pcc_auc": matrix["bounded_f1_ev", "auc"],
                "pcc_f1_submitted": matrix["bounded_f1_ev", "f1_submitted"],
                "pcc_f1_optimal": matrix["bounded_f1_ev", "f1_optimal"],
                "n_points": len(evaluation.points),
            }
        )
    _emit(rows, ABLATE_COLUMNS, config.fmt, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

CURVE_COLUMNS = ("kind", "threshold", "fpr", "tpr", "f1")


def curve_rows(eset, alpha: float) -> list[dict]:
    f1 = metrics.f1_curve(eset)
    roc = metrics.roc_curve(eset)
    rows = [{"kind": "f1", "threshold": t, "f1": v} for t, v in f1.points]
    rows += [{"kind": "roc", "threshold": t, "fpr": x, "tpr": y} for t, x, y in roc.points]
    try:
        rng = metrics.bounds(eset, alpha)
    except F1EVError as exc:
        _warn(f"no bound markers: {exc}")
        theta_opt, f1_opt = metrics.optimal_threshold(eset)
        rows.append({"kind": "theta_opt", "threshold": theta_opt, "f1": f1_opt})
        return rows
    rows.append({"kind": "theta_min", "threshold": rng.theta_min, "f1": metrics.f1_at(eset, rng.theta_min)})
    rows.append({"kind": "theta_max", "threshold": rng.theta_max, "f1": metrics.f1_at(eset, rng.theta_max)})
    rows.append({"kind": "theta_opt", "threshold": rng.theta_opt, "f1": rng.f1_opt})
    return rows


def cmd_curves(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    if not args.machine:
        raise UsageError("--machine must not be empty")
    sets = {s.machine: s for s in _load_sets(args.scores, args.truth)}
    if args.machine not in sets:
        raise UsageError(f"unknown machine {args.machine!r}; available: {', '.join(sorted(sets))}")
    fmt = "csv" if config.fmt == "table" else config.fmt
    _emit(curve_rows(sets[args.machine], config.alpha), CURVE_COLUMNS, fmt, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------


def write_toy(out_dir: Path, scenario: synth.ToyScenario) -> None:
    eset = synth.gen_toy(scenario)
    write_scores(out_dir / "scores.csv", {s.clip_id: s.score for s in eset.samples})
    truth = GroundTruth({s.clip_id: TruthEntry(s.label, Domain.SOURCE, eset.machine) for s in eset.samples})
    write_ground_truth(out_dir / "ground_truth.csv", truth)


def cmd_synth(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    try:
        if args.mode == "toy":
            scenario = synth.ToyScenario(args.scenario, args.n_normal, args.n_anomalous, args.seed)
            write_toy(out_dir, scenario)
        else:
            cohort = synth.gen_cohort(args.n_systems, args.seed)
            write_cohort(out_dir, cohort.truth, cohort.submissions)
    except OSError as exc:
        raise UsageError(f"cannot write to {out_dir}: {exc}") from None
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_config_flags(p: argparse.ArgumentParser, fmt: bool = True) -> None:
    p.add_argument("--alpha", type=float, default=metrics.DEFAULT_ALPHA, help="bound width factor (default 0.2)")
    p.add_argument("--pauc-p", type=float, default=metrics.DEFAULT_PAUC_P, help="pAUC FPR limit (default 0.1)")
    if fmt:
        p.add_argument("--format", choices=FORMATS, default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="f1ev", description="Threshold-independent anomaly detection measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="per-machine measures for one system")
    p.add_argument("--scores", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--thresholds")
    p.add_argument("--out", help="write to this file instead of stdout")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="Pearson correlations between measures across a cohort")
    p.add_argument("--cohort", required=True)
    p.add_argument("--truth", help="default: <cohort>/ground_truth.csv")
    p.add_argument("--out", help="directory for pcc_matrix.csv and scatter.csv")
    _add_config_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("ablate", help="correlations of bounded F1-EV as alpha varies")
    p.add_argument("--cohort", required=True)
    p.add_argument("--truth", help="default: <cohort>/ground_truth.csv")
    p.add_argument("--alphas", default=",".join(str(a) for a in DEFAULT_ALPHAS))
    p.add_argument("--out")
    _add_config_flags(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("curves", help="F1 and ROC breakpoints plus bound markers as CSV")
    p.add_argument("--scores", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--machine", required=True)
    p.add_argument("--out")
    _add_config_flags(p)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("synth", help="write synthetic data in the CSV schemas")
    modes = p.add_subparsers(dest="mode", required=True)
    toy = modes.add_parser("toy")
    toy.add_argument("--scenario", choices=[k.value for k in synth.ToyKind], required=True)
    toy.add_argument("--n-normal", type=int, default=100)
    toy.add_argument("--n-anomalous", type=int, default=100)
    toy.add_argument("--seed", type=int, default=42)
    toy.add_argument("--out", required=True)
    cohort = modes.add_parser("cohort")
    cohort.add_argument("--n-systems", type=int, default=50)
    cohort.add_argument("--seed", type=int, default=7)
    cohort.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, F1EVError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
