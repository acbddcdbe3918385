"""Score, ground-truth and threshold files.

Three CSV schemas, UTF-8, header mandatory, LF or CRLF line endings::

    scores.csv        clip_id,score
    ground_truth.csv  clip_id,label,domain,machine
    thresholds.csv    machine,threshold

A cohort directory holds many systems evaluated against one ground truth::

    <dir>/ground_truth.csv
    <dir>/scores/<system_id>.csv
    <dir>/thresholds/<system_id>.csv     (optional per system)
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

from f1ev.data import Domain, EvaluationSet, Label, ScoreSample
from f1ev.errors import JoinError, ParseError

SCORES_HEADER = ("clip_id", "score")
TRUTH_HEADER = ("clip_id", "label", "domain", "machine")
THRESHOLDS_HEADER = ("machine", "threshold")


class ExtraScoresWarning(UserWarning):
    """Scored clips that the ground truth does not list."""


@dataclass(frozen=True)
class TruthEntry:
    label: Label
    domain: Domain
    machine: str


@dataclass(frozen=True)
class GroundTruth:
    entries: dict[str, TruthEntry] = field(default_factory=dict)

    @property
    def machines(self) -> list[str]:
        return sorted({e.machine for e in self.entries.values()})

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SystemSubmission:
    system_id: str
    scores: dict[str, float]
    thresholds: dict[str, float] | None = None


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _rows(path: str | Path, header: tuple[str, ...]):
    """Yield (line_number, fields) for the data rows of a CSV file."""
    name = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except FileNotFoundError:
        raise ParseError("file not found", path=name) from None
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read file ({exc})", path=name) from None
    reader = csv.reader(io.StringIO(text, newline=""))
    first = next(reader, None)
    if first is None or tuple(f.strip() for f in first) != header:
        raise ParseError(f"expected header {','.join(header)!r}, got {','.join(first or [])!r}", name, 1)
    for fields in reader:
        if not fields:
            continue
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(fields)}", name, reader.line_num)
        yield reader.line_num, [f.strip() for f in fields]


def _parse_float(text: str, what: str, path: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", path, line) from None
    if not math.isfinite(value):
        raise ParseError(f"{what} {text!r} is not finite", path, line)
    return value


def _parse_id(text: str, what: str, path: str, line: int) -> str:
    if not text:
        raise ParseError(f"empty {what}", path, line)
    return text


def parse_scores(path: str | Path) -> dict[str, float]:
    scores: dict[str, float] = {}
    name = str(path)
    for line, (clip_id, raw) in _rows(path, SCORES_HEADER):
        clip_id = _parse_id(clip_id, "clip_id", name, line)
        if clip_id in scores:
            raise ParseError(f"duplicate clip_id {clip_id!r}", name, line)
        value = _parse_float(raw, "score", name, line)
        if value < 0:
            raise ParseError(f"score {raw!r} is negative; anomaly scores must be >= 0", name, line)
        scores[clip_id] = value
    return scores


def parse_ground_truth(path: str | Path) -> GroundTruth:
    entries: dict[str, TruthEntry] = {}
    name = str(path)
    for line, (clip_id, label, domain, machine) in _rows(path, TRUTH_HEADER):
        clip_id = _parse_id(clip_id, "clip_id", name, line)
        if clip_id in entries:
            raise ParseError(f"duplicate clip_id {clip_id!r}", name, line)
        try:
            lab = Label(label)
        except ValueError:
            raise ParseError(f"unknown label {label!r} (expected normal or anomalous)", name, line) from None
        try:
            dom = Domain(domain)
        except ValueError:
            raise ParseError(f"unknown domain {domain!r} (expected source or target)", name, line) from None
        entries[clip_id] = TruthEntry(lab, dom, _parse_id(machine, "machine", name, line))
    return GroundTruth(entries)


def parse_thresholds(path: str | Path) -> dict[str, float]:
    thresholds: dict[str, float] = {}
    name = str(path)
    for line, (machine, raw) in _rows(path, THRESHOLDS_HEADER):
        machine = _parse_id(machine, "machine", name, line)
        if machine in thresholds:
            raise ParseError(f"duplicate machine {machine!r}", name, line)
        thresholds[machine] = _parse_float(raw, "threshold", name, line)
    return thresholds


# ---------------------------------------------------------------------------
# writing
# ---------------------------------------------------------------------------


def format_float(value: float) -> str:
    """Shortest text that parses back to the identical double."""
    return repr(float(value))


def _write(path: str | Path, header: tuple[str, ...], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_scores(path: str | Path, scores: Mapping[str, float]) -> None:
    _write(path, SCORES_HEADER, ((c, format_float(s)) for c, s in scores.items()))


def write_ground_truth(path: str | Path, truth: GroundTruth) -> None:
    _write(
        path,
        TRUTH_HEADER,
        ((c, e.label.value, e.domain.value, e.machine) for c, e in truth.entries.items()),
    )


def write_thresholds(path: str | Path, thresholds: Mapping[str, float]) -> None:
    _write(path, THRESHOLDS_HEADER, ((m, format_float(t)) for m, t in thresholds.items()))


# ---------------------------------------------------------------------------
# join
# ---------------------------------------------------------------------------


def join(scores: Mapping[str, float], truth: GroundTruth) -> list[EvaluationSet]:
    """One EvaluationSet per machine, machines in lexicographic order.

    Samples inside a set are ordered by clip_id so the result does not depend
    on the row order of either file.
    """
    missing = [c for c in truth.entries if c not in scores]
    if missing:
        raise JoinError(missing)
    extra = sorted(c for c in scores if c not in truth.entries)
    if extra:
        shown = ", ".join(extra[:5]) + (" ..." if len(extra) > 5 else "")
        warnings.warn(
            f"{len(extra)} scored clip(s) not in ground truth were ignored: {shown}",
            ExtraScoresWarning,
            stacklevel=2,
        )
    per_machine: dict[str, list[ScoreSample]] = {}
    for clip_id in sorted(truth.entries):
        entry = truth.entries[clip_id]
        sample = ScoreSample(clip_id, scores[clip_id], entry.label, entry.domain)
        per_machine.setdefault(entry.machine, []).append(sample)
    return [EvaluationSet(m, tuple(per_machine[m])) for m in sorted(per_machine)]


# ---------------------------------------------------------------------------
# cohort directories
# ---------------------------------------------------------------------------


def write_cohort(directory: str | Path, truth: GroundTruth, submissions: list[SystemSubmission]) -> None:
    directory = Path(directory)
    write_ground_truth(directory / "ground_truth.csv", truth)
    for sub in submissions:
        write_scores(directory / "scores" / f"{sub.system_id}.csv", sub.scores)
        if sub.thresholds is not None:
            write_thresholds(directory / "thresholds" / f"{sub.system_id}.csv", sub.thresholds)


def load_cohort(directory: str | Path) -> list[SystemSubmission]:
    """Read every ``scores/<system>.csv`` (and matching thresholds) in a cohort dir."""
    directory = Path(directory)
    score_dir = directory / "scores"
    if not score_dir.is_dir():
        raise ParseError("cohort directory has no scores/ subdirectory", path=str(directory))
    submissions = []
    for path in sorted(score_dir.glob("*.csv")):
        system_id = path.stem
        thr_path = directory / "thresholds" / f"{system_id}.csv"
        thresholds = parse_thresholds(thr_path) if thr_path.exists() else None
        submissions.append(SystemSubmission(system_id, parse_scores(path), thresholds))
    return submissions
