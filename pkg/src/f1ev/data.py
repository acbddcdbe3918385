"""Score data model: labeled anomaly scores grouped per machine type."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from f1ev.errors import InvalidInput


class Label(str, Enum):
    NORMAL = "normal"
    ANOMALOUS = "anomalous"


class Domain(str, Enum):
    SOURCE = "source"
    TARGET = "target"


@dataclass(frozen=True)
class ScoreSample:
    clip_id: str
    score: float
    label: Label
    domain: Domain | None = None

    def __post_init__(self) -> None:
        score = float(self.score)
        if not math.isfinite(score) or score < 0:
            raise InvalidInput(f"score for {self.clip_id!r} must be finite and >= 0, got {self.score!r}")
        object.__setattr__(self, "score", score)
        object.__setattr__(self, "label", Label(self.label))
        if self.domain is not None:
            object.__setattr__(self, "domain", Domain(self.domain))


def _frozen(values: Iterable[float]) -> np.ndarray:
    arr = np.sort(np.fromiter(values, dtype=np.float64))
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class EvaluationSet:
    """Labeled anomaly scores of the test clips of one machine type.

    Metric functions only look at the sorted score arrays, so the order of
    ``samples`` never affects a result.
    """

    machine: str
    samples: tuple[ScoreSample, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", tuple(self.samples))
        seen: set[str] = set()
        for s in self.samples:
            if s.clip_id in seen:
                raise InvalidInput(f"duplicate clip_id {s.clip_id!r} in machine {self.machine!r}")
            seen.add(s.clip_id)

    @classmethod
    def from_scores(
        cls,
        normal: Sequence[float],
        anomalous: Sequence[float],
        machine: str = "machine",
    ) -> EvaluationSet:
        """Build a set from two score lists, generating clip ids."""
        samples = [ScoreSample(f"normal_{i:05d}", s, Label.NORMAL) for i, s in enumerate(normal)]
        samples += [ScoreSample(f"anomalous_{i:05d}", s, Label.ANOMALOUS) for i, s in enumerate(anomalous)]
        return cls(machine, tuple(samples))

    @property
    def n(self) -> int:
        return len(self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    @cached_property
    def normal_scores(self) -> np.ndarray:
        """Ascending scores of the normal samples (read-only)."""
        return _frozen(s.score for s in self.samples if s.label is Label.NORMAL)

    @cached_property
    def anomalous_scores(self) -> np.ndarray:
        """Ascending scores of the anomalous samples (read-only)."""
        return _frozen(s.score for s in self.samples if s.label is Label.ANOMALOUS)

    @cached_property
    def thresholds(self) -> np.ndarray:
        """Distinct score values in ascending order."""
        arr = np.unique(np.concatenate([self.normal_scores, self.anomalous_scores]))
        arr.setflags(write=False)
        return arr

    def transformed(self, scale: float = 1.0, shift: float = 0.0) -> EvaluationSet:
        """Copy of the set with every score mapped to ``scale * score + shift``."""
        return EvaluationSet(
            self.machine,
            tuple(
                ScoreSample(s.clip_id, scale * s.score + shift, s.label, s.domain) for s in self.samples
            ),
        )
