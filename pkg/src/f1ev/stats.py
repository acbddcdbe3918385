"""Scalar statistics: mean, sample standard deviation, harmonic mean, Pearson r.

Thin wrappers over :mod:`statistics`, whose sums are exact. That makes every
result independent of input order, which the determinism guarantees of the
metrics rely on.
"""

from __future__ import annotations

import math
import statistics
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from f1ev.errors import InsufficientData, InvalidInput, UndefinedCorrelation


def _finite(values: Iterable[float]) -> list[float]:
    out = [float(v) for v in values]
    for v in out:
        if not math.isfinite(v):
            raise InvalidInput(f"non-finite value {v!r}")
    return out


def mean(values: Iterable[float]) -> float:
    vals = _finite(values)
    if not vals:
        raise InsufficientData("mean needs at least one value")
    return float(statistics.mean(vals))


def sample_std(values: Iterable[float]) -> float:
    """Standard deviation with the N-1 denominator."""
    vals = _finite(values)
    if len(vals) < 2:
        raise InsufficientData(f"sample_std needs at least two values, got {len(vals)}")
    return float(statistics.stdev(vals))


def harmonic_mean(values: Iterable[float]) -> float:
    """n / sum(1/v); 0 as soon as any value is 0."""
    vals = _finite(values)
    if not vals:
        raise InsufficientData("harmonic_mean needs at least one value")
    if any(v < 0 for v in vals):
        raise InvalidInput("harmonic_mean is undefined for negative values")
    if any(v == 0 for v in vals):
        return 0.0
    return float(statistics.harmonic_mean(vals))


@dataclass(frozen=True)
class PairedSeries:
    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self) -> None:
        xs, ys = tuple(_finite(self.xs)), tuple(_finite(self.ys))
        if len(xs) != len(ys):
            raise InvalidInput(f"series lengths differ: {len(xs)} != {len(ys)}")
        if len(xs) < 2:
            raise InsufficientData("correlation needs at least two pairs")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)


def pearson(xs: Sequence[float] | PairedSeries, ys: Sequence[float] | None = None) -> float:
    """Pearson product-moment correlation.

    Accepts either a :class:`PairedSeries` or two sequences. Raises
    :class:`UndefinedCorrelation` when either side is constant.
    """
    series = xs if isinstance(xs, PairedSeries) else PairedSeries(tuple(xs), tuple(ys or ()))
    if len(set(series.xs)) == 1 or len(set(series.ys)) == 1:
        raise UndefinedCorrelation("correlation is undefined for a constant series")
    r = statistics.correlation(series.xs, series.ys)
    return max(-1.0, min(1.0, float(r)))
