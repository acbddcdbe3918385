from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from f1ev.data import EvaluationSet

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def e1() -> EvaluationSet:
    """normal={1,2}, anomalous={8,9}: the hand-worked example."""
    return EvaluationSet.from_scores([1.0, 2.0], [8.0, 9.0], machine="e1")


@pytest.fixture
def interleaved() -> EvaluationSet:
    return EvaluationSet.from_scores([1.0, 3.0], [2.0, 4.0], machine="interleaved")


# scores on a coarse grid so hypothesis produces plenty of ties
tie_prone_scores = st.integers(min_value=0, max_value=20).map(lambda k: k / 4)
wide_scores = st.floats(min_value=0.0, max_value=1e3, allow_nan=False, allow_infinity=False)


@st.composite
def evaluation_sets(draw, scores=tie_prone_scores, min_normal=1, max_size=40, distinct=False):
    normal = draw(st.lists(scores, min_size=min_normal, max_size=max_size))
    anomalous = draw(st.lists(scores, min_size=1, max_size=max_size))
    if distinct:
        from hypothesis import assume

        assume(len(set(normal) | set(anomalous)) >= 2)
    return EvaluationSet.from_scores(normal, anomalous, machine="h")


_acceptance_lines: list[str] = []


@pytest.fixture
def report_line():
    """Print one PASS/FAIL line now and again in the terminal summary."""

    def emit(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        print(line)
        _acceptance_lines.append(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
