"""Invariants of the measures, checked on hypothesis-generated sets."""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import evaluation_sets, wide_scores
from f1ev import metrics
from f1ev.data import EvaluationSet, Label, ScoreSample
from f1ev.errors import F1EVError
from f1ev.synth import oracle_auc_pairwise, oracle_f1, oracle_f1_ev_events, oracle_f1_ev_grid


@given(evaluation_sets())
def test_auc_equals_pairwise_probability(eset):
    assert abs(metrics.auc_roc(metrics.roc_curve(eset)) - oracle_auc_pairwise(eset)) <= 1e-10


@given(evaluation_sets(scores=wide_scores))
def test_auc_pairwise_wide_scores(eset):
    assert abs(metrics.auc_roc(metrics.roc_curve(eset)) - oracle_auc_pairwise(eset)) <= 1e-10


@given(evaluation_sets(distinct=True), st.integers(0, 2**32 - 1))
def test_event_grid_reproduces_f1_ev(eset, seed):
    assert abs(metrics.f1_ev(eset) - oracle_f1_ev_events(eset, extra_points=16, seed=seed)) <= 1e-12


@settings(max_examples=25)
@given(evaluation_sets(distinct=True))
def test_uniform_grid_converges(eset):
    points = 10**5
    n_distinct = len(eset.thresholds)
    assert abs(metrics.f1_ev(eset) - oracle_f1_ev_grid(eset, points)) <= 2 * n_distinct / points


@given(evaluation_sets(distinct=True))
def test_f1_curve_matches_brute_force(eset):
    curve = metrics.f1_curve(eset)
    for t, f in curve.points:
        assert f == pytest.approx(oracle_f1(eset, t), abs=1e-15)


@given(evaluation_sets(min_normal=2, distinct=True), st.floats(0.01, 3.0))
def test_ranges(eset, alpha):
    curve = metrics.roc_curve(eset)
    f1 = metrics.f1_curve(eset)
    value = metrics.f1_ev(eset)
    assert 0 <= metrics.auc_roc(curve) <= 1
    assert 0 <= metrics.pauc(curve, 0.1) <= 1
    assert 0 <= value <= f1.f1_values.max() + 1e-15
    bounded, degenerate = metrics.bounded_f1_ev(eset, alpha)
    assert 0 <= bounded <= 1
    if not degenerate:
        rng = metrics.bounds(eset, alpha)
        knots = metrics.bounded_thresholds(eset, rng)
        inside = [metrics.f1_at(eset, t) for t in knots[:-1]]
        assert min(inside) - 1e-12 <= bounded <= max(inside) + 1e-12


@given(
    evaluation_sets(min_normal=2, distinct=True),
    st.floats(0.1, 50.0),
    st.floats(0.0, 100.0),
)
def test_shift_scale_invariance(eset, scale, shift):
    moved = eset.transformed(scale, shift)
    assume(len(moved.thresholds) == len(eset.thresholds))  # no scores merged by rounding
    a, b = metrics.evaluate(eset), metrics.evaluate(moved)
    assume(a.degenerate_flags == b.degenerate_flags)
    for name in ("auc", "pauc", "f1_ev", "bounded_f1_ev", "optimal_f1"):
        assert abs(getattr(a, name) - getattr(b, name)) <= 1e-10, name
    assert b.theta_opt == pytest.approx(scale * a.theta_opt + shift, rel=1e-12, abs=1e-10)


@given(evaluation_sets())
def test_label_swap_keeps_auc(eset):
    top = max(s.score for s in eset.samples) + 1.0
    swapped = EvaluationSet(
        eset.machine,
        tuple(
            ScoreSample(
                s.clip_id,
                top - s.score,
                Label.NORMAL if s.label is Label.ANOMALOUS else Label.ANOMALOUS,
            )
            for s in eset.samples
        ),
    )
    a = metrics.auc_roc(metrics.roc_curve(eset))
    b = metrics.auc_roc(metrics.roc_curve(swapped))
    assert abs(a - b) <= 1e-10


@st.composite
def separable_sets(draw):
    normal = draw(st.lists(st.floats(1.0, 2.0), min_size=2, max_size=20, unique=True))
    offsets = draw(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=20))
    return normal, offsets


@given(separable_sets(), st.floats(0.01, 5.0), st.floats(0.0, 5.0), st.floats(0.05, 2.0))
def test_perfect_separation(data, margin, extra, alpha):
    normal, offsets = data
    top = max(normal)

    def make(m):
        return EvaluationSet.from_scores(normal, [top + m + o for o in offsets])

    narrow, wide = make(margin), make(margin + extra)
    assert metrics.auc_roc(metrics.roc_curve(narrow)) == 1.0
    assert metrics.auc_roc(metrics.roc_curve(wide)) == 1.0
    assert metrics.bounded_f1_ev(wide, alpha).value >= metrics.bounded_f1_ev(narrow, alpha).value - 1e-12


@given(evaluation_sets(min_normal=2, distinct=True), st.randoms(use_true_random=False))
def test_permutation_gives_identical_report(eset, random):
    samples = list(eset.samples)
    random.shuffle(samples)
    shuffled = EvaluationSet(eset.machine, tuple(samples))
    try:
        report = metrics.evaluate(eset, submitted_threshold=1.0)
    except F1EVError:
        with pytest.raises(F1EVError):
            metrics.evaluate(shuffled, submitted_threshold=1.0)
        return
    assert report == metrics.evaluate(shuffled, submitted_threshold=1.0)


@given(evaluation_sets(distinct=True))
def test_f1_piecewise_constant_between_scores(eset):
    t = eset.thresholds
    curve = metrics.f1_curve(eset)
    mids = (t[:-1] + t[1:]) / 2
    for left, mid, value in zip(t[:-1], mids, curve.f1_values[:-1]):
        assert metrics.f1_at(eset, mid) == value
        assert metrics.f1_at(eset, float(np.nextafter(left, np.inf))) == value
