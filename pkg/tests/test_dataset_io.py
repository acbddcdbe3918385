import pytest
from hypothesis import given
from hypothesis import strategies as st

from f1ev.data import Domain, Label
from f1ev.dataset_io import (
    ExtraScoresWarning,
    GroundTruth,
    TruthEntry,
    join,
    load_cohort,
    parse_ground_truth,
    parse_scores,
    parse_thresholds,
    write_cohort,
    write_ground_truth,
    write_scores,
    write_thresholds,
    SystemSubmission,
)
from f1ev.errors import JoinError, ParseError


def write(tmp_path, name, text, newline="\n"):
    path = tmp_path / name
    path.write_bytes(text.replace("\n", newline).encode("utf-8"))
    return path


class TestParseScores:
    def test_basic(self, tmp_path):
        path = write(tmp_path, "s.csv", "clip_id,score\na.wav,0.53\nb.wav,2.10\n")
        assert parse_scores(path) == {"a.wav": 0.53, "b.wav": 2.10}

    def test_crlf(self, tmp_path):
        path = write(tmp_path, "s.csv", "clip_id,score\na.wav,0.53\nb.wav,2.10\n", newline="\r\n")
        assert parse_scores(path) == {"a.wav": 0.53, "b.wav": 2.10}

    def test_duplicate_reports_line(self, tmp_path):
        path = write(tmp_path, "s.csv", "clip_id,score\na.wav,0.53\na.wav,0.7\n")
        with pytest.raises(ParseError) as info:
            parse_scores(path)
        assert info.value.line == 3

    @pytest.mark.parametrize("bad", ["NaN", "inf", "abc", ""])
    def test_bad_score(self, tmp_path, bad):
        path = write(tmp_path, "s.csv", f"clip_id,score\na.wav,{bad}\n")
        with pytest.raises(ParseError) as info:
            parse_scores(path)
        assert info.value.line == 2

    def test_negative_score(self, tmp_path):
        with pytest.raises(ParseError):
            parse_scores(write(tmp_path, "s.csv", "clip_id,score\na.wav,-1\n"))

    @pytest.mark.parametrize("text", ["", "a.wav,0.5\n", "clip,score\na.wav,1\n"])
    def test_header_required(self, tmp_path, text):
        with pytest.raises(ParseError) as info:
            parse_scores(write(tmp_path, "s.csv", text))
        assert info.value.line == 1

    def test_wrong_field_count(self, tmp_path):
        with pytest.raises(ParseError):
            parse_scores(write(tmp_path, "s.csv", "clip_id,score\na.wav,1,2\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            parse_scores(tmp_path / "nope.csv")


class TestParseTruth:
    def test_row(self, tmp_path):
        truth = parse_ground_truth(write(tmp_path, "t.csv", "clip_id,label,domain,machine\na.wav,normal,source,fan\n"))
        assert truth.entries == {"a.wav": TruthEntry(Label.NORMAL, Domain.SOURCE, "fan")}

    @pytest.mark.parametrize("row", ["a.wav,weird,source,fan", "a.wav,normal,elsewhere,fan"])
    def test_unknown_tokens(self, tmp_path, row):
        with pytest.raises(ParseError):
            parse_ground_truth(write(tmp_path, "t.csv", f"clip_id,label,domain,machine\n{row}\n"))

    def test_thresholds(self, tmp_path):
        assert parse_thresholds(write(tmp_path, "th.csv", "machine,threshold\nfan,1.25\n")) == {"fan": 1.25}


def _truth(machines=("fan", "valve"), per=4):
    entries = {}
    for m in machines:
        for i in range(per):
            label = Label.NORMAL if i % 2 == 0 else Label.ANOMALOUS
            entries[f"{m}_{i}.wav"] = TruthEntry(label, Domain.SOURCE if i < per // 2 else Domain.TARGET, m)
    return GroundTruth(entries)


class TestJoin:
    def test_two_machines(self):
        truth = _truth()
        scores = {c: float(i) for i, c in enumerate(truth.entries)}
        sets = join(scores, truth)
        assert [s.machine for s in sets] == ["fan", "valve"]
        assert [s.n for s in sets] == [4, 4]
        assert sets[0].samples[1].domain is Domain.SOURCE

    def test_missing(self):
        truth = _truth()
        scores = {c: 1.0 for c in truth.entries if c != "fan_2.wav"}
        with pytest.raises(JoinError) as info:
            join(scores, truth)
        assert info.value.missing == ["fan_2.wav"]
        assert "fan_2.wav" in str(info.value)

    def test_extra_warns(self):
        truth = _truth()
        scores = {c: 1.0 for c in truth.entries} | {"stray.wav": 3.0}
        with pytest.warns(ExtraScoresWarning, match="stray.wav"):
            sets = join(scores, truth)
        assert all("stray.wav" not in {s.clip_id for s in e.samples} for e in sets)

    @given(st.randoms(use_true_random=False))
    def test_permutation_invariant(self, random):
        truth = _truth(per=6)
        scores = {c: float(i % 5) for i, c in enumerate(truth.entries)}
        items = list(scores.items())
        random.shuffle(items)
        truth_items = list(truth.entries.items())
        random.shuffle(truth_items)
        assert join(dict(items), GroundTruth(dict(truth_items))) == join(scores, truth)


score_values = st.floats(0, 1e12, allow_nan=False, allow_infinity=False)
clip_ids = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789_.-", min_size=1, max_size=12)


@given(st.dictionaries(clip_ids, score_values, min_size=1, max_size=20))
def test_scores_round_trip(tmp_path_factory, scores):
    path = tmp_path_factory.mktemp("rt") / "scores.csv"
    write_scores(path, scores)
    assert parse_scores(path) == scores


def test_round_trip_all_schemas(tmp_path):
    truth = _truth()
    write_ground_truth(tmp_path / "t.csv", truth)
    assert parse_ground_truth(tmp_path / "t.csv") == truth
    thresholds = {"fan": 0.1 + 0.2, "valve": 1e-17}
    write_thresholds(tmp_path / "th.csv", thresholds)
    assert parse_thresholds(tmp_path / "th.csv") == thresholds


def test_cohort_round_trip(tmp_path):
    truth = _truth()
    subs = [
        SystemSubmission("a", {c: 1.0 for c in truth.entries}, {"fan": 0.5, "valve": 0.5}),
        SystemSubmission("b", {c: 2.0 for c in truth.entries}, None),
    ]
    write_cohort(tmp_path, truth, subs)
    assert load_cohort(tmp_path) == subs
    assert parse_ground_truth(tmp_path / "ground_truth.csv") == truth


def test_load_cohort_requires_scores_dir(tmp_path):
    with pytest.raises(ParseError):
        load_cohort(tmp_path)
