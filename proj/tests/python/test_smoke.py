import math

import numpy as np
import pytest

import sigverify as sv


def line_signature(n=30, input="stylus"):
    t = np.arange(n, dtype=np.int64) * 10
    x = np.linspace(0.0, 100.0, n) + 5.0 * np.sin(np.arange(n))
    y = 20.0 * np.cos(np.arange(n) / 3.0)
    p = np.full(n, 1.0 if input == "finger" else 200.0)
    return sv.Signature(x, y, p, t, input=input)


def test_dtw_example():
    r = sv.dtw([[0.0], [0.0]], [[1.0], [1.0]])
    assert r.accumulated_cost == 2.0
    assert r.path_length == 2
    assert r.normalized_score == 1.0
    assert r.path == [(0, 0), (1, 1)]


def test_soft_dtw_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(5, 2)), rng.normal(size=(4, 2))
    value, grad = sv.soft_dtw(a, b, 1.0)
    assert grad.shape == (5, 2)
    eps = 1e-5
    for idx in np.ndindex(a.shape):
        ap, am = a.copy(), a.copy()
        ap[idx] += eps
        am[idx] -= eps
        fd = (sv.soft_dtw(ap, b, 1.0)[0] - sv.soft_dtw(am, b, 1.0)[0]) / (2 * eps)
        assert abs(fd - grad[idx]) <= 1e-4 * max(1.0, abs(fd))
    assert sv.triplet_loss(a, b, b, 1.0, 0.25) == pytest.approx(0.25)


def test_threshold_scores_and_fusion():
    assert sv.sigstat_local_score(2.5, 1.0, 2.0, 2.0) == pytest.approx(0.5, abs=1e-12)
    assert sv.sigstat_global_score(2.0, 1.0, 3.0) == pytest.approx(0.5, abs=1e-12)
    assert sv.tanh_normalize(3.0, 3.0, 1.0) == 0.5
    assert sv.weighted_fusion([0.3, 0.9], [1.0, 0.0]) == 0.3
    with pytest.raises(ValueError):
        sv.sigstat_local_score(1.0, 4.0, 1.0, 1.0)


def test_eer_and_ranking():
    assert sv.compute_eer([0.8, 0.9], [0.1, 0.2])[0] == 0.0
    assert sv.compute_eer([0.4], [0.6])[0] == 100.0
    ranking = sv.rank_teams({"a": {1: 3.0, 2: 4.0, 3: 5.0}, "b": {1: 4.0}})
    assert ranking == [("a", 9), ("b", 2)]


def test_signature_features_and_round_trip(tmp_path):
    sig = line_signature()
    path = tmp_path / "a.sig"
    sv.write_signature_file(sig, path)
    back = sv.parse_signature_file(path)
    assert back == sig
    assert len(back) == 30
    mad = sv.normalize_mad(sig)
    assert min(mad.x) == -1.0 and max(mad.x) == 1.0
    assert sv.baseline_dtw_score(mad, mad) == 1.0
    feats = sv.global_features(sig)
    assert feats["duration_ms"] == 290.0
    terms = sv.path_signature([0, 1, 1, 0, 0], [0, 0, 1, 1, 0], 2)
    assert len(terms) == 6
    assert abs(0.5 * (terms[3] - terms[4])) == pytest.approx(1.0, abs=1e-12)
    assert sv.derivative([0, 1, 4], [0, 1, 2]) == [1.0, 2.0, 3.0]


def test_parse_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "bad.sig"
    path.write_text("COUNT 2\nMETA subject=a input=stylus scenario=office auth=unknown\n0 0 5 1 0\n0 0 1 1 0\n")
    with pytest.raises(sv.ParseError, match=":4:"):
        sv.parse_signature_file(path)


def test_end_to_end_protocol(tmp_path):
    subsets = sv.write_synthetic_dataset(42, 4, tmp_path)
    comparisons, labels = subsets["random"]
    scores = sv.run_protocol(comparisons, threads=2)
    assert len(scores) == len(comparisons.read_text().splitlines())
    assert all(0.0 <= s <= 1.0 for _, s in scores)
    out = tmp_path / "scores.csv"
    out.write_text("".join(f"{cid},{score!r}\n" for cid, score in scores))
    eer = sv.evaluate(out, labels)
    assert 0.0 <= eer <= 100.0 and not math.isnan(eer)
