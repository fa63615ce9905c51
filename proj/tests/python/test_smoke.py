# tests/python/test_smoke.py
#
# Copyright 2026  The nlsd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import nlsd


def test_eer_examples():
    assert nlsd.compute_eer([2.0, 3.0], [0.0, 1.0]) == 0.0
    assert nlsd.compute_eer([0.9, 0.8, 0.2], [0.7, 0.1, 0.0]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        nlsd.compute_eer([], [1.0])


def test_metrics():
    assert nlsd.angle_metric(np.array([1.0, 1.0]), np.array([1.0, 0.0])) == pytest.approx(
        (1 - 1 / math.sqrt(2)) * 1e3)
    assert nlsd.length_metric(np.array([1.0, 2.0]), np.zeros(2)) == pytest.approx(500.0)
    with pytest.raises(nlsd.NlsdError):
        nlsd.angle_metric(np.zeros(2), np.ones(2))


def test_matched_score_by_hand():
    v = [nlsd.LabeledVector("u1", "k", "c", np.array([1.0]))]
    vectors = v + [nlsd.LabeledVector("u2", "k", "c", np.array([0.0])),
                   nlsd.LabeledVector("u3", "j", "c", np.array([3.0])),
                   nlsd.LabeledVector("u4", "j", "c", np.array([2.0]))]
    stats = nlsd.fit_stats(vectors)
    assert stats.dim() == 1
    assert stats.within[0] == pytest.approx(1.0)
    models = nlsd.enroll(vectors, stats)
    assert [m.speaker for m in models] == ["j", "k"]
    s = nlsd.log_nl_matched(models[1], stats.center(np.array([0.5])), stats)
    assert math.isfinite(s)


def test_pipeline_orders_scorers():
    data = nlsd.simulate(8, n_speakers=200, n_enroll=5, n_test=10, seed=3,
                         mismatch="shift", shift_norm=3.0, offset_norm=2.0)
    assert len(data["enroll"]) == 1000
    assert data["truth_b"].shape == (8,)
    e_dev, e_eval = nlsd.split(data["enroll"], 0.8, 3)
    t_dev, t_eval = nlsd.split(data["test"], 0.8, 3)
    trials = nlsd.build_trials(nlsd.speakers(e_eval), t_eval)
    assert len(trials) == 40 * 400
    scorers = nlsd.build_scorers(["baseline", "gsc", "sdlt"], e_dev, t_dev)
    eer = {s.variant: nlsd.evaluate(s, e_eval, t_eval, trials) for s in scorers}
    assert eer["gsc"] < eer["baseline"]
    assert eer["sdlt"] < eer["baseline"]


def test_transform_aligns_speakers():
    data = nlsd.simulate(4, n_speakers=300, n_enroll=50, n_test=50, seed=5, mismatch="shift",
                         shift_norm=2.0)
    enroll_stats = nlsd.fit_stats(data["enroll"])
    t, test_stats, trace = nlsd.train_transform(enroll_stats, data["enroll"], data["test"],
                                                closed_form=True)
    assert t.m.shape == (4, 4)
    assert test_stats.condition == "test"

    def speaker_means(vectors, f):
        out = {}
        for v in vectors:
            out.setdefault(v.speaker, []).append(f(v.vec))
        return {k: np.mean(x, axis=0) for k, x in out.items()}

    e = speaker_means(data["enroll"], enroll_stats.center)
    m = speaker_means(data["test"], lambda x: t.apply(test_stats.center(x)))
    a = np.concatenate([e[k] for k in sorted(e)])
    b = np.concatenate([m[k] for k in sorted(e)])
    assert np.corrcoef(a, b)[0, 1] > 0.9


def test_files_round_trip(tmp_path):
    data = nlsd.simulate(3, n_speakers=4, seed=1)
    path = str(tmp_path / "v.tsv")
    nlsd.write_vectors(path, data["enroll"])
    back = nlsd.read_vectors(path)
    assert [v.utt_id for v in back] == [v.utt_id for v in data["enroll"]]
    assert all((a.vec == b.vec).all() for a, b in zip(back, data["enroll"]))
    stats = nlsd.fit_stats(back)
    nlsd.write_stats(str(tmp_path / "s.txt"), stats)
    again = nlsd.read_stats(str(tmp_path / "s.txt"))
    assert (again.frame == stats.frame).all()
    with pytest.raises(ValueError, match="missing.tsv"):
        nlsd.read_vectors(str(tmp_path / "missing.tsv"))
