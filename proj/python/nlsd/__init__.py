# python/nlsd/__init__.py
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

"""Normalized-likelihood speaker scoring under statistics mismatch."""

from ._nlsd import (
    AffineTransform,
    ConditionStats,
    EnrollmentModel,
    LabeledVector,
    NlsdError,
    Scorer,
    Trial,
    angle_metric,
    build_scorers,
    build_trials,
    compute_eer,
    eer_convention,
    enroll,
    fit_stats,
    length_metric,
    log_nl_matched,
    read_stats,
    read_vectors,
    simulate,
    split,
    stats_in_frame,
    train_transform,
    variance_profiles,
    variants,
    write_stats,
    write_vectors,
)


def evaluate(scorer, enroll, test, trials, threads=1):
    """EER (fraction) of `scorer` on the given trials."""
    scores = scorer.score(enroll, test, trials, threads)
    tar = [s for s, t in zip(scores, trials) if t.is_target]
    non = [s for s, t in zip(scores, trials) if not t.is_target]
    return compute_eer(tar, non)


def speakers(vectors):
    """Sorted speaker labels of a vector set."""
    return sorted({v.speaker for v in vectors})


__version__ = "0.1.0"
