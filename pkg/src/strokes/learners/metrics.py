"""Evaluation metrics and bootstrap confidence intervals."""

from __future__ import annotations

import numpy as np

from ..rng import stream_floats


def class_normalized_accuracy(y_true, y_pred) -> float | None:
    """Mean of the per-class recalls over the +/-1 labels.

    A constant predictor scores exactly 0.5 on mixed labels.  Returns
    None when y_true holds a single class (undefined; callers exclude
    the value from averages).
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred must have equal length")
    pos = y_true == 1
    neg = y_true == -1
    n_pos = int(pos.sum())
    n_neg = int(neg.sum())
    if n_pos == 0 or n_neg == 0:
        return None
    recall_pos = int((y_pred[pos] == 1).sum()) / n_pos
    recall_neg = int((y_pred[neg] == -1).sum()) / n_neg
    return (recall_pos + recall_neg) / 2.0


def weighted_class_normalized_accuracy(y_true, y_pred, weights) -> float | None:
    """class_normalized_accuracy with per-instance multiplicities."""
    pos = y_true == 1
    neg = y_true == -1
    w_pos = float(weights[pos].sum())
    w_neg = float(weights[neg].sum())
    if w_pos == 0.0 or w_neg == 0.0:
        return None
    recall_pos = float(weights[pos & (y_pred == 1)].sum()) / w_pos
    recall_neg = float(weights[neg & (y_pred == -1)].sum()) / w_neg
    return (recall_pos + recall_neg) / 2.0


def bootstrap_subject_ci(
    statistic,
    n_subjects: int,
    n_samples: int = 1_000,
    alpha: float = 0.05,
    seed: int = 0,
) -> tuple[float, float]:
    """Percentile bootstrap CI resampling subjects with replacement.

    ``statistic(counts)`` receives how many times each subject appears
    in the resample and returns a scalar (or None, skipped).
    """
    draws = stream_floats(seed, n_samples * n_subjects)
    values = []
    for b in range(n_samples):
        idx = (draws[b * n_subjects:(b + 1) * n_subjects] * n_subjects).astype(np.int64)
        counts = np.bincount(idx, minlength=n_subjects)
        value = statistic(counts)
        if value is not None:
            values.append(value)
    if not values:
        return (float("nan"), float("nan"))
    lo, hi = np.percentile(values, [100 * alpha / 2, 100 * (1 - alpha / 2)])
    return float(lo), float(hi)
