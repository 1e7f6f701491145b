"""Descriptive analyses over a dataset of subject records.

Three views: how consistent each subject is across the 3 seed sets, how
often each option is preferred, and — for each of the 36 response-level
items — which single other item predicts it best under the better of
the identity/flip mappings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .survey import ART_ORDER, LIFE_ORDER, SEED_SETS, ArtChoice, Comparison, Dataset, LifeItem

# Response-level item ids: 24 art (comparison x seed set) then 12 life.
RESPONSE_ITEMS: tuple[str, ...] = tuple(
    f"{c.value}:{s}" for c in ART_ORDER for s in SEED_SETS
) + tuple(q.value for q in LIFE_ORDER)


class AnalyticsError(ValueError):
    pass


@dataclass(frozen=True)
class ConsistencySummary:
    mean_modal_agreement: float
    agreement_rate: float
    seed3_accuracy: float
    default_rate: float


def _require_subjects(dataset: Dataset) -> None:
    if not dataset.subjects:
        raise AnalyticsError("dataset is empty")


def response_matrix(dataset: Dataset) -> np.ndarray:
    """Subjects x 36 matrix of +/-1 responses in RESPONSE_ITEMS order."""
    _require_subjects(dataset)
    rows = []
    for record in dataset.subjects:
        row = [record.art_sign(c, s) for c in ART_ORDER for s in SEED_SETS]
        row += [record.life_sign(q) for q in LIFE_ORDER]
        rows.append(row)
    return np.array(rows, dtype=np.int8)


def consistency_summary(dataset: Dataset) -> ConsistencySummary:
    """Cross-seed consistency of the art answers.

    The seed-3 predictor guesses the third set's answer as the shared
    answer when sets 1 and 2 agree, and as Default otherwise (the prior
    choice).
    """
    _require_subjects(dataset)
    modal_total = 0
    seed3_correct = 0
    n_pairs = 0
    default_answers = 0
    n_answers = 0
    for record in dataset.subjects:
        for comparison in ART_ORDER:
            answers = [record.art_answers[(comparison, s)] for s in SEED_SETS]
            counts = {c: answers.count(c) for c in ArtChoice}
            modal_total += max(counts.values())
            if answers[0] == answers[1]:
                predicted = answers[0]
            else:
                predicted = ArtChoice.DEFAULT
            seed3_correct += predicted == answers[2]
            n_pairs += 1
            default_answers += counts[ArtChoice.DEFAULT]
            n_answers += len(answers)
    mean_modal = modal_total / n_pairs
    return ConsistencySummary(
        mean_modal_agreement=mean_modal,
        agreement_rate=mean_modal / 3.0,
        seed3_accuracy=seed3_correct / n_pairs,
        default_rate=default_answers / n_answers,
    )


@dataclass(frozen=True)
class PreferenceTallies:
    """Fraction choosing the alternative/positive option per item."""

    art_alternative_rates: dict[str, float]
    life_positive_rates: dict[str, float]
    mean_alternatives_preferred: float


def preference_tallies(dataset: Dataset) -> PreferenceTallies:
    _require_subjects(dataset)
    n = len(dataset.subjects)
    art_rates = {}
    for comparison in ART_ORDER:
        hits = sum(
            record.art_sign(comparison, s) > 0
            for record in dataset.subjects
            for s in SEED_SETS
        )
        art_rates[comparison.value] = hits / (n * len(SEED_SETS))
    life_rates = {}
    for item in LIFE_ORDER:
        life_rates[item.value] = sum(r.life_sign(item) > 0 for r in dataset.subjects) / n
    mean_alternatives = (
        sum(
            sum(record.art_majority_sign(c) > 0 for c in ART_ORDER)
            for record in dataset.subjects
        )
        / n
    )
    return PreferenceTallies(
        art_alternative_rates=art_rates,
        life_positive_rates=life_rates,
        mean_alternatives_preferred=mean_alternatives,
    )


@dataclass(frozen=True)
class SourceTargetMatrix:
    items: tuple[str, ...]
    acc: np.ndarray          # 36x36; [source, target]; diagonal is NaN
    prior: np.ndarray        # 36; max class frequency per item
    best_source: dict[str, str]
    best_acc: dict[str, float]
    degenerate_items: tuple[str, ...]

    def table_rows(self) -> list[tuple[str, str, float, float]]:
        """(target, best source, acc, prior) rows, one per item."""
        idx = {item: i for i, item in enumerate(self.items)}
        return [
            (t, self.best_source[t], self.best_acc[t], float(self.prior[idx[t]]))
            for t in self.items
        ]


def best_source_matrix(dataset: Dataset) -> SourceTargetMatrix:
    """Pairwise predictability of the 36 response-level items.

    For each ordered pair the accuracy is the better of mapping the
    source to the target directly or flipped, computed on the full
    dataset as a descriptive statistic (no train/test split).
    """
    if len(dataset.subjects) < 2:
        raise AnalyticsError("need at least 2 subjects")
    matrix = response_matrix(dataset).astype(np.float64)
    n, k = matrix.shape
    positive_rate = (matrix > 0).mean(axis=0)
    prior = np.maximum(positive_rate, 1.0 - positive_rate)
    degenerate = tuple(
        item for item, rate in zip(RESPONSE_ITEMS, positive_rate) if rate in (0.0, 1.0)
    )

    # agreement[s, t] = fraction of subjects with equal signs
    agreement = (matrix.T @ matrix) / n / 2.0 + 0.5
    acc = np.maximum(agreement, 1.0 - agreement)
    np.fill_diagonal(acc, np.nan)

    best_source = {}
    best_acc = {}
    for t, target in enumerate(RESPONSE_ITEMS):
        s = int(np.nanargmax(acc[:, t]))
        best_source[target] = RESPONSE_ITEMS[s]
        best_acc[target] = float(acc[s, t])
    return SourceTargetMatrix(
        items=RESPONSE_ITEMS,
        acc=acc,
        prior=prior,
        best_source=best_source,
        best_acc=best_acc,
        degenerate_items=degenerate,
    )
