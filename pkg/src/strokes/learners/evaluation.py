"""Subject-grouped leave-one-out evaluation over the 9 feature/target cells.

Feature groups A (8 art items), L (12 life items), and U (all 20) can
each predict targets from any group.  Art targets are evaluated at the
response level (3 instances per subject, art features taken from the
same seed set); life targets use one instance per subject with art
features majority-coded.  Every split keeps all of a subject's
instances on one side, and every fold is instrumented so leakage is a
hard failure, not a silent bias.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..rng import RandomStream, mix64
from ..survey import ART_ORDER, LIFE_ORDER, Comparison, Dataset, Group, LifeItem
from .metrics import (
    bootstrap_subject_ci,
    class_normalized_accuracy,
    weighted_class_normalized_accuracy,
)
from .models import DISCRIMINATIVE, Family, ModelSpec, predict_batch, train

REDUCED5_DROPPED = (Comparison.SPARSEST, Comparison.THICKEST, Comparison.THIN)

BOOTSTRAP_SAMPLES = 1_000


class EvaluationError(ValueError):
    pass


@dataclass
class LeakStats:
    """Cross-run instrumentation: folds checked and subject leaks seen."""

    folds_checked: int = 0
    leaks: int = 0

    def reset(self):
        self.folds_checked = 0
        self.leaks = 0


LEAK_STATS = LeakStats()


@dataclass(frozen=True)
class _Arrays:
    subject_ids: tuple[str, ...]
    art: np.ndarray       # (n, 8, 3) +/-1, [subject, comparison, seed set]
    life: np.ndarray      # (n, 12) +/-1
    majority: np.ndarray  # (n, 8) +/-1, ties to -1


def _prepare(dataset: Dataset) -> _Arrays:
    """Sign matrices with subjects canonically sorted by id."""
    subjects = sorted(dataset.subjects, key=lambda r: r.subject_id)
    n = len(subjects)
    art = np.empty((n, len(ART_ORDER), 3), dtype=np.int8)
    life = np.empty((n, len(LIFE_ORDER)), dtype=np.int8)
    for i, record in enumerate(subjects):
        for a, comparison in enumerate(ART_ORDER):
            for s in range(3):
                art[i, a, s] = record.art_sign(comparison, s)
        for l, item in enumerate(LIFE_ORDER):
            life[i, l] = record.life_sign(item)
    majority = np.where(art.sum(axis=2) > 0, 1, -1).astype(np.int8)
    return _Arrays(
        subject_ids=tuple(r.subject_id for r in subjects),
        art=art,
        life=life,
        majority=majority,
    )


def _art_indices(reduced5: bool) -> list[int]:
    kept = [i for i, c in enumerate(ART_ORDER) if not (reduced5 and c in REDUCED5_DROPPED)]
    return kept


@dataclass(frozen=True)
class _Problem:
    """One target's instance matrix, labels, and subject index per row."""

    target: str
    X: np.ndarray
    y: np.ndarray
    groups: np.ndarray
    feature_names: tuple[str, ...]


def _build_problem(
    arrays: _Arrays, feature_group: Group, target: Comparison | LifeItem, reduced5: bool
) -> _Problem:
    n = len(arrays.subject_ids)
    art_idx = _art_indices(reduced5)
    names: list[str] = []
    blocks: list[np.ndarray] = []

    if isinstance(target, Comparison):
        t = list(ART_ORDER).index(target)
        if feature_group in (Group.ART, Group.UNION):
            fidx = [i for i in art_idx if i != t]
            names += [ART_ORDER[i].value for i in fidx]
            # (n, |f|, 3) -> instance order subject-major, set-minor
            blocks.append(
                np.transpose(arrays.art[:, fidx, :], (0, 2, 1)).reshape(3 * n, len(fidx))
            )
        if feature_group in (Group.LIFE, Group.UNION):
            names += [q.value for q in LIFE_ORDER]
            blocks.append(np.repeat(arrays.life, 3, axis=0))
        y = arrays.art[:, t, :].reshape(3 * n)
        groups = np.repeat(np.arange(n), 3)
    else:
        q = list(LIFE_ORDER).index(target)
        if feature_group in (Group.ART, Group.UNION):
            names += [ART_ORDER[i].value for i in art_idx]
            blocks.append(arrays.majority[:, art_idx])
        if feature_group in (Group.LIFE, Group.UNION):
            lidx = [i for i in range(len(LIFE_ORDER)) if i != q]
            names += [LIFE_ORDER[i].value for i in lidx]
            blocks.append(arrays.life[:, lidx])
        y = arrays.life[:, q]
        groups = np.arange(n)

    X = np.ascontiguousarray(np.hstack(blocks), dtype=np.float64)
    return _Problem(
        target=target.value,
        X=X,
        y=y.astype(np.int64),
        groups=groups,
        feature_names=tuple(names),
    )


def _targets_for(group: Group, reduced5: bool) -> list[Comparison | LifeItem]:
    art = [ART_ORDER[i] for i in _art_indices(reduced5)]
    if group is Group.ART:
        return list(art)
    if group is Group.LIFE:
        return list(LIFE_ORDER)
    return list(art) + list(LIFE_ORDER)


def _check_fold(groups: np.ndarray, test_mask: np.ndarray) -> None:
    LEAK_STATS.folds_checked += 1
    shared = np.intersect1d(groups[~test_mask], groups[test_mask])
    if shared.size:
        LEAK_STATS.leaks += 1
        raise AssertionError(f"subject leakage across LOOCV fold: {shared[:5]}")


@dataclass
class _TargetResult:
    problem: _Problem
    predictions: np.ndarray
    predicted: np.ndarray  # bool rows with a prediction
    skipped_folds: int

    def accuracy(self) -> float | None:
        if not self.predicted.any():
            return None
        return class_normalized_accuracy(
            self.problem.y[self.predicted], self.predictions[self.predicted]
        )


def _loocv_target(problem: _Problem, spec: ModelSpec, n_subjects: int) -> _TargetResult:
    predictions = np.zeros(len(problem.y), dtype=np.int64)
    predicted = np.zeros(len(problem.y), dtype=bool)
    skipped = 0
    for u in range(n_subjects):
        test = problem.groups == u
        _check_fold(problem.groups, test)
        y_train = problem.y[~test]
        if spec.family in DISCRIMINATIVE and len(np.unique(y_train)) < 2:
            skipped += 1
            continue
        model = train(
            spec,
            problem.X[~test],
            y_train,
            problem.groups[~test],
            feature_names=problem.feature_names,
            target_name=problem.target,
            tie_salt=u,
        )
        predictions[test] = predict_batch(model, problem.X[test])
        predicted[test] = True
    return _TargetResult(problem, predictions, predicted, skipped)


@dataclass(frozen=True)
class EvalReport:
    feature_group: str
    target_group: str
    family: str
    reduced5: bool
    per_target_accuracy: dict[str, float | None]
    mean_accuracy: float
    bootstrap_ci95: tuple[float, float]
    n_subjects: int
    skipped_folds: int
    folds_checked: int
    subject_leaks: int

    def to_json_dict(self) -> dict:
        return {
            "feature_group": self.feature_group,
            "target_group": self.target_group,
            "family": self.family,
            "reduced5": self.reduced5,
            "per_target_accuracy": self.per_target_accuracy,
            "mean_accuracy": self.mean_accuracy,
            "bootstrap_ci95": list(self.bootstrap_ci95),
            "n_subjects": self.n_subjects,
            "skipped_folds": self.skipped_folds,
            "folds_checked": self.folds_checked,
            "subject_leaks": self.subject_leaks,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def evaluate_cell(
    dataset: Dataset,
    feature_group: Group,
    target_group: Group,
    spec: ModelSpec,
    reduced5: bool = False,
    bootstrap_samples: int = BOOTSTRAP_SAMPLES,
    bootstrap_seed: int = 0,
) -> EvalReport:
    """Evaluate one (features, targets) cell under subject-grouped LOOCV.

    Every target in the target group is predicted for each held-out
    subject by a model trained on the rest; held-out predictions are
    pooled per target into a class-normalized accuracy, averaged across
    targets, with a 95% CI from resampling subjects.
    """
    if len(dataset) < 3:
        raise EvaluationError("need at least 3 subjects")
    feature_group = Group(feature_group)
    target_group = Group(target_group)
    arrays = _prepare(dataset)
    n = len(arrays.subject_ids)

    folds_before = LEAK_STATS.folds_checked
    leaks_before = LEAK_STATS.leaks
    results: list[_TargetResult] = []
    for target in _targets_for(target_group, reduced5):
        problem = _build_problem(arrays, feature_group, target, reduced5)
        results.append(_loocv_target(problem, spec, n))

    per_target = {r.problem.target: r.accuracy() for r in results}
    valid = [a for a in per_target.values() if a is not None]
    if not valid:
        raise EvaluationError("every target was degenerate")
    mean_accuracy = float(np.mean(valid))

    def statistic(counts: np.ndarray) -> float | None:
        accs = []
        for r in results:
            rows = r.predicted
            weights = counts[r.problem.groups[rows]].astype(np.float64)
            acc = weighted_class_normalized_accuracy(
                r.problem.y[rows], r.predictions[rows], weights
            )
            if acc is not None:
                accs.append(acc)
        return float(np.mean(accs)) if accs else None

    ci = bootstrap_subject_ci(
        statistic, n, n_samples=bootstrap_samples, seed=mix64(bootstrap_seed ^ 0xB005)
    )
    return EvalReport(
        feature_group=feature_group.value,
        target_group=target_group.value,
        family=spec.family.value,
        reduced5=reduced5,
        per_target_accuracy=per_target,
        mean_accuracy=mean_accuracy,
        bootstrap_ci95=ci,
        n_subjects=n,
        skipped_folds=sum(r.skipped_folds for r in results),
        folds_checked=LEAK_STATS.folds_checked - folds_before,
        subject_leaks=LEAK_STATS.leaks - leaks_before,
    )


def best_single_source_accuracy(
    dataset: Dataset,
    target_group: Group,
    feature_group: Group = Group.UNION,
    reduced5: bool = False,
) -> float:
    """LOOCV accuracy of the best single source item per target.

    Per fold, the source column and mapping (identity or flip) with the
    highest training class-normalized accuracy predicts the held-out
    subject; ties go to the earlier feature and the identity mapping.
    """
    if len(dataset) < 3:
        raise EvaluationError("need at least 3 subjects")
    arrays = _prepare(dataset)
    n = len(arrays.subject_ids)
    accs = []
    for target in _targets_for(Group(target_group), reduced5):
        problem = _build_problem(arrays, Group(feature_group), target, reduced5)
        predictions = np.zeros(len(problem.y), dtype=np.int64)
        predicted = np.zeros(len(problem.y), dtype=bool)
        for u in range(n):
            test = problem.groups == u
            _check_fold(problem.groups, test)
            Xtr = problem.X[~test]
            ytr = problem.y[~test]
            pos = ytr == 1
            if pos.all() or not pos.any():
                continue
            recall_pos = (Xtr[pos] == 1).mean(axis=0)
            recall_neg = (Xtr[~pos] == -1).mean(axis=0)
            cn_identity = (recall_pos + recall_neg) / 2.0
            best = np.maximum(cn_identity, 1.0 - cn_identity)
            source = int(np.argmax(best))
            sign = 1 if cn_identity[source] >= 1.0 - cn_identity[source] else -1
            predictions[test] = sign * problem.X[test, source].astype(np.int64)
            predicted[test] = True
        if predicted.any():
            acc = class_normalized_accuracy(problem.y[predicted], predictions[predicted])
            if acc is not None:
                accs.append(acc)
    if not accs:
        raise EvaluationError("every target was degenerate")
    return float(np.mean(accs))


def per_target_report(dataset: Dataset, spec: ModelSpec | None = None) -> list[tuple[str, float]]:
    """Art targets ranked by how predictable they are from everything else."""
    spec = spec or ModelSpec(family=Family.LINEAR_SVM)
    report = evaluate_cell(dataset, Group.UNION, Group.ART, spec)
    items = [(t, a) for t, a in report.per_target_accuracy.items() if a is not None]
    order = {c.value: i for i, c in enumerate(ART_ORDER)}
    return sorted(items, key=lambda kv: (-kv[1], order[kv[0]]))


@dataclass(frozen=True)
class LearningCurve:
    sizes: tuple[int, ...]
    repeats: int
    accuracies: dict[int, tuple[float, ...]]  # size -> one value per repeat

    @property
    def n_evaluations(self) -> int:
        return sum(len(v) for v in self.accuracies.values())

    def mean(self, size: int) -> float:
        return float(np.mean(self.accuracies[size]))

    def band(self, size: int) -> tuple[float, float]:
        values = self.accuracies[size]
        return (float(min(values)), float(max(values)))


def learning_curve(
    dataset: Dataset,
    sizes: list[int],
    spec: ModelSpec,
    repeats: int = 10,
    feature_group: Group = Group.UNION,
    target_group: Group = Group.ART,
    seed: int = 0,
) -> LearningCurve:
    """Accuracy as a function of training-set size.

    Each evaluation trains on a seeded random subset of subjects of the
    requested size and tests on all remaining subjects.
    """
    if not sizes:
        raise EvaluationError("sizes must be non-empty")
    arrays = _prepare(dataset)
    n = len(arrays.subject_ids)
    if any(s < 1 or s > n - 1 for s in sizes):
        raise EvaluationError(f"sizes must lie in [1, {n - 1}]")
    problems = [
        _build_problem(arrays, Group(feature_group), t, False)
        for t in _targets_for(Group(target_group), False)
    ]
    accuracies: dict[int, tuple[float, ...]] = {}
    for size in sizes:
        values = []
        for rep in range(repeats):
            stream = RandomStream(mix64(seed ^ (size * 1_000_003 + rep)))
            order = list(range(n))
            stream.shuffle(order)
            chosen = np.zeros(n, dtype=bool)
            chosen[order[:size]] = True
            target_accs = []
            pooled_true: list[np.ndarray] = []
            pooled_pred: list[np.ndarray] = []
            for problem in problems:
                train_rows = chosen[problem.groups]
                _check_fold(problem.groups, ~train_rows)
                y_train = problem.y[train_rows]
                if spec.family in DISCRIMINATIVE and len(np.unique(y_train)) < 2:
                    continue
                if len(y_train) == 0:
                    continue
                model = train(
                    spec,
                    problem.X[train_rows],
                    y_train,
                    problem.groups[train_rows],
                    feature_names=problem.feature_names,
                    target_name=problem.target,
                    tie_salt=size * 101 + rep,
                )
                preds = predict_batch(model, problem.X[~train_rows])
                pooled_true.append(problem.y[~train_rows])
                pooled_pred.append(preds)
                acc = class_normalized_accuracy(problem.y[~train_rows], preds)
                if acc is not None:
                    target_accs.append(acc)
            if target_accs:
                values.append(float(np.mean(target_accs)))
            else:
                # tiny test sets can be single-class per target; fall back to
                # the metric pooled over all targets' instances
                pooled = class_normalized_accuracy(
                    np.concatenate(pooled_true), np.concatenate(pooled_pred)
                )
                values.append(float("nan") if pooled is None else pooled)
        accuracies[size] = tuple(values)
    return LearningCurve(sizes=tuple(sizes), repeats=repeats, accuracies=accuracies)
