from .evaluation import (
    LEAK_STATS,
    EvalReport,
    EvaluationError,
    LearningCurve,
    best_single_source_accuracy,
    evaluate_cell,
    learning_curve,
    per_target_report,
)
from .metrics import bootstrap_subject_ci, class_normalized_accuracy
from .models import (
    DimensionMismatchError,
    Family,
    ModelSpec,
    SingleClassError,
    TrainedModel,
    als_complete,
    decision_function,
    extract_rules,
    predict,
    predict_batch,
    train,
)

__all__ = [
    "LEAK_STATS",
    "EvalReport",
    "EvaluationError",
    "LearningCurve",
    "best_single_source_accuracy",
    "evaluate_cell",
    "learning_curve",
    "per_target_report",
    "bootstrap_subject_ci",
    "class_normalized_accuracy",
    "DimensionMismatchError",
    "Family",
    "ModelSpec",
    "SingleClassError",
    "TrainedModel",
    "als_complete",
    "decision_function",
    "extract_rules",
    "predict",
    "predict_batch",
    "train",
]
