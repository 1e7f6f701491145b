"""The six predictor families, trained from scratch on +/-1 data.

Hyperparameters are chosen inside :func:`train` by 5-fold cross
validation grouped by subject, maximizing class-normalized accuracy;
grids are iterated from simplest to most complex so ties resolve toward
the less complex setting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ..rng import MASK64, RandomStream, mix64, stream_floats
from ._kernels import logreg_gradient_descent, svm_subgradient

SVM_EPOCHS = 10
LOGREG_MAX_ITER = 5_000
LOGREG_TOL = 1e-6
ALS_MAX_SWEEPS = 100
ALS_TOL = 1e-6
INNER_CV_FOLDS = 5


class Family(str, Enum):
    NEAREST_NEIGHBOR = "nn"
    LOGISTIC_REGRESSION = "logreg"
    LINEAR_SVM = "svm"
    DECISION_TREE = "tree"
    MATRIX_COMPLETION = "mc"
    PRIOR_BASELINE = "prior"


DISCRIMINATIVE = (Family.LINEAR_SVM, Family.LOGISTIC_REGRESSION, Family.DECISION_TREE)


class SingleClassError(ValueError):
    """Training labels contain one class; use Family.PRIOR_BASELINE."""


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    family: Family
    c_grid: tuple[float, ...] = (0.01, 0.1, 1.0, 10.0, 100.0)
    tree_depth_grid: tuple[int, ...] = (1, 2, 3)
    tree_min_leaf_grid: tuple[int, ...] = (5, 10)
    mc_rank_grid: tuple[int, ...] = (1, 2, 3)
    mc_ridge_grid: tuple[float, ...] = (0.1, 1.0, 10.0)
    tie_seed: int = 0

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family(self.family))
        if not 0 <= self.tie_seed <= MASK64:
            raise ValueError("tie_seed must be a 64-bit unsigned integer")
        if any(d > 3 for d in self.tree_depth_grid):
            raise ValueError("decision trees are restricted to depth 3 or less")
        for grid in (self.c_grid, self.tree_depth_grid, self.tree_min_leaf_grid,
                     self.mc_rank_grid, self.mc_ridge_grid):
            if not grid:
                raise ValueError("hyperparameter grids must be non-empty")

    def hyper_grid(self) -> list[dict]:
        """Candidate settings ordered simplest first."""
        if self.family in (Family.LINEAR_SVM, Family.LOGISTIC_REGRESSION):
            return [{"C": c} for c in sorted(self.c_grid)]
        if self.family is Family.DECISION_TREE:
            return [
                {"max_depth": d, "min_leaf": l}
                for d in sorted(self.tree_depth_grid)
                for l in sorted(self.tree_min_leaf_grid, reverse=True)
            ]
        if self.family is Family.MATRIX_COMPLETION:
            return [
                {"rank": r, "ridge": lam}
                for r in sorted(self.mc_rank_grid)
                for lam in sorted(self.mc_ridge_grid, reverse=True)
            ]
        return [{}]


@dataclass
class TreeNode:
    prediction: int
    n_samples: int
    purity: float
    feature: Optional[int] = None
    left: Optional["TreeNode"] = None   # branch for feature value -1
    right: Optional["TreeNode"] = None  # branch for feature value +1

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


@dataclass
class TrainedModel:
    family: Family
    feature_names: tuple[str, ...]
    chosen_hypers: dict
    target_name: Optional[str] = None
    # family payloads
    weights: Optional[np.ndarray] = None
    bias: Optional[float] = None
    tree: Optional[TreeNode] = None
    train_X: Optional[np.ndarray] = None
    train_y: Optional[np.ndarray] = None
    feature_factors: Optional[np.ndarray] = None  # (d, rank)
    target_factor: Optional[np.ndarray] = None    # (rank,)
    ridge: Optional[float] = None
    prior_value: Optional[int] = None
    prior_score: Optional[float] = None
    tie_stream: Optional[RandomStream] = None

    @property
    def fingerprint(self) -> str:
        return "|".join(self.feature_names)


# ---------------------------------------------------------------------------
# matrix completion primitive


def als_complete(
    matrix: np.ndarray,
    observed: np.ndarray,
    rank: int,
    ridge: float,
    max_sweeps: int = ALS_MAX_SWEEPS,
    tol: float = ALS_TOL,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """Alternating ridge least squares on the observed entries.

    Returns (U, V, objective history); the regularized objective is
    checked to be non-increasing after every sweep, and sweeps stop
    early once the completed matrix moves less than ``tol`` in
    Frobenius norm.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    observed = np.asarray(observed, dtype=bool)
    n, m = matrix.shape
    if observed.shape != (n, m):
        raise ValueError("observed mask must match the matrix shape")
    fully_observed = bool(observed.all())
    V = stream_floats(seed, m * rank).reshape(m, rank) - 0.5
    U = np.zeros((n, rank))
    eye = ridge * np.eye(rank)
    zeroed = np.where(observed, matrix, 0.0)

    def solve_rows(target_rows, factors, mask):
        out = np.empty((target_rows.shape[0], rank))
        for i in range(target_rows.shape[0]):
            cols = mask[i]
            F = factors[cols]
            out[i] = np.linalg.solve(F.T @ F + eye, F.T @ target_rows[i, cols])
        return out

    def objective():
        residual = np.where(observed, matrix - U @ V.T, 0.0)
        return float(
            (residual**2).sum() + ridge * ((U**2).sum() + (V**2).sum())
        )

    objectives: list[float] = []
    previous_completion = None
    for _ in range(max_sweeps):
        if fully_observed:
            U = zeroed @ V @ np.linalg.inv(V.T @ V + eye)
            V = zeroed.T @ U @ np.linalg.inv(U.T @ U + eye)
        else:
            U = solve_rows(zeroed, V, observed)
            V = solve_rows(zeroed.T, U, observed.T)
        obj = objective()
        if objectives and obj > objectives[-1] + 1e-9 * max(1.0, abs(objectives[-1])):
            raise AssertionError(
                f"ALS objective increased: {objectives[-1]} -> {obj}"
            )
        objectives.append(obj)
        completion = U @ V.T
        if previous_completion is not None:
            if np.linalg.norm(completion - previous_completion) < tol:
                break
        previous_completion = completion
    return U, V, objectives


# ---------------------------------------------------------------------------
# decision tree (CART, Gini, binary +/-1 features)


def _gini_counts(n_pos: np.ndarray, n_tot: np.ndarray) -> np.ndarray:
    """Gini impurity per candidate given positive counts and totals."""
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(n_tot > 0, n_pos / n_tot, 0.0)
    return 2.0 * p * (1.0 - p)


def _leaf(y: np.ndarray) -> TreeNode:
    n_pos = int((y > 0).sum())
    n = y.size
    prediction = +1 if n_pos * 2 > n else -1  # tie -> -1
    purity = max(n_pos, n - n_pos) / n
    return TreeNode(prediction=prediction, n_samples=n, purity=purity)


def _grow_tree(X: np.ndarray, y: np.ndarray, depth: int, max_depth: int, min_leaf: int) -> TreeNode:
    node = _leaf(y)
    n = y.size
    if depth >= max_depth or node.purity == 1.0 or n < 2 * min_leaf:
        return node
    is_neg = X < 0  # (n, d)
    n_left = is_neg.sum(axis=0)
    n_right = n - n_left
    pos = (y > 0).astype(np.float64)
    n_left_pos = pos @ is_neg
    n_right_pos = pos.sum() - n_left_pos
    weighted = (
        n_left * _gini_counts(n_left_pos, n_left)
        + n_right * _gini_counts(n_right_pos, n_right)
    ) / n
    valid = (n_left >= min_leaf) & (n_right >= min_leaf)
    if not valid.any():
        return node
    weighted = np.where(valid, weighted, np.inf)
    feature = int(np.argmin(weighted))  # ties -> lowest feature index
    parent_gini = _gini_counts(np.array([pos.sum()]), np.array([float(n)]))[0]
    if weighted[feature] >= parent_gini - 1e-12:
        return node
    mask = is_neg[:, feature]
    node.feature = feature
    node.left = _grow_tree(X[mask], y[mask], depth + 1, max_depth, min_leaf)
    node.right = _grow_tree(X[~mask], y[~mask], depth + 1, max_depth, min_leaf)
    return node


def _tree_predict_batch(node: TreeNode, X: np.ndarray, signed_purity: bool = False) -> np.ndarray:
    out = np.empty(X.shape[0])
    stack = [(node, np.ones(X.shape[0], dtype=bool))]
    while stack:
        current, mask = stack.pop()
        if not mask.any():
            continue
        if current.is_leaf:
            out[mask] = current.prediction * (current.purity if signed_purity else 1)
            continue
        goes_left = mask & (X[:, current.feature] < 0)
        stack.append((current.left, goes_left))
        stack.append((current.right, mask & ~goes_left))
    return out


# ---------------------------------------------------------------------------
# fitting


def _power_lipschitz(X: np.ndarray, lam: float) -> float:
    """Upper bound on the logistic-gradient Lipschitz constant."""
    Xb = np.hstack([X, np.ones((X.shape[0], 1))])
    gram = Xb.T @ Xb / (4.0 * X.shape[0])
    v = np.full(gram.shape[0], 1.0 / np.sqrt(gram.shape[0]))
    for _ in range(30):
        nv = gram @ v
        norm = np.linalg.norm(nv)
        if norm == 0:
            break
        v = nv / norm
    return float(v @ gram @ v) * 1.02 + lam


def _fit_payload(family: Family, hypers: dict, X: np.ndarray, y: np.ndarray,
                 seed: int, warm=None):
    n = X.shape[0]
    if family is Family.LINEAR_SVM:
        lam = 1.0 / (hypers["C"] * n)
        w, b = svm_subgradient(X, y.astype(np.float64), lam, SVM_EPOCHS, np.uint64(seed))
        return {"weights": w, "bias": float(b)}
    if family is Family.LOGISTIC_REGRESSION:
        lam = 1.0 / (hypers["C"] * n)
        if warm is not None:
            w0, b0 = warm["weights"].copy(), warm["bias"]
        else:
            w0, b0 = np.zeros(X.shape[1]), 0.0
        step = 1.0 / _power_lipschitz(X, lam)
        w, b, _ = logreg_gradient_descent(
            X, y.astype(np.float64), lam, step, LOGREG_MAX_ITER, LOGREG_TOL, w0, b0
        )
        return {"weights": w, "bias": float(b)}
    if family is Family.DECISION_TREE:
        tree = _grow_tree(X, y, 0, hypers["max_depth"], hypers["min_leaf"])
        return {"tree": tree}
    if family is Family.MATRIX_COMPLETION:
        matrix = np.hstack([X, y[:, None].astype(np.float64)])
        U, V, _ = als_complete(
            matrix, np.ones(matrix.shape, dtype=bool),
            rank=hypers["rank"], ridge=hypers["ridge"], seed=seed,
        )
        return {
            "feature_factors": V[:-1],
            "target_factor": V[-1],
            "ridge": hypers["ridge"],
        }
    if family is Family.NEAREST_NEIGHBOR:
        return {"train_X": X, "train_y": y}
    if family is Family.PRIOR_BASELINE:
        mean = float(y.mean())
        return {"prior_value": +1 if mean > 0 else -1, "prior_score": mean}
    raise ValueError(f"unknown family {family}")


def _payload_predict(family: Family, payload: dict, X: np.ndarray,
                     tie_stream: RandomStream | None = None,
                     scores: bool = False) -> np.ndarray:
    if family in (Family.LINEAR_SVM, Family.LOGISTIC_REGRESSION):
        margin = X @ payload["weights"] + payload["bias"]
        return margin if scores else np.where(margin >= 0, 1, -1)
    if family is Family.DECISION_TREE:
        return _tree_predict_batch(payload["tree"], X, signed_purity=scores)
    if family is Family.MATRIX_COMPLETION:
        Vf = payload["feature_factors"]
        A = Vf.T @ Vf + payload["ridge"] * np.eye(Vf.shape[1])
        rows = np.linalg.solve(A, Vf.T @ X.T).T
        margin = rows @ payload["target_factor"]
        return margin if scores else np.where(margin >= 0, 1, -1)
    if family is Family.NEAREST_NEIGHBOR:
        train_X, train_y = payload["train_X"], payload["train_y"]
        dists = (train_X.shape[1] - X @ train_X.T) / 2.0
        out = np.empty(X.shape[0])
        for r in range(X.shape[0]):
            ties = np.flatnonzero(dists[r] == dists[r].min())
            if scores:
                out[r] = float(train_y[ties].mean())
            elif len(ties) == 1:
                out[r] = train_y[ties[0]]
            else:
                out[r] = train_y[ties[tie_stream.randrange(len(ties))]]
        return out
    if family is Family.PRIOR_BASELINE:
        value = payload["prior_score"] if scores else payload["prior_value"]
        return np.full(X.shape[0], value, dtype=float if scores else int)
    raise ValueError(f"unknown family {family}")


def _inner_folds(groups: np.ndarray, n_folds: int) -> np.ndarray:
    """Fold index per row; subjects assigned round-robin in first-appearance order."""
    fold_of_group: dict = {}
    folds = np.empty(len(groups), dtype=np.int64)
    for i, g in enumerate(groups):
        if g not in fold_of_group:
            fold_of_group[g] = len(fold_of_group) % n_folds
        folds[i] = fold_of_group[g]
    return folds


def _cv_class_normalized(y_true: np.ndarray, y_pred: np.ndarray) -> float | None:
    from .metrics import class_normalized_accuracy

    return class_normalized_accuracy(y_true, y_pred)


def _choose_hypers(spec: ModelSpec, X, y, groups, seed) -> dict:
    grid = spec.hyper_grid()
    if len(grid) == 1:
        return grid[0]
    unique = len(dict.fromkeys(groups))
    if unique < 2:
        return grid[0]
    n_folds = min(INNER_CV_FOLDS, unique)
    folds = _inner_folds(groups, n_folds)
    collected: dict[int, list] = {hi: [] for hi in range(len(grid))}
    for fold in range(n_folds):
        val = folds == fold
        Xtr, ytr = X[~val], y[~val]
        if len(np.unique(ytr)) < 2:
            continue  # degenerate inner fold, skipped
        warm = None
        for hi, hypers in enumerate(grid):
            payload = _fit_payload(spec.family, hypers, Xtr, ytr, seed, warm)
            if spec.family is Family.LOGISTIC_REGRESSION:
                warm = payload
            stream = RandomStream(mix64(spec.tie_seed ^ (fold + 1)))
            preds = _payload_predict(spec.family, payload, X[val], tie_stream=stream)
            collected[hi].append((y[val], preds))
    best_hi, best_acc = 0, -1.0
    for hi in range(len(grid)):
        if not collected[hi]:
            continue
        y_true = np.concatenate([t for t, _ in collected[hi]])
        y_pred = np.concatenate([p for _, p in collected[hi]])
        acc = _cv_class_normalized(y_true, y_pred)
        if acc is not None and acc > best_acc:
            best_hi, best_acc = hi, acc
    return grid[best_hi]


def train(
    spec: ModelSpec,
    X,
    y,
    groups,
    feature_names: tuple[str, ...] | None = None,
    target_name: str | None = None,
    tie_salt: int = 0,
) -> TrainedModel:
    """Fit one model for one target.

    ``groups`` carries the subject of each instance so hyperparameter
    selection can keep all of a subject's responses on one side of each
    inner split.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    groups = np.asarray(groups)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("X must be a non-empty 2-D instance matrix")
    if not (X.shape[0] == y.shape[0] == groups.shape[0]):
        raise ValueError("X, y, and groups must have equal length")
    if feature_names is None:
        feature_names = tuple(f"f{i}" for i in range(X.shape[1]))
    if len(feature_names) != X.shape[1]:
        raise DimensionMismatchError("feature_names must match X columns")
    classes = np.unique(y)
    if spec.family in DISCRIMINATIVE and len(classes) < 2:
        raise SingleClassError(
            f"{spec.family.value} needs both classes in y; use Family.PRIOR_BASELINE"
        )

    fit_seed = mix64(spec.tie_seed ^ 0xF17F17)
    chosen = _choose_hypers(spec, X, y, groups, fit_seed)
    payload = _fit_payload(spec.family, chosen, X, y, fit_seed)
    model = TrainedModel(
        family=spec.family,
        feature_names=tuple(feature_names),
        chosen_hypers=chosen,
        target_name=target_name,
        tie_stream=RandomStream(mix64(spec.tie_seed + tie_salt * 0x9E3779B97F4A7C15 + 1)),
        **payload,
    )
    if model.tree is not None and model.tree.depth() > 3:
        raise AssertionError("decision tree exceeded depth 3")
    return model


def _model_payload(model: TrainedModel) -> dict:
    return {
        "weights": model.weights,
        "bias": model.bias,
        "tree": model.tree,
        "train_X": model.train_X,
        "train_y": model.train_y,
        "feature_factors": model.feature_factors,
        "target_factor": model.target_factor,
        "ridge": model.ridge,
        "prior_value": model.prior_value,
        "prior_score": model.prior_score,
    }


def _check_dims(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != len(model.feature_names):
        raise DimensionMismatchError(
            f"expected {len(model.feature_names)} features, got {X.shape[1]}"
        )
    return X


def predict(model: TrainedModel, x) -> int:
    """Predict the +/-1 label of one feature vector."""
    X = _check_dims(model, x)
    out = _payload_predict(model.family, _model_payload(model), X, model.tie_stream)
    return int(out[0])


def predict_batch(model: TrainedModel, X) -> np.ndarray:
    X = _check_dims(model, X)
    return _payload_predict(model.family, _model_payload(model), X, model.tie_stream).astype(np.int64)


def decision_function(model: TrainedModel, x) -> float:
    """Real-valued score whose sign is the prediction (ties score 0)."""
    X = _check_dims(model, x)
    out = _payload_predict(
        model.family, _model_payload(model), X, model.tie_stream, scores=True
    )
    return float(out[0])


def extract_rules(model: TrainedModel) -> list[str]:
    """Root-to-leaf paths of a decision tree as readable IF/THEN rules."""
    from ..survey import feature_value_label

    if model.family is not Family.DECISION_TREE:
        raise ValueError("rule extraction requires a decision-tree model")
    target = model.target_name or "target"
    rules: list[str] = []

    def walk(node: TreeNode, conditions: list[str]):
        if node.is_leaf:
            lhs = " AND ".join(conditions) if conditions else "always"
            outcome = feature_value_label(target, node.prediction)
            rules.append(
                f"IF {lhs} THEN {target}={outcome} "
                f"(support {node.n_samples}, purity {node.purity:.2f})"
            )
            return
        name = model.feature_names[node.feature]
        walk(node.left, conditions + [f"{name}={feature_value_label(name, -1)}"])
        walk(node.right, conditions + [f"{name}={feature_value_label(name, +1)}"])

    walk(model.tree, [])
    return rules
