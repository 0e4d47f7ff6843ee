"""Labeling, dataset assembly, and the three from-scratch classifiers.

Rug-pull moments come from a strict rule cascade; positives are featurized
a configurable number of hours before that moment, negatives at the end of
data collection. Models are a gradient-descent logistic regression, a
subgradient linear SVM, and a bagged CART forest, all over the 55-feature
schema with train-split z-score normalization.
"""
from __future__ import annotations

import csv
import enum
import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .detector import PriceSequence, _drawdowns_with_troughs, price_sequence
from .errors import (
    DimensionMismatch,
    EmptyClass,
    FoldTooSmall,
    NonFinite,
    SchemaMismatch,
)
from .features import FEATURE_COUNT, FEATURE_NAMES, FeatureVector, featurize
from .records import ProjectTimeline, SocialStatus

log = logging.getLogger(__name__)

#: lead times (hours) at which early-warning models are trained and scored
WINDOW_HOURS_SET = (0, 1, 2, 4, 8, 12, 16, 24, 36, 48, 60, 72, 84, 96)

TRAIN_FRACTION = 0.8

KIND_LOGREG = "logreg"
KIND_SVM = "svm"
KIND_FOREST = "forest"

DEFAULT_CONFIGS: dict[str, dict] = {
    KIND_LOGREG: {"learning_rate": 0.1, "l2": 1e-4, "epochs": 2000, "rebalance": False},
    KIND_SVM: {
        "c": 1.0,
        "learning_rate": 0.01,
        "l2": 1e-4,
        "epochs": 2000,
        "rebalance": False,
    },
    KIND_FOREST: {"n_trees": 100, "max_depth": 16, "min_leaf": 2},
}

MODEL_SCHEMA_VERSION = 1


class TrpRule(str, enum.Enum):
    LARGEST_WITHDRAWAL = "LargestWithdrawal"
    LAST_SOCIAL_UPDATE = "LastSocialUpdate"
    LAST_DRAWDOWN_TROUGH = "LastDrawdownTrough"
    LAST_TRADE = "LastTrade"


@dataclass(frozen=True)
class RugPullMoment:
    t_rp: int
    rule_used: TrpRule


#: social statuses whose accounts expose no usable last-update time
_NO_UPDATE_STATUSES = frozenset({SocialStatus.DELETED, SocialStatus.SUSPENDED})


def determine_t_rp(
    timeline: ProjectTimeline,
    drawdowns: Sequence[tuple[float, int]] | None = None,
    drawdown_threshold: float = 0.99,
) -> RugPullMoment | None:
    """Pin the moment the rug was pulled, by the first applicable rule:

    1. largest withdrawal (ties: earliest), else
    2. latest social last-post among accounts not deleted/suspended, else
    3. last trough among drawdowns over the threshold, else
    4. last trade, else absent.

    `drawdowns` may carry precomputed (drawdown, trough index) pairs for
    the project's price sequence; they are derived from the trades when
    omitted.
    """
    if timeline.withdrawals:
        best = timeline.withdrawals[0]
        for w in timeline.withdrawals[1:]:
            if w.amount_wei > best.amount_wei:
                best = w
        return RugPullMoment(best.timestamp, TrpRule.LARGEST_WITHDRAWAL)

    posts = [
        s.last_post_timestamp
        for s in timeline.socials
        if s.last_post_timestamp is not None and s.status not in _NO_UPDATE_STATUSES
    ]
    if posts:
        return RugPullMoment(max(posts), TrpRule.LAST_SOCIAL_UPDATE)

    seq = price_sequence(timeline.trades)
    if len(seq) >= 2:
        pairs = drawdowns if drawdowns is not None else _drawdowns_with_troughs(seq)
        troughs = [j for d, j in pairs if d > drawdown_threshold]
        if troughs:
            t = max(seq[j].timestamp for j in troughs)
            return RugPullMoment(t, TrpRule.LAST_DRAWDOWN_TROUGH)

    if timeline.trades:
        return RugPullMoment(timeline.trades[-1].timestamp, TrpRule.LAST_TRADE)

    return None


# ---------------------------------------------------------------------------
# datasets


@dataclass(frozen=True)
class LabeledDataset:
    rows: tuple[tuple[FeatureVector, bool], ...]
    window_hours: int
    split_seed: int = 0

    def __post_init__(self) -> None:
        if self.window_hours not in WINDOW_HOURS_SET:
            raise ValueError(
                f"window_hours must be one of {WINDOW_HOURS_SET}, got {self.window_hours}"
            )

    def __len__(self) -> int:
        return len(self.rows)


def build_dataset(
    positives: Sequence[ProjectTimeline],
    negatives: Sequence[ProjectTimeline],
    window_hours: int,
    collection_end: int,
    split_seed: int = 0,
) -> LabeledDataset:
    """Featurize positives at t_rp - window and negatives at collection end.

    Positives without a determinable rug-pull moment, or whose cutoff would
    precede launch, are dropped with a warning; same for negatives launched
    after collection end.
    """
    if window_hours not in WINDOW_HOURS_SET:
        raise ValueError(
            f"window_hours must be one of {WINDOW_HOURS_SET}, got {window_hours}"
        )
    rows: list[tuple[FeatureVector, bool]] = []
    n_pos = 0
    for tl in positives:
        moment = determine_t_rp(tl)
        if moment is None:
            log.warning("dropping positive %s: no determinable rug-pull moment", tl.project)
            continue
        cutoff = moment.t_rp - window_hours * 3600
        if cutoff < tl.metadata.launch_timestamp:
            log.warning(
                "dropping positive %s: cutoff %d precedes launch", tl.project, cutoff
            )
            continue
        rows.append((featurize(tl, cutoff), True))
        n_pos += 1
    n_neg = 0
    for tl in negatives:
        if collection_end < tl.metadata.launch_timestamp:
            log.warning(
                "dropping negative %s: launched after collection end", tl.project
            )
            continue
        rows.append((featurize(tl, collection_end), False))
        n_neg += 1
    if n_pos == 0:
        raise EmptyClass("no usable positive rows")
    if n_neg == 0:
        raise EmptyClass("no usable negative rows")
    return LabeledDataset(tuple(rows), window_hours, split_seed)


def dataset_matrices(rows: Sequence[tuple[FeatureVector, bool]]) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([fv.values for fv, _ in rows], dtype=float)
    y = np.array([1.0 if label else 0.0 for _, label in rows])
    return X, y


def split_indices(n: int, split_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle, first 80% train, rest test."""
    perm = np.random.default_rng(split_seed).permutation(n)
    n_train = int(n * TRAIN_FRACTION)
    return perm[:n_train], perm[n_train:]


# ---------------------------------------------------------------------------
# normalization


def fit_normalization(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return X.mean(axis=0), X.std(axis=0)


def apply_normalization(X: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    """z-score where the training spread is positive; constant features pass
    through untouched."""
    return np.where(std > 0, (X - mean) / np.where(std > 0, std, 1.0), X)


# ---------------------------------------------------------------------------
# models


@dataclass
class Model:
    kind: str
    config: dict
    window_hours: int
    seed: int
    feature_names: tuple[str, ...]
    mean: tuple[float, ...]
    std: tuple[float, ...]
    weights: tuple[float, ...] | None = None
    bias: float | None = None
    trees: tuple[dict, ...] | None = None

    @property
    def dimension(self) -> int:
        return len(self.feature_names)


def _sample_weights(y01: np.ndarray, rebalance: bool) -> np.ndarray:
    w = np.ones_like(y01)
    if rebalance:
        n_pos = float(y01.sum())
        n_neg = float(len(y01) - n_pos)
        if n_pos > 0 and n_neg > 0:
            w = np.where(y01 > 0.5, n_neg / n_pos, 1.0)
    return w / w.sum()


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logreg_loss_and_grad(
    w: np.ndarray,
    b: float,
    X: np.ndarray,
    y01: np.ndarray,
    l2: float,
    sample_w: np.ndarray | None = None,
) -> tuple[float, np.ndarray, float]:
    """L2-regularized logistic loss with its analytic gradient."""
    if sample_w is None:
        sample_w = np.full(len(y01), 1.0 / len(y01))
    z = X @ w + b
    softplus = np.log1p(np.exp(-np.abs(z))) + np.maximum(z, 0.0)
    loss = float(sample_w @ (softplus - y01 * z)) + 0.5 * l2 * float(w @ w)
    residual = (_sigmoid(z) - y01) * sample_w
    grad_w = X.T @ residual + l2 * w
    grad_b = float(residual.sum())
    return loss, grad_w, grad_b


def _fit_logreg(Xn: np.ndarray, y01: np.ndarray, config: dict) -> tuple[np.ndarray, float]:
    lr = config["learning_rate"]
    l2 = config["l2"]
    epochs = config["epochs"]
    sample_w = _sample_weights(y01, config.get("rebalance", False))
    w = np.zeros(Xn.shape[1])
    b = 0.0
    for _ in range(epochs):
        loss, grad_w, grad_b = logreg_loss_and_grad(w, b, Xn, y01, l2, sample_w)
        if not math.isfinite(loss):
            raise NonFinite(f"logistic loss diverged to {loss}")
        w -= lr * grad_w
        b -= lr * grad_b
    return w, b


def svm_objective_and_subgrad(
    w: np.ndarray,
    b: float,
    X: np.ndarray,
    ypm: np.ndarray,
    c: float,
    l2: float,
    sample_w: np.ndarray | None = None,
) -> tuple[float, np.ndarray, float]:
    """Hinge objective 0.5*l2*|w|^2 + c*mean(max(0, 1 - y f)) and one
    subgradient."""
    if sample_w is None:
        sample_w = np.full(len(ypm), 1.0 / len(ypm))
    margins = ypm * (X @ w + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    obj = 0.5 * l2 * float(w @ w) + c * float(sample_w @ hinge)
    active = hinge > 0.0
    coeff = np.where(active, ypm * sample_w, 0.0)
    grad_w = l2 * w - c * (X.T @ coeff)
    grad_b = -c * float(coeff.sum())
    return obj, grad_w, grad_b


def _fit_svm(Xn: np.ndarray, y01: np.ndarray, config: dict) -> tuple[np.ndarray, float]:
    lr = config["learning_rate"]
    c = config["c"]
    l2 = config["l2"]
    epochs = config["epochs"]
    ypm = np.where(y01 > 0.5, 1.0, -1.0)
    sample_w = _sample_weights(y01, config.get("rebalance", False))
    w = np.zeros(Xn.shape[1])
    b = 0.0
    for _ in range(epochs):
        obj, grad_w, grad_b = svm_objective_and_subgrad(w, b, Xn, ypm, c, l2, sample_w)
        if not math.isfinite(obj):
            raise NonFinite(f"hinge objective diverged to {obj}")
        w -= lr * grad_w
        b -= lr * grad_b
    return w, b


# --- forest ---


def bootstrap_indices(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, n, size=n)


def _leaf(y01: np.ndarray) -> dict:
    n_pos = int(y01.sum())
    return {"leaf": True, "n_pos": n_pos, "n_neg": int(len(y01) - n_pos)}


def _best_split(
    X: np.ndarray, y01: np.ndarray, feat_ids: np.ndarray, min_leaf: int
) -> tuple[int, float] | None:
    """Lowest weighted Gini impurity over candidate (feature, threshold)
    pairs; ties resolve to the earliest feature and smallest split point."""
    n = len(y01)
    best: tuple[float, int, float] | None = None
    for f in feat_ids:
        xf = X[:, f]
        order = np.argsort(xf, kind="stable")
        xs = xf[order]
        ys = y01[order]
        left_n = np.arange(1, n)
        left_pos = np.cumsum(ys)[:-1]
        right_n = n - left_n
        right_pos = ys.sum() - left_pos
        with np.errstate(invalid="ignore"):
            pl = left_pos / left_n
            pr = right_pos / right_n
            gini_l = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)
            gini_r = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr)
        weighted = (left_n * gini_l + right_n * gini_r) / n
        valid = (xs[1:] > xs[:-1]) & (left_n >= min_leaf) & (right_n >= min_leaf)
        if not valid.any():
            continue
        weighted = np.where(valid, weighted, np.inf)
        k = int(np.argmin(weighted))
        score = float(weighted[k])
        if best is None or score < best[0]:
            threshold = (xs[k] + xs[k + 1]) / 2.0
            best = (score, int(f), float(threshold))
    if best is None:
        return None
    return best[1], best[2]


def _grow_tree(
    X: np.ndarray,
    y01: np.ndarray,
    rng: np.random.Generator,
    max_depth: int,
    min_leaf: int,
    n_subsample: int,
    depth: int = 0,
) -> dict:
    n = len(y01)
    if depth >= max_depth or n < 2 * min_leaf or y01.min() == y01.max():
        return _leaf(y01)
    feat_ids = rng.choice(X.shape[1], size=min(n_subsample, X.shape[1]), replace=False)
    split = _best_split(X, y01, feat_ids, min_leaf)
    if split is None:
        return _leaf(y01)
    f, threshold = split
    mask = X[:, f] <= threshold
    return {
        "leaf": False,
        "feature": f,
        "threshold": threshold,
        "left": _grow_tree(X[mask], y01[mask], rng, max_depth, min_leaf, n_subsample, depth + 1),
        "right": _grow_tree(X[~mask], y01[~mask], rng, max_depth, min_leaf, n_subsample, depth + 1),
    }


def _fit_forest(Xn: np.ndarray, y01: np.ndarray, config: dict, seed: int) -> list[dict]:
    n_trees = config["n_trees"]
    max_depth = config["max_depth"]
    min_leaf = config["min_leaf"]
    n_subsample = math.isqrt(Xn.shape[1])
    if n_subsample * n_subsample < Xn.shape[1]:
        n_subsample += 1
    trees = []
    for ss in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(ss)
        idx = bootstrap_indices(rng, len(y01))
        trees.append(_grow_tree(Xn[idx], y01[idx], rng, max_depth, min_leaf, n_subsample))
    return trees


def _tree_vote(tree: dict, x: np.ndarray) -> bool:
    node = tree
    while not node["leaf"]:
        node = node["left"] if x[node["feature"]] <= node["threshold"] else node["right"]
    return node["n_pos"] > node["n_neg"]


# --- training entry points ---


def _merged_config(kind: str, config: dict | None) -> dict:
    merged = dict(DEFAULT_CONFIGS[kind])
    if config:
        unknown = set(config) - set(merged)
        if unknown:
            raise ValueError(f"unknown {kind} config key(s): {sorted(unknown)}")
        merged.update(config)
    return merged


def _train(kind: str, dataset: LabeledDataset, config: dict | None, seed: int) -> Model:
    cfg = _merged_config(kind, config)
    X, y = dataset_matrices(dataset.rows)
    train_idx, _ = split_indices(len(dataset.rows), dataset.split_seed)
    X_train, y_train = X[train_idx], y[train_idx]
    mean, std = fit_normalization(X_train)
    Xn = apply_normalization(X_train, mean, std)
    model = Model(
        kind=kind,
        config=cfg,
        window_hours=dataset.window_hours,
        seed=seed,
        feature_names=FEATURE_NAMES,
        mean=tuple(mean.tolist()),
        std=tuple(std.tolist()),
    )
    if kind == KIND_FOREST:
        model.trees = tuple(_fit_forest(Xn, y_train, cfg, seed))
    else:
        fit = _fit_logreg if kind == KIND_LOGREG else _fit_svm
        w, b = fit(Xn, y_train, cfg)
        if not (np.isfinite(w).all() and math.isfinite(b)):
            raise NonFinite("training produced non-finite parameters")
        model.weights = tuple(w.tolist())
        model.bias = b
    return model


def train_logreg(dataset: LabeledDataset, config: dict | None = None, seed: int = 0) -> Model:
    """Full-batch gradient descent on L2-regularized logistic loss."""
    return _train(KIND_LOGREG, dataset, config, seed)


def train_svm(dataset: LabeledDataset, config: dict | None = None, seed: int = 0) -> Model:
    """Subgradient descent on the L2-regularized hinge objective."""
    return _train(KIND_SVM, dataset, config, seed)


def train_forest(dataset: LabeledDataset, config: dict | None = None, seed: int = 0) -> Model:
    """Bagged CART trees with Gini impurity and per-split feature
    subsampling of ceil(sqrt(d)); majority vote, ties negative."""
    return _train(KIND_FOREST, dataset, config, seed)


TRAINERS: dict[str, Callable[[LabeledDataset, dict | None, int], Model]] = {
    KIND_LOGREG: train_logreg,
    KIND_SVM: train_svm,
    KIND_FOREST: train_forest,
}


# ---------------------------------------------------------------------------
# prediction


def _decision_scores(model: Model, Xn: np.ndarray) -> np.ndarray:
    if model.kind == KIND_FOREST:
        votes = np.zeros(len(Xn))
        for tree in model.trees:
            votes += [1.0 if _tree_vote(tree, x) else 0.0 for x in Xn]
        return votes / len(model.trees)
    w = np.asarray(model.weights)
    z = Xn @ w + model.bias
    return _sigmoid(z) if model.kind == KIND_LOGREG else z


def _labels_from_scores(kind: str, scores: np.ndarray) -> np.ndarray:
    threshold = 0.0 if kind == KIND_SVM else 0.5
    return scores > threshold


def predict(model: Model, fv: FeatureVector) -> tuple[bool, float]:
    """Normalized decision on one vector: (label, score). The score is a
    probability for logreg, a signed margin for the SVM, and a positive
    vote fraction for the forest; exact ties are negative."""
    if len(fv.values) != model.dimension:
        raise DimensionMismatch(
            f"vector has {len(fv.values)} features, model expects {model.dimension}"
        )
    x = np.array(fv.values, dtype=float)
    xn = apply_normalization(x, np.asarray(model.mean), np.asarray(model.std))
    score = float(_decision_scores(model, xn[None, :])[0])
    label = bool(_labels_from_scores(model.kind, np.array([score]))[0])
    return label, score


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "Metrics":
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        )
        return cls(precision, recall, f1)

    def to_json_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def _mean_metrics(folds: Sequence[Metrics]) -> Metrics:
    n = len(folds)
    return Metrics(
        sum(m.precision for m in folds) / n,
        sum(m.recall for m in folds) / n,
        sum(m.f1 for m in folds) / n,
    )


@dataclass(frozen=True)
class EvaluationReport:
    holdout: Metrics
    folds_full: tuple[Metrics, ...]
    cv_full: Metrics
    folds_train: tuple[Metrics, ...]
    cv_train: Metrics

    def to_json_dict(self) -> dict:
        return {
            "holdout": self.holdout.to_json_dict(),
            "cv_full": {
                "aggregate": self.cv_full.to_json_dict(),
                "folds": [m.to_json_dict() for m in self.folds_full],
            },
            "cv_train_split": {
                "aggregate": self.cv_train.to_json_dict(),
                "folds": [m.to_json_dict() for m in self.folds_train],
            },
        }


def _metrics_on(model_kind: str, scores: np.ndarray, y01: np.ndarray) -> Metrics:
    pred = _labels_from_scores(model_kind, scores)
    actual = y01 > 0.5
    tp = int(np.sum(pred & actual))
    fp = int(np.sum(pred & ~actual))
    fn = int(np.sum(~pred & actual))
    return Metrics.from_counts(tp, fp, fn)


def _fit_fold(kind: str, config: dict, seed: int, X: np.ndarray, y: np.ndarray) -> Model:
    mean, std = fit_normalization(X)
    Xn = apply_normalization(X, mean, std)
    model = Model(
        kind=kind,
        config=config,
        window_hours=WINDOW_HOURS_SET[0],
        seed=seed,
        feature_names=FEATURE_NAMES[: X.shape[1]],
        mean=tuple(mean.tolist()),
        std=tuple(std.tolist()),
    )
    if kind == KIND_FOREST:
        model.trees = tuple(_fit_forest(Xn, y, config, seed))
    else:
        fit = _fit_logreg if kind == KIND_LOGREG else _fit_svm
        w, b = fit(Xn, y, config)
        model.weights = tuple(w.tolist())
        model.bias = b
    return model


def _cross_validate(
    kind: str,
    config: dict,
    seed: int,
    X: np.ndarray,
    y: np.ndarray,
    folds: int,
    shuffle_seed: int,
) -> list[Metrics]:
    n = len(y)
    perm = np.random.default_rng(shuffle_seed).permutation(n)
    chunks = np.array_split(perm, folds)
    for i, chunk in enumerate(chunks):
        classes = set(y[chunk].tolist())
        if classes != {0.0, 1.0}:
            raise FoldTooSmall(f"fold {i} holds only class(es) {sorted(classes)}")
    out = []
    for i, chunk in enumerate(chunks):
        train_idx = np.concatenate([c for j, c in enumerate(chunks) if j != i])
        fold_model = _fit_fold(kind, config, seed, X[train_idx], y[train_idx])
        Xn_test = apply_normalization(
            X[chunk], np.asarray(fold_model.mean), np.asarray(fold_model.std)
        )
        scores = _decision_scores(fold_model, Xn_test)
        out.append(_metrics_on(kind, scores, y[chunk]))
    return out


def evaluate(model: Model, dataset: LabeledDataset, folds: int = 5) -> EvaluationReport:
    """Held-out 20% metrics for the given model plus k-fold cross-validation
    (retraining per fold with the model's config) over both the full dataset
    and the 80% training split."""
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    X, y = dataset_matrices(dataset.rows)
    train_idx, test_idx = split_indices(len(dataset.rows), dataset.split_seed)

    Xn_test = apply_normalization(
        X[test_idx], np.asarray(model.mean), np.asarray(model.std)
    )
    holdout = _metrics_on(model.kind, _decision_scores(model, Xn_test), y[test_idx])

    folds_full = _cross_validate(
        model.kind, model.config, model.seed, X, y, folds, dataset.split_seed
    )
    folds_train = _cross_validate(
        model.kind,
        model.config,
        model.seed,
        X[train_idx],
        y[train_idx],
        folds,
        dataset.split_seed,
    )
    return EvaluationReport(
        holdout=holdout,
        folds_full=tuple(folds_full),
        cv_full=_mean_metrics(folds_full),
        folds_train=tuple(folds_train),
        cv_train=_mean_metrics(folds_train),
    )


# ---------------------------------------------------------------------------
# persistence


def save_model(model: Model, path: str | os.PathLike) -> None:
    payload: dict = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "kind": model.kind,
        "config": model.config,
        "window_hours": model.window_hours,
        "seed": model.seed,
        "feature_names": list(model.feature_names),
        "normalization": {"mean": list(model.mean), "std": list(model.std)},
    }
    if model.kind == KIND_FOREST:
        payload["parameters"] = {"trees": list(model.trees)}
    else:
        payload["parameters"] = {"weights": list(model.weights), "bias": model.bias}
    Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n")


def load_model(path: str | os.PathLike) -> Model:
    p = Path(path)
    try:
        payload = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{p}: not valid JSON ({exc.msg})") from exc
    if not isinstance(payload, dict) or payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise SchemaMismatch(f"{p}: unsupported model schema")
    kind = payload.get("kind")
    if kind not in TRAINERS:
        raise SchemaMismatch(f"{p}: unknown model kind {kind!r}")
    try:
        norm = payload["normalization"]
        params = payload["parameters"]
        model = Model(
            kind=kind,
            config=payload["config"],
            window_hours=payload["window_hours"],
            seed=payload["seed"],
            feature_names=tuple(payload["feature_names"]),
            mean=tuple(norm["mean"]),
            std=tuple(norm["std"]),
        )
        if kind == KIND_FOREST:
            model.trees = tuple(params["trees"])
        else:
            model.weights = tuple(params["weights"])
            model.bias = float(params["bias"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatch(f"{p}: malformed model payload ({exc})") from exc
    dims = {len(model.feature_names), len(model.mean), len(model.std)}
    if model.weights is not None:
        dims.add(len(model.weights))
    if len(dims) != 1:
        raise SchemaMismatch(f"{p}: inconsistent parameter dimensions {sorted(dims)}")
    return model


# ---------------------------------------------------------------------------
# label files


def load_labels_csv(path: str | os.PathLike) -> dict[str, bool]:
    """project -> label from a CSV with at least project and label columns;
    labels may be 0/1, true/false, or positive/negative."""
    truthy = {"1", "true", "positive", "yes"}
    falsy = {"0", "false", "negative", "no"}
    out: dict[str, bool] = {}
    with open(Path(path), newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "project" not in reader.fieldnames or "label" not in reader.fieldnames:
            raise ValueError(f"{path}: need 'project' and 'label' columns")
        for row in reader:
            raw = row["label"].strip().lower()
            if raw in truthy:
                out[row["project"]] = True
            elif raw in falsy:
                out[row["project"]] = False
            else:
                raise ValueError(f"{path}: unrecognized label {row['label']!r}")
    return out


def dataset_from_features(
    vectors: Sequence[FeatureVector],
    labels: dict[str, bool],
    window_hours: int,
    split_seed: int = 0,
) -> LabeledDataset:
    """Join featurized rows with a label map (rows without labels error)."""
    rows = []
    for fv in vectors:
        if fv.project not in labels:
            raise ValueError(f"no label for project {fv.project}")
        rows.append((fv, labels[fv.project]))
    if not any(label for _, label in rows):
        raise EmptyClass("no positive rows after join")
    if all(label for _, label in rows):
        raise EmptyClass("no negative rows after join")
    return LabeledDataset(tuple(rows), window_hours, split_seed)
