"""Confusion metrics, ROC/AUC and cross-validation protocols.

The positive class is malignant: sensitivity is the malignancy detection
rate, specificity the benign pass rate. ROC curves are swept over the
positive-class membership scores, so every classifier yields a
real-valued ranking. Reports carry both the pooled confusion over all
folds and the macro average of per-fold rates, since the two need not
agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import ClassifierConfig, Dataset, fit, predict


@dataclass(frozen=True)
class ConfusionCounts:
    """tp/fp/tn/fn with malignant (the designated class) counted positive."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True, eq=False)
class RocCurve:
    """Threshold-swept (fpr, tpr, threshold) points from (0,0) to (1,1),
    plus the trapezoidal area under them."""

    points: tuple[tuple[float, float, float], ...]
    auc: float

    def __post_init__(self):
        pts = tuple((float(f), float(t), float(th)) for f, t, th in self.points)
        if pts[0][:2] != (0.0, 0.0) or pts[-1][:2] != (1.0, 1.0):
            raise ValueError("ROC points must run from (0,0) to (1,1)")
        for (f0, t0, _), (f1, t1, _) in zip(pts, pts[1:]):
            if f1 < f0 or t1 < t0:
                raise ValueError("ROC points must be monotone non-decreasing")
        object.__setattr__(self, "points", pts)


def confusion(predictions, truth, positive: str = "malignant", classes=None) -> ConfusionCounts:
    """Tally predictions (labels or Prediction objects) against the truth.

    ``classes`` widens the known class set; without it the set is inferred
    from the inputs, and a positive class outside it is an error.
    """
    if len(predictions) != len(truth):
        raise ValueError("predictions and truth must have equal length")
    predicted = [p if isinstance(p, str) else p.label for p in predictions]
    known = set(truth) | set(predicted) | set(classes or ())
    for p in predictions:
        if not isinstance(p, str):
            known.update(p.classes)
    if positive not in known:
        raise ValueError(f"positive class {positive!r} absent from the class set")
    tp = fp = tn = fn = 0
    for pred, true in zip(predicted, truth):
        if true == positive:
            if pred == positive:
                tp += 1
            else:
                fn += 1
        else:
            if pred == positive:
                fp += 1
            else:
                tn += 1
    return ConfusionCounts(tp, fp, tn, fn)


def rates(c: ConfusionCounts) -> tuple[float, float, float]:
    """(sensitivity, specificity, accuracy). Raises when either population
    is empty instead of silently reporting 0."""
    if c.tp + c.fn == 0:
        raise ValueError("no positive samples: sensitivity undefined")
    if c.tn + c.fp == 0:
        raise ValueError("no negative samples: specificity undefined")
    return (
        c.tp / (c.tp + c.fn),
        c.tn / (c.tn + c.fp),
        (c.tp + c.tn) / c.total,
    )


def roc_curve(scores, truth, positive: str = "malignant") -> RocCurve:
    """Sweep thresholds over the distinct scores, descending.

    A sample counts as predicted-positive when its score is >= the
    threshold; samples with equal scores move together in one step. The
    curve starts at (0,0) (threshold +inf) and ends at (1,1).
    """
    s = np.asarray(scores, dtype=np.float64)
    y = np.array([t == positive for t in truth])
    if len(s) != len(y):
        raise ValueError("scores and truth must have equal length")
    n_pos = int(y.sum())
    n_neg = int(len(y) - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC requires both classes in the truth")
    order = np.argsort(-s, kind="stable")
    s_sorted, y_sorted = s[order], y[order]
    tps = np.cumsum(y_sorted)
    fps = np.cumsum(~y_sorted)
    last = np.r_[np.flatnonzero(np.diff(s_sorted) != 0), len(s) - 1]
    points = [(0.0, 0.0, float("inf"))]
    for i in last:
        points.append((fps[i] / n_neg, tps[i] / n_pos, float(s_sorted[i])))
    area = 0.0
    for (f0, t0, _), (f1, t1, _) in zip(points, points[1:]):
        area += (f1 - f0) * (t0 + t1) / 2.0
    return RocCurve(points=tuple(points), auc=float(area))


def auc(scores, truth, positive: str = "malignant") -> float:
    """Trapezoidal area under the ROC curve; equals the probability that a
    random positive outscores a random negative, ties counting half."""
    return roc_curve(scores, truth, positive).auc


def stratified_kfold(data: Dataset, k: int, seed: int):
    """Deterministic stratified folds: per class, ids are sorted, shuffled
    with the seed and dealt round-robin, so fold class proportions stay
    within one sample of the global split.

    Returns k (train_ids, test_ids) pairs; the test sets partition the
    dataset. The assignment depends only on (seed, ids), not input order.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds: list[list[str]] = [[] for _ in range(k)]
    for c in data.classes:
        ids_c = sorted(i for i, lab in zip(data.ids, data.labels) if lab == c)
        if len(ids_c) < k:
            raise ValueError(f"class {c!r} has fewer than {k} samples")
        perm = rng.permutation(len(ids_c))
        for pos, t in enumerate(perm):
            folds[pos % k].append(ids_c[t])
    out = []
    for i in range(k):
        test = sorted(folds[i])
        test_set = set(test)
        train = sorted(s for s in data.ids if s not in test_set)
        out.append((train, test))
    return out


@dataclass(frozen=True)
class KFold:
    k: int = 10
    seed: int = 0


@dataclass(frozen=True)
class Holdout:
    fraction: float = 0.3
    seed: int = 0


@dataclass(frozen=True)
class Loocv:
    pass


def protocol_name(protocol) -> str:
    if isinstance(protocol, KFold):
        return f"kfold({protocol.k})"
    if isinstance(protocol, Holdout):
        return f"holdout({protocol.fraction})"
    if isinstance(protocol, Loocv):
        return "loocv"
    raise ValueError(f"unknown protocol {protocol!r}")


def protocol_seed(protocol):
    return getattr(protocol, "seed", None)


def _splits(data: Dataset, protocol):
    if isinstance(protocol, KFold):
        return stratified_kfold(data, protocol.k, protocol.seed)
    if isinstance(protocol, Loocv):
        ordered = sorted(data.ids)
        return [([s for s in ordered if s != sid], [sid]) for sid in ordered]
    if isinstance(protocol, Holdout):
        if not 0.0 < protocol.fraction < 1.0:
            raise ValueError("holdout fraction must be in (0, 1)")
        rng = np.random.default_rng(protocol.seed)
        train: list[str] = []
        test: list[str] = []
        for c in data.classes:
            ids_c = sorted(i for i, lab in zip(data.ids, data.labels) if lab == c)
            if len(ids_c) < 2:
                raise ValueError(f"class {c!r} needs >= 2 samples for a holdout split")
            perm = rng.permutation(len(ids_c))
            n_test = int(round(protocol.fraction * len(ids_c)))
            n_test = min(max(n_test, 1), len(ids_c) - 1)
            test.extend(ids_c[t] for t in perm[:n_test])
            train.extend(ids_c[t] for t in perm[n_test:])
        return [(sorted(train), sorted(test))]
    raise ValueError(f"unknown protocol {protocol!r}")


@dataclass(frozen=True)
class FoldResult:
    """One fold's confusion plus whichever rates are defined for it."""

    counts: ConfusionCounts
    sensitivity: float | None
    specificity: float | None
    accuracy: float


def _safe_rate(num: int, den: int) -> float | None:
    return num / den if den > 0 else None


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Everything one evaluation run produced.

    ``sensitivity``/``specificity``/``accuracy`` and ``roc``/``auc`` are
    pooled over all test predictions; ``averaged`` holds the macro mean of
    the per-fold rates (over folds where they are defined).
    """

    config: ClassifierConfig
    protocol: object
    positive_class: str
    pooled: ConfusionCounts
    sensitivity: float
    specificity: float
    accuracy: float
    roc: RocCurve
    auc: float
    averaged: dict[str, float | None]
    folds: tuple[FoldResult, ...]
    predictions: tuple[tuple[str, str, str, float], ...]  # (id, truth, predicted, score)

    def to_dict(self) -> dict:
        """Stable-keyed mapping mirroring the JSON report layout."""
        cfg = self.config
        return {
            "method": cfg.kind,
            "k": cfg.k,
            "m": cfg.m,
            "init": cfg.init,
            "protocol": protocol_name(self.protocol),
            "seed": protocol_seed(self.protocol),
            "positive_class": self.positive_class,
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "accuracy": self.accuracy,
            "auc": self.auc,
            "pooled": {
                "tp": self.pooled.tp,
                "fp": self.pooled.fp,
                "tn": self.pooled.tn,
                "fn": self.pooled.fn,
            },
            "averaged": dict(self.averaged),
            "folds": [
                {
                    "tp": f.counts.tp,
                    "fp": f.counts.fp,
                    "tn": f.counts.tn,
                    "fn": f.counts.fn,
                    "sensitivity": f.sensitivity,
                    "specificity": f.specificity,
                    "accuracy": f.accuracy,
                }
                for f in self.folds
            ],
        }


def _default_positive(classes) -> str:
    return "malignant" if "malignant" in classes else classes[-1]


def loocv(data: Dataset, cfg: ClassifierConfig, positive_class: str | None = None) -> EvaluationReport:
    """Jack-knife evaluation: fit on all-but-one, predict the held-out
    sample, pool everything into one confusion and ROC."""
    return evaluate(data, cfg, Loocv(), positive_class=positive_class)


def evaluate(data: Dataset, cfg: ClassifierConfig, protocol,
             positive_class: str | None = None) -> EvaluationReport:
    """Run one classifier config under a protocol and assemble the report.

    Deterministic given the protocol seed. Fold models see only the fold's
    training ids; a fold model that never saw the positive class scores it
    at zero.
    """
    if len(data.classes) != 2:
        raise ValueError(
            f"evaluation requires a binary task, got classes {data.classes}"
        )
    positive = positive_class if positive_class is not None else _default_positive(data.classes)
    if positive not in data.classes:
        raise ValueError(f"positive class {positive!r} not in {data.classes}")

    index_of = {sid: i for i, sid in enumerate(data.ids)}
    pooled_rows: list[tuple[str, str, str, float]] = []
    fold_results = []
    for train_ids, test_ids in _splits(data, protocol):
        model = fit(data.subset(train_ids), cfg)
        fold_pred = []
        for sid in test_ids:
            i = index_of[sid]
            p = predict(model, data.X[i])
            score = p.score(positive) if positive in p.classes else 0.0
            pooled_rows.append((sid, data.labels[i], p.label, score))
            fold_pred.append((data.labels[i], p.label))
        counts = confusion([pl for _, pl in fold_pred], [t for t, _ in fold_pred],
                           positive, classes=data.classes)
        fold_results.append(
            FoldResult(
                counts=counts,
                sensitivity=_safe_rate(counts.tp, counts.tp + counts.fn),
                specificity=_safe_rate(counts.tn, counts.tn + counts.fp),
                accuracy=(counts.tp + counts.tn) / counts.total,
            )
        )

    truth = [t for _, t, _, _ in pooled_rows]
    predicted = [p for _, _, p, _ in pooled_rows]
    scores = [s for _, _, _, s in pooled_rows]
    pooled = confusion(predicted, truth, positive)
    sens, spec, acc = rates(pooled)
    roc = roc_curve(scores, truth, positive)

    def _mean_defined(vals):
        defined = [v for v in vals if v is not None]
        return sum(defined) / len(defined) if defined else None

    averaged = {
        "sensitivity": _mean_defined([f.sensitivity for f in fold_results]),
        "specificity": _mean_defined([f.specificity for f in fold_results]),
        "accuracy": _mean_defined([f.accuracy for f in fold_results]),
    }
    return EvaluationReport(
        config=cfg,
        protocol=protocol,
        positive_class=positive,
        pooled=pooled,
        sensitivity=sens,
        specificity=spec,
        accuracy=acc,
        roc=roc,
        auc=roc.auc,
        averaged=averaged,
        folds=tuple(fold_results),
        predictions=tuple(pooled_rows),
    )


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    k: int
    sensitivity: float
    specificity: float
    accuracy: float
    auc: float


@dataclass(frozen=True)
class ComparisonTable:
    """One row per classifier config, in input order: the combined
    sensitivity/specificity/accuracy and area-under-curve layout."""

    rows: tuple[ComparisonRow, ...]

    def to_json_obj(self) -> list[dict]:
        return [
            {
                "method": r.method,
                "k": r.k,
                "sensitivity": r.sensitivity,
                "specificity": r.specificity,
                "accuracy": r.accuracy,
                "auc": r.auc,
            }
            for r in self.rows
        ]

    @classmethod
    def from_json_obj(cls, obj) -> "ComparisonTable":
        return cls(
            rows=tuple(
                ComparisonRow(
                    method=r["method"],
                    k=int(r["k"]),
                    sensitivity=float(r["sensitivity"]),
                    specificity=float(r["specificity"]),
                    accuracy=float(r["accuracy"]),
                    auc=float(r["auc"]),
                )
                for r in obj
            )
        )

    def render_text(self) -> str:
        header = ("method", "sensitivity", "specificity", "accuracy", "auc")
        body = [
            (r.method, f"{r.sensitivity:.4f}", f"{r.specificity:.4f}",
             f"{r.accuracy:.4f}", f"{r.auc:.4f}")
            for r in self.rows
        ]
        widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h)
                  for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
        for row in body:
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
        return "\n".join(lines)


def compare_classifiers(data: Dataset, configs, protocol,
                        positive_class: str | None = None) -> ComparisonTable:
    """Evaluate each config under the same protocol; rows keep input order.

    Method labels are the config kinds; when one kind appears with several
    k values the label carries the k to stay unambiguous.
    """
    if not configs:
        raise ValueError("at least one classifier config is required")
    kinds = [c.kind for c in configs]
    dup = {k for k in kinds if kinds.count(k) > 1}
    rows = []
    for cfg in configs:
        rep = evaluate(data, cfg, protocol, positive_class=positive_class)
        label = f"{cfg.kind}[k={cfg.k}]" if cfg.kind in dup else cfg.kind
        rows.append(
            ComparisonRow(
                method=label,
                k=cfg.k,
                sensitivity=rep.sensitivity,
                specificity=rep.specificity,
                accuracy=rep.accuracy,
                auc=rep.auc,
            )
        )
    return ComparisonTable(rows=tuple(rows))
