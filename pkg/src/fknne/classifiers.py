"""Nearest-neighbour classifier family over feature vectors.

Four decision rules share one fitted model:

* knn    -- plurality vote of the k nearest samples,
* fknn   -- fuzzy vote: neighbour memberships weighted by d^(-2/(m-1)),
* knne   -- per-class pools: k nearest samples of each class, smallest
            mean distance wins ("nearest-neighbour equality"),
* fknne  -- fuzzy variant of knne: inverse-distance-weighted memberships
            accumulated inside each class pool, normalized across classes.

Every tie is broken by a documented total order: neighbours by
(distance, id), labels by (score, class order). Fitting memorizes the
(optionally min-max normalized) training vectors and assigns per-sample
class memberships, either crisp one-hot or Keller-style soft labels
derived from each sample's own neighbourhood.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .texture import FeatureVector

KINDS = ("knn", "fknn", "knne", "fknne")


class Dataset:
    """Labeled feature vectors with a shared schema and stable unique ids."""

    def __init__(self, ids, features, labels, feature_names=None, classes=None):
        ids = [str(i) for i in ids]
        labels = [str(l) for l in labels]
        if isinstance(features, (list, tuple)) and features and isinstance(features[0], FeatureVector):
            schemas = {fv.names for fv in features}
            if len(schemas) != 1:
                raise ValueError("all feature vectors must share one name schema")
            if feature_names is not None and tuple(feature_names) != features[0].names:
                raise ValueError("feature_names disagrees with the vectors' schema")
            feature_names = features[0].names
            X = np.array([fv.values for fv in features], dtype=np.float64)
        else:
            X = np.asarray(features, dtype=np.float64)
            if X.ndim != 2:
                raise ValueError("features must be a 2-D matrix or FeatureVector list")
            if feature_names is None:
                feature_names = tuple(f"f{i}" for i in range(X.shape[1]))
        feature_names = tuple(feature_names)
        if X.shape[0] == 0:
            raise ValueError("dataset must contain at least one sample")
        if len(ids) != X.shape[0] or len(labels) != X.shape[0]:
            raise ValueError("ids, features and labels must have equal length")
        if len(set(ids)) != len(ids):
            raise ValueError("sample ids must be unique")
        if len(feature_names) != X.shape[1]:
            raise ValueError("feature_names length must match feature count")
        if not np.all(np.isfinite(X)):
            raise ValueError("feature values must be finite")
        if classes is None:
            classes = tuple(sorted(set(labels)))
        else:
            classes = tuple(classes)
        present = set(labels)
        if present - set(classes):
            raise ValueError("every label must be one of the declared classes")
        if set(classes) - present:
            raise ValueError("every declared class needs at least one sample")
        X.flags.writeable = False
        self.ids = tuple(ids)
        self.X = X
        self.labels = tuple(labels)
        self.feature_names = feature_names
        self.classes = classes

    @classmethod
    def from_samples(cls, samples, classes=None) -> "Dataset":
        """Build from (id, FeatureVector, label) triples."""
        ids = [s[0] for s in samples]
        fvs = [s[1] for s in samples]
        labels = [s[2] for s in samples]
        return cls(ids, fvs, labels, classes=classes)

    def __len__(self):
        return len(self.ids)

    def feature_vector(self, i: int) -> FeatureVector:
        return FeatureVector(self.feature_names, self.X[i])

    def select_features(self, names) -> "Dataset":
        """Restrict the schema to the named features, in the given order."""
        names = list(names)
        unknown = [n for n in names if n not in self.feature_names]
        if unknown:
            raise ValueError(f"unknown feature names: {', '.join(unknown)}")
        if not names:
            raise ValueError("feature selection must keep at least one feature")
        cols = [self.feature_names.index(n) for n in names]
        return Dataset(
            self.ids,
            self.X[:, cols],
            self.labels,
            feature_names=tuple(names),
            classes=self.classes,
        )

    def subset(self, keep_ids) -> "Dataset":
        """Restrict to the given ids; classes shrink to those still present,
        keeping their relative order."""
        keep = set(keep_ids)
        idx = [i for i, sid in enumerate(self.ids) if sid in keep]
        if len(idx) != len(keep):
            missing = keep - set(self.ids)
            raise ValueError(f"unknown sample ids: {sorted(missing)}")
        labels = [self.labels[i] for i in idx]
        classes = tuple(c for c in self.classes if c in set(labels))
        return Dataset(
            [self.ids[i] for i in idx],
            self.X[idx],
            labels,
            feature_names=self.feature_names,
            classes=classes,
        )


@dataclass(frozen=True)
class ClassifierConfig:
    """Hyperparameters shared by the four decision rules.

    ``m`` is the fuzzifier exponent (weights are d^(-2/(m-1))); ``k_init``
    sizes the neighbourhood used for Keller membership initialization and
    defaults to ``k``; ``normalize`` rescales each feature to the training
    min-max range before any distance is computed.
    """

    kind: str = "fknne"
    k: int = 3
    m: float = 2.0
    init: str = "crisp"
    k_init: int | None = None
    metric: str = "euclidean"
    normalize: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.m > 1.0:
            raise ValueError("fuzzifier m must be > 1")
        if self.init not in ("crisp", "keller"):
            raise ValueError("init must be 'crisp' or 'keller'")
        if self.k_init is not None and self.k_init < 1:
            raise ValueError("k_init must be >= 1")
        if self.metric != "euclidean":
            raise ValueError("only the euclidean metric is supported")


@dataclass(frozen=True, eq=False)
class Prediction:
    """Winning label plus the per-class scores it was chosen from.

    Scores align with ``classes``, lie in [0, 1] and sum to 1. The label
    is always the argmax under the documented tie-break.
    """

    label: str
    classes: tuple[str, ...]
    scores: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        scores.flags.writeable = False
        object.__setattr__(self, "scores", scores)

    def score(self, cls: str) -> float:
        return float(self.scores[self.classes.index(cls)])

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.classes, self.scores.tolist()))


class FitModel:
    """Memorized training data plus per-sample class memberships.

    Immutable after construction; any number of concurrent predict calls
    against one model are safe.
    """

    def __init__(self, config, ids, X, labels, classes, feature_names,
                 norm_lo, norm_hi, memberships, k_init_used, k_init_clamped):
        self.config = config
        self.ids = ids
        self.X = X
        self.labels = labels
        self.classes = classes
        self.feature_names = feature_names
        self.norm_lo = norm_lo
        self.norm_hi = norm_hi
        self.memberships = memberships
        self.k_init_used = k_init_used
        self.k_init_clamped = k_init_clamped
        self.label_index = np.array([classes.index(l) for l in labels])
        self._class_pools = tuple(
            np.flatnonzero(self.label_index == ci) for ci in range(len(classes))
        )

    def __len__(self):
        return len(self.ids)


def _normalize_rows(X: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    span = hi - lo
    flat = span == 0
    safe = np.where(flat, 1.0, span)
    out = (X - lo) / safe
    # Features constant in training stay inert for every query value.
    return np.where(flat, 0.0, out)


def fit(data: Dataset, cfg: ClassifierConfig | None = None) -> FitModel:
    """Memorize the training set and assign per-sample class memberships.

    Crisp initialization is one-hot on the sample's label. Keller
    initialization looks at each sample's ``k_init`` nearest other
    training samples: with n_c of them in class c, the membership is
    0.49*n_c/k_init, plus 0.51 for the sample's own class. A ``k_init``
    of at least the training size is clamped to n-1 and flagged on the
    model.
    """
    if cfg is None:
        cfg = ClassifierConfig()
    X = np.array(data.X, dtype=np.float64)
    if cfg.normalize:
        lo, hi = X.min(axis=0), X.max(axis=0)
        X = _normalize_rows(X, lo, hi)
    else:
        lo = hi = None
    X.flags.writeable = False

    n = len(data)
    n_classes = len(data.classes)
    class_index = {c: ci for ci, c in enumerate(data.classes)}
    one_hot = np.zeros((n, n_classes))
    for j, lab in enumerate(data.labels):
        one_hot[j, class_index[lab]] = 1.0

    k_init = cfg.k_init if cfg.k_init is not None else cfg.k
    clamped = False
    if cfg.init == "keller":
        if k_init > n - 1:
            k_init, clamped = n - 1, True
        if k_init == 0:
            # Lone training sample: nothing to vote, fall back to one-hot.
            memberships = one_hot
        else:
            memberships = np.zeros((n, n_classes))
            d = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2))
            for j in range(n):
                others = [t for t in range(n) if t != j]
                others.sort(key=lambda t: (d[j, t], data.ids[t]))
                counts = np.zeros(n_classes)
                for t in others[:k_init]:
                    counts[class_index[data.labels[t]]] += 1
                memberships[j] = 0.49 * counts / k_init
                memberships[j, class_index[data.labels[j]]] += 0.51
    else:
        memberships = one_hot
    memberships.flags.writeable = False

    return FitModel(
        config=cfg,
        ids=data.ids,
        X=X,
        labels=data.labels,
        classes=data.classes,
        feature_names=data.feature_names,
        norm_lo=lo,
        norm_hi=hi,
        memberships=memberships,
        k_init_used=k_init,
        k_init_clamped=clamped,
    )


def _query_vector(model: FitModel, x) -> np.ndarray:
    if isinstance(x, FeatureVector):
        if x.names != model.feature_names:
            raise ValueError(
                f"feature schema mismatch: query has {x.names}, "
                f"model expects {model.feature_names}"
            )
        v = np.array(x.values, dtype=np.float64)
    else:
        v = np.asarray(x, dtype=np.float64).ravel()
        if v.size != model.X.shape[1]:
            raise ValueError(
                f"feature schema mismatch: query has {v.size} values, "
                f"model expects {model.X.shape[1]}"
            )
    if model.config.normalize:
        v = _normalize_rows(v[None, :], model.norm_lo, model.norm_hi)[0]
    return v


def _nearest(model: FitModel, v: np.ndarray, k: int, pool: np.ndarray | None = None):
    """Indices and distances of the k nearest training samples in the pool,
    ordered by (distance, id) ascending. Returns all available if fewer."""
    idx = np.arange(len(model.ids)) if pool is None else pool
    d = np.sqrt(((model.X[idx] - v) ** 2).sum(axis=1))
    order = sorted(range(len(idx)), key=lambda t: (d[t], model.ids[idx[t]]))[:k]
    return idx[order], d[order]


def kneighbors(model: FitModel, x, k: int, class_filter: str | None = None):
    """Exact k-nearest training samples as (id, distance) pairs.

    Optionally restricted to one class; ties are broken by id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    v = _query_vector(model, x)
    pool = None
    if class_filter is not None:
        if class_filter not in model.classes:
            raise ValueError(f"unknown class {class_filter!r}")
        pool = model._class_pools[model.classes.index(class_filter)]
    idx, d = _nearest(model, v, k, pool)
    return [(model.ids[i], float(di)) for i, di in zip(idx, d)]


def _fuzzy_weights(d: np.ndarray, m: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return d ** (-2.0 / (m - 1.0))


def _exact_match_scores(model: FitModel, idx: np.ndarray, hit: np.ndarray) -> np.ndarray:
    return model.memberships[idx[hit]].mean(axis=0)


def predict_knn(model: FitModel, x) -> Prediction:
    """Plurality vote among the k nearest samples.

    Scores are vote fractions. A vote tie goes to the tied class whose
    voters are closest in summed distance, then to class order.
    """
    v = _query_vector(model, x)
    idx, d = _nearest(model, v, model.config.k)
    n_classes = len(model.classes)
    votes = np.bincount(model.label_index[idx], minlength=n_classes)
    sum_dist = np.zeros(n_classes)
    np.add.at(sum_dist, model.label_index[idx], d)
    scores = votes / len(idx)
    top = votes.max()
    tied = [ci for ci in range(n_classes) if votes[ci] == top]
    winner = min(tied, key=lambda ci: (sum_dist[ci], ci))
    return Prediction(model.classes[winner], model.classes, scores)


def predict_fknn(model: FitModel, x) -> Prediction:
    """Fuzzy vote: memberships of the k nearest samples weighted by
    d^(-2/(m-1)) and renormalized.

    A query that coincides with training samples takes the average
    membership of the exact matches instead.
    """
    v = _query_vector(model, x)
    idx, d = _nearest(model, v, model.config.k)
    zero = d == 0.0
    if zero.any():
        scores = _exact_match_scores(model, idx, zero)
    else:
        w = _fuzzy_weights(d, model.config.m)
        inf = np.isinf(w)
        if inf.any():  # same limit as an exact match
            scores = _exact_match_scores(model, idx, inf)
        else:
            scores = (w[:, None] * model.memberships[idx]).sum(axis=0) / w.sum()
    winner = int(np.argmax(scores))
    return Prediction(model.classes[winner], model.classes, scores)


def _class_pool_neighbours(model: FitModel, v: np.ndarray, k: int):
    """The k nearest training samples of each class (all if a class has
    fewer), as parallel per-class index/distance lists."""
    per_class = []
    for pool in model._class_pools:
        per_class.append(_nearest(model, v, k, pool))
    return per_class


def predict_knne(model: FitModel, x) -> Prediction:
    """Nearest-neighbour equality: the class whose k nearest samples have
    the smallest mean distance wins.

    Scores are normalized inverse mean distances; classes at mean
    distance zero share all the mass uniformly.
    """
    v = _query_vector(model, x)
    per_class = _class_pool_neighbours(model, v, model.config.k)
    means = np.array([d.mean() for _, d in per_class])
    zero = means == 0.0
    if zero.any():
        scores = zero / zero.sum()
    else:
        inv = 1.0 / means
        scores = inv / inv.sum()
    winner = int(np.argmin(means))
    return Prediction(model.classes[winner], model.classes, scores)


def predict_fknne(model: FitModel, x) -> Prediction:
    """Fuzzy nearest-neighbour equality.

    Each class pools its k nearest samples; inside a pool the neighbours'
    memberships in that class are weighted by d^(-2/(m-1)) and summed, and
    the per-class masses are normalized across classes. With crisp
    memberships the ranking reduces to pure inverse-distance mass per
    pool; with Keller memberships the neighbours' soft labels shift it.
    The exact-match rule applies to the union of all pools.
    """
    v = _query_vector(model, x)
    per_class = _class_pool_neighbours(model, v, model.config.k)
    all_idx = np.concatenate([idx for idx, _ in per_class])
    all_d = np.concatenate([d for _, d in per_class])
    zero = all_d == 0.0
    w_all = _fuzzy_weights(all_d, model.config.m)
    if zero.any():
        scores = _exact_match_scores(model, all_idx, zero)
    elif np.isinf(w_all).any():
        scores = _exact_match_scores(model, all_idx, np.isinf(w_all))
    else:
        raw = np.zeros(len(model.classes))
        for ci, (idx, d) in enumerate(per_class):
            w = _fuzzy_weights(d, model.config.m)
            raw[ci] = (model.memberships[idx, ci] * w).sum()
        scores = raw / raw.sum()
    winner = int(np.argmax(scores))
    return Prediction(model.classes[winner], model.classes, scores)


_PREDICTORS = {
    "knn": predict_knn,
    "fknn": predict_fknn,
    "knne": predict_knne,
    "fknne": predict_fknne,
}


def predict(model: FitModel, x) -> Prediction:
    """Dispatch to the decision rule named by the model's config."""
    return _PREDICTORS[model.config.kind](model, x)
