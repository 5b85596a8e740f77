"""Two-class multinomial naive Bayes over non-negative real features.

Feature values are used as fractional counts with additive (Laplace)
smoothing, mirroring scikit-learn's ``MultinomialNB()`` defaults.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class NbModel:
    # index 0 = negative class, 1 = positive class
    log_prior: tuple[float, float]
    feature_log_prob: tuple[tuple[float, ...], tuple[float, ...]]
    alpha: float = 1.0
    feature_names: tuple[str, ...] = ()

    @property
    def n_features(self) -> int:
        return len(self.feature_log_prob[0])

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "features": list(self.feature_names),
            "class_log_prior": {"negative": self.log_prior[0], "positive": self.log_prior[1]},
            "feature_log_prob": {"negative": list(self.feature_log_prob[0]),
                                 "positive": list(self.feature_log_prob[1])},
        }

    @classmethod
    def from_json(cls, data: dict) -> "NbModel":
        try:
            prior = data["class_log_prior"]
            flp = data["feature_log_prob"]
            model = cls(
                (float(prior["negative"]), float(prior["positive"])),
                (tuple(map(float, flp["negative"])), tuple(map(float, flp["positive"]))),
                float(data.get("alpha", 1.0)),
                tuple(data.get("features", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed model description: {exc}") from None
        if len(model.feature_log_prob[0]) != len(model.feature_log_prob[1]):
            raise ValueError("malformed model description: class feature counts differ")
        if model.feature_names and len(model.feature_names) != model.n_features:
            raise ValueError("malformed model description: feature-name list length mismatch")
        return model


def nb_train(rows: Sequence[tuple[Sequence[float], bool]], alpha: float = 1.0,
             feature_names: Sequence[str] = ()) -> NbModel:
    if not rows:
        raise ValueError("degenerate training set: no rows")
    X = np.asarray([r[0] for r in rows], dtype=float)
    y = np.asarray([bool(r[1]) for r in rows])
    if X.ndim != 2:
        raise ValueError("feature vectors must all have the same length")
    if (X < 0).any():
        raise ValueError("features must be non-negative")
    n_pos = int(y.sum())
    if n_pos == 0 or n_pos == len(y):
        raise ValueError("degenerate training set: need both positive and negative rows")

    n_features = X.shape[1]
    priors, flps = [], []
    for cls in (False, True):
        Xc = X[y == cls]
        counts = Xc.sum(axis=0) + alpha
        flps.append(tuple(float(v) for v in np.log(counts) - math.log(counts.sum())))
        priors.append(math.log(len(Xc) / len(X)))
    if feature_names and len(feature_names) != n_features:
        raise ValueError("feature_names length does not match feature count")
    return NbModel(tuple(priors), tuple(flps), alpha, tuple(feature_names))


def nb_score(model: NbModel, features: Sequence[float]) -> float:
    """Posterior probability of the positive class."""
    if len(features) != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {len(features)}")
    jll = [model.log_prior[c] + sum(x * w for x, w in zip(features, model.feature_log_prob[c]))
           for c in (0, 1)]
    diff = jll[0] - jll[1]
    if diff > 0:
        e = math.exp(-diff)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(diff))


def save_model(nb: NbModel, path: str | Path, extra: dict | None = None) -> None:
    """Write the model as JSON; ``extra`` keys (e.g. the ranker name) ride along."""
    data = dict(extra or {})
    data.update(nb.to_json())
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> tuple[NbModel, dict]:
    """Return the model and the whole JSON object (for extra keys like ``model``)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return NbModel.from_json(data), data
