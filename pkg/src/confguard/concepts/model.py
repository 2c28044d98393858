"""The trained concept model bundle and its JSON persistence."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..errors import ModelLoadError, ValidationError
from .features import FeatureConfig, NlpFeaturizer, TfidfFeaturizer
from .linear import OneVsRestLogisticRegression
from .preprocess import PreprocessConfig, preprocess

CONCEPT_LABELS = ("statement", "goal", "action", "other")
FORMAT_VERSION = 1


class ConceptModel:
    """Preprocessing + feature model + linear classifier, fit as one unit."""

    def __init__(
        self,
        preprocess_cfg: PreprocessConfig | None = None,
        feature_cfg: FeatureConfig | None = None,
        classifier: OneVsRestLogisticRegression | None = None,
    ):
        self.preprocess_cfg = preprocess_cfg or PreprocessConfig()
        self.feature_cfg = feature_cfg or FeatureConfig()
        self.classifier = classifier or OneVsRestLogisticRegression()
        self.featurizer = None

    @property
    def fitted(self) -> bool:
        return self.featurizer is not None and hasattr(self.classifier, "coef_")

    def _features(self, texts: list[str]):
        if self.feature_cfg.mode == "nlp":
            return self.featurizer.transform(texts)
        return self.featurizer.transform([preprocess(t, self.preprocess_cfg) for t in texts])

    def fit(self, texts: list[str], labels: list[str]) -> "ConceptModel":
        unknown = sorted(set(labels) - set(CONCEPT_LABELS))
        if unknown:
            raise ValidationError(f"unknown concept labels: {unknown}")
        if self.feature_cfg.mode == "nlp":
            self.featurizer = NlpFeaturizer().fit(texts)
        else:
            self.featurizer = TfidfFeaturizer(self.feature_cfg.mode, self.feature_cfg.min_df)
            self.featurizer.fit([preprocess(t, self.preprocess_cfg) for t in texts])
        self.classifier.fit(self._features(texts), labels)
        return self

    def predict(self, texts: list[str]) -> list[tuple[str, dict[str, float]]]:
        """Per text: (argmax label, raw per-class sigmoid scores)."""
        if not self.fitted:
            raise ValidationError("model is not trained")
        if not texts:
            return []
        scores = self.classifier.predict_scores(self._features(texts))
        labels = self.classifier.predict(self._features(texts))
        out = []
        for row, label in zip(scores, labels):
            out.append((str(label), {str(c): float(s) for c, s in zip(self.classifier.classes_, row)}))
        return out

    def predict_one(self, text: str) -> tuple[str, dict[str, float]]:
        return self.predict([text])[0]

    # -- persistence -------------------------------------------------------

    def to_dict(self) -> dict:
        if not self.fitted:
            raise ValidationError("refusing to save an untrained model")
        if self.feature_cfg.mode == "nlp":
            tfidf = None
        else:
            tfidf = {
                "vocabulary": self.featurizer.vocabulary_,
                "idf": self.featurizer.idf_.tolist(),
                "n_docs": self.featurizer.n_docs_,
            }
        return {
            "format_version": FORMAT_VERSION,
            "preprocess": self.preprocess_cfg.to_dict(),
            "feature": self.feature_cfg.to_dict(),
            "tfidf": tfidf,
            "linear": {
                "classes": [str(c) for c in self.classifier.classes_],
                "coef": self.classifier.coef_.tolist(),
                "intercept": self.classifier.intercept_.tolist(),
                "n_iter": self.classifier.n_iter_.tolist(),
                "C": self.classifier.C,
                "max_iter": self.classifier.max_iter,
                "tol": self.classifier.tol,
                "seed": self.classifier.seed,
            },
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ConceptModel":
        try:
            if raw["format_version"] != FORMAT_VERSION:
                raise ModelLoadError(f"unsupported model format version {raw['format_version']!r}")
            preprocess_cfg = PreprocessConfig.from_dict(raw["preprocess"])
            feature_cfg = FeatureConfig.from_dict(raw["feature"])
            linear = raw["linear"]
            classifier = OneVsRestLogisticRegression(
                C=float(linear["C"]),
                max_iter=int(linear["max_iter"]),
                tol=float(linear["tol"]),
                seed=int(linear["seed"]),
            )
            classifier.classes_ = np.array([str(c) for c in linear["classes"]], dtype=object)
            classifier.coef_ = np.array(linear["coef"], dtype=np.float64)
            classifier.intercept_ = np.array(linear["intercept"], dtype=np.float64)
            classifier.n_iter_ = np.array(linear["n_iter"], dtype=int)
            model = cls(preprocess_cfg, feature_cfg, classifier)
            if feature_cfg.mode == "nlp":
                model.featurizer = NlpFeaturizer()
            else:
                tfidf = raw["tfidf"]
                featurizer = TfidfFeaturizer(feature_cfg.mode, feature_cfg.min_df)
                featurizer.vocabulary_ = {str(t): int(i) for t, i in tfidf["vocabulary"].items()}
                featurizer.idf_ = np.array(tfidf["idf"], dtype=np.float64)
                featurizer.n_docs_ = int(tfidf["n_docs"])
                model.featurizer = featurizer
            return model
        except ModelLoadError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelLoadError(f"corrupt model file: {exc}") from exc


def save_model(model: ConceptModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(model.to_dict(), ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_model(path: str | Path) -> ConceptModel:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelLoadError(f"model file is not valid JSON: {exc.msg} at line {exc.lineno}") from exc
    return ConceptModel.from_dict(raw)


def load_labeled_csv(path: str | Path) -> tuple[list[str], list[str]]:
    """Read a "text,label" dataset (RFC 4180, UTF-8, header required)."""
    texts: list[str] = []
    labels: list[str] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["text", "label"]:
            raise ValidationError(f"{path}: expected CSV header 'text,label'")
        for row in reader:
            text = (row["text"] or "").strip()
            label = (row["label"] or "").strip()
            if not text or label not in CONCEPT_LABELS:
                raise ValidationError(f"{path}: bad row {row!r}")
            texts.append(text)
            labels.append(label)
    return texts, labels
