"""Versioned JSON model files.

Layout::

    {"format": "lexisent-model", "version": "1", "variant": "nb|softmax|svm|rf|gbt",
     "seed": int, "dimension": int, "params": {...variant arrays...}}

Keys are sorted and separators compact, so saving a loaded model reproduces
the original bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from lexisent.models.base import MODEL_FORMAT_VERSION, ClassifierModel
from lexisent.models.ensembles import ForestModel, GBTModel
from lexisent.models.linear import LinearSVMModel, SoftmaxModel
from lexisent.models.naive_bayes import NaiveBayesModel

FORMAT_TAG = "lexisent-model"
MODEL_CLASSES = {cls.variant: cls for cls in (NaiveBayesModel, SoftmaxModel, LinearSVMModel, ForestModel, GBTModel)}


class ModelFileError(ValueError):
    pass


class CorruptModelError(ModelFileError):
    pass


class ModelVersionError(ModelFileError):
    pass


def dumps_model(model: ClassifierModel) -> str:
    doc = {
        "format": FORMAT_TAG,
        "version": MODEL_FORMAT_VERSION,
        "variant": model.variant,
        "seed": int(model.seed),
        "dimension": int(model.dimension),
        "params": model.params_dict(),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def loads_model(text: str) -> ClassifierModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptModelError(f"model file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise CorruptModelError("not a lexisent model file")
    if doc.get("version") != MODEL_FORMAT_VERSION:
        raise ModelVersionError(f"model format version {doc.get('version')!r} is not supported (expected {MODEL_FORMAT_VERSION!r})")
    cls = MODEL_CLASSES.get(doc.get("variant"))
    if cls is None:
        raise CorruptModelError(f"unknown model variant {doc.get('variant')!r}")
    try:
        return cls.from_params(doc["params"], int(doc["seed"]), int(doc["dimension"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModelError(f"model parameters are malformed: {exc}") from None


def save_model(model: ClassifierModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path: str | Path) -> ClassifierModel:
    return loads_model(Path(path).read_text(encoding="utf-8"))
