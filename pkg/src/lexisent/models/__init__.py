"""Five classifiers behind one train/predict surface."""

from __future__ import annotations

from lexisent.models.base import (
    ClassifierModel,
    Dataset,
    DimensionError,
    Prediction,
    TrainingError,
    predict,
)
from lexisent.models.ensembles import ForestModel, ForestParams, GBTModel, GBTParams, fit_gbt, fit_random_forest
from lexisent.models.linear import (
    LinearSVMModel,
    SoftmaxModel,
    SoftmaxParams,
    SVMParams,
    fit_linear_svm,
    fit_softmax,
)
from lexisent.models.naive_bayes import NaiveBayesModel, NBParams, fit_naive_bayes
from lexisent.models.persist import (
    CorruptModelError,
    ModelVersionError,
    dumps_model,
    load_model,
    loads_model,
    save_model,
)

MODEL_NAMES = ("nb", "softmax", "svm", "rf", "gbt")
DISPLAY_NAMES = {
    "rf": "Random Forest",
    "softmax": "Multinomial Logistic Regression",
    "svm": "Support Vector Machines",
    "nb": "Naive Bayes",
    "gbt": "Gradient Boosted Trees",
}
DEFAULT_PARAMS = {
    "nb": NBParams(),
    "softmax": SoftmaxParams(),
    "svm": SVMParams(),
    "rf": ForestParams(),
    "gbt": GBTParams(),
}


def fit(name: str, data: Dataset, hp=None, seed: int = 0, threads: int = 1) -> ClassifierModel:
    if name not in DEFAULT_PARAMS:
        raise ValueError(f"unknown model {name!r}; choose from {MODEL_NAMES}")
    hp = hp if hp is not None else DEFAULT_PARAMS[name]
    if name == "nb":
        return fit_naive_bayes(data, hp, seed)
    if name == "softmax":
        return fit_softmax(data, hp, seed)
    if name == "svm":
        return fit_linear_svm(data, hp, seed)
    if name == "rf":
        return fit_random_forest(data, hp, seed, threads=threads)
    if name == "gbt":
        return fit_gbt(data, hp, seed)
    raise AssertionError(name)


__all__ = [
    "ClassifierModel", "CorruptModelError", "DEFAULT_PARAMS", "DISPLAY_NAMES", "Dataset", "DimensionError",
    "ForestModel", "ForestParams", "GBTModel", "GBTParams", "LinearSVMModel", "MODEL_NAMES",
    "ModelVersionError", "NBParams", "NaiveBayesModel", "Prediction", "SVMParams", "SoftmaxModel",
    "SoftmaxParams", "TrainingError", "dumps_model", "fit", "fit_gbt", "fit_linear_svm",
    "fit_naive_bayes", "fit_random_forest", "fit_softmax", "load_model", "loads_model", "predict",
    "save_model",
]
