"""From-scratch classifiers sharing one train/predict contract."""

from .base import (
    ClassifyError,
    ForestConfig,
    KnnConfig,
    MlpConfig,
    Model,
    NbConfig,
    SvmConfig,
    TrainConfig,
    TrainingSet,
    predict,
    predict_batch,
)
from .forest import RandomForest, train_forest
from .gnb import GaussianNb, train_gnb
from .knn import Knn, knn_predict, train_knn
from .mlp import Mlp, train_mlp
from .persist import ModelFormatError, load_model, save_model
from .svm import LinearSvm, train_svm

TRAINERS = {
    "svm": train_svm,
    "knn": train_knn,
    "forest": train_forest,
    "gnb": train_gnb,
    "mlp": train_mlp,
}


def train(variant: str, data: TrainingSet, cfg: TrainConfig | None = None) -> Model:
    try:
        trainer = TRAINERS[variant]
    except KeyError:
        raise ClassifyError(f"unknown classifier {variant!r}; choose from {sorted(TRAINERS)}") from None
    return trainer(data, cfg)


__all__ = [
    "ClassifyError",
    "ForestConfig",
    "GaussianNb",
    "Knn",
    "KnnConfig",
    "LinearSvm",
    "Mlp",
    "MlpConfig",
    "Model",
    "ModelFormatError",
    "NbConfig",
    "RandomForest",
    "SvmConfig",
    "TRAINERS",
    "TrainConfig",
    "TrainingSet",
    "knn_predict",
    "load_model",
    "predict",
    "predict_batch",
    "save_model",
    "train",
    "train_forest",
    "train_gnb",
    "train_knn",
    "train_mlp",
    "train_svm",
]
