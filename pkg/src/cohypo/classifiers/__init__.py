"""Classifier zoo: linear SVM, random forest, kNN, and threshold models."""

from cohypo.classifiers.forest import RandomForestConfig, RandomForestModel, train_random_forest
from cohypo.classifiers.knn import KnnModel, knn_predict
from cohypo.classifiers.model_io import load_model, save_model
from cohypo.classifiers.svm import LinearSvmModel, PegasosConfig, svm_objective, train_linear_svm
from cohypo.classifiers.thresholds import (
    ThresholdModel,
    cosine,
    fit_threshold,
    lin_similarity,
)

__all__ = [
    "KnnModel",
    "LinearSvmModel",
    "PegasosConfig",
    "RandomForestConfig",
    "RandomForestModel",
    "ThresholdModel",
    "cosine",
    "fit_threshold",
    "knn_predict",
    "lin_similarity",
    "load_model",
    "save_model",
    "svm_objective",
    "train_linear_svm",
    "train_random_forest",
]
